//! Point vector fields `X = ξ(z,r)∂/∂z + η(z,r)∂/∂r` with access to the
//! partial derivatives of their coefficients.

use std::sync::Arc;

use crate::error::Result;
use crate::jets::JetFn;

use super::bivariate::Jet2;

pub trait PointVectorField: Send + Sync {
    /// `(ξ, η)` with mixed partials up to total order `order` at `(z, r)`.
    fn coefficients(&self, z: f64, r: f64, order: usize) -> Result<(Jet2, Jet2)>;
}

/// A field whose coefficients are built from the coordinate jets by a closure.
pub struct FnField<F>(pub F);

impl<F> PointVectorField for FnField<F>
where
    F: Fn(&Jet2, &Jet2) -> (Jet2, Jet2) + Send + Sync,
{
    fn coefficients(&self, z: f64, r: f64, order: usize) -> Result<(Jet2, Jet2)> {
        let zj = Jet2::var_z(z, order);
        let rj = Jet2::var_r(r, order);
        Ok((self.0)(&zj, &rj))
    }
}

/// `Γ = a ∂/∂z − (a'r + 2a'') ∂/∂r` for a gauge function `a(z)`.
pub struct GaugeField {
    pub a: Arc<dyn JetFn>,
}

impl GaugeField {
    pub fn new(a: impl JetFn + 'static) -> Self {
        GaugeField { a: Arc::new(a) }
    }
}

impl PointVectorField for GaugeField {
    fn coefficients(&self, z: f64, r: f64, order: usize) -> Result<(Jet2, Jet2)> {
        let a = self.a.jet(z, order + 2)?;
        let xi = Jet2::from_z(&a, order);
        let a1 = Jet2::from_z(&a.derivative(1)?, order);
        let a2 = Jet2::from_z(&a.derivative(2)?, order);
        let rj = Jet2::var_r(r, order);
        let eta = -(&a1 * &rj) - a2.scale(2.0);
        Ok((xi, eta))
    }
}

/// The commutator `[X, Y]` with coefficients `X(Yᵢ) − Y(Xᵢ)`.
pub struct Bracket {
    pub x: Arc<dyn PointVectorField>,
    pub y: Arc<dyn PointVectorField>,
}

impl Bracket {
    pub fn new(x: Arc<dyn PointVectorField>, y: Arc<dyn PointVectorField>) -> Self {
        Bracket { x, y }
    }
}

impl PointVectorField for Bracket {
    fn coefficients(&self, z: f64, r: f64, order: usize) -> Result<(Jet2, Jet2)> {
        let (xi_x, eta_x) = self.x.coefficients(z, r, order + 1)?;
        let (xi_y, eta_y) = self.y.coefficients(z, r, order + 1)?;
        let apply = |xi: &Jet2, eta: &Jet2, f: &Jet2| &(xi * &f.dz()) + &(eta * &f.dr());
        let xi = apply(&xi_x, &eta_x, &xi_y) - apply(&xi_y, &eta_y, &xi_x);
        let eta = apply(&xi_x, &eta_x, &eta_y) - apply(&xi_y, &eta_y, &eta_x);
        Ok((xi.truncate(order), eta.truncate(order)))
    }
}

/// `Σ cᵢ Xᵢ`.
pub struct Combination(pub Vec<(f64, Arc<dyn PointVectorField>)>);

impl PointVectorField for Combination {
    fn coefficients(&self, z: f64, r: f64, order: usize) -> Result<(Jet2, Jet2)> {
        let mut xi = Jet2::constant(0.0, order);
        let mut eta = Jet2::constant(0.0, order);
        for (c, field) in &self.0 {
            let (fx, fe) = field.coefficients(z, r, order)?;
            xi = xi + fx.scale(*c);
            eta = eta + fe.scale(*c);
        }
        Ok((xi, eta))
    }
}

/// `X₁ = ∂/∂z`.
pub fn x1() -> Arc<dyn PointVectorField> {
    Arc::new(FnField(|z: &Jet2, _r: &Jet2| {
        (Jet2::constant(1.0, z.order()), Jet2::constant(0.0, z.order()))
    }))
}

/// `X₂ = z∂/∂z − r∂/∂r`.
pub fn x2() -> Arc<dyn PointVectorField> {
    Arc::new(FnField(|z: &Jet2, r: &Jet2| (z.clone(), -r)))
}

/// `X₃ = z²∂/∂z − 2(rz + 2)∂/∂r`.
pub fn x3() -> Arc<dyn PointVectorField> {
    Arc::new(FnField(|z: &Jet2, r: &Jet2| {
        (z * z, (r * z + 2.0).scale(-2.0))
    }))
}

/// `r∂/∂r`, a pure scaling of the dependent variable.
pub fn r_scaling() -> Arc<dyn PointVectorField> {
    Arc::new(FnField(|z: &Jet2, r: &Jet2| (Jet2::constant(0.0, z.order()), r.clone())))
}

/// Largest difference between the coefficients of two fields over a grid
/// of `(z, r)` points.
pub fn max_field_difference(
    x: &dyn PointVectorField,
    y: &dyn PointVectorField,
    points: &[(f64, f64)],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(z, r) in points {
        let (xa, xb) = x.coefficients(z, r, 0)?;
        let (ya, yb) = y.coefficients(z, r, 0)?;
        worst = worst
            .max((xa.value() - ya.value()).abs())
            .max((xb.value() - yb.value()).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    fn grid() -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for i in 0..7 {
            for j in 0..7 {
                pts.push((-1.5 + 0.5 * i as f64, -1.5 + 0.5 * j as f64));
            }
        }
        pts
    }

    fn scaled(c: f64, f: Arc<dyn PointVectorField>) -> Combination {
        Combination(vec![(c, f)])
    }

    #[test]
    fn sl2_bracket_table() {
        let pts = grid();
        let b12 = Bracket::new(x1(), x2());
        assert!(max_field_difference(&b12, x1().as_ref(), &pts).unwrap() <= 1e-12);
        let b13 = Bracket::new(x1(), x3());
        assert!(max_field_difference(&b13, &scaled(2.0, x2()), &pts).unwrap() <= 1e-12);
        let b23 = Bracket::new(x2(), x3());
        assert!(max_field_difference(&b23, x3().as_ref(), &pts).unwrap() <= 1e-12);
    }

    #[test]
    fn self_bracket_vanishes() {
        let g: Arc<dyn PointVectorField> = Arc::new(GaugeField::new(Expr::parse("exp(z)").unwrap()));
        let zero = Combination(vec![]);
        for f in [x1(), x3(), g] {
            let b = Bracket::new(f.clone(), f);
            assert!(max_field_difference(&b, &zero, &grid()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn gauge_fields_reproduce_the_sl2_generators() {
        let pts = grid();
        for (a, x) in [("1", x1()), ("z", x2()), ("z^2", x3())] {
            let g = GaugeField::new(Expr::parse(a).unwrap());
            assert!(max_field_difference(&g, x.as_ref(), &pts).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn jacobi_identity() {
        let zero = Combination(vec![]);
        let (a, b, c) = (x1(), x2(), x3());
        let term = |p: &Arc<dyn PointVectorField>, q: &Arc<dyn PointVectorField>, r: &Arc<dyn PointVectorField>| -> Arc<dyn PointVectorField> {
            Arc::new(Bracket::new(p.clone(), Arc::new(Bracket::new(q.clone(), r.clone()))))
        };
        let sum = Combination(vec![
            (1.0, term(&a, &b, &c)),
            (1.0, term(&b, &c, &a)),
            (1.0, term(&c, &a, &b)),
        ]);
        assert!(max_field_difference(&sum, &zero, &grid()).unwrap() <= 1e-10);
    }
}
