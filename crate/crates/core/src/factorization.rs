//! The beam operator `L = d⁴ + d(A d) + B`, its factorization `L = R*R` with
//! `R = d² + r d + s`, and the swapped operator `L̂ = RR*`.
//!
//! Every operator here acts on jets, so identities such as `R*(RU) = LU`
//! hold to rounding error independently of any discretization.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{Jet, JetFn};

/// The functions `r`, `s` of the second-order factor `R = d² + r d + s`.
#[derive(Clone)]
pub struct FactorPair {
    pub r: Arc<dyn JetFn>,
    pub s: Arc<dyn JetFn>,
}

impl FactorPair {
    pub fn new(r: impl JetFn + 'static, s: impl JetFn + 'static) -> Self {
        FactorPair {
            r: Arc::new(r),
            s: Arc::new(s),
        }
    }

    /// Coefficients `(A, B)` of `L = R*R`.
    pub fn coefficients(&self) -> BeamCoefficients {
        let fp = self.clone();
        let a_fp = self.clone();
        BeamCoefficients {
            a: Arc::new(Derived(move |z, order| {
                Ok(coeffs_from_factors(&a_fp, z, order)?.0)
            })),
            b: Arc::new(Derived(move |z, order| {
                Ok(coeffs_from_factors(&fp, z, order)?.1)
            })),
        }
    }

    /// Coefficients `(Â, B̂)` of `L̂ = RR*`.
    pub fn hat_coefficients(&self) -> BeamCoefficients {
        let fp = self.clone();
        let a_fp = self.clone();
        BeamCoefficients {
            a: Arc::new(Derived(move |z, order| Ok(hat_coeffs(&a_fp, z, order)?.0))),
            b: Arc::new(Derived(move |z, order| Ok(hat_coeffs(&fp, z, order)?.1))),
        }
    }
}

struct Derived<F>(F);

impl<F> JetFn for Derived<F>
where
    F: Fn(f64, usize) -> Result<Jet> + Send + Sync,
{
    fn jet(&self, z: f64, order: usize) -> Result<Jet> {
        (self.0)(z, order)
    }
}

/// The coefficient functions `A(z)`, `B(z)` of a canonical beam operator.
#[derive(Clone)]
pub struct BeamCoefficients {
    pub a: Arc<dyn JetFn>,
    pub b: Arc<dyn JetFn>,
}

impl BeamCoefficients {
    pub fn new(a: impl JetFn + 'static, b: impl JetFn + 'static) -> Self {
        BeamCoefficients {
            a: Arc::new(a),
            b: Arc::new(b),
        }
    }

    /// The unit beam `A = B = 0`.
    pub fn unit() -> Self {
        Self::new(0.0, 0.0)
    }
}

fn d(j: &Jet, k: usize) -> Result<Jet> {
    j.derivative(k)
}

/// `A = r' − r² + 2s`, `B = s'' − (rs)' + s²` as jets of the given order.
pub fn coeffs_from_factors(fp: &FactorPair, z: f64, order: usize) -> Result<(Jet, Jet)> {
    let r = fp.r.jet(z, order + 2)?;
    let s = fp.s.jet(z, order + 2)?;
    let a = d(&r, 1)? - &r * &r + s.scale(2.0);
    let b = d(&s, 2)? - d(&(&r * &s), 1)? + &s * &s;
    Ok((a.truncate(order), b.truncate(order)))
}

/// `Â = 2s − 3r' − r²`, `B̂ = s² + s'' − r''' − rr'' + rs' − sr'`.
pub fn hat_coeffs(fp: &FactorPair, z: f64, order: usize) -> Result<(Jet, Jet)> {
    let r = fp.r.jet(z, order + 3)?;
    let s = fp.s.jet(z, order + 2)?;
    let (r1, r2, r3) = (d(&r, 1)?, d(&r, 2)?, d(&r, 3)?);
    let (s1, s2) = (d(&s, 1)?, d(&s, 2)?);
    let a_hat = s.scale(2.0) - r1.scale(3.0) - &r * &r;
    let b_hat = &s * &s + s2 - r3 - &r * &r2 + &r * &s1 - &s * &r1;
    Ok((a_hat.truncate(order), b_hat.truncate(order)))
}

/// `s = (A + r² − r')/2`; the result has order `min(r.order − 1, A.order)`.
pub fn s_from_r(r: &Jet, a: &Jet) -> Result<Jet> {
    let r1 = r.shift_derivative()?;
    Ok((a + &(r * r) - r1).scale(0.5))
}

/// Left-hand side of the principal equation
/// `r''' − 3rr'' − (7/2)r'² + 2(2r² + A)r' − A'' − r²A − A²/2 − r⁴/2 + rA' + 2B`
/// at the common base point of `r` and `A`.
pub fn principal_residual(r: &Jet, a: &Jet, b: f64) -> Result<f64> {
    if r.order() < 3 || a.order() < 2 {
        return Err(Error::contract(format!(
            "principal residual needs r to order 3 and A to order 2, got {} and {}",
            r.order(),
            a.order()
        )));
    }
    if r.base_point() != a.base_point() {
        return Err(Error::contract("r and A jets at different points"));
    }
    let (r0, r1, r2, r3) = (r.d(0), r.d(1), r.d(2), r.d(3));
    let (a0, a1, a2) = (a.d(0), a.d(1), a.d(2));
    let r_sq = r0 * r0;
    Ok(r3 - 3.0 * r0 * r2 - 3.5 * r1 * r1 + 2.0 * (2.0 * r_sq + a0) * r1 - a2 - r_sq * a0
        - 0.5 * a0 * a0
        - 0.5 * r_sq * r_sq
        + r0 * a1
        + 2.0 * b)
}

/// Solves the principal equation for `r'''` given lower derivatives.
pub fn principal_third_derivative(r0: f64, r1: f64, r2: f64, a: &Jet, b: f64) -> f64 {
    let (a0, a1, a2) = (a.d(0), a.d(1), a.d(2));
    let r_sq = r0 * r0;
    3.0 * r0 * r2 + 3.5 * r1 * r1 - 2.0 * (2.0 * r_sq + a0) * r1
        + a2
        + r_sq * a0
        + 0.5 * a0 * a0
        + 0.5 * r_sq * r_sq
        - r0 * a1
        - 2.0 * b
}

fn require_order(u: &Jet, min: usize, what: &str) -> Result<()> {
    if u.order() < min {
        return Err(Error::contract(format!(
            "{what} needs a test jet of order >= {min}, got {}",
            u.order()
        )));
    }
    Ok(())
}

/// `RU = U'' + rU' + sU`; the result has order `U.order − 2`.
pub fn apply_r(fp: &FactorPair, u: &Jet) -> Result<Jet> {
    require_order(u, 2, "R")?;
    let n = u.order() - 2;
    let z = u.base_point();
    let r = fp.r.jet(z, n)?;
    let s = fp.s.jet(z, n)?;
    Ok(d(u, 2)? + &r * &d(u, 1)? + &s * u)
}

/// `R*U = U'' − (rU)' + sU`; the result has order `U.order − 2`.
pub fn apply_r_star(fp: &FactorPair, u: &Jet) -> Result<Jet> {
    require_order(u, 2, "R*")?;
    let n = u.order() - 2;
    let z = u.base_point();
    let r = fp.r.jet(z, n + 1)?;
    let s = fp.s.jet(z, n)?;
    let ru = (&r * u).truncate(n + 1);
    Ok(d(u, 2)? - d(&ru, 1)? + &s * u)
}

/// `LU = U'''' + AU'' + A'U' + BU`; the result has order `U.order − 4`.
pub fn apply_l(coeffs: &BeamCoefficients, u: &Jet) -> Result<Jet> {
    require_order(u, 4, "L")?;
    let n = u.order() - 4;
    let z = u.base_point();
    let a = coeffs.a.jet(z, n + 1)?;
    let b = coeffs.b.jet(z, n)?;
    Ok(d(u, 4)? + &a * &d(u, 2)? + &d(&a, 1)? * &d(u, 1)? + &b * u)
}

/// `(|R*(RU) − LU|, |R(LU) − L̂(RU)|)` at `z` for a test function `U`.
pub fn intertwine_residual(fp: &FactorPair, u: &dyn JetFn, z: f64) -> Result<(f64, f64)> {
    let uj = u.jet(z, 6)?;
    let l = fp.coefficients();
    let l_hat = fp.hat_coefficients();
    let ru = apply_r(fp, &uj)?;
    let lu = apply_l(&l, &uj)?;
    let factored = apply_r_star(fp, &ru)?;
    let first = (factored.value() - lu.value()).abs();
    let second = (apply_r(fp, &lu)?.value() - apply_l(&l_hat, &ru)?.value()).abs();
    Ok((first, second))
}

/// `|R(R*U) − L̂U|` at `z`.
pub fn swap_residual(fp: &FactorPair, u: &dyn JetFn, z: f64) -> Result<f64> {
    let uj = u.jet(z, 4)?;
    let lhs = apply_r(fp, &apply_r_star(fp, &uj)?)?;
    let rhs = apply_l(&fp.hat_coefficients(), &uj)?;
    Ok((lhs.value() - rhs.value()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::jets::FnJet;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn pair(r: &str, s: &str) -> FactorPair {
        FactorPair::new(e(r), e(s))
    }

    #[test]
    fn coefficients_examples() {
        let (a, b) = coeffs_from_factors(&pair("0", "0"), 0.4, 2).unwrap();
        assert_eq!((a.value(), b.value()), (0.0, 0.0));
        let (a, b) = coeffs_from_factors(&pair("0", "1.5"), 0.4, 2).unwrap();
        assert_eq!((a.value(), b.value()), (3.0, 2.25));
        assert_eq!(a.coeffs(), &[3.0, 0.0, 0.0]);
        for z in [-1.0, 0.0, 0.3, 2.0] {
            let (a, b) = coeffs_from_factors(&pair("z", "0"), z, 2).unwrap();
            assert_abs_diff_eq!(a.value(), 1.0 - z * z, epsilon = 1e-15);
            assert_abs_diff_eq!(a.d(1), -2.0 * z, epsilon = 1e-15);
            assert_eq!(b.value(), 0.0);
        }
    }

    #[test]
    fn hat_examples() {
        let (ah, bh) = hat_coeffs(&pair("0", "1.5"), 0.0, 1).unwrap();
        assert_eq!((ah.value(), bh.value()), (3.0, 2.25));
        for z in [-0.5, 0.0, 1.2] {
            let (ah, bh) = hat_coeffs(&pair("z", "0"), z, 1).unwrap();
            assert_abs_diff_eq!(ah.value(), -3.0 - z * z, epsilon = 1e-15);
            assert_eq!(bh.value(), 0.0);
            let (ah, bh) = hat_coeffs(&pair("0", "z"), z, 1).unwrap();
            assert_abs_diff_eq!(ah.value(), 2.0 * z, epsilon = 1e-15);
            assert_abs_diff_eq!(bh.value(), z * z, epsilon = 1e-15);
        }
    }

    #[test]
    fn s_from_r_examples() {
        let zero = Jet::zero(0.0, 3);
        assert_eq!(s_from_r(&zero, &zero).unwrap().value(), 0.0);
        let a = Jet::constant(0.0, 2.5, 3);
        assert_eq!(s_from_r(&zero, &a).unwrap().value(), 1.25);
        let r = Jet::variable(2.0, 3);
        let s = s_from_r(&r, &Jet::zero(2.0, 3)).unwrap();
        assert_eq!(s.value(), 1.5);
        assert_eq!(s.order(), 2);
    }

    #[test]
    fn principal_residual_examples() {
        let zero = Jet::zero(0.0, 3);
        assert_eq!(principal_residual(&zero, &zero, 0.0).unwrap(), 0.0);
        let r = Jet::variable(0.0, 3);
        assert_eq!(principal_residual(&r, &zero, 0.0).unwrap(), -3.5);
        // r = 1/(1 - z/4) solves the equation with A = B = 0
        for i in 0..=10 {
            let z = i as f64 / 10.0;
            let r = e("1/(1 - z/4)").jet(z, 3).unwrap();
            let res = principal_residual(&r, &Jet::zero(z, 2), 0.0).unwrap();
            assert!(res.abs() < 1e-10, "z = {z}: {res}");
        }
        assert!(matches!(
            principal_residual(&Jet::zero(0.0, 2), &zero, 0.0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn third_derivative_solves_the_equation() {
        let a = e("sin(z)").jet(0.3, 2).unwrap();
        let r3 = principal_third_derivative(0.7, -0.2, 1.1, &a, 0.4);
        let r = Jet::new(0.3, vec![0.7, -0.2, 1.1, r3]).unwrap();
        assert!(principal_residual(&r, &a, 0.4).unwrap().abs() < 1e-14);
    }

    #[test]
    fn operator_examples() {
        let fp = pair("0", "0");
        let u = e("z^3 + sin(z)").jet(0.4, 4).unwrap();
        assert_eq!(apply_r(&fp, &u).unwrap(), u.derivative(2).unwrap());
        assert_eq!(apply_r_star(&fp, &u).unwrap(), u.derivative(2).unwrap());

        let fp = pair("1", "0");
        let u = Jet::variable(0.0, 2);
        assert_eq!(apply_r(&fp, &u).unwrap().value(), 1.0);
        assert_eq!(apply_r_star(&fp, &u).unwrap().value(), -1.0);

        let u = e("sin(3.141592653589793*z)").jet(0.5, 4).unwrap();
        let ru = apply_r(&pair("0", "0"), &u).unwrap();
        assert_abs_diff_eq!(ru.value(), -PI * PI, epsilon = 1e-12);

        let unit = BeamCoefficients::unit();
        assert_eq!(apply_l(&unit, &e("z^4").jet(0.0, 4).unwrap()).unwrap().value(), 24.0);
        assert_abs_diff_eq!(apply_l(&unit, &u).unwrap().value(), PI.powi(4), epsilon = 1e-10);
        let a1 = BeamCoefficients::new(1.0, 0.0);
        assert_eq!(apply_l(&a1, &e("z^2").jet(1.0, 4).unwrap()).unwrap().value(), 2.0);

        assert!(matches!(apply_l(&unit, &Jet::variable(0.0, 3)), Err(Error::Contract(_))));
        assert!(matches!(apply_r(&fp, &Jet::variable(0.0, 1)), Err(Error::Contract(_))));
    }

    #[test]
    fn intertwining_examples() {
        let (a, b) = intertwine_residual(&pair("0", "0"), &e("sin(z)"), 0.8).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
        let (a, b) = intertwine_residual(&pair("z", "1"), &e("z^3"), 0.7).unwrap();
        assert!(a < 1e-10 && b < 1e-10, "{a} {b}");
    }

    // Hand expansion of R*(RU) for U = z³, r = z, s = 1 at z = 0.7, kept
    // independent of the jet operator code.
    #[test]
    fn factorization_matches_hand_expansion() {
        let z: f64 = 0.7;
        let (u, u1, u2, u4) = (z.powi(3), 3.0 * z * z, 6.0 * z, 0.0);
        // A = r' - r² + 2s = 3 - z², A' = -2z, B = s'' - (rs)' + s² = -1 + 1 = 0
        let (a, a1, b) = (3.0 - z * z, -2.0 * z, 0.0);
        let lu = u4 + a * u2 + a1 * u1 + b * u;
        let fp = pair("z", "1");
        let ru = apply_r(&fp, &e("z^3").jet(z, 6).unwrap()).unwrap();
        let lhs = apply_r_star(&fp, &ru).unwrap().value();
        assert_abs_diff_eq!(lhs, lu, epsilon = 1e-12);
    }

    fn poly_fn(c: Vec<f64>) -> impl JetFn {
        FnJet(move |z, order| {
            let x = Jet::variable(z, order);
            Ok(c.iter().rev().fold(Jet::zero(z, order), |acc, &ci| &acc * &x + ci))
        })
    }

    proptest! {
        #[test]
        fn factor_and_swap_identities(
            rc in prop::collection::vec(-1.0f64..1.0, 4),
            sc in prop::collection::vec(-1.0f64..1.0, 4),
            w in 0.5f64..2.0,
            z in -1.0f64..1.0,
        ) {
            let fp = FactorPair::new(poly_fn(rc), poly_fn(sc));
            let u = e(&format!("sin({w}*z) + exp(z/3)"));
            let (first, second) = intertwine_residual(&fp, &u, z).unwrap();
            prop_assert!(first <= 1e-10 && second <= 1e-10, "{first} {second}");
            prop_assert!(swap_residual(&fp, &u, z).unwrap() <= 1e-10);
        }

        #[test]
        fn principal_equation_is_the_eliminant(
            rc in prop::collection::vec(-1.0f64..1.0, 4),
            sc in prop::collection::vec(-1.0f64..1.0, 4),
            z in -1.0f64..1.0,
        ) {
            let fp = FactorPair::new(poly_fn(rc), poly_fn(sc));
            let (a, b) = coeffs_from_factors(&fp, z, 2).unwrap();
            let r = fp.r.jet(z, 3).unwrap();
            prop_assert!(principal_residual(&r, &a, b.value()).unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn cubic_roots_annihilate_the_reciprocal_family() {
        let cubic = |k: f64| 12.0 * k.powi(3) - 19.0 * k * k + 8.0 * k - 1.0;
        for k in [0.25, 1.0 / 3.0, 1.0, 0.5, 0.8] {
            for z in [0.0, 0.3, 0.7] {
                let r = e(&format!("1/(2 - {k}*z)")).jet(z, 3).unwrap();
                let res = principal_residual(&r, &Jet::zero(z, 2), 0.0).unwrap();
                let expected = 0.5 * cubic(k) / (2.0 - k * z).powi(4);
                assert_abs_diff_eq!(res, expected, epsilon = 1e-12);
            }
        }
    }
}
