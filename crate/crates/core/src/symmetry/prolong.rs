//! Prolongation of point vector fields to the third jet space and the
//! infinitesimal symmetry condition for the principal equation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factorization::{principal_third_derivative, BeamCoefficients};

use super::bivariate::Jet2;
use super::field::PointVectorField;

/// A point `(z, r, r', r'', r''')` of the third jet space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetPoint {
    pub z: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl JetPoint {
    /// A point on the solution manifold: `r'''` is fixed by the principal equation.
    pub fn on_manifold(
        z: f64,
        r0: f64,
        r1: f64,
        r2: f64,
        coeffs: &BeamCoefficients,
    ) -> Result<JetPoint> {
        let a = coeffs.a.jet(z, 2)?;
        let b = coeffs.b.jet(z, 0)?.value();
        let r3 = principal_third_derivative(r0, r1, r2, &a, b);
        Ok(JetPoint { z, r0, r1, r2, r3 })
    }
}

/// Polynomial in `r', r'', r'''` with coefficients that are bivariate jets in `(z, r)`.
#[derive(Debug, Clone)]
struct JetPoly {
    order: usize,
    terms: BTreeMap<[u8; 3], Jet2>,
}

impl JetPoly {
    fn from_jet2(c: Jet2) -> JetPoly {
        let order = c.order();
        let mut terms = BTreeMap::new();
        terms.insert([0, 0, 0], c);
        JetPoly { order, terms }
    }

    fn add_term(&mut self, key: [u8; 3], c: Jet2) {
        let c = c.truncate(self.order);
        match self.terms.get_mut(&key) {
            Some(existing) => *existing = &*existing + &c,
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Total derivative `D = ∂z + r'∂r + r''∂r' + r'''∂r''`; the coefficient
    /// order drops by one.
    fn total_derivative(&self) -> Result<JetPoly> {
        if self.order == 0 {
            return Err(Error::contract("total derivative of an order-0 polynomial"));
        }
        let mut out = JetPoly {
            order: self.order - 1,
            terms: BTreeMap::new(),
        };
        for (&[i, j, k], c) in &self.terms {
            out.add_term([i, j, k], c.dz());
            out.add_term([i + 1, j, k], c.dr());
            if i > 0 {
                out.add_term([i - 1, j + 1, k], c.scale(i as f64));
            }
            if j > 0 {
                out.add_term([i, j - 1, k + 1], c.scale(j as f64));
            }
            if k > 0 {
                return Err(Error::contract("prolongation beyond third order"));
            }
        }
        Ok(out)
    }

    /// `self − r⁽ⁿ⁾ · other`, with `n ∈ {1, 2, 3}`.
    fn sub_times_derivative(mut self, n: usize, other: &JetPoly) -> JetPoly {
        for (&[i, j, k], c) in &other.terms {
            let key = match n {
                1 => [i + 1, j, k],
                2 => [i, j + 1, k],
                _ => [i, j, k + 1],
            };
            self.add_term(key, -c);
        }
        self
    }

    fn eval(&self, p: &JetPoint) -> f64 {
        self.terms
            .iter()
            .map(|(&[i, j, k], c)| {
                c.value() * p.r1.powi(i as i32) * p.r2.powi(j as i32) * p.r3.powi(k as i32)
            })
            .sum()
    }
}

/// The first three prolongation coefficients `η^[k] = D(η^[k−1]) − r⁽ᵏ⁾D(ξ)`.
pub fn prolong(x: &dyn PointVectorField, p: &JetPoint) -> Result<(f64, f64, f64)> {
    let (xi, eta) = x.coefficients(p.z, p.r0, 3)?;
    let dxi = JetPoly::from_jet2(xi).total_derivative()?;
    let mut eta_k = JetPoly::from_jet2(eta);
    let mut out = [0.0; 3];
    for (n, slot) in out.iter_mut().enumerate() {
        eta_k = eta_k.total_derivative()?.sub_times_derivative(n + 1, &dxi);
        *slot = eta_k.eval(p);
    }
    Ok((out[0], out[1], out[2]))
}

/// `X^[3] F` at `p`, where `F = 0` is the principal equation with the
/// given coefficients. Vanishes on the solution manifold iff `X` is a symmetry.
pub fn symmetry_residual(
    x: &dyn PointVectorField,
    coeffs: &BeamCoefficients,
    p: &JetPoint,
) -> Result<f64> {
    let a = coeffs.a.jet(p.z, 3)?;
    let b = coeffs.b.jet(p.z, 1)?;
    let (a0, a1, a2, a3) = (a.d(0), a.d(1), a.d(2), a.d(3));
    let (r, r1, r2) = (p.r0, p.r1, p.r2);
    let r_sq = r * r;

    let f_z = 2.0 * a1 * r1 - a3 - r_sq * a1 - a0 * a1 + r * a2 + 2.0 * b.d(1);
    let f_r = -3.0 * r2 + 8.0 * r * r1 - 2.0 * r * a0 - 2.0 * r_sq * r + a1;
    let f_r1 = -7.0 * r1 + 2.0 * (2.0 * r_sq + a0);
    let f_r2 = -3.0 * r;

    let (xi, eta) = x.coefficients(p.z, p.r0, 0)?;
    let (eta1, eta2, eta3) = prolong(x, p)?;
    Ok(xi.value() * f_z + eta.value() * f_r + eta1 * f_r1 + eta2 * f_r2 + eta3)
}
