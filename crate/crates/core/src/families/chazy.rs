//! Rational family of the unit beam obtained through Chazy's equation
//! `y''' = 2yy'' − 3y'² + α(6y' − y²)²` with `α = 4/27`, under `r = y`,
//! `z = 2x/3`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{s_from_r, BeamCoefficients, FactorPair};
use crate::jets::{FnJet, Jet};

use super::scan_for_zero;

/// The Chazy parameter reached from the principal equation with `A = B = 0`.
pub const CHAZY_ALPHA: f64 = 4.0 / 27.0;

/// `σ = 1/(144(1 − 9α))`, the parameter of the associated hypergeometric
/// equation.
pub fn chazy_sigma(alpha: f64) -> f64 {
    1.0 / (144.0 * (1.0 - 9.0 * alpha))
}

const DET_TOL: f64 = 1e-12;

/// Constants `k₁..k₄` normalized by `k₁k₄ − k₂k₃ = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChazyFamilySpec {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

impl ChazyFamilySpec {
    pub fn new(k1: f64, k2: f64, k3: f64, k4: f64) -> Result<Self> {
        let spec = ChazyFamilySpec { k1, k2, k3, k4 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn determinant(&self) -> f64 {
        self.k1 * self.k4 - self.k2 * self.k3
    }

    pub fn validate(&self) -> Result<()> {
        let det = self.determinant();
        if (det + 1.0).abs() > DET_TOL {
            return Err(Error::InvalidSpec(format!(
                "k1*k4 - k2*k3 = {det}, expected -1"
            )));
        }
        Ok(())
    }

    fn parts(&self, z: &Jet) -> (Jet, Jet) {
        let p = z.scale(3.0 * self.k3) - 2.0 * self.k1;
        let q = z.scale(3.0 * self.k4) - 2.0 * self.k2;
        (p, q)
    }

    /// Denominator `(3k₄z − 2k₂)[2(2k₁ − 3k₃z)³ − (3k₄z − 2k₂)³]` at `z`.
    pub fn denominator(&self, z: f64) -> f64 {
        let p = 3.0 * self.k3 * z - 2.0 * self.k1;
        let q = 3.0 * self.k4 * z - 2.0 * self.k2;
        q * (-2.0 * p.powi(3) - q.powi(3))
    }

    /// Jet of
    /// `r = 6[3k₃P²Q + 2k₄Q³ + k₄P³] / (Q[2(−P)³ − Q³])`,
    /// `P = 3k₃z − 2k₁`, `Q = 3k₄z − 2k₂`.
    pub fn r(&self, z: f64, order: usize) -> Result<Jet> {
        self.validate()?;
        let zj = Jet::variable(z, order);
        let (p, q) = self.parts(&zj);
        let p2 = &p * &p;
        let p3 = &p2 * &p;
        let q3 = &(&q * &q) * &q;
        let numer = (&p2 * &q).scale(18.0 * self.k3) + q3.scale(12.0 * self.k4)
            + p3.scale(6.0 * self.k4);
        let denom = &q * &(p3.scale(-2.0) - q3);
        if denom.value() == 0.0 {
            return Err(Error::Pole { lo: z, hi: z });
        }
        Ok(numer / denom)
    }

    /// `s = (r² − r')/2`, the factor coefficient for `A = 0`.
    pub fn s(&self, z: f64, order: usize) -> Result<Jet> {
        let r = self.r(z, order + 1)?;
        s_from_r(&r, &Jet::zero(z, order))
    }

    pub fn factor_pair(&self) -> FactorPair {
        let (a, b) = (*self, *self);
        FactorPair {
            r: Arc::new(FnJet(move |z, order| a.r(z, order))),
            s: Arc::new(FnJet(move |z, order| b.s(z, order))),
        }
    }

    /// The operator factorized by this family is always the unit beam.
    pub fn coefficients(&self) -> BeamCoefficients {
        BeamCoefficients::unit()
    }

    pub fn check_interval(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        self.validate()?;
        scan_for_zero(|z| Ok(self.denominator(z)), lo, hi, samples)
    }

    /// Parametric point `(x, y)` of the Chazy solution for `τ ≥ 0`, using the
    /// real cube root `τ^{1/3}`.
    pub fn parametric(&self, tau: f64) -> Result<(f64, f64)> {
        if !(tau >= 0.0) {
            return Err(Error::OutOfDomain(format!(
                "tau = {tau}: only the real branch tau >= 0 is supported"
            )));
        }
        if tau == 0.5 {
            return Err(Error::Singular {
                at: tau,
                what: "the parametrization is singular at tau = 1/2".into(),
            });
        }
        let t = tau.cbrt();
        let den = self.k3 + self.k4 * t;
        if den == 0.0 {
            return Err(Error::Pole { lo: tau, hi: tau });
        }
        let x = (self.k1 + self.k2 * t) / den;
        let y = 3.0 * den * (3.0 * self.k3 * t * t + self.k4 * (2.0 - tau)) / (1.0 - 2.0 * tau);
        Ok((x, y))
    }

    /// `y(x)` with the parameter eliminated:
    /// `3[3k₃(k₃x−k₁)²(k₄x−k₂) + 2k₄(k₄x−k₂)³ + k₄(k₃x−k₁)³] / ((k₄x−k₂)[2(k₁−k₃x)³ − (k₄x−k₂)³])`.
    pub fn closed_form_y(&self, x: f64) -> Result<f64> {
        let p = self.k3 * x - self.k1;
        let q = self.k4 * x - self.k2;
        let den = q * (2.0 * (-p).powi(3) - q.powi(3));
        if den == 0.0 {
            return Err(Error::Pole { lo: x, hi: x });
        }
        Ok(3.0
            * (3.0 * self.k3 * p * p * q + 2.0 * self.k4 * q.powi(3) + self.k4 * p.powi(3))
            / den)
    }
}
