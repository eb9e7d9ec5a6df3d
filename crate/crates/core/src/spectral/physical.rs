//! Physical beams `(f, m)` and the coordinate change to canonical form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::families::quadrature;

/// Flexural rigidity `f = EI` and linear mass density `m` on `[0, length]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalBeam {
    pub f: Expr,
    pub m: Expr,
    pub length: f64,
}

const QUAD_TOL: f64 = 1e-12;

impl PhysicalBeam {
    pub fn new(f: Expr, m: Expr, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidSpec(format!("beam length {length} must be positive")));
        }
        Ok(PhysicalBeam { f, m, length })
    }

    fn positive(&self, x: f64) -> Result<(f64, f64)> {
        let (f, m) = (self.f.eval(x)?, self.m.eval(x)?);
        if !(f > 0.0 && m > 0.0) {
            return Err(Error::OutOfDomain(format!(
                "rigidity and mass density must be positive, got f({x}) = {f}, m({x}) = {m}"
            )));
        }
        Ok((f, m))
    }
}

/// Canonical coordinate `z = ∫₀ˣ (m/f)^{1/4}` and amplitude factor
/// `(m³f)^{−1/8}` relating `Y(x)` to `U(z)`.
pub fn barcilon_map(beam: &PhysicalBeam, x: f64) -> Result<(f64, f64)> {
    if !(0.0..=beam.length).contains(&x) {
        return Err(Error::OutOfDomain(format!(
            "x = {x} outside the beam [0, {}]",
            beam.length
        )));
    }
    let (f, m) = beam.positive(x)?;
    let z = quadrature(
        |t| beam.positive(t).map(|(f, m)| (m / f).powf(0.25)),
        0.0,
        x,
        QUAD_TOL,
    )?;
    Ok((z, (m.powi(3) * f).powf(-0.125)))
}
