//! Closed-form solution families of the principal equation.
//!
//! - [`LieFamilySpec`]: the quadrature family obtained from the one-parameter
//!   symmetry group generated by a gauge function `a(z)`,
//! - [`ChazyFamilySpec`]: the rational family of the unit beam (`A = B = 0`)
//!   obtained through the Chazy equation.

mod chazy;
mod hypergeometric;
mod lie;
mod quadrature;

pub use chazy::{chazy_sigma, ChazyFamilySpec, CHAZY_ALPHA};
pub use hypergeometric::hyp2f1;
pub use lie::{k_cubic, k_roots, reduced_equation_residual, KRoot, LieFamilySpec};
pub use quadrature::quadrature;

use crate::error::{Error, Result};

/// Samples `f` on a uniform grid over `[lo, hi]` and reports the first bracket
/// where it vanishes or changes sign.
pub fn scan_for_zero<F>(mut f: F, lo: f64, hi: f64, samples: usize) -> Result<()>
where
    F: FnMut(f64) -> Result<f64>,
{
    let samples = samples.max(2);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..samples {
        let z = if i + 1 == samples { hi } else { lo + step * i as f64 };
        let v = f(z)?;
        if v == 0.0 || !v.is_finite() {
            return Err(Error::Pole { lo: z, hi: z });
        }
        if let Some((pz, pv)) = prev {
            if pv.signum() != v.signum() {
                return Err(Error::Pole { lo: pz, hi: z });
            }
        }
        prev = Some((z, v));
    }
    Ok(())
}
