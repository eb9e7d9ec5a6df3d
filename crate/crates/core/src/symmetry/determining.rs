//! Residuals of the determining equations linking a gauge function `a(z)`
//! to the coefficients `A`, `B`.

use crate::error::{Error, Result};
use crate::factorization::BeamCoefficients;
use crate::jets::JetFn;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminingResiduals {
    /// `aA' + 2a'A + 5a'''`.
    pub res7: f64,
    /// `B' + 4(a'/a)B − [(a'/a)A² + AA'/2 + (a''/a)A' + 2(a'/a)A'' + 2(a'''/a)A + A'''/2 + a⁽⁵⁾/a]`.
    pub res8: f64,
    /// `3a'A' + 2a''A + aA'' + 5a⁽⁴⁾`.
    pub res9: f64,
}

pub fn determining_residuals(
    a: &dyn JetFn,
    coeffs: &BeamCoefficients,
    z: f64,
) -> Result<DeterminingResiduals> {
    let g = a.jet(z, 5)?;
    let big_a = coeffs.a.jet(z, 3)?;
    let big_b = coeffs.b.jet(z, 1)?;
    let [a0, a1, a2, a3, a4, a5] = std::array::from_fn(|k| g.d(k));
    let [p0, p1, p2, p3] = std::array::from_fn(|k| big_a.d(k));
    let (b0, b1) = (big_b.d(0), big_b.d(1));
    if a0 == 0.0 {
        return Err(Error::Singular {
            at: z,
            what: "gauge a(z) vanishes".into(),
        });
    }

    let res7 = a0 * p1 + 2.0 * a1 * p0 + 5.0 * a3;
    let res9 = 3.0 * a1 * p1 + 2.0 * a2 * p0 + a0 * p2 + 5.0 * a4;
    let rhs = (a1 * p0 * p0 + a2 * p1 + 2.0 * a1 * p2 + 2.0 * a3 * p0 + a5) / a0
        + 0.5 * p0 * p1
        + 0.5 * p3;
    let res8 = b1 + 4.0 * a1 / a0 * b0 - rhs;
    Ok(DeterminingResiduals { res7, res8, res9 })
}
