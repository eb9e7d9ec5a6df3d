//! Gauss hypergeometric function on the real line.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;
const REL_TAIL: f64 = 1e-15;

fn series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // once the ratio settles below one, the tail is bounded by a
        // geometric series
        let ratio = ((a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0)) * x).abs();
        if ratio < 1.0 {
            let tail = term.abs() * ratio / (1.0 - ratio);
            if tail <= REL_TAIL * sum.abs() {
                return Ok(sum);
            }
        }
    }
    Err(Error::Numerical(format!(
        "2F1({a}, {b}; {c}; {x}) series did not converge in {MAX_TERMS} terms"
    )))
}

/// `₂F₁(a, b; c; x)`.
///
/// The Gauss series is summed for `|x| < 1`. For `x ≤ −1` the Pfaff
/// transformation `(1−x)^{−a} ₂F₁(a, c−b; c; x/(x−1))` brings the argument
/// into `[1/2, 1)`. Arguments `x ≥ 1` are rejected.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::OutOfDomain(format!("c = {c} is a non-positive integer")));
    }
    if !x.is_finite() || x >= 1.0 {
        return Err(Error::OutOfDomain(format!("x = {x} (need x < 1)")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x <= -1.0 {
        return Ok((1.0 - x).powf(-a) * series(a, c - b, c, x / (x - 1.0))?);
    }
    series(a, b, c, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_argument() {
        assert_eq!(hyp2f1(0.3, -2.5, 1.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn logarithm_identity() {
        // 2F1(1,1;2;x) = -log(1-x)/x
        for x in [0.5f64, -0.3, 0.9, -0.99, -3.0] {
            let expected = -(1.0 - x).ln() / x;
            assert_abs_diff_eq!(hyp2f1(1.0, 1.0, 2.0, x).unwrap(), expected, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(hyp2f1(1.0, 1.0, 2.0, 0.5).unwrap(), 1.3862943611198906, epsilon = 1e-14);
    }

    #[test]
    fn binomial_identity() {
        // 2F1(a,b;b;x) = (1-x)^{-a}
        for x in [-5.0, -1.0, -0.4, 0.7] {
            assert_abs_diff_eq!(hyp2f1(0.75, 1.3, 1.3, x).unwrap(), (1.0 - x).powf(-0.75), epsilon = 1e-12);
        }
    }

    #[test]
    fn polynomial_case_terminates() {
        // 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x²/(c(c+1))
        let (b, c, x) = (1.5, 2.5, 0.4);
        let expected = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        assert_abs_diff_eq!(hyp2f1(-2.0, b, c, x).unwrap(), expected, epsilon = 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(hyp2f1(1.0, 1.0, 2.0, 1.0), Err(Error::OutOfDomain(_))));
        assert!(matches!(hyp2f1(1.0, 1.0, 2.0, 1.5), Err(Error::OutOfDomain(_))));
        assert!(matches!(hyp2f1(1.0, 1.0, -2.0, 0.5), Err(Error::OutOfDomain(_))));
    }

    fn arg(tau: f64) -> f64 {
        tau * (tau + 4.0).powi(3) / (4.0 * (2.0 * tau - 1.0).powi(3))
    }

    #[test]
    fn chazy_parametrization_identities() {
        assert_abs_diff_eq!(arg(0.01), -0.17127536411274213, epsilon = 1e-14);
        for tau in [0.005, 0.01, 0.02, 0.05] {
            let x = arg(tau);
            let lhs1 = hyp2f1(0.25, -1.0 / 12.0, 2.0 / 3.0, x).unwrap();
            assert_abs_diff_eq!(lhs1, (1.0 - 2.0 * tau).powf(-0.25), epsilon = 1e-8);
            let lhs2 = hyp2f1(0.25, 7.0 / 12.0, 4.0 / 3.0, x).unwrap();
            assert_abs_diff_eq!(lhs2, 4.0 * (1.0 - 2.0 * tau).powf(0.75) / (tau + 4.0), epsilon = 1e-8);
        }
    }
}
