//! The Chazy equation and the change of variables relating it to the
//! principal equation with `A = B = 0`.

use crate::error::{Error, Result};
use crate::factorization::principal_residual;
use crate::jets::{Jet, JetFn};

/// `y''' − 2yy'' + 3y'² − α(6y' − y²)²` at the base point of `y`.
pub fn chazy_residual(y: &Jet, alpha: f64) -> Result<f64> {
    if y.order() < 3 {
        return Err(Error::contract(format!(
            "chazy residual needs a jet of order 3, got {}",
            y.order()
        )));
    }
    let (y0, y1, y2, y3) = (y.d(0), y.d(1), y.d(2), y.d(3));
    let q = 6.0 * y1 - y0 * y0;
    Ok(y3 - 2.0 * y0 * y2 + 3.0 * y1 * y1 - alpha * q * q)
}

/// `(lhs, rhs)` where `lhs` is the principal residual of `r` at `z` with
/// `A = B = 0` and `rhs` is `27/8` times the Chazy residual (`α = 4/27`) of
/// `y(x) = r(2x/3)` at `x = 3z/2`. The two agree for every smooth `r`.
pub fn chazy_map_check(r_source: &dyn JetFn, z: f64) -> Result<(f64, f64)> {
    let r = r_source.jet(z, 3)?;
    let lhs = principal_residual(&r, &Jet::zero(z, 2), 0.0)?;
    let y = r.rescale(2.0 / 3.0);
    let rhs = 27.0 / 8.0 * chazy_residual(&y, crate::families::CHAZY_ALPHA)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::families::ChazyFamilySpec;
    use crate::jets::FnJet;

    #[test]
    fn residual_examples() {
        assert_eq!(chazy_residual(&Jet::zero(0.3, 3), 0.5).unwrap(), 0.0);
        let y = Jet::variable(0.4, 3);
        assert!((chazy_residual(&y, 0.0).unwrap() - 3.0).abs() <= 1e-15);
    }

    #[test]
    fn rational_solution() {
        let y = Expr::parse("9*z^2/(1 - 2*z^3)").unwrap();
        let jet = y.eval_jet(0.1, 3).unwrap();
        assert!(chazy_residual(&jet, 4.0 / 27.0).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn map_examples() {
        let (l, r) = chazy_map_check(&Expr::parse("z").unwrap(), 0.0).unwrap();
        assert!((l + 3.5).abs() <= 1e-12 && (r + 3.5).abs() <= 1e-12);
        let (l, r) = chazy_map_check(&0.0, 0.7).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        let fam = ChazyFamilySpec::new(0.0, 1.0, 1.0, 0.0).unwrap();
        let src = FnJet(move |z: f64, order: usize| fam.r(z, order));
        let (l, r) = chazy_map_check(&src, 0.3).unwrap();
        assert!(l.abs() <= 1e-9 && r.abs() <= 1e-9);
    }

    #[test]
    fn map_holds_for_non_solutions() {
        for src in ["sin(3*z) + z^2", "exp(z/2) - 1", "1/(2 + z)"] {
            let r = Expr::parse(src).unwrap();
            for z in [-0.4, 0.0, 0.8] {
                let (l, rhs) = chazy_map_check(&r, z).unwrap();
                assert!((l - rhs).abs() <= 1e-9 * (1.0 + l.abs()), "{src}: {l} vs {rhs}");
            }
        }
    }
}
