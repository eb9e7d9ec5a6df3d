//! Adaptive Gauss–Kronrod (7/15) quadrature with interval bisection.

// nodes and weights are kept at their published precision
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SUBDIVISIONS: usize = 2000;

fn gk15<F>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let f = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::Singular {
                at: x,
                what: format!("integrand is {v}"),
            });
        }
        Ok(v)
    };
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Integral of `f` over `[lo, hi]` to absolute accuracy `tol`.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below `tol`. Reversed bounds flip the sign.
pub fn quadrature<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::contract(format!("quadrature tolerance {tol} must be positive")));
    }
    if lo == hi {
        return Ok(0.0);
    }
    if lo > hi {
        return quadrature(f, hi, lo, tol).map(|v| -v);
    }
    let (value, err) = gk15(&f, lo, hi)?;
    let mut pieces = vec![(lo, hi, value, err)];
    let mut total_err = err;
    let mut total = value;
    let mut splits = 0;
    while total_err > tol {
        if splits >= MAX_SUBDIVISIONS {
            return Err(Error::Quadrature {
                achieved: total_err,
                tol,
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .map(|(i, _)| i)
            .expect("at least one piece");
        let (a, b, v, e) = pieces.swap_remove(worst);
        let mid = 0.5 * (a + b);
        let left = gk15(&f, a, mid)?;
        let right = gk15(&f, mid, b)?;
        total += left.0 + right.0 - v;
        total_err += left.1 + right.1 - e;
        pieces.push((a, mid, left.0, left.1));
        pieces.push((mid, b, right.0, right.1));
        splits += 1;
        // the running sums drift; refresh them now and then
        if splits % 64 == 0 {
            total = pieces.iter().map(|p| p.2).sum();
            total_err = pieces.iter().map(|p| p.3).sum();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_forms() {
        assert_abs_diff_eq!(quadrature(|_| Ok(1.0), 0.0, 1.0, 1e-12).unwrap(), 1.0, epsilon = 1e-14);
        let v = quadrature(|z| Ok((-z).exp()), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 1.0 - (-1f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(v, 0.6321206, epsilon = 1e-7);
        assert_abs_diff_eq!(quadrature(|z| Ok(z * z), 0.0, 1.0, 1e-12).unwrap(), 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        assert_eq!(quadrature(Ok, 1.0, 1.0, 1e-10).unwrap(), 0.0);
        assert_abs_diff_eq!(quadrature(Ok, 1.0, 0.0, 1e-12).unwrap(), -0.5, epsilon = 1e-14);
    }

    #[test]
    fn adapts_to_a_sharp_peak() {
        let f = |z: f64| Ok(1.0 / (1e-4 + (z - 0.3).powi(2)));
        let exact = 100.0 * ((0.7f64 / 1e-2).atan() + (0.3f64 / 1e-2).atan());
        assert_abs_diff_eq!(quadrature(f, 0.0, 1.0, 1e-9).unwrap(), exact, epsilon = 1e-8);
    }

    #[test]
    fn reports_failure() {
        let r = quadrature(|z: f64| Ok(1.0 / ((z - 0.3).powi(2) + 1e-30)), 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::Quadrature { .. })), "{r:?}");
        assert!(matches!(quadrature(Ok, 0.0, 1.0, 0.0), Err(Error::Contract(_))));
        let r = quadrature(|z: f64| Ok(1.0 / (z - 0.5)), 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::Singular { .. })), "{r:?}");
    }
}
