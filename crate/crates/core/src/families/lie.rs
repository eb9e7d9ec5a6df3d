//! Family generated by a gauge function `a(z)`:
//!
//! ```text
//! A = (5a'² − 10aa'' + 2C₁) / (2a²)
//! B = [81a'⁴ + 12a'²(3C₁ − 17aa'') + 72a²a'a'''
//!      + 4(C₁² + 4C₂ − 6C₁aa'' + 21a²a''² − 6a³a⁗)] / (16a⁴)
//! r = 1/(Ca − kaQ(z)) − 2a'/a,   Q(z) = ∫₀ᶻ 1/a,   k ∈ {1/4, 1/3, 1}
//! ```
//!
//! `r` solves the principal equation only for `C₁ = C₂ = 0`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::factorization::{s_from_r, BeamCoefficients, FactorPair};
use crate::jets::{FnJet, Jet};

use super::quadrature::quadrature;
use super::scan_for_zero;

/// `12k³ − 19k² + 8k − 1`.
pub fn k_cubic(k: f64) -> f64 {
    ((12.0 * k - 19.0) * k + 8.0) * k - 1.0
}

/// The admissible exponents `k` of the ansatz `v = ku²`.
pub fn k_roots() -> [f64; 3] {
    let roots = [0.25, 1.0 / 3.0, 1.0];
    for k in roots {
        assert!(k_cubic(k).abs() <= 1e-14, "k = {k} is not a root");
    }
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KRoot {
    Quarter,
    Third,
    One,
}

impl KRoot {
    pub const ALL: [KRoot; 3] = [KRoot::Quarter, KRoot::Third, KRoot::One];

    /// Matches an exact fraction `num/den` against the three roots.
    pub fn from_fraction(num: i64, den: i64) -> Result<KRoot> {
        if den == 0 {
            return Err(Error::InvalidSpec("k has a zero denominator".into()));
        }
        match (num * 12).checked_div(den) {
            Some(3) if num * 12 % den == 0 => Ok(KRoot::Quarter),
            Some(4) if num * 12 % den == 0 => Ok(KRoot::Third),
            Some(12) if num * 12 % den == 0 => Ok(KRoot::One),
            _ => Err(Error::InvalidSpec(format!(
                "k = {num}/{den} is not one of 1/4, 1/3, 1"
            ))),
        }
    }

    pub fn value(self) -> f64 {
        let [q, t, o] = k_roots();
        match self {
            KRoot::Quarter => q,
            KRoot::Third => t,
            KRoot::One => o,
        }
    }
}

impl fmt::Display for KRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KRoot::Quarter => "1/4",
            KRoot::Third => "1/3",
            KRoot::One => "1",
        })
    }
}

#[derive(Debug, Clone)]
pub struct LieFamilySpec {
    pub a: Expr,
    pub c: f64,
    pub k: KRoot,
    pub c1: f64,
    pub c2: f64,
}

const QUAD_TOL: f64 = 1e-13;

impl LieFamilySpec {
    pub fn new(a: Expr, k: KRoot, c: f64) -> Self {
        LieFamilySpec {
            a,
            c,
            k,
            c1: 0.0,
            c2: 0.0,
        }
    }

    fn gauge(&self, z: f64, order: usize) -> Result<Jet> {
        let a = self.a.jet(z, order)?;
        if a.value() == 0.0 {
            return Err(Error::Singular {
                at: z,
                what: format!("gauge a(z) = {} vanishes", self.a),
            });
        }
        Ok(a)
    }

    /// `(A, B)` jets of the given order at `z`.
    pub fn coeffs(&self, z: f64, order: usize) -> Result<(Jet, Jet)> {
        let a = self.gauge(z, order + 4)?;
        let d = |k: usize| a.derivative(k);
        let (a1, a2, a3, a4) = (d(1)?, d(2)?, d(3)?, d(4)?);
        let (c1, c2) = (self.c1, self.c2);
        let a_sq = &a * &a;
        let a1_sq = &a1 * &a1;
        let aa2 = &a * &a2;

        let big_a = ((a1_sq.scale(5.0) - aa2.scale(10.0)) + 2.0 * c1) / a_sq.scale(2.0);

        let inner = (aa2.scale(-6.0 * c1) + &a_sq * &(&a2 * &a2).scale(21.0)
            - (&a_sq * &(&a * &a4)).scale(6.0))
            + (c1 * c1 + 4.0 * c2);
        let numer = (&a1_sq * &a1_sq).scale(81.0)
            + &a1_sq * &(aa2.scale(-17.0) + 3.0 * c1).scale(12.0)
            + (&a_sq * &(&a1 * &a3)).scale(72.0)
            + inner.scale(4.0);
        let big_b = numer / (&a_sq * &a_sq).scale(16.0);
        Ok((big_a.truncate(order), big_b.truncate(order)))
    }

    /// `Q(z) = ∫₀ᶻ 1/a`.
    pub fn gauge_integral(&self, z: f64) -> Result<f64> {
        quadrature(
            |t| {
                let a = self.a.eval(t)?;
                if a == 0.0 {
                    return Err(Error::Singular {
                        at: t,
                        what: format!("gauge a(z) = {} vanishes", self.a),
                    });
                }
                Ok(1.0 / a)
            },
            0.0,
            z,
            QUAD_TOL * z.abs().max(1.0),
        )
    }

    fn require_closed_form(&self) -> Result<()> {
        if self.c1 != 0.0 || self.c2 != 0.0 {
            return Err(Error::InvalidSpec(
                "the closed-form r requires C1 = C2 = 0".into(),
            ));
        }
        Ok(())
    }

    /// `C·a − k·a·Q(z)`, the denominator of `w`.
    fn denominator(&self, a: &Jet, q0: f64) -> Result<Jet> {
        let q = a.recip()?.integrate(q0).truncate(a.order());
        Ok(a * &(-q.scale(self.k.value()) + self.c))
    }

    /// `w = 1/(Ca − kaQ)` as a jet; satisfies `w' + (a'/a)w = kw²`.
    pub fn w(&self, z: f64, order: usize) -> Result<Jet> {
        self.require_closed_form()?;
        let a = self.gauge(z, order)?;
        let den = self.denominator(&a, self.gauge_integral(z)?)?;
        if den.value() == 0.0 {
            return Err(Error::Pole { lo: z, hi: z });
        }
        den.recip()
    }

    /// `r = w − 2a'/a`.
    pub fn r(&self, z: f64, order: usize) -> Result<Jet> {
        let a = self.gauge(z, order + 1)?;
        let w = self.w(z, order)?;
        Ok(w - (a.derivative(1)? / a.truncate(order)).scale(2.0))
    }

    /// `s = (A + r² − r')/2`.
    pub fn s(&self, z: f64, order: usize) -> Result<Jet> {
        let r = self.r(z, order + 1)?;
        let (a, _) = self.coeffs(z, order)?;
        s_from_r(&r, &a)
    }

    pub fn coefficients(&self) -> BeamCoefficients {
        let (ca, cb) = (self.clone(), self.clone());
        BeamCoefficients {
            a: Arc::new(FnJet(move |z, order| Ok(ca.coeffs(z, order)?.0))),
            b: Arc::new(FnJet(move |z, order| Ok(cb.coeffs(z, order)?.1))),
        }
    }

    pub fn factor_pair(&self) -> FactorPair {
        let (sr, ss) = (self.clone(), self.clone());
        FactorPair {
            r: Arc::new(FnJet(move |z, order| sr.r(z, order))),
            s: Arc::new(FnJet(move |z, order| ss.s(z, order))),
        }
    }

    /// Checks that neither `a` nor the denominator of `w` vanishes on
    /// `[lo, hi]`; the integral is accumulated panel by panel.
    pub fn check_interval(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        scan_for_zero(|z| self.a.eval(z), lo, hi, samples).map_err(|e| match e {
            Error::Pole { lo, hi } => Error::Singular {
                at: 0.5 * (lo + hi),
                what: format!("gauge a(z) = {} vanishes in [{lo}, {hi}]", self.a),
            },
            other => other,
        })?;
        self.require_closed_form()?;
        let mut last = (0.0, 0.0);
        let (a, k, c) = (&self.a, self.k.value(), self.c);
        scan_for_zero(
            |z| {
                let q = last.1
                    + quadrature(|t| Ok(1.0 / a.eval(t)?), last.0, z, QUAD_TOL)?;
                last = (z, q);
                Ok(a.eval(z)? * (c - k * q))
            },
            lo,
            hi,
            samples,
        )
    }

    /// `u = ar + 2a'` and `v = a²r' + aa'r + 2aa''` as jets.
    pub fn invariants(&self, z: f64, order: usize) -> Result<(Jet, Jet)> {
        reduced_invariants(&self.gauge(z, order + 2)?, &self.r(z, order + 1)?)
    }
}

/// First-order differential invariants `(u, v)` of the gauge symmetry.
pub(crate) fn reduced_invariants(a: &Jet, r: &Jet) -> Result<(Jet, Jet)> {
    let a1 = a.derivative(1)?;
    let a2 = a.derivative(2)?;
    let r1 = r.derivative(1)?;
    let u = a * r + a1.scale(2.0);
    let v = &(a * a) * &r1 + &(a * &a1) * r + (a * &a2).scale(2.0);
    Ok((u, v))
}

/// Residual of the reduced second-order equation in `(u, v)`:
/// `2v²v_uu − [6uv·v_u − 2v·v_u² + u⁴ − 8u²v + 7v² + 2C₁u² − 4C₁v − 4C₂]`,
/// with `u`, `v` given as jets in `z` (order ≥ 2) and `v_u = v'/u'`.
pub fn reduced_equation_residual(u: &Jet, v: &Jet, c1: f64, c2: f64) -> Result<f64> {
    if u.order() < 2 || v.order() < 2 {
        return Err(Error::contract("reduced equation needs u and v to order 2"));
    }
    let (u0, u1, u2) = (u.d(0), u.d(1), u.d(2));
    let (v0, v1, v2) = (v.d(0), v.d(1), v.d(2));
    if u1 == 0.0 {
        return Err(Error::Singular {
            at: u.base_point(),
            what: "u' = 0, v is not a function of u here".into(),
        });
    }
    let vu = v1 / u1;
    let vuu = (v2 * u1 - v1 * u2) / u1.powi(3);
    let rhs = 6.0 * u0 * v0 * vu - 2.0 * v0 * vu * vu + u0.powi(4) - 8.0 * u0 * u0 * v0
        + 7.0 * v0 * v0
        + 2.0 * c1 * u0 * u0
        - 4.0 * c1 * v0
        - 4.0 * c2;
    Ok(2.0 * v0 * v0 * vuu - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::principal_residual;
    use approx::assert_abs_diff_eq;

    fn spec(a: &str, k: KRoot, c: f64) -> LieFamilySpec {
        LieFamilySpec::new(Expr::parse(a).unwrap(), k, c)
    }

    #[test]
    fn roots_of_the_cubic() {
        assert_eq!(k_roots(), [0.25, 1.0 / 3.0, 1.0]);
        assert_eq!(k_cubic(1.0), 0.0);
        assert_eq!(k_cubic(0.25), 0.0);
        assert!(k_cubic(0.5).abs() > 0.1);
    }

    #[test]
    fn k_from_fractions() {
        assert_eq!(KRoot::from_fraction(1, 4).unwrap(), KRoot::Quarter);
        assert_eq!(KRoot::from_fraction(2, 6).unwrap(), KRoot::Third);
        assert_eq!(KRoot::from_fraction(3, 3).unwrap(), KRoot::One);
        assert!(KRoot::from_fraction(1, 2).is_err());
        assert!(KRoot::from_fraction(1, 5).is_err());
        assert!(KRoot::from_fraction(1, 0).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let (a, b) = spec("1", KRoot::One, 1.0).coeffs(0.3, 2).unwrap();
        assert_eq!((a.value(), b.value()), (0.0, 0.0));
        for z in [0.0, 0.5, 1.0] {
            let (a, b) = spec("exp(z)", KRoot::One, 1.0).coeffs(z, 2).unwrap();
            assert_abs_diff_eq!(a.value(), -2.5, epsilon = 1e-12);
            assert_abs_diff_eq!(a.d(1), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(b.value(), 9.0 / 16.0, epsilon = 1e-12);
        }
        let mut s = spec("1", KRoot::One, 1.0);
        s.c1 = 2.0;
        let (a, b) = s.coeffs(0.0, 1).unwrap();
        assert_eq!((a.value(), b.value()), (2.0, 1.0));
        assert!(matches!(spec("z", KRoot::One, 1.0).coeffs(0.0, 1), Err(Error::Singular { .. })));
    }

    #[test]
    fn r_examples() {
        let s = spec("1", KRoot::One, 1.0);
        for z in [0.0, 0.2, 0.5] {
            assert_abs_diff_eq!(s.r(z, 0).unwrap().value(), 1.0 / (1.0 - z), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(spec("1", KRoot::Quarter, 1.0).r(0.0, 3).unwrap().value(), 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(spec("exp(z)", KRoot::One, 2.0).r(0.0, 3).unwrap().value(), -1.5, epsilon = 1e-15);
        assert!(matches!(s.r(1.0, 3), Err(Error::Pole { .. })));
    }

    #[test]
    fn pole_scan_brackets() {
        let s = spec("1", KRoot::One, 1.0);
        match s.check_interval(0.0, 2.0, 101) {
            Err(Error::Pole { lo, hi }) => assert!(lo <= 1.0 && hi >= 1.0),
            other => panic!("{other:?}"),
        }
        assert!(s.check_interval(0.0, 0.9, 101).is_ok());
        assert!(matches!(
            spec("z", KRoot::One, 1.0).check_interval(0.0, 1.0, 11),
            Err(Error::Singular { .. })
        ));
        let mut general = spec("1", KRoot::One, 1.0);
        general.c1 = 1.0;
        assert!(matches!(general.check_interval(0.0, 0.5, 11), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn bernoulli_equation_holds() {
        for (a, k, c) in [("exp(z)", KRoot::One, 2.0), ("1+z^2/4", KRoot::Third, 3.0), ("1", KRoot::Quarter, 1.0)] {
            let s = spec(a, k, c);
            for i in 0..=10 {
                let z = i as f64 / 10.0;
                let w = s.w(z, 1).unwrap();
                let aj = s.a.jet(z, 1).unwrap();
                let res = w.d(1) + aj.d(1) / aj.value() * w.value() - k.value() * w.value().powi(2);
                assert!(res.abs() <= 1e-10, "{a} z={z}: {res}");
            }
        }
    }

    #[test]
    fn family_solves_principal_equation() {
        for a in ["1", "exp(z)", "1+z^2/4"] {
            for k in KRoot::ALL {
                let s = spec(a, k, 3.0);
                for i in 0..=10 {
                    let z = i as f64 / 10.0;
                    let (ca, cb) = s.coeffs(z, 2).unwrap();
                    let res = principal_residual(&s.r(z, 3).unwrap(), &ca, cb.value()).unwrap();
                    assert!(res.abs() <= 1e-9, "{a} k={k} z={z}: {res}");
                }
            }
        }
    }

    #[test]
    fn invariants_follow_the_ansatz() {
        for a in ["exp(z)", "1+z^2/4", "2+sin(z)"] {
            for k in KRoot::ALL {
                let s = spec(a, k, 4.0);
                for z in [0.0, 0.25, 0.75] {
                    let (u, v) = s.invariants(z, 0).unwrap();
                    let diff = v.value() - k.value() * u.value().powi(2);
                    assert!(diff.abs() <= 1e-9, "{a} k={k} z={z}: {diff}");
                    let (u, v) = s.invariants(z, 2).unwrap();
                    let res = reduced_equation_residual(&u, &v, 0.0, 0.0).unwrap();
                    assert!(res.abs() <= 1e-8 * (1.0 + u.value().abs()).powi(4), "{a} k={k} z={z}: {res}");
                }
            }
        }
    }
}

#[cfg(test)]
mod reduction_tests {
    use super::*;
    use crate::factorization::principal_residual;
    use proptest::prelude::*;

    proptest! {
        // For any r the reduced residual equals 2a⁴ times the principal one.
        #[test]
        fn reduction_is_exact(
            rc in prop::collection::vec(-1.0f64..1.0, 5),
            c1 in -2.0f64..2.0,
            c2 in -2.0f64..2.0,
            z in 0.0f64..1.0,
        ) {
            let mut spec = LieFamilySpec::new(Expr::parse("exp(z) + z^2/3").unwrap(), KRoot::One, 1.0);
            spec.c1 = c1;
            spec.c2 = c2;
            let x = Jet::variable(z, 4);
            let r = rc.iter().rev().fold(Jet::zero(z, 4), |acc, &c| &acc * &x + c);
            let a = spec.a.jet(z, 6).unwrap();
            let (u, v) = reduced_invariants(&a, &r).unwrap();
            prop_assume!(u.d(1).abs() > 1e-3);
            let (ca, cb) = spec.coeffs(z, 2).unwrap();
            let principal = principal_residual(&r, &ca, cb.value()).unwrap();
            let reduced = reduced_equation_residual(&u, &v, c1, c2).unwrap();
            let expected = 2.0 * a.value().powi(4) * principal;
            prop_assert!((reduced - expected).abs() <= 1e-9 * (1.0 + expected.abs()), "{reduced} vs {expected}");
        }
    }
}
