//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] stores the value and the first `order` derivatives of a scalar
//! function at a base point. Coefficients are raw derivatives
//! (`coeffs[k] = f⁽ᵏ⁾(z₀)`), not Taylor coefficients, so formulas written in
//! terms of `r'`, `r''`, ... read off directly. Elementary functions are
//! propagated through the usual ODE recurrences on normalized coefficients.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    base_point: f64,
    coeffs: Vec<f64>,
}

/// Elementary functions understood by [`Jet::elementary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    /// `x^p` for a constant exponent.
    Powf(f64),
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elementary::Sin => write!(f, "sin"),
            Elementary::Cos => write!(f, "cos"),
            Elementary::Exp => write!(f, "exp"),
            Elementary::Log => write!(f, "log"),
            Elementary::Sqrt => write!(f, "sqrt"),
            Elementary::Powf(p) => write!(f, "pow({p})"),
        }
    }
}

fn factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    out.push(acc);
    for k in 1..=n {
        acc *= k as f64;
        out.push(acc);
    }
    out
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n + 1 - k) as f64 / k as f64;
    }
    row
}

impl Jet {
    pub fn new(base_point: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::contract("a jet needs at least one coefficient"));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::Singular {
                at: base_point,
                what: format!("non-finite jet coefficient {bad}"),
            });
        }
        Ok(Jet { base_point, coeffs })
    }

    pub fn constant(base_point: f64, value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { base_point, coeffs }
    }

    pub fn zero(base_point: f64, order: usize) -> Self {
        Self::constant(base_point, 0.0, order)
    }

    /// The identity function `z ↦ z` at `base_point`.
    pub fn variable(base_point: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = base_point;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { base_point, coeffs }
    }

    /// Builds a jet from normalized Taylor coefficients `f⁽ᵏ⁾/k!`.
    pub fn from_taylor(base_point: f64, taylor: &[f64]) -> Self {
        let fact = factorials(taylor.len().saturating_sub(1));
        let coeffs = taylor.iter().zip(&fact).map(|(t, f)| t * f).collect();
        Jet { base_point, coeffs }
    }

    pub fn taylor(&self) -> Vec<f64> {
        let fact = factorials(self.order());
        self.coeffs.iter().zip(&fact).map(|(c, f)| c / f).collect()
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// k-th derivative, zero beyond the stored order.
    pub fn d(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let keep = (order + 1).min(self.coeffs.len());
        Jet {
            base_point: self.base_point,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Jet of the derivative function; the order drops by one.
    pub fn shift_derivative(&self) -> Result<Jet> {
        if self.order() == 0 {
            return Err(Error::contract("cannot differentiate an order-0 jet"));
        }
        Ok(Jet {
            base_point: self.base_point,
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `shift_derivative` applied `k` times.
    pub fn derivative(&self, k: usize) -> Result<Jet> {
        if k > self.order() {
            return Err(Error::contract(format!(
                "derivative {k} requested from an order-{} jet",
                self.order()
            )));
        }
        Ok(Jet {
            base_point: self.base_point,
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Jet of the antiderivative whose value at the base point is `value`.
    pub fn integrate(&self, value: f64) -> Jet {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(value);
        coeffs.extend_from_slice(&self.coeffs);
        Jet {
            base_point: self.base_point,
            coeffs,
        }
    }

    /// Multiplies the k-th derivative by `factor^k`: the jet of `z ↦ f(factor·z)`
    /// re-based at `base_point / factor`.
    pub fn rescale(&self, factor: f64) -> Jet {
        let mut scale = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * scale;
                scale *= factor;
                v
            })
            .collect();
        Jet {
            base_point: self.base_point / factor,
            coeffs,
        }
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.base_point != other.base_point {
            return Err(Error::contract(format!(
                "jets based at {} and {}",
                self.base_point, other.base_point
            )));
        }
        if self.order() != other.order() {
            return Err(Error::contract(format!(
                "jets of order {} and {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.add_trunc(other))
    }

    pub fn checked_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.sub_trunc(other))
    }

    pub fn checked_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.mul_trunc(other))
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        self.div_trunc(other)
    }

    fn common(&self, other: &Jet) -> usize {
        assert_eq!(
            self.base_point, other.base_point,
            "jet arithmetic across different base points"
        );
        self.order().min(other.order())
    }

    fn add_trunc(&self, other: &Jet) -> Jet {
        let n = self.common(other);
        Jet {
            base_point: self.base_point,
            coeffs: (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        }
    }

    fn sub_trunc(&self, other: &Jet) -> Jet {
        let n = self.common(other);
        Jet {
            base_point: self.base_point,
            coeffs: (0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect(),
        }
    }

    // Leibniz rule on raw derivatives.
    fn mul_trunc(&self, other: &Jet) -> Jet {
        let n = self.common(other);
        let coeffs = (0..=n)
            .map(|k| {
                let binom = binomial_row(k);
                (0..=k)
                    .map(|j| binom[j] * self.coeffs[j] * other.coeffs[k - j])
                    .sum()
            })
            .collect();
        Jet {
            base_point: self.base_point,
            coeffs,
        }
    }

    // Solves (q·y)⁽ᵏ⁾ = x⁽ᵏ⁾ for q⁽ᵏ⁾ order by order.
    fn div_trunc(&self, other: &Jet) -> Result<Jet> {
        let n = self.common(other);
        let y0 = other.coeffs[0];
        if y0 == 0.0 {
            return Err(Error::Singular {
                at: self.base_point,
                what: "division by a jet with zero value".into(),
            });
        }
        let mut q: Vec<f64> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let binom = binomial_row(k);
            let acc: f64 = (1..=k).map(|j| binom[j] * other.coeffs[j] * q[k - j]).sum();
            q.push((self.coeffs[k] - acc) / y0);
        }
        Jet::new(self.base_point, q)
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::constant(self.base_point, 1.0, self.order()).div_trunc(self)
    }

    pub fn scale(&self, factor: f64) -> Jet {
        Jet {
            base_point: self.base_point,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`Jet::recip`].
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(self.base_point, 1.0, self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_trunc(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_trunc(&base);
            }
        }
        Ok(acc)
    }

    pub fn elementary(&self, f: Elementary) -> Result<Jet> {
        let x = self.taylor();
        let n = self.order();
        let x0 = x[0];
        let singular = |what: String| Error::Singular {
            at: self.base_point,
            what,
        };
        let out = match f {
            Elementary::Exp => {
                let mut e = vec![x0.exp(); n + 1];
                for k in 1..=n {
                    e[k] = (1..=k).map(|j| j as f64 * x[j] * e[k - j]).sum::<f64>() / k as f64;
                }
                e
            }
            Elementary::Sin | Elementary::Cos => {
                let mut s = vec![x0.sin(); n + 1];
                let mut c = vec![x0.cos(); n + 1];
                for k in 1..=n {
                    let kf = k as f64;
                    s[k] = (1..=k).map(|j| j as f64 * x[j] * c[k - j]).sum::<f64>() / kf;
                    c[k] = -(1..=k).map(|j| j as f64 * x[j] * s[k - j]).sum::<f64>() / kf;
                }
                if f == Elementary::Sin {
                    s
                } else {
                    c
                }
            }
            Elementary::Log => {
                if x0 <= 0.0 {
                    return Err(singular(format!("log of non-positive value {x0}")));
                }
                let mut l = vec![x0.ln(); n + 1];
                for k in 1..=n {
                    let acc: f64 = (1..k).map(|j| j as f64 * l[j] * x[k - j]).sum();
                    l[k] = (x[k] - acc / k as f64) / x0;
                }
                l
            }
            Elementary::Sqrt => {
                if x0 < 0.0 || (x0 == 0.0 && n > 0) {
                    return Err(singular(format!("sqrt of {x0}")));
                }
                return self.elementary(Elementary::Powf(0.5));
            }
            Elementary::Powf(p) => {
                if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
                    if p < 0.0 && x0 == 0.0 {
                        return Err(singular(format!("{x0} raised to {p}")));
                    }
                    return self.powi(p as i32);
                }
                if x0 < 0.0 || (x0 == 0.0 && (p < 0.0 || n > 0)) {
                    return Err(singular(format!("{x0} raised to non-integer {p}")));
                }
                let mut y = vec![x0.powf(p); n + 1];
                for k in 1..=n {
                    let acc: f64 = (1..=k)
                        .map(|j| ((p + 1.0) * j as f64 - k as f64) * x[j] * y[k - j])
                        .sum();
                    y[k] = acc / (k as f64 * x0);
                }
                y
            }
        };
        let jet = Jet::from_taylor(self.base_point, &out);
        if !jet.is_finite() {
            return Err(singular(format!("{f} produced a non-finite jet")));
        }
        Ok(jet)
    }

    pub fn exp(&self) -> Jet {
        self.elementary(Elementary::Exp)
            .expect("exp is defined everywhere")
    }

    pub fn sin(&self) -> Jet {
        self.elementary(Elementary::Sin).expect("sin is entire")
    }

    pub fn cos(&self) -> Jet {
        self.elementary(Elementary::Cos).expect("cos is entire")
    }

    pub fn ln(&self) -> Result<Jet> {
        self.elementary(Elementary::Log)
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.elementary(Elementary::Sqrt)
    }

    pub fn powf(&self, p: f64) -> Result<Jet> {
        self.elementary(Elementary::Powf(p))
    }

    /// Largest absolute coefficient difference, for comparisons in tests and
    /// verification reports.
    pub fn max_abs_diff(&self, other: &Jet) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A function of `z` that can produce its jet at any point.
pub trait JetFn: Send + Sync {
    fn jet(&self, z: f64, order: usize) -> Result<Jet>;

    fn value(&self, z: f64) -> Result<f64> {
        Ok(self.jet(z, 0)?.value())
    }
}

impl JetFn for f64 {
    fn jet(&self, z: f64, order: usize) -> Result<Jet> {
        Ok(Jet::constant(z, *self, order))
    }
}

impl JetFn for crate::expr::Expr {
    fn jet(&self, z: f64, order: usize) -> Result<Jet> {
        crate::expr::Expr::jet(self, z, order)
    }
}

impl<T: JetFn + ?Sized> JetFn for std::sync::Arc<T> {
    fn jet(&self, z: f64, order: usize) -> Result<Jet> {
        (**self).jet(z, order)
    }
}

impl<T: JetFn + ?Sized> JetFn for &T {
    fn jet(&self, z: f64, order: usize) -> Result<Jet> {
        (**self).jet(z, order)
    }
}

/// Adapts a closure `(z, order) -> Result<Jet>` into a [`JetFn`].
pub struct FnJet<F>(pub F);

impl<F> JetFn for FnJet<F>
where
    F: Fn(f64, usize) -> Result<Jet> + Send + Sync,
{
    fn jet(&self, z: f64, order: usize) -> Result<Jet> {
        (self.0)(z, order)
    }
}

// Operator impls truncate to the lower of the two orders and panic on a
// base-point mismatch. Use the `checked_*` methods for user-facing input.

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.add_trunc(rhs)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.sub_trunc(rhs)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_trunc(rhs)
    }
}

/// Panics if the divisor vanishes at the base point.
impl Div for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        self.div_trunc(rhs).expect("jet division by zero")
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += rhs;
        out
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Sub<f64> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] -= rhs;
        out
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}
