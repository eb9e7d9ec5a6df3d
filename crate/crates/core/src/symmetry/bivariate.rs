//! Truncated bivariate jets in `(z, r)`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::jets::Jet;

/// Mixed partials `∂ᶻⁱ∂ʳʲ f` for `i + j ≤ order`, stored raw.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    // row-major (order+1)², entries with i + j > order stay zero
    c: Vec<f64>,
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Jet2 {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; (order + 1) * (order + 1)];
        c[0] = value;
        Jet2 { order, c }
    }

    pub fn var_z(z: f64, order: usize) -> Self {
        let mut j = Self::constant(z, order);
        if order > 0 {
            j.set(1, 0, 1.0);
        }
        j
    }

    pub fn var_r(r: f64, order: usize) -> Self {
        let mut j = Self::constant(r, order);
        if order > 0 {
            j.set(0, 1, 1.0);
        }
        j
    }

    /// A function of `z` alone.
    pub fn from_z(jet: &Jet, order: usize) -> Self {
        let mut j = Self::constant(0.0, order);
        for i in 0..=order {
            j.set(i, 0, jet.d(i));
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.c[i * (self.order + 1) + j]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.order + 1;
        self.c[i * n + j] = v;
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn truncate(&self, order: usize) -> Jet2 {
        let order = order.min(self.order);
        let mut out = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// `∂/∂z`, one order lower.
    pub fn dz(&self) -> Jet2 {
        self.shifted(1, 0)
    }

    /// `∂/∂r`, one order lower.
    pub fn dr(&self) -> Jet2 {
        self.shifted(0, 1)
    }

    fn shifted(&self, di: usize, dj: usize) -> Jet2 {
        assert!(self.order >= 1, "cannot differentiate an order-0 bivariate jet");
        let order = self.order - 1;
        let mut out = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                out.set(i, j, self.get(i + di, j + dj));
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet2 {
        Jet2 {
            order: self.order,
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    fn zip(&self, other: &Jet2, f: impl Fn(f64, f64) -> f64) -> Jet2 {
        let order = self.order.min(other.order);
        let mut out = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                out.set(i, j, f(self.get(i, j), other.get(i, j)));
            }
        }
        out
    }

    fn leibniz(&self, other: &Jet2) -> Jet2 {
        let order = self.order.min(other.order);
        let mut out = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                let mut acc = 0.0;
                for p in 0..=i {
                    for q in 0..=j {
                        acc += binom(i, p) * binom(j, q) * self.get(p, q) * other.get(i - p, j - q);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        self.leibniz(rhs)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Add<f64> for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: f64) -> Jet2 {
        let mut out = self.clone();
        out.c[0] += rhs;
        out
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: &Jet2) -> Jet2 {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet2> for &Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                self.$m(&rhs)
            }
        }
    };
}

owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: f64) -> Jet2 {
        &self + rhs
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Mul<&Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        rhs.scale(self)
    }
}
