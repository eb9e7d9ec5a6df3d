//! Square band matrices and their LU factorization with partial pivoting.

use crate::error::{Error, Result};

/// Square matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    // row i holds columns i-kl ..= i+ku
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || j + self.kl < i || j > i + self.ku {
            return None;
        }
        Some(i * (self.kl + self.ku + 1) + (j + self.kl - i))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` to entry `(i, j)`; panics outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside the band"));
        self.data[k] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// `self − σI`.
    pub fn shifted(&self, sigma: f64) -> BandMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.add(i, i, -sigma);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn lu(&self) -> Result<BandLu> {
        BandLu::factor(self)
    }
}

/// LU factors of a band matrix; the upper factor has bandwidth `kl + ku`.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    width: usize,
    // row i of U holds columns i ..= i+width-1
    u: Vec<f64>,
    // multipliers: l[k*kl + t] eliminates row k+1+t at step k
    l: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    fn factor(m: &BandMatrix) -> Result<BandLu> {
        let n = m.n;
        let kl = m.kl;
        let uw = m.kl + m.ku + 1;
        // working rows: row i stores columns i-kl ..= i-kl+span-1
        let span = 2 * kl + m.ku + 1;
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row = vec![0.0; span];
                for (t, v) in row.iter_mut().enumerate() {
                    let j = i as isize - kl as isize + t as isize;
                    if j >= 0 {
                        *v = m.get(i, j as usize);
                    }
                }
                row
            })
            .collect();
        let at = |rows: &Vec<Vec<f64>>, i: usize, j: usize| -> f64 {
            let t = j as isize - i as isize + kl as isize;
            if t < 0 || t as usize >= span {
                0.0
            } else {
                rows[i][t as usize]
            }
        };
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        let mut u = vec![0.0; n * uw];
        let mut l = vec![0.0; n * kl.max(1)];
        let mut pivots = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let p = (k..=last)
                .max_by(|&a, &b| at(&rows, a, k).abs().total_cmp(&at(&rows, b, k).abs()))
                .unwrap_or(k);
            pivots[k] = p;
            if p != k {
                // realign row p into row k's window before swapping
                let moved: Vec<f64> = (0..span)
                    .map(|t| {
                        let j = k as isize - kl as isize + t as isize;
                        if j < 0 { 0.0 } else { at(&rows, p, j as usize) }
                    })
                    .collect();
                let staying: Vec<f64> = (0..span)
                    .map(|t| {
                        let j = p as isize - kl as isize + t as isize;
                        if j < 0 { 0.0 } else { at(&rows, k, j as usize) }
                    })
                    .collect();
                rows[k] = moved;
                rows[p] = staying;
            }
            let pivot = at(&rows, k, k);
            if pivot.abs() <= 1e-300 * scale || !pivot.is_finite() {
                return Err(Error::Numerical(format!("singular band matrix at pivot {k}")));
            }
            for i in k + 1..=last {
                let f = at(&rows, i, k) / pivot;
                l[k * kl.max(1) + (i - k - 1)] = f;
                if f == 0.0 {
                    continue;
                }
                for j in k..(k + uw).min(n) {
                    let v = at(&rows, k, j);
                    let t = (j as isize - i as isize + kl as isize) as usize;
                    if t < span {
                        rows[i][t] -= f * v;
                    }
                }
            }
            for (t, j) in (k..(k + uw).min(n)).enumerate() {
                u[k * uw + t] = at(&rows, k, j);
            }
        }
        Ok(BandLu {
            n,
            kl,
            width: uw,
            u,
            l,
            pivots,
        })
    }

    /// Solves `M x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl, uw) = (self.n, self.kl, self.width);
        for k in 0..n {
            b.swap(k, self.pivots[k]);
            let bk = b[k];
            for t in 0..kl.min(n - 1 - k) {
                b[k + 1 + t] -= self.l[k * kl + t] * bk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for t in 1..uw.min(n - k) {
                acc -= self.u[k * uw + t] * b[k + t];
            }
            b[k] = acc / self.u[k * uw];
        }
    }
}
