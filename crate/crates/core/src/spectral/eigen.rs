//! Lowest eigenvalues of a band matrix by shifted subspace inverse iteration
//! with Rayleigh-Ritz projection.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

use super::band::BandMatrix;

pub const MAX_ITERATIONS: usize = 500;
const RITZ_TOL: f64 = 1e-11;
/// Fluctuations below this level are treated as rounding noise.
const STALL_TOL: f64 = 1e-7;
const STALL_STEPS: usize = 4;
/// Imaginary parts above this fraction of the real part count as complex.
pub const COMPLEX_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Real parts, ascending.
    pub values: Vec<f64>,
    /// Largest `|Im λ| / |Re λ|` among the returned modes.
    pub max_relative_imag: f64,
    pub iterations: usize,
    pub shift: f64,
}

impl EigenResult {
    pub fn is_real(&self) -> bool {
        self.max_relative_imag <= COMPLEX_TOL
    }
}

fn orthonormalize(y: DMatrix<f64>) -> DMatrix<f64> {
    y.qr().q()
}

fn start_block(m: usize, p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, p, |i, k| {
        let x = (i + 1) as f64 / (m + 1) as f64;
        let f = (k + 1) as f64;
        (f * std::f64::consts::PI * x).sin() + 0.25 * (f * 2.3 * x + 0.1 * f).cos()
    })
}

/// Eigenvalues of `(M − σ)⁻¹` projected on an invariant subspace, nearest `σ` first.
fn iterate(m: &BandMatrix, sigma: f64, n_modes: usize) -> Result<(Vec<Complex<f64>>, usize)> {
    let dim = m.dim();
    let p = (2 * n_modes + 4).min(dim);
    let lu = m.shifted(sigma).lu()?;
    let solve_block = |q: &DMatrix<f64>| -> DMatrix<f64> {
        let mut y = q.clone();
        for mut col in y.column_iter_mut() {
            lu.solve_in_place(col.as_mut_slice());
        }
        y
    };
    let mut q = orthonormalize(start_block(dim, p));
    let mut previous: Option<Vec<Complex<f64>>> = None;
    let mut last_change = f64::INFINITY;
    let mut increases = 0;
    for it in 1..=MAX_ITERATIONS {
        let y = solve_block(&q);
        let h = q.transpose() * &y;
        let mut mu: Vec<Complex<f64>> = h.complex_eigenvalues().iter().copied().collect();
        mu.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.im.total_cmp(&b.im)));
        mu.truncate(n_modes);
        if let Some(prev) = &previous {
            let change = mu
                .iter()
                .zip(prev)
                .map(|(a, b)| (a - b).norm() / a.norm())
                .fold(0.0, f64::max);
            // geometric convergence: remaining error ≲ change/(1 − ρ)
            let rho = (change / last_change).min(0.99);
            let estimate = change / (1.0 - rho);
            if change > last_change && change <= STALL_TOL {
                // rounding noise makes the change fluctuate instead of shrinking
                increases += 1;
            }
            last_change = change;
            if estimate <= RITZ_TOL || increases >= STALL_STEPS {
                return Ok((mu, it));
            }
        }
        previous = Some(mu);
        q = orthonormalize(y);
    }
    Err(Error::EigenNonConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// The `n_modes` eigenvalues of `m` with smallest real part.
pub fn lowest_eigenvalues(m: &BandMatrix, n_modes: usize, sigma_hint: f64) -> Result<EigenResult> {
    if n_modes == 0 || n_modes > m.dim() / 2 {
        return Err(Error::contract(format!(
            "requested {n_modes} modes from a {}-dimensional problem",
            m.dim()
        )));
    }
    let mut sigma = sigma_hint;
    for _ in 0..8 {
        let (mu, iterations) = iterate(m, sigma, n_modes)?;
        let lambdas: Vec<Complex<f64>> = mu.iter().map(|u| sigma + 1.0 / u).collect();
        let lowest = lambdas.iter().map(|l| l.re).fold(f64::INFINITY, f64::min);
        if lowest < sigma {
            log::debug!("shift {sigma} above eigenvalue {lowest}; lowering");
            sigma = lowest - (1.0 + lowest.abs());
            continue;
        }
        let max_relative_imag = lambdas
            .iter()
            .map(|l| l.im.abs() / l.re.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if max_relative_imag > COMPLEX_TOL {
            log::warn!("complex eigenvalues in the lowest modes (|Im/Re| up to {max_relative_imag:e})");
        }
        let mut values: Vec<f64> = lambdas.iter().map(|l| l.re).collect();
        values.sort_by(f64::total_cmp);
        return Ok(EigenResult {
            values,
            max_relative_imag,
            iterations,
            shift: sigma,
        });
    }
    Err(Error::Numerical("could not place the shift below the spectrum".into()))
}
