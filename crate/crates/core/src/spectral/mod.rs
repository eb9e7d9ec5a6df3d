//! Discretized spectra of the canonical beam eigenproblem
//! `U'''' + (AU')' + BU = λU` and side-by-side comparison of `L` and `L̂`.

mod assemble;
mod band;
mod eigen;
mod physical;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::factorization::{intertwine_residual, BeamCoefficients, FactorPair};
use crate::jets::{Jet, JetFn};

pub use assemble::{assemble, BoundaryCondition, Discretization, EndCondition, Grid, MIN_GRID};
pub use band::{BandLu, BandMatrix};
pub use eigen::{lowest_eigenvalues, EigenResult, COMPLEX_TOL, MAX_ITERATIONS};
pub use physical::{barcilon_map, PhysicalBeam};

/// Default relative tolerance for the grid-doubling convergence flags.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending eigenvalues `λ = ω²` on the requested grid.
    pub eigenvalues: Vec<f64>,
    /// Same modes on the doubled grid.
    pub refined: Vec<f64>,
    /// `|λ(n) − λ(2n)| ≤ tol·|λ(2n)|` per mode.
    pub converged: Vec<bool>,
    pub bc: BoundaryCondition,
    pub grid_n: usize,
    pub interval: [f64; 2],
    /// Largest `|Im λ|/|Re λ|` seen; above `COMPLEX_TOL` the spectrum is not real.
    pub max_relative_imag: f64,
}

impl Spectrum {
    pub fn length(&self) -> f64 {
        self.interval[1] - self.interval[0]
    }

    pub fn is_real(&self) -> bool {
        self.max_relative_imag <= COMPLEX_TOL
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

fn shift_hint(coeffs: &BeamCoefficients, grid: &Grid) -> Result<f64> {
    let mut bound = 1.0f64;
    for j in 0..=grid.n + 1 {
        let z = grid.node(j);
        let a = coeffs.a.jet(z, 1)?;
        let b = coeffs.b.value(z)?;
        bound = bound.max(1.0 + b.abs() + a.d(0).powi(2) + a.d(1).abs());
    }
    Ok(-bound)
}

/// Lowest `n_modes` eigenvalues on one grid, without convergence checks.
pub fn eigenvalues_on_grid(
    coeffs: &BeamCoefficients,
    bc: BoundaryCondition,
    grid: &Grid,
    n_modes: usize,
) -> Result<EigenResult> {
    let disc = assemble(coeffs, bc, grid)?;
    lowest_eigenvalues(&disc.matrix, n_modes, shift_hint(coeffs, grid)?)
}

/// Lowest `n_modes` eigenvalues on `grid`, flagged by comparison with the doubled grid.
pub fn spectrum(
    coeffs: &BeamCoefficients,
    bc: BoundaryCondition,
    grid: &Grid,
    n_modes: usize,
    rel_tol: f64,
) -> Result<Spectrum> {
    if !(rel_tol > 0.0) {
        return Err(Error::contract("spectral tolerance must be positive"));
    }
    let coarse = eigenvalues_on_grid(coeffs, bc, grid, n_modes)?;
    let fine = eigenvalues_on_grid(coeffs, bc, &grid.refined(), n_modes)?;
    let converged = coarse
        .values
        .iter()
        .zip(&fine.values)
        .map(|(c, f)| (c - f).abs() <= rel_tol * f.abs().max(rel_tol))
        .collect();
    log::debug!(
        "spectrum on n={} took {} + {} iterations",
        grid.n,
        coarse.iterations,
        fine.iterations
    );
    Ok(Spectrum {
        eigenvalues: coarse.values,
        refined: fine.values,
        converged,
        bc,
        grid_n: grid.n,
        interval: [grid.lo, grid.hi],
        max_relative_imag: coarse.max_relative_imag.max(fine.max_relative_imag),
    })
}

/// Test functions for the intertwining check in the report.
pub const REPORT_TEST_FUNCTIONS: [&str; 3] = ["sin(2*z) + 1", "exp(z/2)", "z^3 - z"];
/// Number of sample points for the intertwining check.
pub const REPORT_SAMPLES: usize = 41;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospecReport {
    pub original: Spectrum,
    pub swapped: Spectrum,
    /// `|λ̂ − λ| / |λ|` per mode.
    pub relative_gaps: Vec<f64>,
    /// Largest relative intertwining defect, see [`intertwining_defect`].
    pub intertwining_residual: f64,
}

fn magnitude(j: &Jet) -> Jet {
    Jet::new(j.base_point(), j.coeffs().iter().map(|c| c.abs()).collect())
        .expect("finite jet has finite magnitudes")
}

/// Upper bounds on the size of every term entering `RU`, `R*U` and `LU`:
/// the operators applied to coefficient-wise absolute values with all
/// signs positive. Rounding errors in the operators scale with these.
struct TermScale {
    r: Jet,
    s: Jet,
}

impl TermScale {
    fn r(&self, u: &Jet) -> Result<Jet> {
        let n = u.order() - 2;
        let (r, s) = (self.r.truncate(n + 1), self.s.truncate(n));
        Ok(u.derivative(2)? + &r * &u.derivative(1)? + &s * u)
    }

    fn r_star(&self, u: &Jet) -> Result<Jet> {
        let n = u.order() - 2;
        let (r, s) = (self.r.truncate(n + 1), self.s.truncate(n));
        Ok(u.derivative(2)? + (&r * &u.truncate(n + 1)).derivative(1)? + &s * u)
    }
}

fn l_scale(a: &Jet, b: &Jet, u: &Jet) -> Result<Jet> {
    let n = u.order() - 4;
    let (a, b) = (a.truncate(n + 1), b.truncate(n));
    Ok(u.derivative(4)? + &a * &u.derivative(2)? + &a.derivative(1)? * &u.derivative(1)? + &b * u)
}

/// Largest relative defect of `R*R = L` and `RL = L̂R` over `samples` points of
/// `[lo, hi]` and the report test functions. Each defect is divided by
/// `1 +` the size of the terms that produced it, so that cancellation
/// between large terms near a pole of `r` is not mistaken for a failure.
pub fn intertwining_defect(fp: &FactorPair, lo: f64, hi: f64, samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(Error::contract("need at least two samples"));
    }
    let (l, l_hat) = (fp.coefficients(), fp.hat_coefficients());
    let mut worst = 0.0f64;
    for src in REPORT_TEST_FUNCTIONS {
        let u: Expr = src.parse()?;
        for i in 0..samples {
            let z = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            let (first, second) = intertwine_residual(fp, &u, z)?;
            let scale = TermScale {
                r: magnitude(&fp.r.jet(z, 6)?),
                s: magnitude(&fp.s.jet(z, 6)?),
            };
            let ua = magnitude(&u.jet(z, 6)?);
            let (a, b) = (magnitude(&l.a.jet(z, 3)?), magnitude(&l.b.jet(z, 2)?));
            let (ah, bh) = (magnitude(&l_hat.a.jet(z, 1)?), magnitude(&l_hat.b.jet(z, 0)?));
            let first_scale = scale.r_star(&scale.r(&ua)?)?.value() + l_scale(&a, &b, &ua)?.value();
            let second_scale = scale.r(&l_scale(&a, &b, &ua)?)?.value()
                + l_scale(&ah, &bh, &scale.r(&ua)?)?.value();
            worst = worst
                .max(first / (1.0 + first_scale))
                .max(second / (1.0 + second_scale));
        }
    }
    Ok(worst)
}

/// Spectra of `L` and `L̂` under the same boundary conditions, side by side.
/// Equality is not asserted: the end conditions for `L̂` that correspond to
/// those of `L` are not known in general.
pub fn isospec_report(
    fp: &FactorPair,
    bc: BoundaryCondition,
    grid: &Grid,
    n_modes: usize,
    rel_tol: f64,
) -> Result<IsospecReport> {
    let original = spectrum(&fp.coefficients(), bc, grid, n_modes, rel_tol)?;
    let swapped = spectrum(&fp.hat_coefficients(), bc, grid, n_modes, rel_tol)?;
    let relative_gaps = original
        .eigenvalues
        .iter()
        .zip(&swapped.eigenvalues)
        .map(|(l, h)| (h - l).abs() / l.abs().max(f64::MIN_POSITIVE))
        .collect();
    let intertwining_residual = intertwining_defect(fp, grid.lo, grid.hi, REPORT_SAMPLES)?;
    Ok(IsospecReport {
        original,
        swapped,
        relative_gaps,
        intertwining_residual,
    })
}
