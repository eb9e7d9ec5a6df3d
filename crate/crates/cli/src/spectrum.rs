use std::collections::BTreeMap;

use isobeam::spectral::{isospec_report, spectrum, BoundaryCondition, Grid, Spectrum};
use isobeam::{BeamCoefficients, Expr, FactorPair};
use serde_json::{json, Value};

use crate::args::FamilyKind;
use crate::config::{RunConfig, DEFAULT_GRID, DEFAULT_MODES};
use crate::error::{CliError, CliResult};
use crate::family::Family;
use crate::report::{Cell, Outcome, Table};

pub enum Source {
    Unit,
    Family(FamilyKind),
    Custom { a: String, b: String },
}

pub enum FactorSource {
    Family(FamilyKind),
    Custom { r: String, s: String },
}

struct Setup {
    bc: BoundaryCondition,
    grid: Grid,
    modes: usize,
}

fn setup(cfg: &mut RunConfig) -> CliResult<Setup> {
    let bc: BoundaryCondition = cfg.bc.get_or_insert_with(|| "hinged".into()).parse()?;
    let n = *cfg.grid_n.get_or_insert(DEFAULT_GRID);
    let modes = *cfg.n_modes.get_or_insert(DEFAULT_MODES);
    let (lo, hi) = cfg.interval();
    if modes == 0 {
        return Err(CliError::Input("--modes must be at least 1".into()));
    }
    Ok(Setup {
        bc,
        grid: Grid::new(lo, hi, n)?,
        modes,
    })
}

fn spectrum_json(s: &Spectrum) -> Value {
    json!({
        "eigenvalues": s.eigenvalues,
        "refined_eigenvalues": s.refined,
        "converged": s.converged,
        "bc": s.bc.to_string(),
        "grid_n": s.grid_n,
        "interval": s.interval,
        "real": s.is_real(),
        "max_relative_imag": s.max_relative_imag,
    })
}

fn checked_family(kind: FamilyKind, cfg: &RunConfig) -> CliResult<Family> {
    let family = Family::from_config(kind, cfg)?;
    let (lo, hi) = cfg.interval();
    family.check_interval(lo, hi, cfg.samples())?;
    Ok(family)
}

/// Eigenvalues with convergence flags; the run passes when every mode
/// converged and the computed spectrum is real.
pub fn run_spectrum(source: Source, cfg: &mut RunConfig) -> CliResult<Outcome> {
    let s = setup(cfg)?;
    let (coeffs, description) = match source {
        Source::Unit => (BeamCoefficients::unit(), json!("unit")),
        Source::Family(kind) => {
            let f = checked_family(kind, cfg)?;
            (f.coefficients(), f.describe())
        }
        Source::Custom { a, b } => {
            let d = json!({ "A": a, "B": b });
            (BeamCoefficients::new(Expr::parse(&a)?, Expr::parse(&b)?), d)
        }
    };
    let spec = spectrum(&coeffs, s.bc, &s.grid, s.modes, cfg.spectral_tol())?;
    if !spec.is_real() {
        log::warn!("spectrum is not real: |Im/Re| up to {:e}", spec.max_relative_imag);
    }
    let mut table = Table::new(vec!["mode", "eigenvalue", "refined", "converged"]);
    for (i, (v, (r, c))) in spec
        .eigenvalues
        .iter()
        .zip(spec.refined.iter().zip(&spec.converged))
        .enumerate()
    {
        table.push(vec![Cell::Int(i + 1), Cell::Real(*v), Cell::Real(*r), Cell::Flag(*c)]);
    }
    let residuals = spec
        .eigenvalues
        .iter()
        .zip(&spec.refined)
        .enumerate()
        .map(|(i, (c, f))| (format!("mode{}_grid_change", i + 1), (c - f).abs() / f.abs().max(f64::MIN_POSITIVE)))
        .collect();
    Ok(Outcome {
        results: json!({ "operator": description, "spectrum": spectrum_json(&spec) }),
        residuals,
        table,
        pass: spec.all_converged() && spec.is_real(),
    })
}

/// Spectra of `L` and `L̂` side by side; the run passes when the analytic
/// intertwining residual is within tolerance (the spectra are not compared).
pub fn run_isospec(source: FactorSource, cfg: &mut RunConfig) -> CliResult<Outcome> {
    let s = setup(cfg)?;
    let (fp, description) = match source {
        FactorSource::Family(kind) => {
            let f = checked_family(kind, cfg)?;
            (f.factor_pair(), f.describe())
        }
        FactorSource::Custom { r, s } => {
            let d = json!({ "r": r, "s": s });
            (FactorPair::new(Expr::parse(&r)?, Expr::parse(&s)?), d)
        }
    };
    let rep = isospec_report(&fp, s.bc, &s.grid, s.modes, cfg.spectral_tol())?;
    let mut table = Table::new(vec![
        "mode",
        "lambda",
        "lambda_hat",
        "relative_gap",
        "converged",
        "converged_hat",
    ]);
    let mut modes = Vec::new();
    for i in 0..rep.relative_gaps.len() {
        let (l, h, g) = (rep.original.eigenvalues[i], rep.swapped.eigenvalues[i], rep.relative_gaps[i]);
        let (c, ch) = (rep.original.converged[i], rep.swapped.converged[i]);
        table.push(vec![
            Cell::Int(i + 1),
            Cell::Real(l),
            Cell::Real(h),
            Cell::Real(g),
            Cell::Flag(c),
            Cell::Flag(ch),
        ]);
        modes.push(json!({
            "mode": i + 1, "lambda": l, "lambda_hat": h, "relative_gap": g,
            "converged": c, "converged_hat": ch,
        }));
    }
    let residuals = BTreeMap::from([("intertwining".to_string(), rep.intertwining_residual)]);
    Ok(Outcome {
        results: json!({
            "factors": description,
            "modes": modes,
            "original": spectrum_json(&rep.original),
            "swapped": spectrum_json(&rep.swapped),
            "intertwining_residual": rep.intertwining_residual,
        }),
        residuals,
        table,
        pass: rep.intertwining_residual <= cfg.residual_tol(),
    })
}
