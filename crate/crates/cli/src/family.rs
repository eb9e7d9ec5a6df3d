use std::collections::BTreeMap;

use isobeam::factorization::{hat_coeffs, principal_residual};
use isobeam::families::{ChazyFamilySpec, LieFamilySpec};
use isobeam::spectral::intertwining_defect;
use isobeam::{BeamCoefficients, Expr, FactorPair, JetFn};
use serde_json::{json, Value};

use crate::args::FamilyKind;
use crate::config::{parse_k_root, parse_real, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{Cell, Outcome, Table};

/// Minimum number of panels used when scanning an interval for poles.
const POLE_SCAN: usize = 400;

/// A closed-form family selected on the command line.
#[derive(Debug, Clone)]
pub enum Family {
    Lie(LieFamilySpec),
    Chazy(ChazyFamilySpec),
}

impl Family {
    pub fn from_config(kind: FamilyKind, cfg: &RunConfig) -> CliResult<Family> {
        let k = cfg.k_texts();
        match kind {
            FamilyKind::Lie => {
                let a = cfg
                    .a
                    .as_deref()
                    .ok_or_else(|| CliError::Input("the lie family needs --a".into()))?;
                let [k] = k.as_slice() else {
                    return Err(CliError::Input("the lie family needs one --k value (1/4, 1/3 or 1)".into()));
                };
                let mut spec = LieFamilySpec::new(Expr::parse(a)?, parse_k_root(k)?, cfg.c.unwrap_or(1.0));
                spec.c1 = cfg.c1.unwrap_or(0.0);
                spec.c2 = cfg.c2.unwrap_or(0.0);
                Ok(Family::Lie(spec))
            }
            FamilyKind::Chazy => {
                let [k1, k2, k3, k4] = k.as_slice() else {
                    return Err(CliError::Input("the chazy family needs four --k values".into()));
                };
                Ok(Family::Chazy(ChazyFamilySpec::new(
                    parse_real(k1)?,
                    parse_real(k2)?,
                    parse_real(k3)?,
                    parse_real(k4)?,
                )?))
            }
        }
    }

    pub fn factor_pair(&self) -> FactorPair {
        match self {
            Family::Lie(s) => s.factor_pair(),
            Family::Chazy(s) => s.factor_pair(),
        }
    }

    pub fn coefficients(&self) -> BeamCoefficients {
        match self {
            Family::Lie(s) => s.coefficients(),
            Family::Chazy(s) => s.coefficients(),
        }
    }

    /// Refuses intervals containing a pole of `r` or a zero of the gauge.
    pub fn check_interval(&self, lo: f64, hi: f64, samples: usize) -> CliResult<()> {
        let n = samples.max(POLE_SCAN);
        match self {
            Family::Lie(s) => s.check_interval(lo, hi, n)?,
            Family::Chazy(s) => s.check_interval(lo, hi, n)?,
        }
        Ok(())
    }

    pub fn describe(&self) -> Value {
        match self {
            Family::Lie(s) => json!({
                "family": "lie",
                "a": s.a.to_string(),
                "k": s.k.to_string(),
                "C": s.c,
                "c1": s.c1,
                "c2": s.c2,
            }),
            Family::Chazy(s) => json!({
                "family": "chazy",
                "k": [s.k1, s.k2, s.k3, s.k4],
            }),
        }
    }
}

/// Principal-equation residual of `r` against `coeffs` at `z`.
pub fn principal_at(r: &dyn JetFn, coeffs: &BeamCoefficients, z: f64) -> CliResult<f64> {
    let rj = r.jet(z, 3)?;
    let a = coeffs.a.jet(z, 2)?;
    let b = coeffs.b.value(z)?;
    Ok(principal_residual(&rj, &a, b)?)
}

pub fn run(kind: FamilyKind, cfg: &RunConfig) -> CliResult<Outcome> {
    let family = Family::from_config(kind, cfg)?;
    let (lo, hi) = cfg.interval();
    family.check_interval(lo, hi, cfg.samples())?;
    let fp = family.factor_pair();
    let coeffs = family.coefficients();

    const COLUMNS: [&str; 8] = ["z", "r", "s", "A", "B", "A_hat", "B_hat", "principal_residual"];
    let mut table = Table::new(COLUMNS.to_vec());
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); COLUMNS.len()];
    let mut worst = 0.0f64;
    for z in cfg.sample_points() {
        let r = fp.r.value(z)?;
        let s = fp.s.value(z)?;
        let a = coeffs.a.value(z)?;
        let b = coeffs.b.value(z)?;
        let (a_hat, b_hat) = hat_coeffs(&fp, z, 0)?;
        let res = principal_at(&fp.r, &coeffs, z)?;
        worst = worst.max(res.abs());
        let row = [z, r, s, a, b, a_hat.value(), b_hat.value(), res];
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
        table.push(row.iter().map(|&v| Cell::Real(v)).collect());
    }
    let intertwining = intertwining_defect(&fp, lo, hi, cfg.samples())?;
    let tol = cfg.residual_tol();
    log::info!("principal residual {worst:e}, intertwining {intertwining:e}");

    let profile: serde_json::Map<String, Value> = COLUMNS
        .iter()
        .zip(columns)
        .map(|(name, col)| (name.to_string(), json!(col)))
        .collect();
    let residuals = BTreeMap::from([
        ("principal_max".to_string(), worst),
        ("intertwining_max".to_string(), intertwining),
    ]);
    Ok(Outcome {
        results: json!({ "family": family.describe(), "profile": profile }),
        residuals,
        table,
        pass: worst <= tol && intertwining <= tol,
    })
}
