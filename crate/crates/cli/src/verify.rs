use std::collections::BTreeMap;
use std::sync::Arc;

use isobeam::factorization::{intertwine_residual, swap_residual};
use isobeam::families::{chazy_sigma, hyp2f1, ChazyFamilySpec, KRoot, LieFamilySpec, CHAZY_ALPHA};
use isobeam::symmetry::{
    chazy_map_check, max_field_difference, symmetry_residual, x1, x2, x3, Bracket, Combination,
    GaugeField, JetPoint, PointVectorField,
};
use isobeam::{BeamCoefficients, Expr, FactorPair};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;

use crate::args::{FamilyKind, Suite, SymmetryCase};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::family::{principal_at, Family};
use crate::report::{Cell, Outcome, Table};

const TEST_FUNCTIONS: [&str; 5] = ["sin(z)", "exp(z/3)", "1 + z^2", "cos(2*z) - z", "1/(3 + z^2)"];
const NON_SOLUTIONS: [&str; 3] = ["sin(3*z) + z^2", "exp(z/2) - 1", "1/(2 + z)"];
const TAUS: [f64; 4] = [0.005, 0.01, 0.02, 0.05];
const DEFAULT_GAUGE: &str = "exp(z)";
const RANDOM_POINTS: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub struct Request<'a> {
    pub suites: &'a [Suite],
    pub case: Option<SymmetryCase>,
    pub family: Option<FamilyKind>,
    pub cfg: &'a RunConfig,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    rng: StdRng,
    checks: Vec<Check>,
    tol: f64,
}

impl Ctx<'_> {
    fn record(&mut self, suite: Suite, check: impl Into<String>, max_residual: f64) {
        let pass = max_residual <= self.tol;
        let check = check.into();
        log::info!("{}/{check}: {max_residual:e}", suite.name());
        self.checks.push(Check {
            suite: suite.name(),
            check,
            max_residual,
            tolerance: self.tol,
            pass,
        });
    }
}

fn max_of(values: impl IntoIterator<Item = CliResult<f64>>) -> CliResult<f64> {
    values
        .into_iter()
        .try_fold(0.0f64, |m, v| Ok(m.max(v?.abs())))
}

fn random_pair(rng: &mut StdRng) -> CliResult<FactorPair> {
    let mut c = || rng.gen_range(-1.0..1.0);
    let r = Expr::parse(&format!("{:?} * sin({:?} * z) + {:?} * z^2", c(), c(), c()))?;
    let s = Expr::parse(&format!("{:?} * exp({:?} * z) + {:?}", c(), c(), c()))?;
    Ok(FactorPair::new(r, s))
}

fn factorization(ctx: &mut Ctx) -> CliResult<()> {
    let zs = ctx.cfg.sample_points();
    let (mut factor, mut swap, mut intertwine) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..5 {
        let fp = random_pair(&mut ctx.rng)?;
        for src in TEST_FUNCTIONS {
            let u = Expr::parse(src)?;
            for &z in &zs {
                let (first, second) = intertwine_residual(&fp, &u, z)?;
                factor = factor.max(first);
                intertwine = intertwine.max(second);
                swap = swap.max(swap_residual(&fp, &u, z)?);
            }
        }
    }
    ctx.record(Suite::Factorization, "R*R = L", factor);
    ctx.record(Suite::Factorization, "RR* = L^", swap);
    ctx.record(Suite::Factorization, "RL = L^R", intertwine);
    Ok(())
}

fn principal_of(ctx: &mut Ctx, label: String, family: &Family) -> CliResult<()> {
    let (lo, hi) = ctx.cfg.interval();
    family.check_interval(lo, hi, ctx.cfg.samples())?;
    let fp = family.factor_pair();
    let coeffs = family.coefficients();
    let worst = max_of(ctx.cfg.sample_points().into_iter().map(|z| principal_at(&fp.r, &coeffs, z)))?;
    ctx.record(Suite::Principal, label, worst);
    Ok(())
}

fn principal(ctx: &mut Ctx, family: Option<FamilyKind>) -> CliResult<()> {
    if let Some(kind) = family {
        let fam = Family::from_config(kind, ctx.cfg)?;
        let label = fam.describe().to_string();
        return principal_of(ctx, label, &fam);
    }
    for a in ["1", "exp(z)", "1 + z^2/4"] {
        for k in KRoot::ALL {
            let spec = LieFamilySpec::new(Expr::parse(a)?, k, 3.0);
            principal_of(ctx, format!("lie a={a} k={k} C=3"), &Family::Lie(spec))?;
        }
    }
    // tuples whose poles lie outside [0, 1]
    for k in [[2.0, 1.0, 1.0, 0.0], [1.0, 1.0, 0.0, -1.0]] {
        let spec = ChazyFamilySpec::new(k[0], k[1], k[2], k[3])?;
        principal_of(ctx, format!("chazy k={k:?}"), &Family::Chazy(spec))?;
    }
    Ok(())
}

fn random_points(ctx: &mut Ctx, coeffs: &BeamCoefficients, spread: f64) -> CliResult<Vec<JetPoint>> {
    let (lo, hi) = ctx.cfg.interval();
    (0..RANDOM_POINTS)
        .map(|_| {
            let z = ctx.rng.gen_range(lo..=hi);
            let mut c = || ctx.rng.gen_range(-spread..spread);
            let (r0, r1, r2) = (c(), c(), c());
            Ok(JetPoint::on_manifold(z, r0, r1, r2, coeffs)?)
        })
        .collect()
}

fn symmetry(ctx: &mut Ctx, case: Option<SymmetryCase>) -> CliResult<()> {
    if case != Some(SymmetryCase::II) {
        let unit = BeamCoefficients::unit();
        let points = random_points(ctx, &unit, 2.0)?;
        for (name, x) in [("X1", x1()), ("X2", x2()), ("X3", x3())] {
            let worst = max_of(points.iter().map(|p| Ok(symmetry_residual(x.as_ref(), &unit, p)?)))?;
            ctx.record(Suite::Symmetry, format!("case I {name}"), worst);
        }
    }
    if case != Some(SymmetryCase::I) {
        let a = Expr::parse(ctx.cfg.a.as_deref().unwrap_or(DEFAULT_GAUGE))?;
        let mut spec = LieFamilySpec::new(a.clone(), KRoot::One, 0.0);
        spec.c1 = ctx.cfg.c1.unwrap_or(0.5);
        spec.c2 = ctx.cfg.c2.unwrap_or(-0.25);
        let coeffs = spec.coefficients();
        let gamma = GaugeField::new(a.clone());
        let points = random_points(ctx, &coeffs, 2.0)?;
        let worst = max_of(points.iter().map(|p| Ok(symmetry_residual(&gamma, &coeffs, p)?)))?;
        ctx.record(
            Suite::Symmetry,
            format!("case II Gamma a={a} C1={} C2={}", spec.c1, spec.c2),
            worst,
        );
    }
    Ok(())
}

fn brackets(ctx: &mut Ctx) -> CliResult<()> {
    let grid: Vec<(f64, f64)> = (0..9)
        .flat_map(|i| (0..9).map(move |j| (-2.0 + 0.5 * i as f64, -2.0 + 0.5 * j as f64)))
        .collect();
    let twice = |f: Arc<dyn PointVectorField>| Combination(vec![(2.0, f)]);
    let table = [
        ("[X1,X2] = X1", max_field_difference(&Bracket::new(x1(), x2()), x1().as_ref(), &grid)?),
        ("[X1,X3] = 2X2", max_field_difference(&Bracket::new(x1(), x3()), &twice(x2()), &grid)?),
        ("[X2,X3] = X3", max_field_difference(&Bracket::new(x2(), x3()), x3().as_ref(), &grid)?),
    ];
    for (name, v) in table {
        ctx.record(Suite::Brackets, name, v);
    }
    let nested = |p: Arc<dyn PointVectorField>, q: Arc<dyn PointVectorField>, r: Arc<dyn PointVectorField>| {
        (1.0, Arc::new(Bracket::new(p, Arc::new(Bracket::new(q, r)))) as Arc<dyn PointVectorField>)
    };
    let jacobi = Combination(vec![
        nested(x1(), x2(), x3()),
        nested(x2(), x3(), x1()),
        nested(x3(), x1(), x2()),
    ]);
    let zero = Combination(Vec::new());
    ctx.record(Suite::Brackets, "Jacobi identity", max_field_difference(&jacobi, &zero, &grid)?);
    Ok(())
}

fn chazy_map(ctx: &mut Ctx) -> CliResult<()> {
    let zs = ctx.cfg.sample_points();
    for src in NON_SOLUTIONS {
        let r = Expr::parse(src)?;
        let worst = max_of(zs.iter().map(|&z| {
            let (lhs, rhs) = chazy_map_check(&r, z)?;
            Ok(lhs - rhs)
        }))?;
        ctx.record(Suite::ChazyMap, format!("27/8 proportionality r={src}"), worst);
    }
    ctx.record(Suite::ChazyMap, "alpha = 4/27", (CHAZY_ALPHA - 4.0 / 27.0).abs());
    ctx.record(Suite::ChazyMap, "sigma = -1/48", (chazy_sigma(CHAZY_ALPHA) + 1.0 / 48.0).abs());
    Ok(())
}

fn hypergeometric(ctx: &mut Ctx) -> CliResult<()> {
    let (mut first, mut second) = (0.0f64, 0.0f64);
    for tau in TAUS {
        let x = tau * (tau + 4.0f64).powi(3) / (4.0 * (2.0 * tau - 1.0f64).powi(3));
        first = first.max((hyp2f1(0.25, -1.0 / 12.0, 2.0 / 3.0, x)? - (1.0 - 2.0 * tau).powf(-0.25)).abs());
        second = second.max(
            (hyp2f1(0.25, 7.0 / 12.0, 4.0 / 3.0, x)? - 4.0 * (1.0 - 2.0 * tau).powf(0.75) / (tau + 4.0)).abs(),
        );
    }
    ctx.record(Suite::Hypergeometric, "2F1(1/4,-1/12;2/3) = (1-2t)^(-1/4)", first);
    ctx.record(Suite::Hypergeometric, "2F1(1/4,7/12;4/3) = 4(1-2t)^(3/4)/(t+4)", second);
    Ok(())
}

pub fn run(req: Request) -> CliResult<Outcome> {
    let suites: Vec<Suite> = if req.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        req.suites.to_vec()
    };
    let mut ctx = Ctx {
        cfg: req.cfg,
        rng: StdRng::seed_from_u64(req.cfg.seed.unwrap_or(0)),
        checks: Vec::new(),
        tol: req.cfg.residual_tol(),
    };
    for suite in &suites {
        match suite {
            Suite::Factorization => factorization(&mut ctx)?,
            Suite::Principal => principal(&mut ctx, req.family)?,
            Suite::Symmetry => symmetry(&mut ctx, req.case)?,
            Suite::Brackets => brackets(&mut ctx)?,
            Suite::ChazyMap => chazy_map(&mut ctx)?,
            Suite::Hypergeometric => hypergeometric(&mut ctx)?,
        }
    }
    let mut table = Table::new(vec!["suite", "check", "max_residual", "tolerance", "pass"]);
    let mut residuals = BTreeMap::new();
    for c in &ctx.checks {
        table.push(vec![
            Cell::Text(c.suite.into()),
            Cell::Text(c.check.clone()),
            Cell::Real(c.max_residual),
            Cell::Real(c.tolerance),
            Cell::Flag(c.pass),
        ]);
        residuals.insert(format!("{}/{}", c.suite, c.check), c.max_residual);
    }
    let pass = ctx.checks.iter().all(|c| c.pass);
    let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
    Ok(Outcome {
        results: json!({ "suites": names, "checks": ctx.checks }),
        residuals,
        table,
        pass,
    })
}
