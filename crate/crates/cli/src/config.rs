use std::fs;
use std::path::{Path, PathBuf};

use isobeam::families::KRoot;
use serde::{Deserialize, Serialize};

use crate::args::{FamilyArgs, FamilyKind, Format, SamplingArgs, SpectralArgs, Suite, SymmetryCase};
use crate::error::{CliError, CliResult};

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-3;
pub const DEFAULT_SAMPLES: usize = 101;
pub const DEFAULT_GRID: usize = 400;
pub const DEFAULT_MODES: usize = 5;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<f64>,
}

/// A `k` entry given either as a JSON number or as a string such as `"1/3"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KValue {
    Number(f64),
    Text(String),
}

impl KValue {
    fn text(&self) -> String {
        match self {
            KValue::Number(v) => format!("{v:?}"),
            KValue::Text(s) => s.clone(),
        }
    }
}

/// Every option of every command. Used both for the optional JSON config
/// file and, once merged with the command line and defaults, as the
/// resolved run configuration echoed in reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<KValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<Suite>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<SymmetryCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(rename = "A")]
    pub coef_a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(rename = "B")]
    pub coef_b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bc: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_modes: Option<usize>,
}

fn or<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<RunConfig> {
        let err = |message: String| CliError::Config {
            path: path.to_path_buf(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| err(e.to_string()))
    }

    /// Command-line values win over those already present.
    pub fn apply_family(&mut self, args: &FamilyArgs) {
        self.a = or(args.a.clone(), self.a.take());
        if let Some(k) = &args.k {
            self.k = Some(k.iter().cloned().map(KValue::Text).collect());
        }
        self.c = or(args.c, self.c);
        self.c1 = or(args.c1, self.c1);
        self.c2 = or(args.c2, self.c2);
    }

    pub fn apply_sampling(&mut self, args: &SamplingArgs) {
        if let Some(iv) = &args.interval {
            self.interval = Some([iv[0], iv[1]]);
        }
        self.samples = or(args.samples, self.samples);
        self.tolerances.residual = or(args.tol, self.tolerances.residual);
    }

    pub fn apply_spectral(&mut self, args: &SpectralArgs) {
        if let Some(iv) = &args.interval {
            self.interval = Some([iv[0], iv[1]]);
        }
        if let Some(len) = args.length {
            self.interval = Some([0.0, len]);
        }
        self.bc = or(args.bc.clone(), self.bc.take());
        self.n_modes = or(args.modes, self.n_modes);
        self.grid_n = or(args.grid, self.grid_n);
        self.tolerances.residual = or(args.tol, self.tolerances.residual);
        self.tolerances.spectral = or(args.spectral_tol, self.tolerances.spectral);
    }

    /// Fills the defaults shared by all commands and validates ranges.
    pub fn resolve(mut self) -> CliResult<RunConfig> {
        self.output_format.get_or_insert(Format::Json);
        let [lo, hi] = *self.interval.get_or_insert([0.0, 1.0]);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Input(format!("interval [{lo}, {hi}] must satisfy lo < hi")));
        }
        if *self.samples.get_or_insert(DEFAULT_SAMPLES) < 2 {
            return Err(CliError::Input("samples must be at least 2".into()));
        }
        let residual = *self.tolerances.residual.get_or_insert(DEFAULT_RESIDUAL_TOL);
        let spectral = *self.tolerances.spectral.get_or_insert(DEFAULT_SPECTRAL_TOL);
        if !(residual > 0.0 && spectral > 0.0) {
            return Err(CliError::Input("tolerances must be positive".into()));
        }
        self.seed.get_or_insert(0);
        Ok(self)
    }

    pub fn interval(&self) -> (f64, f64) {
        let [lo, hi] = self.interval.unwrap_or([0.0, 1.0]);
        (lo, hi)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn residual_tol(&self) -> f64 {
        self.tolerances.residual.unwrap_or(DEFAULT_RESIDUAL_TOL)
    }

    pub fn spectral_tol(&self) -> f64 {
        self.tolerances.spectral.unwrap_or(DEFAULT_SPECTRAL_TOL)
    }

    pub fn format(&self) -> Format {
        self.output_format.unwrap_or(Format::Json)
    }

    /// `z` values spread uniformly over the interval, ends included.
    pub fn sample_points(&self) -> Vec<f64> {
        let (lo, hi) = self.interval();
        let n = self.samples();
        (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect()
    }

    pub fn k_texts(&self) -> Vec<String> {
        self.k.iter().flatten().map(KValue::text).collect()
    }
}

/// Parses `p/q`, an integer or a decimal into an exact fraction.
pub fn parse_fraction(s: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Input(format!("cannot read `{s}` as a fraction"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok((p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = 10i64.pow(frac.len() as u32);
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().map_err(|_| bad())?;
    Ok((num, den))
}

pub fn parse_k_root(s: &str) -> CliResult<KRoot> {
    let (p, q) = parse_fraction(s)?;
    Ok(KRoot::from_fraction(p, q)?)
}

/// A real number written as a fraction or in any float syntax.
pub fn parse_real(s: &str) -> CliResult<f64> {
    if let Ok((p, q)) = parse_fraction(s) {
        return Ok(p as f64 / q as f64);
    }
    s.trim()
        .parse()
        .map_err(|_| CliError::Input(format!("cannot read `{s}` as a number")))
}
