use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "isobeam", version, about = "Iso-spectral Euler-Bernoulli beam operators")]
#[command(args_override_self = true)]
pub struct Cli {
    /// JSON file with default values for any of the options below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Lie,
    Chazy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Factorization,
    Principal,
    Symmetry,
    Brackets,
    ChazyMap,
    Hypergeometric,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Factorization,
        Suite::Principal,
        Suite::Symmetry,
        Suite::Brackets,
        Suite::ChazyMap,
        Suite::Hypergeometric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Factorization => "factorization",
            Suite::Principal => "principal",
            Suite::Symmetry => "symmetry",
            Suite::Brackets => "brackets",
            Suite::ChazyMap => "chazy-map",
            Suite::Hypergeometric => "hypergeometric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SymmetryCase {
    /// `A = B = 0` with the three-dimensional algebra.
    #[value(name = "I")]
    I,
    /// Gauge-symmetric coefficients with a single generator.
    #[value(name = "II")]
    II,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a closed-form family: z, r, s, A, B, Â, B̂ and residuals.
    Family {
        #[arg(value_enum)]
        kind: FamilyKind,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Run verification suites.
    Verify {
        /// Suites to run (repeatable); all suites when omitted.
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        /// Symmetry case; both when omitted.
        #[arg(long, value_enum)]
        case: Option<SymmetryCase>,
        #[arg(long, value_enum)]
        family: Option<FamilyKind>,
        #[command(flatten)]
        params: FamilyArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Seed for randomly drawn test points.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Lowest eigenvalues of a beam operator.
    Spectrum {
        /// Use the unit beam A = B = 0.
        #[arg(long, conflicts_with_all = ["family", "coef_a", "coef_b"])]
        unit: bool,
        #[arg(long, value_enum)]
        family: Option<FamilyKind>,
        /// Coefficient A(z) as an expression.
        #[arg(long = "A", id = "coef_a")]
        coef_a: Option<String>,
        /// Coefficient B(z) as an expression.
        #[arg(long = "B", id = "coef_b")]
        coef_b: Option<String>,
        #[command(flatten)]
        params: FamilyArgs,
        #[command(flatten)]
        spectral: SpectralArgs,
    },
    /// Spectra of L and of the swapped operator side by side.
    Isospec {
        #[arg(long, value_enum)]
        family: Option<FamilyKind>,
        /// Factor coefficient r(z) as an expression.
        #[arg(long, requires = "s")]
        r: Option<String>,
        /// Factor coefficient s(z) as an expression.
        #[arg(long, requires = "r")]
        s: Option<String>,
        #[command(flatten)]
        params: FamilyArgs,
        #[command(flatten)]
        spectral: SpectralArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    /// Gauge function a(z) of the Lie family.
    #[arg(long)]
    pub a: Option<String>,
    /// Lie family: one of 1/4, 1/3, 1. Chazy family: k1 k2 k3 k4.
    #[arg(long, num_args = 1..=4, allow_negative_numbers = true)]
    pub k: Option<Vec<String>>,
    /// Integration constant C of the Lie family.
    #[arg(long = "C", allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SamplingArgs {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tolerance for residual and identity checks.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectralArgs {
    #[arg(long)]
    pub bc: Option<String>,
    #[arg(long)]
    pub modes: Option<usize>,
    /// Number of interior grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, conflicts_with = "length")]
    pub interval: Option<Vec<f64>>,
    /// Shorthand for --interval 0 LENGTH.
    #[arg(long)]
    pub length: Option<f64>,
    /// Tolerance for residual and identity checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative tolerance of the grid-doubling convergence flags.
    #[arg(long)]
    pub spectral_tol: Option<f64>,
}
