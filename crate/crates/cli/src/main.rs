//! `isobeam`: build iso-spectral beam families, verify their identities and
//! compute spectra. Exit codes: 0 success, 1 input or validation error,
//! 2 numerical or tolerance failure.

mod args;
mod config;
mod error;
mod family;
mod report;
mod spectrum;
mod verify;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, FamilyKind, Format};
use config::RunConfig;
use error::{CliError, CliResult};
use report::{Outcome, Report, Status};
use spectrum::{FactorSource, Source};

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Family { kind, .. } => format!(
            "family {}",
            match kind {
                FamilyKind::Lie => "lie",
                FamilyKind::Chazy => "chazy",
            }
        ),
        Command::Verify { .. } => "verify".into(),
        Command::Spectrum { .. } => "spectrum".into(),
        Command::Isospec { .. } => "isospec".into(),
    }
}

/// Merges the config file, the command line and defaults.
fn build_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.output_format = cli.format.or(cfg.output_format);
    cfg.output_path = cli.output.clone().or(cfg.output_path.take());
    match &cli.command {
        Command::Family { kind, family, sampling } => {
            cfg.family = Some(*kind);
            cfg.apply_family(family);
            cfg.apply_sampling(sampling);
        }
        Command::Verify { suite, case, family, params, sampling, seed } => {
            if !suite.is_empty() {
                cfg.suites = Some(suite.clone());
            }
            cfg.case = case.or(cfg.case);
            cfg.family = family.or(cfg.family);
            cfg.seed = seed.or(cfg.seed);
            cfg.apply_family(params);
            cfg.apply_sampling(sampling);
        }
        Command::Spectrum { unit, family, coef_a, coef_b, params, spectral } => {
            if *unit {
                cfg.unit = Some(true);
            }
            cfg.family = family.or(cfg.family);
            cfg.coef_a = coef_a.clone().or(cfg.coef_a.take());
            cfg.coef_b = coef_b.clone().or(cfg.coef_b.take());
            cfg.apply_family(params);
            cfg.apply_spectral(spectral);
        }
        Command::Isospec { family, r, s, params, spectral } => {
            cfg.family = family.or(cfg.family);
            cfg.r = r.clone().or(cfg.r.take());
            cfg.s = s.clone().or(cfg.s.take());
            cfg.apply_family(params);
            cfg.apply_spectral(spectral);
        }
    }
    cfg.resolve()
}

fn execute(cli: &Cli, cfg: &mut RunConfig) -> CliResult<Outcome> {
    match &cli.command {
        Command::Family { kind, .. } => family::run(*kind, cfg),
        Command::Verify { .. } => {
            let suites = cfg.suites.clone().unwrap_or_default();
            verify::run(verify::Request {
                suites: &suites,
                case: cfg.case,
                family: cfg.family,
                cfg,
            })
        }
        Command::Spectrum { .. } => {
            let source = if cfg.unit == Some(true) {
                Source::Unit
            } else if let Some(kind) = cfg.family {
                Source::Family(kind)
            } else if cfg.coef_a.is_some() || cfg.coef_b.is_some() {
                Source::Custom {
                    a: cfg.coef_a.clone().unwrap_or_else(|| "0".into()),
                    b: cfg.coef_b.clone().unwrap_or_else(|| "0".into()),
                }
            } else {
                return Err(CliError::Input(
                    "spectrum needs --unit, --family or --A/--B".into(),
                ));
            };
            spectrum::run_spectrum(source, cfg)
        }
        Command::Isospec { .. } => {
            let source = match (cfg.family, &cfg.r, &cfg.s) {
                (Some(kind), _, _) => FactorSource::Family(kind),
                (None, Some(r), Some(s)) => FactorSource::Custom {
                    r: r.clone(),
                    s: s.clone(),
                },
                _ => return Err(CliError::Input("isospec needs --family or --r/--s".into())),
            };
            spectrum::run_isospec(source, cfg)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ISOBEAM_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; help and version are not errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let command = command_name(&cli.command);

    let mut cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let format = cfg.format();
    let path = cfg.output_path.clone();
    let outcome = execute(&cli, &mut cfg);

    let (report, table, code) = match outcome {
        Ok(out) => {
            let status = if out.pass { Status::Pass } else { Status::Fail };
            let report = Report {
                command,
                config: cfg,
                results: out.results,
                residuals: out.residuals,
                status,
            };
            (report, Some(out.table), if out.pass { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let report = Report {
                command,
                config: cfg,
                results: report::error_results(&e),
                residuals: BTreeMap::new(),
                status: Status::Error,
            };
            if format == Format::Csv {
                return ExitCode::from(e.exit_code());
            }
            (report, None, e.exit_code())
        }
    };
    if report.status == Status::Fail {
        eprintln!("{}: residual or convergence check failed", report.command);
    }
    if let Err(e) = report::write(&report, table.as_ref(), format, path.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    ExitCode::from(code)
}
