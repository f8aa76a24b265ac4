//! Command-line front end for the `hilbno` computations.

mod checks;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use config::{Command, Format, RunConfig, SemigroupAction, SurfaceSpec};
use output::Emission;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0} check(s) failed")]
    CheckFailed(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hilbno", version, about = "Exact Newton-Okounkov body computations for Hilbert schemes of points")]
struct Cli {
    /// JSON run config; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Add decimal columns, marked approximate.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Debug, Args, Default)]
struct SurfaceArgs {
    /// P2, P1xP1, H<e>, H<e>m, or c2 for the plane.
    #[arg(long)]
    surface: Option<String>,
    /// Explicit Newton polygon as JSON, or @path to a JSON file.
    #[arg(long, conflicts_with = "surface", value_parser = config::parse_polygon)]
    polygon: Option<hilbno::NewtonPolygon>,
    /// Class coefficients, comma separated rationals.
    #[arg(long, value_delimiter = ',')]
    coeffs: Option<Vec<String>>,
}

impl SurfaceArgs {
    fn into_config(self) -> RunConfig {
        let surface = match (self.surface, self.polygon) {
            (Some(s), _) => Some(SurfaceSpec::Name(s)),
            (None, Some(p)) => Some(SurfaceSpec::Polygon { polygon: p }),
            (None, None) => None,
        };
        RunConfig {
            surface,
            coeffs: self.coeffs,
            ..Default::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Least t with t D_n + E effective according to the upper-bound bodies.
    MuTable {
        /// Comma separated presets; defaults to P2, P1xP1, H1, H2.
        #[arg(long, value_delimiter = ',')]
        surfaces: Option<Vec<String>>,
        #[arg(long, value_parser = config::parse_n_range)]
        n_range: Option<(usize, usize)>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        coeffs: Option<Vec<String>>,
    },
    /// H-representation of a body, optionally with vertices and volume.
    Body {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long)]
        vertices: bool,
        #[arg(long)]
        volume: bool,
    },
    /// Enumerate, decompose or test members of the valuation semigroups.
    Semigroup {
        #[arg(value_enum)]
        action: Option<SemigroupAction>,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        /// Degree (p, q) of a graded piece.
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long)]
        p_max: Option<i64>,
        #[arg(long)]
        q_max: Option<i64>,
        /// Comma separated p_1..p_n,q_1..q_n.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        vector: Option<Vec<i64>>,
    },
    /// Scaled graded counts against fiber volumes on the default grid.
    DhGrid {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<i64>,
    },
    /// Run a check suite: semigroup, oracle, catalan, dh, mu or volume.
    Check {
        suite: Option<String>,
        #[arg(long, value_delimiter = ',')]
        surfaces: Option<Vec<String>>,
        #[arg(long, value_parser = config::parse_n_range)]
        n_range: Option<(usize, usize)>,
    },
}

fn flag_config(cli: &mut Cli) -> RunConfig {
    let mut cfg = match cli.command.take() {
        None => RunConfig::default(),
        Some(Cmd::MuTable {
            surfaces,
            n_range,
            n,
            coeffs,
        }) => RunConfig {
            command: Some(Command::MuTable),
            surfaces,
            n_range,
            n,
            coeffs,
            ..Default::default()
        },
        Some(Cmd::Body {
            surface,
            n,
            r,
            vertices,
            volume,
        }) => RunConfig {
            command: Some(Command::Body),
            n,
            r,
            vertices: vertices.then_some(true),
            volume: volume.then_some(true),
            ..surface.into_config()
        },
        Some(Cmd::Semigroup {
            action,
            surface,
            n,
            r,
            p,
            q,
            p_max,
            q_max,
            vector,
        }) => RunConfig {
            command: Some(Command::Semigroup),
            action,
            n,
            r,
            p,
            q,
            p_max,
            q_max,
            vector,
            ..surface.into_config()
        },
        Some(Cmd::DhGrid { n, r }) => RunConfig {
            command: Some(Command::DhGrid),
            n,
            r,
            ..Default::default()
        },
        Some(Cmd::Check {
            suite,
            surfaces,
            n_range,
        }) => RunConfig {
            command: Some(Command::Check),
            suite,
            surfaces,
            n_range,
            ..Default::default()
        },
    };
    cfg.format = cli.format;
    cfg.output = cli.output.clone();
    cfg.approx = cli.approx.then_some(true);
    cfg
}

fn check(cfg: &RunConfig) -> Result<(Emission, usize), CliError> {
    let suite = cfg
        .suite
        .clone()
        .ok_or_else(|| CliError::Config(format!("check needs a suite: {}", checks::SUITES.join(", "))))?;
    let lines = checks::run_suite(&suite, cfg)?;
    let failed = lines.iter().filter(|l| !l.passed).count();
    let rows = lines
        .iter()
        .map(|l| {
            vec![
                l.suite.clone(),
                l.check.clone(),
                if l.passed { "PASS" } else { "FAIL" }.to_string(),
                l.detail.clone(),
            ]
        })
        .collect();
    let emission = Emission {
        json: json!({"suite": suite, "passed": failed == 0, "checks": lines}),
        headers: vec!["suite".into(), "check".into(), "status".into(), "detail".into()],
        rows,
    };
    Ok((emission, failed))
}

fn run(mut cli: Cli) -> Result<(), CliError> {
    let flags = flag_config(&mut cli);
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let cfg = base.overlay(flags);
    let command = cfg
        .command
        .ok_or_else(|| CliError::Config("no command given on the command line or in the config".into()))?;
    let mut failed = 0;
    let emission = match command {
        Command::MuTable => commands::mu_table(&cfg)?,
        Command::Body => commands::body(&cfg)?,
        Command::Semigroup => commands::semigroup(&cfg)?,
        Command::DhGrid => commands::dh_grid(&cfg)?,
        Command::Check => {
            let (e, f) = check(&cfg)?;
            failed = f;
            e
        }
    };
    emission.write(cfg.format.unwrap_or_default(), cfg.output.as_deref())?;
    if failed > 0 {
        return Err(CliError::CheckFailed(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hilbno: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
