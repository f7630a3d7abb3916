//! Command-line front end: figure data, config-driven scenarios and a fast
//! self-test. Data files are CSV (or JSON) with a metrics JSON alongside.

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod report;
pub mod scenarios;
pub mod selftest;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use orir_core::{EdgeShape, IntegratorConfig};

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use figures::{run_figure, Figure, FigureOptions};
pub use output::{Artifacts, Format, Table};
pub use report::{Metric, MetricsReport};
pub use selftest::{self_test, Mutation, SelfTestReport};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "ORIR_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "orir", version, about = "ORIR drive, Rydberg addressing and blockade-gate simulator")]
pub struct Cli {
    /// Output directory [default: out/<command>].
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,

    /// Relative integrator tolerance; the absolute one is 1% of it.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Worker threads for sweeps and grids [default: all cores].
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single detuned tone: bounded excitation.
    Fig1a,
    /// Cosine pair: full transfer at Ω/Δ = π/2.
    Fig1b,
    /// Method I populations for target and nontarget atoms.
    Fig3,
    /// Method II populations.
    Fig4,
    /// Method II with the microwave spin echo.
    Fig4mu,
    /// Blockade-error sweeps of both gate schemes.
    Fig5 {
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Time-resolved blockade leakage.
    Fig6,
    /// Duration optimum and timing-error averages.
    Fig7 {
        /// Comma-separated σ_t values in ns.
        #[arg(long, value_delimiter = ',', default_values_t = figures::FIG7_SIGMAS_NS)]
        sigma_ns: Vec<f64>,
        #[arg(long, default_value_t = 20.0)]
        ramp_ns: f64,
        #[arg(long, value_enum, default_value_t = CliEdge::Linear)]
        edge: CliEdge,
    },
    /// Addressable lattice size and distance bound.
    Geometry {
        #[arg(long)]
        lattice_constant: f64,
        #[arg(long)]
        wavelength: f64,
        #[arg(long)]
        r_perp0: Option<f64>,
    },
    /// Runs a scenario file (TOML, or JSON by extension).
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fast invariant checks; nonzero exit on any failure.
    SelfTest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CliEdge {
    Rectangular,
    Linear,
    CosineSquared,
}

impl From<CliEdge> for EdgeShape {
    fn from(e: CliEdge) -> Self {
        match e {
            CliEdge::Rectangular => EdgeShape::Rectangular,
            CliEdge::Linear => EdgeShape::Linear,
            CliEdge::CosineSquared => EdgeShape::CosineSquared,
        }
    }
}

/// What a command did, for the caller to print.
#[derive(Debug)]
pub enum Outcome {
    Written { files: Vec<PathBuf>, report: MetricsReport },
    SelfTest(SelfTestReport),
}

pub fn integrator_config(tolerance: Option<f64>) -> Result<IntegratorConfig> {
    let base = IntegratorConfig::default();
    let cfg = match tolerance {
        Some(t) if t > 0.0 && t < 1e-3 => base.with_tolerances(t, t * 1e-2),
        Some(t) => return Err(CliError::validation(format!("--tolerance must lie in (0, 1e-3), got {t}"))),
        None => base,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let cfg = integrator_config(cli.tolerance)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::validation("--threads must be >= 1"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::validation(format!("cannot start worker threads: {e}")))?;
    pool.install(|| execute(cli, cfg))
}

fn execute(cli: Cli, cfg: IntegratorConfig) -> Result<Outcome> {
    let figure = |fig: Figure, opts: FigureOptions| -> Result<(String, Artifacts, Option<PathBuf>)> {
        Ok((fig.name().to_string(), run_figure(fig, &opts, &cfg)?, None))
    };
    let defaults = FigureOptions::default;
    let (name, artifacts, config_out) = match cli.command {
        Command::Fig1a => figure(Figure::Fig1a, defaults())?,
        Command::Fig1b => figure(Figure::Fig1b, defaults())?,
        Command::Fig3 => figure(Figure::Fig3, defaults())?,
        Command::Fig4 => figure(Figure::Fig4, defaults())?,
        Command::Fig4mu => figure(Figure::Fig4mu, defaults())?,
        Command::Fig5 { points } => figure(
            Figure::Fig5,
            FigureOptions {
                sweep_points: points,
                ..defaults()
            },
        )?,
        Command::Fig6 => figure(Figure::Fig6, defaults())?,
        Command::Fig7 { sigma_ns, ramp_ns, edge } => figure(
            Figure::Fig7,
            FigureOptions {
                sigmas_ns: sigma_ns,
                ramp_ns,
                edge: edge.into(),
                ..defaults()
            },
        )?,
        Command::Geometry {
            lattice_constant,
            wavelength,
            r_perp0,
        } => (
            "geometry".to_string(),
            scenarios::geometry("geometry", lattice_constant, wavelength, r_perp0, None, &cfg)?,
            None,
        ),
        Command::Run { config } => {
            let sc = ScenarioConfig::load(&config)?;
            (sc.protocol.name().to_string(), sc.run(cfg)?, sc.out.clone())
        }
        Command::SelfTest => {
            let report = self_test(&cfg, None)?;
            return Ok(Outcome::SelfTest(report));
        }
    };
    let dir = cli
        .out
        .or(config_out)
        .unwrap_or_else(|| PathBuf::from("out").join(&name));
    let files = artifacts.write(&dir, cli.format)?;
    Ok(Outcome::Written {
        files,
        report: artifacts.report,
    })
}
