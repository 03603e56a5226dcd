//! Experiment runner: reads a TOML config, runs the solver experiments and
//! writes CSV tables, JSON fit summaries, SVG plots and a `run.json` manifest.

pub mod checks;
pub mod commands;
pub mod config;
pub mod manifest;
pub mod plot;
pub mod table;

use std::path::PathBuf;

use serde_json::Map;

use commands::Section;
use config::{RunConfig, SchemaError, SCHEMA_HINT};
use manifest::{write_manifest, OutputDir, RunManifest};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_ACCEPTANCE: u8 = 2;
pub const EXIT_CONFIG: u8 = 64;
pub const EXIT_OUTPUT: u8 = 66;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Solve,
    Converge,
    Bounds,
    Manifold,
    All,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Solve => "solve",
            Subcommand::Converge => "converge",
            Subcommand::Bounds => "bounds",
            Subcommand::Manifold => "manifold",
            Subcommand::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Built-in reference config when absent.
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub quiet: bool,
    pub seed: u64,
    /// Non-gating checks also set exit status 2.
    pub strict: bool,
}

#[derive(Debug)]
pub enum Failure {
    Config(SchemaError),
    Validation(fastreact::Error),
    Output(std::io::Error),
}

impl From<fastreact::Error> for Failure {
    fn from(e: fastreact::Error) -> Self {
        Failure::Validation(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Output(_) => EXIT_OUTPUT,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Config(SchemaError(m)) => format!("unreadable config: {m}\n\n{SCHEMA_HINT}"),
            Failure::Validation(e) => format!("validation failed: {e}"),
            Failure::Output(e) => format!("output directory is not writable: {e}"),
        }
    }
}

pub struct Report {
    pub manifest: RunManifest,
    pub warnings: Vec<String>,
    pub exit_code: u8,
}

pub fn run(command: Subcommand, opts: &RunOptions) -> Result<Report, Failure> {
    let run_cfg = match &opts.config {
        Some(path) => RunConfig::load(path).map_err(Failure::Config)?,
        None => RunConfig::default_config(),
    };
    let cfg = run_cfg.experiment(opts.seed);
    cfg.validate()?;
    let mut out = OutputDir::create(&opts.out).map_err(Failure::Output)?;

    let mut section = Section::default();
    let steps: &[Subcommand] = match command {
        Subcommand::All => &[Subcommand::Solve, Subcommand::Converge, Subcommand::Bounds, Subcommand::Manifold],
        _ => std::slice::from_ref(&command),
    };
    for step in steps {
        section.merge(match step {
            Subcommand::Solve => commands::solve(&run_cfg, &cfg, &mut out)?,
            Subcommand::Converge => commands::converge(&cfg, &mut out)?,
            Subcommand::Bounds => commands::bounds(&cfg, &mut out)?,
            Subcommand::Manifold => commands::manifold(&cfg, &mut out)?,
            Subcommand::All => unreachable!(),
        });
    }

    let failed = section.checks.iter().any(|c| !c.pass && (c.gating || opts.strict));
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        subcommand: command.name().to_string(),
        config_hash: run_cfg.hash(),
        seed: opts.seed,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        files: Vec::new(),
        fits: Map::new(),
        checks: section.checks,
        status: if failed { "acceptance failure".into() } else { "ok".into() },
    };
    let manifest = RunManifest { fits: section.fits, ..manifest };
    let manifest = write_manifest(&mut out, manifest).map_err(Failure::Output)?;
    Ok(Report { manifest, warnings: section.warnings, exit_code: if failed { EXIT_ACCEPTANCE } else { EXIT_OK } })
}
