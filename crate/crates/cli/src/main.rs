use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand as ClapSubcommand};
use fastreact_cli::{run, RunOptions, Subcommand, EXIT_CONFIG};

#[derive(Debug, Clone, Copy, ClapSubcommand)]
enum Command {
    /// Closed-form solutions on the time grid, plus oracle and eigen-structure checks.
    Solve,
    /// Sup-in-time error against eps with a log-log rate fit.
    Converge,
    /// Both sides of the auxiliary-system bounds with coarsest-eps calibration.
    Bounds,
    /// Slow manifold invariance, distance to the critical manifold and reduced flow.
    Manifold,
    /// Every subcommand into one output directory.
    All,
}

#[derive(Debug, Parser)]
#[command(
    name = "fastreact",
    version,
    about = "Spectral solver and verification runner for linear fast-reaction systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML config; the built-in reference config is used when omitted.
    #[arg(long, value_name = "PATH", global = true)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out", global = true)]
    out: PathBuf,
    /// Only warnings and errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Seed for the randomized checks.
    #[arg(long, value_name = "N", default_value_t = 1, global = true)]
    seed: u64,
    /// Let calibrated-constant bound checks set exit status 2 as well.
    #[arg(long, global = true)]
    strict: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let command = match cli.command {
        Command::Solve => Subcommand::Solve,
        Command::Converge => Subcommand::Converge,
        Command::Bounds => Subcommand::Bounds,
        Command::Manifold => Subcommand::Manifold,
        Command::All => Subcommand::All,
    };
    let opts = RunOptions { config: cli.config, out: cli.out, quiet: cli.quiet, seed: cli.seed, strict: cli.strict };
    match run(command, &opts) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for c in &report.manifest.checks {
                let line = format!(
                    "{:<8} {:<26} {}  {}{}",
                    c.subcommand,
                    c.name,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.detail,
                    if c.gating { "" } else { " [calibrated bound, gates only with --strict]" }
                );
                if !c.pass {
                    eprintln!("{line}");
                } else if !opts.quiet {
                    println!("{line}");
                }
            }
            if !opts.quiet {
                println!(
                    "wrote {} files and run.json to {} ({})",
                    report.manifest.files.len(),
                    opts.out.display(),
                    report.manifest.status
                );
            }
            ExitCode::from(report.exit_code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
