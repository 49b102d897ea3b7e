use clap::{Parser, Subcommand};
use randbridge_cli::{density, filter, simulate, verify, CliError, Config};
use std::path::PathBuf;
use std::process::ExitCode;

/// Brownian bridges with random length and pin: simulation, densities,
/// filtering and verification.
#[derive(Debug, Parser)]
#[command(name = "randbridge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of simulated paths.
    #[arg(long, global = true)]
    paths: Option<usize>,
    /// Verification suite; repeat for several, `all` for every suite.
    #[arg(long, global = true)]
    suite: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate paths to CSV.
    Simulate,
    /// Evaluate a density query to JSON.
    Density,
    /// Filter an observation CSV with columns `t,value`.
    Filter {
        #[arg(long)]
        observations: Option<PathBuf>,
    },
    /// Run verification suites; exits with 1 if any case fails.
    Verify,
    /// Write the three canonical path sets.
    Figures,
}

fn load(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(paths) = cli.paths {
        cfg.simulate.paths = paths;
    }
    if !cli.suite.is_empty() {
        cfg.verify.suites = cli.suite.clone();
    }
    if let Command::Filter { observations: Some(obs) } = &cli.command {
        cfg.filter.observations = Some(obs.clone());
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = load(cli)?;
    match cli.command {
        Command::Simulate => {
            let path = simulate::run(&cfg)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Density => {
            let path = density::run(&cfg)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Filter { .. } => {
            let path = filter::run(&cfg)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Figures => {
            for path in simulate::figures(&cfg)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Verify => {
            let outcome = verify::run(&cfg)?;
            let mut failed = Vec::new();
            for (report, secs) in outcome.reports.iter().zip(&outcome.runtimes) {
                let status = if report.passed() { "PASS" } else { "FAIL" };
                eprintln!("{status} {} ({} cases, {secs:.1} s)", report.suite, report.cases.len());
                for case in report.failures() {
                    eprintln!(
                        "  failed: {} (estimate {}, reference {}, z {})",
                        case.name, case.estimate, case.reference, case.z
                    );
                }
                if !report.passed() {
                    failed.push(report.suite.clone());
                }
            }
            if !failed.is_empty() {
                return Err(CliError::Verification(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
