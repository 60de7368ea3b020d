//! Command-line front end for the experiment runner.
//!
//! Each run subcommand executes one config, writes `config.toml`, the CSV
//! data files, and `manifest.json` into the output directory, prints every
//! manifest check, and exits 0 only when all checks pass (1 on failed
//! checks, 2 on usage or configuration errors). Configs come either from a
//! TOML file via `--config` or from the built-in registry via `--fixture`;
//! `--seed` overrides the config's seed and `--serial` forces the
//! single-threaded deterministic mode that the byte-reproducibility
//! guarantee refers to.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hadamard::experiment::{
    fixture, fixtures, run_config, run_orbit, ExperimentConfig, RunOutput,
};
use hadamard::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hadamard",
    version,
    about = "Deterministic experiments with nonexpansive dynamics on Hadamard spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a space for CAT(0) residuals, mean optimality, and separation.
    VerifySpace(RunArgs),
    /// Dump a raw orbit with its monotone-distance diagnostics.
    Orbit(RunArgs),
    /// Tabulate window means over an orbit and report their convergence.
    Ergodic(RunArgs),
    /// Search a trace for almost periods and measure its coverage net.
    AlmostPeriod(RunArgs),
    /// Integrate a monotone-field flow and check its continuous means.
    Flow(RunArgs),
    /// List the built-in fixtures with their descriptions.
    Fixtures,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (TOML).
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "fixture",
        required_unless_present = "fixture"
    )]
    config: Option<PathBuf>,
    /// Name of a built-in fixture (see the `fixtures` subcommand).
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
    /// Override the config's random seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output directory; defaults to runs/<fixture-or-config-name>.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Disable parallelism and warm starts for byte-stable reverification.
    #[arg(long)]
    serial: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (args, expected_kind) = match &cli.command {
        Command::Fixtures => {
            for f in fixtures() {
                println!("{:<26} {}", f.name, f.description);
            }
            return Ok(true);
        }
        Command::VerifySpace(args) => (args, Some("space-verify")),
        Command::Orbit(args) => (args, None),
        Command::Ergodic(args) => (args, Some("orbit-ergodic")),
        Command::AlmostPeriod(args) => (args, Some("almost-period")),
        Command::Flow(args) => (args, Some("flow-ergodic")),
    };

    let (mut config, label, fixture_name) = match (&args.config, &args.fixture) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|err| {
                Error::Config(format!("reading {}: {err}", path.display()))
            })?;
            let config = ExperimentConfig::from_toml(&text)?;
            let label = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("run")
                .to_string();
            (config, label, None)
        }
        (None, Some(name)) => (fixture(name)?.config, name.clone(), Some(name.as_str())),
        // Clap rejects both-or-neither before reaching here.
        _ => unreachable!("--config and --fixture are exclusive and one is required"),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(expected) = expected_kind {
        let actual = config.scenario.kind();
        if actual != expected {
            return Err(Error::Config(format!(
                "`{label}` holds a {actual} scenario; run it with the `{}` subcommand",
                subcommand_for(actual)
            )));
        }
    }

    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("runs").join(&label));
    let output = match &cli.command {
        Command::Orbit(_) => run_orbit(&config, fixture_name, &out_dir, args.serial)?,
        _ => run_config(&config, fixture_name, &out_dir, args.serial)?,
    };
    report(&label, &output);
    Ok(output.manifest.passed)
}

fn subcommand_for(kind: &str) -> &'static str {
    match kind {
        "space-verify" => "verify-space",
        "orbit-ergodic" => "ergodic",
        "almost-period" => "almost-period",
        "flow-ergodic" => "flow",
        _ => "fixtures",
    }
}

fn report(label: &str, output: &RunOutput) {
    let manifest = &output.manifest;
    println!(
        "{label}: {} scenario, seed {}, {:.3}s",
        manifest.scenario, manifest.seed, manifest.wall_time_seconds
    );
    for check in &manifest.checks {
        println!(
            "  [{}] {} = {:.6e} {} {:.6e}",
            if check.pass { "ok" } else { "FAIL" },
            check.name,
            check.value,
            check.op,
            check.threshold
        );
    }
    println!(
        "{}: {} checks, outputs in {}",
        if manifest.passed { "PASS" } else { "FAIL" },
        manifest.checks.len(),
        output.out_dir.display()
    );
}
