#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod analysis;
mod config;
mod error;
mod output;
mod scenario;
mod validate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Mode, Scenario};
use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "fcurve", version, about = "Forward-curve simulation and analytics")]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario file (TOML or JSON) or the name of a built-in scenario.
    #[arg(long)]
    config: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    paths: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate paths and write surfaces.csv, spot.csv, forwards.csv, summary.json.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Spatial correlations of the driving noise at the configured points.
    Corr {
        #[arg(long)]
        config: String,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Riesz-basis coefficients of the initial curve.
    Basis {
        #[arg(long)]
        config: String,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Static checks of a scenario.
    Validate {
        #[arg(long)]
        config: String,
    },
    /// Runs the acceptance criteria and writes their summary.
    Check {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = "fcurve-check")]
        out: PathBuf,
    },
}

const SIM_FILES: [&str; 4] = ["surfaces.csv", "spot.csv", "forwards.csv", "summary.json"];

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Numerical(format!("summary serialization: {e}")))
}

fn load_valid(source: &str) -> Result<Scenario> {
    let s = Scenario::load(source)?;
    let issues = validate::validate_config(&s);
    if issues.is_empty() {
        Ok(s)
    } else {
        Err(CliError::Config(issues.join("; ")))
    }
}

fn simulate(run: &RunArgs, out: &Path) -> Result<()> {
    let mut s = load_valid(&run.config)?;
    if let Some(p) = run.paths {
        s.config.run.n_paths = p;
    }
    if s.config.run.n_paths < 2 {
        return Err(CliError::Config(format!("--paths {} must be at least 2", s.config.run.n_paths)));
    }
    let seed = run.seed.unwrap_or(s.config.run.seed);
    let mode = run.mode.unwrap_or(s.config.run.mode);
    let res = scenario::simulate(&s, seed, s.config.run.n_paths, mode);
    let sim = match res {
        Ok(v) => v,
        Err(e) => {
            output::mark_failed(out, &SIM_FILES, &e.to_string())?;
            return Err(e);
        }
    };
    let summary = to_json(&sim.summary)?;
    let broken: Vec<&str> =
        sim.summary.invariants.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if !broken.is_empty() {
        output::mark_failed(out, &SIM_FILES, &summary)?;
        return Err(CliError::Invariant(broken.join(", ")));
    }
    output::commit(
        out,
        &[
            ("surfaces.csv", sim.surfaces_csv),
            ("spot.csv", sim.spot_csv),
            ("forwards.csv", sim.forwards_csv),
            ("summary.json", summary),
        ],
    )?;
    if let Some(m) = &sim.summary.martingale {
        for d in m {
            eprintln!("martingale T={}: max |z| = {:.3}", d.maturity, d.max_abs_z);
        }
    }
    Ok(())
}

fn write_single(out: &Path, body: String) -> Result<()> {
    let dir = out.parent().filter(|p| !p.as_os_str().is_empty()).map_or_else(|| PathBuf::from("."), PathBuf::from);
    let name = out
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::Config(format!("--out {} is not a file name", out.display())))?;
    output::commit(&dir, &[(name, body)])
}

fn check(seed: u64, out: &Path) -> Result<()> {
    let reports = fcurve_check::run_all(seed);
    for r in &reports {
        println!("{}", r.line());
        for n in &r.notes {
            println!("    {n}");
        }
    }
    let summary = serde_json::json!({ "seed": seed, "criteria": reports });
    output::commit(out, &[("summary.json", to_json(&summary)?)])?;
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("criteria {} failed", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads {n}: {e}")))?;
    }
    match cli.command {
        Command::Simulate { run, out } => simulate(&run, &out),
        Command::Corr { config, out } => {
            let s = load_valid(&config)?;
            let (csv, notes) = analysis::correlation_csv(&s)?;
            write_single(&out, csv)?;
            if notes.is_empty() {
                Ok(())
            } else {
                Err(CliError::Invariant(notes.join("; ")))
            }
        }
        Command::Basis { config, out } => {
            let s = load_valid(&config)?;
            let (csv, info) = analysis::basis_csv(&s)?;
            eprintln!("{info}");
            write_single(&out, csv)
        }
        Command::Validate { config } => {
            let s = Scenario::load(&config)?;
            let issues = validate::validate_config(&s);
            if issues.is_empty() {
                println!("ok: no issues");
                Ok(())
            } else {
                for i in &issues {
                    println!("{i}");
                }
                Err(CliError::Config(format!("{} issue(s)", issues.len())))
            }
        }
        Command::Check { seed, out } => check(seed, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fcurve: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
