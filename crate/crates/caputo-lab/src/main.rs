//! `caputo-lab`: run named fractional-calculus experiments and emit
//! machine-readable results.

use caputo_lab::experiments::{self, Experiment, ExperimentConfig};
use caputo_lab::sequence_space::NormFlavor;
use clap::{Args, Parser, Subcommand};
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "caputo-lab", version, about = "Fractional calculus experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named experiment and write results.json, CSV curves and a
    /// manifest into the output directory.
    Run(RunArgs),
    /// List the available experiments.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment name (see `caputo-lab list`).
    #[arg(long)]
    experiment: Option<Experiment>,
    /// Fractional order, strictly inside (0,1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Truncation dimension N of the sequence space.
    #[arg(long)]
    truncation: Option<usize>,
    /// Norm flavor: sup | euclid.
    #[arg(long)]
    flavor: Option<NormFlavor>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory for results.json, CSVs and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional key=value config file; command-line flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {} is not key=value: {line:?}", i + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn resolve(args: &RunArgs) -> Result<ExperimentConfig, String> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };
    let from_file = |key: &str| file.get(key).cloned();
    let experiment = match &args.experiment {
        Some(e) => *e,
        None => from_file("experiment")
            .ok_or("missing --experiment")?
            .parse()?,
    };
    let alpha = match args.alpha {
        Some(a) => a,
        None => from_file("alpha")
            .unwrap_or_else(|| "0.5".into())
            .parse()
            .map_err(|e| format!("bad alpha: {e}"))?,
    };
    let truncation_n = match args.truncation {
        Some(n) => n,
        None => from_file("truncation")
            .unwrap_or_else(|| "24".into())
            .parse()
            .map_err(|e| format!("bad truncation: {e}"))?,
    };
    let flavor = match args.flavor {
        Some(f) => f,
        None => from_file("flavor")
            .unwrap_or_else(|| "euclid".into())
            .parse()?,
    };
    let quad_tol = match args.tol {
        Some(t) => t,
        None => from_file("tol")
            .unwrap_or_else(|| "1e-8".into())
            .parse()
            .map_err(|e| format!("bad tol: {e}"))?,
    };
    let output_dir = match &args.out {
        Some(p) => p.clone(),
        None => from_file("out").map(PathBuf::from).ok_or("missing --out")?,
    };
    Ok(ExperimentConfig {
        alpha,
        truncation_n,
        flavor,
        quad_tol,
        output_dir,
        experiment,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            print!("{}", experiments::list_experiments());
            ExitCode::SUCCESS
        }
        Command::Run(args) => {
            let config = match resolve(&args) {
                Ok(c) => c,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(2);
                }
            };
            match experiments::run(&config) {
                Ok(true) => {
                    println!("{}: all checks passed", config.experiment);
                    ExitCode::SUCCESS
                }
                Ok(false) => {
                    eprintln!("{}: checks FAILED (see results.json)", config.experiment);
                    ExitCode::FAILURE
                }
                Err(err) => {
                    // machine-readable failure record
                    let record = serde_json::json!({
                        "experiment": config.experiment.name(),
                        "pass": false,
                        "error": err.to_string(),
                    });
                    if std::fs::create_dir_all(&config.output_dir).is_ok() {
                        let _ = std::fs::write(
                            config.output_dir.join("results.json"),
                            serde_json::to_string_pretty(&record).unwrap_or_default(),
                        );
                    }
                    eprintln!("error: {err}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
