use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use crprime_core::expand::{expand, Quantity, Surface};
use crprime_core::moser::Golden;
use crprime_core::suite::{run, Suite, SuiteConfig};

/// Verification driver for the pseudohermitian calculus engine.
#[derive(Parser)]
#[command(name = "crprime", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: all, moser, heisenberg, conformal, sphere.
    Run {
        suite: String,
        /// Truncation order of the graded computations.
        #[arg(long)]
        order: Option<u32>,
        /// Relative tolerance of the numerical integrals.
        #[arg(long)]
        tol: Option<f64>,
        /// Radial and angular quadrature nodes.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// File of `key = value` lines; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Golden expansion file replacing the bundled one.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Perturb E off normal form: none, weight4.
        #[arg(long)]
        perturb: Option<String>,
        /// Use 1/(2π ρ^{2k}) as the flat Green's function.
        #[arg(long)]
        green_power: Option<u32>,
        /// Drop checks whose id starts with this prefix (repeatable).
        #[arg(long)]
        skip: Vec<String>,
        /// Print wall time per suite to stderr.
        #[arg(long)]
        timings: bool,
    },
    /// Print a series or closed form.
    Expand {
        /// R, A, g, lambda, pe_tensor, szego.
        quantity: String,
        #[arg(long, default_value_t = 8)]
        order: u32,
        /// Random normal-form data from this seed; flat E = 0 if absent.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Malformed input; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

fn build_config(
    config: Option<PathBuf>,
    golden: Option<PathBuf>,
    overrides: Vec<(&str, Option<String>)>,
) -> Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    let mut pairs = Vec::new();
    if let Some(path) = config {
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
        pairs = SuiteConfig::parse_file(&text).map_err(usage)?;
    }
    let mut golden_path = golden;
    pairs.retain(|(k, v)| {
        if k == "golden" {
            golden_path.get_or_insert_with(|| PathBuf::from(v));
            false
        } else {
            true
        }
    });
    pairs.extend(overrides.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
    for (k, v) in pairs {
        cfg.set(&k, &v).map_err(usage)?;
    }
    if let Some(path) = golden_path {
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
        cfg.golden = Golden::parse(&text).map_err(usage)?;
        cfg.golden_source = path.display().to_string();
    }
    Ok(cfg)
}

fn main_inner(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { suite, order, tol, grid, seed, format, config, golden, perturb, green_power, skip, timings } => {
            let suite: Suite = suite.parse().map_err(usage)?;
            let cfg = build_config(
                config,
                golden,
                vec![
                    ("order", order.map(|x| x.to_string())),
                    ("tol", tol.map(|x| x.to_string())),
                    ("grid", grid.map(|x| x.to_string())),
                    ("seed", seed.map(|x| x.to_string())),
                    ("perturbation", perturb),
                    ("green_power", green_power.map(|x| x.to_string())),
                ],
            )?;
            let start = Instant::now();
            let mut report = run(suite, &cfg);
            if timings {
                eprintln!("{suite}: {:.2} s", start.elapsed().as_secs_f64());
            }
            if !skip.is_empty() {
                report.checks.retain(|c| !skip.iter().any(|p| c.id.starts_with(p.as_str())));
                report.config.insert("skip".into(), skip.join(","));
            }
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(report.all_passed())
        }
        Command::Expand { quantity, order, seed, format } => {
            let q: Quantity = quantity.parse().map_err(usage)?;
            if !(6..=16).contains(&order) {
                return Err(usage(format!("order {order} outside 6..=16")));
            }
            let surface = seed.map_or(Surface::Flat, Surface::Random);
            let e = expand(q, order, surface)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&e)?),
                Format::Text => print!("{}", e.to_text()),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
