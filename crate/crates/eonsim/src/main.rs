//! Batch CLI over the library: execute a configured run grid, validate
//! a config, or summarize a topology file. Exit codes: 0 success, 1
//! configuration problem, 2 run abort.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use eonsim::config::{parse_config, resolve_topology_path, OutputFormat, SimConfig};
use eonsim::net::{load_topology, FiberSpec};
use eonsim::sweep::{algorithm_label, execute, SweepError};

#[derive(Parser)]
#[command(name = "eonsim", version, about = "Elastic optical network simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every (load, seed) run of an experiment and write results.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the load axis (comma-separated Erlang values).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        erlangs: Option<Vec<f64>>,
        /// Override the number of seeds aggregated per load.
        #[arg(long)]
        seeds: Option<usize>,
        /// Output directory (overrides EONSIM_OUT and the config).
        #[arg(long)]
        out: Option<String>,
        /// Output formats, e.g. `csv,json`.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        format: Option<Vec<String>>,
        /// Worker threads for the run grid (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Parse a config, apply defaults, and preflight the topology.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize a topology file.
    TopologyInfo { path: PathBuf },
}

enum CliError {
    /// Bad configuration or input files (exit 1).
    Config(String),
    /// A run started and failed (exit 2).
    Abort(String),
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Abort(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            erlangs,
            seeds,
            out,
            format,
            jobs,
        } => run_command(&config, erlangs, seeds, out, format, jobs),
        Command::Validate { config } => validate_command(&config),
        Command::TopologyInfo { path } => topology_info(&path),
    }
}

/// Merge CLI flags (and EONSIM_OUT) into the file config; flags win.
fn apply_overrides(
    config: &mut SimConfig,
    erlangs: Option<Vec<f64>>,
    seeds: Option<usize>,
    out: Option<String>,
    format: Option<Vec<String>>,
) -> Result<(), CliError> {
    if let Some(list) = erlangs {
        config.traffic.erlangs = Some(list);
        config.traffic.arrival_rate = None;
    }
    if let Some(n) = seeds {
        config.traffic.seeds = n;
    }
    match out {
        Some(dir) => config.output.dir = dir,
        None => {
            if let Ok(dir) = std::env::var("EONSIM_OUT") {
                if !dir.is_empty() {
                    config.output.dir = dir;
                }
            }
        }
    }
    if let Some(names) = format {
        let mut formats = Vec::new();
        for name in names {
            match name.as_str() {
                "csv" => formats.push(OutputFormat::Csv),
                "json" => formats.push(OutputFormat::Json),
                other => {
                    return Err(CliError::Config(format!(
                        "unknown format `{other}` (expected csv or json)"
                    )))
                }
            }
        }
        config.output.formats = formats;
    }
    config.validate().map_err(config_err)
}

fn load_for(config_path: &Path, config: &SimConfig) -> Result<eonsim::Topology, CliError> {
    let topo_path = resolve_topology_path(config_path, config);
    load_topology(
        &topo_path,
        FiberSpec {
            cores: config.cores,
            slots_per_core: config.slots_per_core,
        },
    )
    .map_err(|e| CliError::Config(format!("{}: {e}", topo_path.display())))
}

fn run_command(
    config_path: &Path,
    erlangs: Option<Vec<f64>>,
    seeds: Option<usize>,
    out: Option<String>,
    format: Option<Vec<String>>,
    jobs: Option<usize>,
) -> Result<(), CliError> {
    let mut config = parse_config(config_path).map_err(config_err)?;
    apply_overrides(&mut config, erlangs, seeds, out, format)?;
    let topology = load_for(config_path, &config)?;
    let out_dir = PathBuf::from(&config.output.dir);
    let written = execute(&config, &topology, &out_dir, jobs).map_err(|e| match e {
        SweepError::Run { .. } | SweepError::Io(_) | SweepError::Pool { .. } => {
            CliError::Abort(e.to_string())
        }
    })?;
    println!(
        "{} ({} loads x {} seeds) on {}:",
        algorithm_label(&config),
        config.erlangs().len(),
        config.traffic.seeds,
        topology.name
    );
    for path in written {
        println!("  {}", path.display());
    }
    Ok(())
}

fn validate_command(config_path: &Path) -> Result<(), CliError> {
    let config = parse_config(config_path).map_err(config_err)?;
    let topology = load_for(config_path, &config)?;
    println!(
        "config ok: {} on {} ({} nodes, {} links), {} loads x {} seeds, {} requests per run",
        algorithm_label(&config),
        topology.name,
        topology.node_count(),
        topology.link_count(),
        config.erlangs().len(),
        config.traffic.seeds,
        config.traffic.num_requests,
    );
    Ok(())
}

fn topology_info(path: &Path) -> Result<(), CliError> {
    let topology = load_topology(path, FiberSpec::default())
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let lengths: Vec<f64> = topology.links().iter().map(|l| l.length_km).collect();
    let min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    let max = lengths.iter().copied().fold(0.0_f64, f64::max);
    println!("name: {}", topology.name);
    println!("nodes: {}", topology.node_count());
    println!("links: {}", topology.link_count());
    println!(
        "connected: {}",
        if topology.is_connected() { "yes" } else { "no" }
    );
    println!("total fiber: {} km", topology.total_length_km());
    if !lengths.is_empty() {
        println!("link length: {min} km min, {max} km max");
    }
    Ok(())
}
