//! Run-grid orchestration: every (load, seed) cell of an experiment
//! executes as an independent deterministic run, in parallel across a
//! thread pool, and the results merge in a fixed order so output files
//! are byte-identical regardless of schedule.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::SimConfig;
use crate::engine::{
    blocking_probability, mean_blocking, run_episodes, EngineError, PathAgent, RunStats,
};
use crate::net::Topology;
use crate::output::{write_table, EpisodeRow, ResultRow, RunDetailRow};
use crate::routing::RouteKind;

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("run failed at erlang {erlang}, seed index {seed_index}: {source}")]
    Run {
        erlang: f64,
        seed_index: usize,
        source: EngineError,
    },
    #[error("cannot write results: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to build a {jobs}-thread pool: {reason}")]
    Pool { jobs: usize, reason: String },
}

/// Human-readable identifier of the configured pipeline, used as the
/// `algorithm` metadata column.
pub fn algorithm_label(config: &SimConfig) -> String {
    let kind = match config.routing.kind {
        RouteKind::Sp => "sp".to_string(),
        RouteKind::Ksp => format!("ksp{}", config.routing.k),
        RouteKind::XtAware => format!("xta{}", config.routing.k),
    };
    let alloc = match config.allocation {
        crate::spectrum::FitPolicy::FirstFit => "ff",
        crate::spectrum::FitPolicy::BestFit => "bf",
        crate::spectrum::FitPolicy::LastFit => "lf",
    };
    let mut label = format!("{kind}-{alloc}");
    if config.core_order == crate::xt::CoreOrder::Prioritized {
        label.push_str("-pc");
    }
    if config.max_segments > 1 {
        label.push_str(&format!("-lss{}", config.max_segments));
    }
    if config.xt_check {
        label.push_str("-xt");
    }
    if let Some(kind) = config.agent.kind.kind() {
        let name = serde_json::to_value(kind).expect("agent kind serializes");
        label.push('-');
        label.push_str(name.as_str().expect("agent kind is a string"));
    }
    label
}

/// Everything a grid execution produces, merge-sorted by coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOutput {
    /// One row per load, seed-aggregated, ascending erlang.
    pub results: Vec<ResultRow>,
    /// One row per (load, seed) run.
    pub runs: Vec<RunDetailRow>,
    /// Seed-averaged blocking per episode; empty for one-episode runs.
    pub episodes: Vec<EpisodeRow>,
}

struct CellOutcome {
    series: Vec<RunStats>,
}

fn run_cell(
    config: &SimConfig,
    topology: &Topology,
    erlang: f64,
    seed_index: usize,
) -> Result<CellOutcome, SweepError> {
    let run_seed = config.run_seed(seed_index);
    let engine_cfg = config.engine_config(erlang, run_seed);
    let mut agent = config
        .agent_params(run_seed)
        .map(|p| PathAgent::new(p, engine_cfg.effective_k()));
    let series = run_episodes(
        topology,
        &engine_cfg,
        config.agent.episodes,
        agent.as_mut(),
    )
    .map_err(|source| SweepError::Run {
        erlang,
        seed_index,
        source,
    })?;
    Ok(CellOutcome { series })
}

/// Execute the whole (loads x seeds) grid. `jobs` bounds the worker
/// threads; `None` uses the global pool.
pub fn run_grid(
    config: &SimConfig,
    topology: &Topology,
    jobs: Option<usize>,
) -> Result<GridOutput, SweepError> {
    let mut erlangs = config.erlangs();
    erlangs.sort_by(f64::total_cmp);
    let seeds = config.traffic.seeds;
    let cells: Vec<(f64, usize)> = erlangs
        .iter()
        .flat_map(|&e| (0..seeds).map(move |s| (e, s)))
        .collect();

    let execute = || -> Result<Vec<CellOutcome>, SweepError> {
        cells
            .par_iter()
            .map(|&(erlang, seed_index)| run_cell(config, topology, erlang, seed_index))
            .collect()
    };
    let outcomes = match jobs {
        None => execute()?,
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| SweepError::Pool {
                    jobs: n,
                    reason: e.to_string(),
                })?;
            pool.install(execute)?
        }
    };

    let label = algorithm_label(config);
    let episodes = config.agent.episodes;
    let mut results = Vec::with_capacity(erlangs.len());
    let mut runs = Vec::with_capacity(cells.len());
    let mut episode_rows = Vec::new();

    for (load_idx, &erlang) in erlangs.iter().enumerate() {
        let cell_slice = &outcomes[load_idx * seeds..(load_idx + 1) * seeds];
        let per_seed_bp: Vec<f64> = cell_slice
            .iter()
            .map(|c| mean_blocking(&c.series))
            .collect();
        results.push(ResultRow {
            erlang,
            blocking: per_seed_bp.iter().sum::<f64>() / seeds as f64,
            algorithm: label.clone(),
            seed_count: seeds,
            cores: config.cores,
            max_segments: config.max_segments,
        });
        for (seed_index, cell) in cell_slice.iter().enumerate() {
            let total: usize = cell.series.iter().map(|s| s.total_requests).sum();
            let blocked: usize = cell.series.iter().map(|s| s.blocked).sum();
            let (mut nr, mut ns, mut nx) = (0, 0, 0);
            for s in &cell.series {
                nr += s.reasons.no_route;
                ns += s.reasons.no_spectrum;
                nx += s.reasons.xt_threshold;
            }
            runs.push(RunDetailRow {
                erlang,
                blocking: per_seed_bp[seed_index],
                algorithm: label.clone(),
                seed_index,
                seed: config.run_seed(seed_index),
                episodes,
                total_requests: total,
                blocked,
                no_route: nr,
                no_spectrum: ns,
                xt_threshold: nx,
            });
        }
        if episodes > 1 {
            for ep in 0..episodes {
                let mean = cell_slice
                    .iter()
                    .map(|c| blocking_probability(&c.series[ep]))
                    .sum::<f64>()
                    / seeds as f64;
                episode_rows.push(EpisodeRow {
                    erlang,
                    blocking: mean,
                    algorithm: label.clone(),
                    seed_count: seeds,
                    episode: ep,
                });
            }
        }
    }

    Ok(GridOutput {
        results,
        runs,
        episodes: episode_rows,
    })
}

/// Run the grid and write every table plus the effective config under
/// `out_dir`. Returns the written paths.
pub fn execute(
    config: &SimConfig,
    topology: &Topology,
    out_dir: &Path,
    jobs: Option<usize>,
) -> Result<Vec<PathBuf>, SweepError> {
    let grid = run_grid(config, topology, jobs)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let formats = &config.output.formats;
    written.extend(write_table(&grid.results, out_dir, "results", formats)?);
    written.extend(write_table(&grid.runs, out_dir, "runs", formats)?);
    if !grid.episodes.is_empty() {
        written.extend(write_table(&grid.episodes, out_dir, "episodes", formats)?);
    }
    let echo = out_dir.join("effective_config.json");
    std::fs::write(&echo, config.to_json_pretty())?;
    written.push(echo);
    Ok(written)
}
