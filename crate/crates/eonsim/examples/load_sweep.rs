use eonsim::config::SimConfig;
use eonsim::net::{load_topology, FiberSpec};
use eonsim::output::to_csv;
use eonsim::sweep::{algorithm_label, run_grid};

fn main() {
    // The same JSON the CLI consumes; unknown keys are rejected and every
    // omitted field takes its documented default.
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/topologies/nsf14.json");
    let json = format!(
        r#"{{
        "topology_path": {path:?},
        "cores": 4,
        "slots_per_core": 40,
        "routing": {{"kind": "ksp", "k": 3}},
        "traffic": {{
            "erlangs": [60, 120, 180],
            "mean_holding": 10.0,
            "num_requests": 2000,
            "seeds": 3,
            "seed": 7
        }},
        "output": {{"dir": "results", "formats": ["csv"]}}
    }}"#
    );
    let config: SimConfig = serde_json::from_str(&json).unwrap();
    config.validate().unwrap();
    println!("algorithm: {}", algorithm_label(&config));
    let topo = load_topology(
        path,
        FiberSpec {
            cores: config.cores,
            slots_per_core: config.slots_per_core,
        },
    )
    .unwrap();

    // Cells (load x seed) run in parallel; results come back aggregated
    // and ordered, independent of the thread schedule.
    let grid = run_grid(&config, &topo, None).unwrap();
    println!("\nblocking vs offered load (mean over 3 seeds):");
    for row in &grid.results {
        println!("  {:>4.0} Erlang  {:.4}", row.erlang, row.blocking);
    }

    println!("\nper-seed detail, highest load:");
    for run in grid.runs.iter().filter(|r| r.erlang == 180.0) {
        println!(
            "  seed[{}] = {:<10} blocked {:>3} of {} ({} route, {} spectrum)",
            run.seed_index, run.seed, run.blocked, run.total_requests, run.no_route, run.no_spectrum
        );
    }

    // The CSV emitted by the CLI is the same serialization.
    println!("\nresults.csv:\n{}", to_csv(&grid.results));

    let again = run_grid(&config, &topo, Some(1)).unwrap();
    println!(
        "single-threaded rerun byte-identical: {}",
        to_csv(&again.results) == to_csv(&grid.results)
    );
}
