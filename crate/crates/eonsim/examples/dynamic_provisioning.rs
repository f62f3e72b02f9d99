use eonsim::engine::{blocking_probability, run, EngineConfig};
use eonsim::net::{topology_from_edges, FiberSpec};
use eonsim::routing::RoutePolicy;
use eonsim::slicing::SliceConfig;
use eonsim::spectrum::{FitPolicy, ReachTable};
use eonsim::traffic::{default_bandwidths, TrafficConfig};
use eonsim::xt::{CoreOrder, CrosstalkParams};

fn main() {
    // A deliberately tight triangle: every request competes for the same
    // few slots, so departures freeing spectrum matter constantly.
    let topo = topology_from_edges(
        "triangle",
        &["a", "b", "c"],
        &[("a", "b", 300.0), ("b", "c", 300.0), ("a", "c", 300.0)],
        FiberSpec {
            cores: 4,
            slots_per_core: 8,
        },
    )
    .unwrap();

    let mut cfg = EngineConfig {
        traffic: TrafficConfig {
            arrival_rate: 10.0,
            mean_holding: 2.0,
            num_requests: 5000,
            bandwidth_choices: default_bandwidths(),
            seed: 3,
        },
        route: RoutePolicy::default(),
        fit: FitPolicy::FirstFit,
        core_order: CoreOrder::Index,
        slice: SliceConfig::default(),
        xt: CrosstalkParams::default(),
        reach: ReachTable::default(),
        slot_width_ghz: 12.5,
        guard_slots: 0,
        warmup_requests: 0,
    };

    // The run interleaves arrivals and departures in event order; at the
    // end the engine audits that every slot was handed back.
    let stats = run(&topo, &cfg, None).unwrap();
    println!(
        "20 Erlang on a 4x8 triangle: blocking {:.4} ({} of {})",
        blocking_probability(&stats),
        stats.blocked,
        stats.total_requests
    );
    println!(
        "  reasons: {} no spectrum, {} no route, {} crosstalk",
        stats.reasons.no_spectrum, stats.reasons.no_route, stats.reasons.xt_threshold
    );

    // Placement policy shifts the blocking a little on a fragmented grid.
    println!("\nfit policy comparison:");
    for fit in [FitPolicy::FirstFit, FitPolicy::BestFit, FitPolicy::LastFit] {
        cfg.fit = fit;
        let s = run(&topo, &cfg, None).unwrap();
        println!("  {fit:?}: {:.4}", blocking_probability(&s));
    }
    cfg.fit = FitPolicy::FirstFit;

    // Warmup requests are simulated but left out of the counters, cutting
    // the empty-network bias at the start of the stream.
    cfg.warmup_requests = 500;
    let warmed = run(&topo, &cfg, None).unwrap();
    println!(
        "\nwith 500 warmup arrivals: blocking {:.4} over the remaining {}",
        blocking_probability(&warmed),
        warmed.total_requests
    );
}
