use eonsim::engine::{
    blocking_probability, run, run_episodes, AgentKind, AgentParams, EngineConfig, PathAgent,
};
use eonsim::net::{load_topology, FiberSpec};
use eonsim::rng::{substream, STREAM_AGENT};
use eonsim::routing::RoutePolicy;
use eonsim::slicing::SliceConfig;
use eonsim::spectrum::{FitPolicy, ReachTable};
use eonsim::traffic::{default_bandwidths, TrafficConfig};
use eonsim::xt::{CoreOrder, CrosstalkParams};

fn main() {
    // Six nodes on a 300 km ring plus three 1000 km cross links. Distance-
    // ranked candidates put both ring arcs ahead of the direct chord, so a
    // greedy first-fit baseline keeps loading the ring; an agent can learn
    // when the chord is the better action.
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/topologies/ring6.json");
    let topo = load_topology(
        path,
        FiberSpec {
            cores: 4,
            slots_per_core: 20,
        },
    )
    .unwrap();

    let cfg = EngineConfig {
        traffic: TrafficConfig {
            arrival_rate: 45.0 / 7.0, // 45 Erlang offered
            mean_holding: 7.0,
            num_requests: 2000,
            bandwidth_choices: default_bandwidths(),
            seed: 1,
        },
        route: RoutePolicy::default(), // three distance-ranked candidates
        fit: FitPolicy::FirstFit,
        core_order: CoreOrder::Index,
        slice: SliceConfig::default(),
        xt: CrosstalkParams::default(),
        reach: ReachTable::default(),
        slot_width_ghz: 12.5,
        guard_slots: 0,
        warmup_requests: 0,
    };

    // Without an agent the engine falls through the candidate list.
    let baseline = run(&topo, &cfg, None).unwrap();
    println!(
        "baseline ksp-3 first-fit: blocking {:.4} ({} of {} requests)",
        blocking_probability(&baseline),
        baseline.blocked,
        baseline.total_requests
    );

    // With an agent, each request commits to the single chosen candidate
    // and the outcome becomes the reward. Tables persist across episodes;
    // every episode replays a freshly seeded request stream.
    let params = AgentParams {
        kind: AgentKind::QLearning,
        gamma: 0.5,
        epsilon: 0.02,
        seed: substream(cfg.traffic.seed, &[STREAM_AGENT]),
        ..AgentParams::default()
    };
    let mut agent = PathAgent::new(params, cfg.effective_k());
    let episodes = 40;
    let series = run_episodes(&topo, &cfg, episodes, Some(&mut agent)).unwrap();

    println!("\nq-learning, {episodes} episodes (blocking per 5-episode window):");
    for window in series.chunks(5).enumerate() {
        let (i, chunk) = window;
        let mean: f64 =
            chunk.iter().map(blocking_probability).sum::<f64>() / chunk.len() as f64;
        println!("  episodes {:>2}-{:<2} {mean:.4}", i * 5, i * 5 + chunk.len() - 1);
    }

    // The learned row for one source-destination pair: action 2 is the
    // 1000 km chord, actions 0 and 1 the two 900 km ring arcs.
    let a = topo.node_id("A").unwrap();
    let d = topo.node_id("D").unwrap();
    let row = agent.q_table().row(&(a, d));
    println!("\nq values for A -> D: {:?}", row.iter().map(|q| (q * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!("greedy action: {}", agent.q_table().greedy(&(a, d)));
}
