use eonsim::net::{load_topology, FiberSpec};
use eonsim::routing::{k_shortest_paths, shortest_path, RouteWeight};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/topologies/nsf14.json");
    let topo = load_topology(path, FiberSpec::default()).unwrap();

    let src = topo.node_id("01").unwrap();
    let dst = topo.node_id("13").unwrap();

    let best = shortest_path(&topo, src, dst, RouteWeight::Km).unwrap();
    println!(
        "shortest 01 -> 13 by distance: {}  ({:.0} km, {} hops)",
        best.display(&topo),
        best.length_km,
        best.hops
    );

    // Yen's algorithm returns loopless alternatives in ascending weight;
    // the k = n list is always a prefix of the k = n + 1 list.
    println!("\nfive shortest by distance:");
    for p in k_shortest_paths(&topo, src, dst, 5, RouteWeight::Km).unwrap() {
        println!("  {:>6.0} km  {} hops  {}", p.length_km, p.hops, p.display(&topo));
    }

    // Hop weighting often prefers longer fibers over more transits.
    println!("\nfive shortest by hop count:");
    for p in k_shortest_paths(&topo, src, dst, 5, RouteWeight::Hops).unwrap() {
        println!("  {} hops  {:>6.0} km  {}", p.hops, p.length_km, p.display(&topo));
    }

    // Asking for more paths than exist just returns all of them.
    let many = k_shortest_paths(&topo, src, dst, 1000, RouteWeight::Km).unwrap();
    println!("\nloopless 01 -> 13 paths found at k = 1000: {}", many.len());
}
