use eonsim::net::{load_topology, topology_from_edges, FiberSpec};

fn main() {
    // Sample topologies ship under data/; resolving against the manifest
    // directory keeps the example runnable from any working directory.
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/topologies/nsf14.json");
    let fiber = FiberSpec {
        cores: 4,
        slots_per_core: 320,
    };
    let topo = load_topology(path, fiber).expect("sample topology loads");

    println!(
        "{}: {} nodes, {} links, connected = {}",
        topo.name,
        topo.node_count(),
        topo.link_count(),
        topo.is_connected()
    );
    let first = topo.link(eonsim::net::LinkId(0));
    println!(
        "fiber: {} cores x {} slots per core, {:.0} km of deployed fiber",
        first.cores,
        first.slots_per_core,
        topo.total_length_km()
    );

    let longest = topo
        .links()
        .iter()
        .max_by(|a, b| a.length_km.total_cmp(&b.length_km))
        .unwrap();
    println!(
        "longest span: {} - {} at {:.0} km",
        topo.node_name(longest.src),
        topo.node_name(longest.dst),
        longest.length_km
    );

    // Adjacency is precomputed; each entry pairs the neighbor with the
    // link that reaches it.
    let hub = topo.node_id("05").unwrap();
    let neighbors: Vec<String> = topo
        .neighbors(hub)
        .iter()
        .map(|&(n, l)| format!("{} ({:.0} km)", topo.node_name(n), topo.link(l).length_km))
        .collect();
    println!("node 05 connects to: {}", neighbors.join(", "));

    // Topologies can also be declared inline; validation rejects parallel
    // links, self loops, unknown endpoints and nonpositive lengths.
    let triangle = topology_from_edges(
        "triangle",
        &["a", "b", "c"],
        &[("a", "b", 100.0), ("b", "c", 150.0), ("a", "c", 220.0)],
        FiberSpec {
            cores: 1,
            slots_per_core: 16,
        },
    )
    .expect("inline topology is valid");
    println!(
        "inline {}: {} nodes, {} links",
        triangle.name,
        triangle.node_count(),
        triangle.link_count()
    );

    let broken = topology_from_edges(
        "broken",
        &["a", "b"],
        &[("a", "b", -5.0)],
        FiberSpec::default(),
    );
    println!("negative length rejected: {}", broken.unwrap_err());
}
