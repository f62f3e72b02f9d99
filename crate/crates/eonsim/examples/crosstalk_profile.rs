use eonsim::net::{topology_from_edges, FiberSpec, LinkId};
use eonsim::spectrum::{LightpathId, SlotRange, SpectrumGrid};
use eonsim::xt::{
    aggregate_path_xt_load, link_xt_term, path_xt, range_xt_ok, CoreLayout, CrosstalkParams,
};

fn main() {
    // Per-link coupling grows with length and saturates: tanh(h * L).
    let h = 2e-5;
    println!("coupling term, h = {h:e}:");
    for km in [50.0, 200.0, 800.0, 3200.0, 12800.0, 100_000.0] {
        println!("  {:>8.0} km  {:.6}", km, link_xt_term(h, km));
    }

    // Seven cores sit in a hex ring around a center. The center neighbors
    // all six others, so filling it last (prioritized order) delays
    // crosstalk onto every ring core.
    let layout = CoreLayout::new(7).unwrap();
    println!("\n7-core layout:");
    for core in 0..layout.cores() {
        println!(
            "  core {core}: degree {} adjacent {:?}",
            layout.degree(core),
            layout.adjacent(core)
        );
    }
    println!("prioritized fill order: {:?}", layout.prioritized_order());

    // Crosstalk onto a candidate placement counts, per link, one coupling
    // term for each adjacent core occupied at the same slot.
    let topo = topology_from_edges(
        "pair",
        &["a", "b"],
        &[("a", "b", 1000.0)],
        FiberSpec {
            cores: 7,
            slots_per_core: 8,
        },
    )
    .unwrap();
    let mut grid = SpectrumGrid::new(&topo);
    let link = [LinkId(0)];
    let params = CrosstalkParams {
        h,
        xt_threshold: 0.025,
    };

    // Occupy two ring neighbors of core 1 at slot 0.
    for (req, core) in [(1u64, 2usize), (2, 6)] {
        grid.allocate(
            LightpathId { request: req, segment: 0 },
            &link,
            core,
            SlotRange::new(0, 1),
        )
        .unwrap();
    }
    let seen = path_xt(&grid, &topo, &params, &layout, &link, 1, 0);
    println!(
        "\ncore 1 slot 0 sees {} occupied neighbors: xt = {:.6} (threshold {})",
        2, seen, params.xt_threshold
    );
    println!(
        "admit on core 1: {}",
        range_xt_ok(&grid, &topo, &params, &layout, &link, 1, SlotRange::new(0, 1))
    );
    println!(
        "admit on core 4 (no occupied neighbors): {}",
        range_xt_ok(&grid, &topo, &params, &layout, &link, 4, SlotRange::new(0, 1))
    );

    // The aggregate load feeds crosstalk-aware routing: a single mean
    // pressure number per candidate path, cheap to compare.
    println!(
        "aggregate path pressure: {:.6}",
        aggregate_path_xt_load(&grid, &topo, &params, &layout, &link)
    );
}
