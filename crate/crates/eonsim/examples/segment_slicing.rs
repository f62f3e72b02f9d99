use eonsim::net::{topology_from_edges, FiberSpec, LinkId};
use eonsim::routing::{shortest_path, RouteWeight};
use eonsim::slicing::{provision_with_slicing, rollback, ProvisionParams, SliceConfig};
use eonsim::spectrum::{FitPolicy, LightpathId, ReachTable, SlotRange, SpectrumGrid};
use eonsim::traffic::Request;
use eonsim::xt::{CoreLayout, CrosstalkParams};

fn mask(grid: &SpectrumGrid) -> String {
    grid.free_mask(&[LinkId(0)], 0)
        .iter()
        .map(|&f| if f { '.' } else { '#' })
        .collect()
}

fn main() {
    let topo = topology_from_edges(
        "pair",
        &["a", "b"],
        &[("a", "b", 400.0)],
        FiberSpec {
            cores: 1,
            slots_per_core: 8,
        },
    )
    .unwrap();
    let mut grid = SpectrumGrid::new(&topo);
    let candidates = vec![shortest_path(&topo, topo.node_id("a").unwrap(), topo.node_id("b").unwrap(), RouteWeight::Km).unwrap()];

    // Fragment the core: free slots are 0-1 and 4-5, nothing wider.
    grid.allocate(LightpathId { request: 800, segment: 0 }, &[LinkId(0)], 0, SlotRange::new(2, 2)).unwrap();
    grid.allocate(LightpathId { request: 801, segment: 0 }, &[LinkId(0)], 0, SlotRange::new(6, 2)).unwrap();
    println!("fragmented core: {}", mask(&grid));

    // 200 Gb/s at 400 km rides 16QAM: 4 contiguous slots whole, or two
    // 100 Gb/s halves needing 2 slots each.
    let request = Request {
        id: 1,
        src: topo.node_id("a").unwrap(),
        dst: topo.node_id("b").unwrap(),
        bandwidth_gbps: 200.0,
        arrival_time: 0.0,
        holding_time: 1.0,
    };
    let reach = ReachTable::default();
    let layout = CoreLayout::new(1).unwrap();
    let core_order = [0usize];
    let mut params = ProvisionParams {
        topology: &topo,
        reach_table: &reach,
        slot_width_ghz: 12.5,
        guard_slots: 0,
        policy: FitPolicy::FirstFit,
        core_order: &core_order,
        slice: SliceConfig { max_segments: 1, xt_check: false },
        xt_params: &CrosstalkParams::default(),
        layout: &layout,
    };

    let whole = provision_with_slicing(&request, &candidates, &mut grid, &params);
    println!("max_segments 1: blocked ({:?})", whole.unwrap_err());

    // Splitting levels go 1, 2, 4, ... up to the cap; the request lands at
    // the first level where every part places.
    params.slice.max_segments = 2;
    let segments = provision_with_slicing(&request, &candidates, &mut grid, &params).unwrap();
    println!("max_segments 2: placed as {} light segments", segments.len());
    for s in &segments {
        println!(
            "  part {}: {:.0} Gb/s on {} slots {}..{}",
            s.seg_index,
            s.bandwidth_gbps,
            s.modulation.name,
            s.range.start,
            s.range.end()
        );
    }
    println!("grid now      : {}", mask(&grid));

    rollback(&mut grid, &segments).unwrap();
    println!("after release : {}", mask(&grid));

    // A failed attempt never leaves partial placements behind: with slot 5
    // also taken only one half fits, so the level is rolled back whole.
    grid.allocate(LightpathId { request: 802, segment: 0 }, &[LinkId(0)], 0, SlotRange::new(5, 1)).unwrap();
    let before = mask(&grid);
    let blocked = provision_with_slicing(&request, &candidates, &mut grid, &params);
    println!("\ntighter core  : {before}");
    println!("second attempt: blocked ({:?}), grid unchanged = {}", blocked.unwrap_err(), mask(&grid) == before);
    grid.audit().unwrap();
}
