use eonsim::net::{topology_from_edges, FiberSpec, LinkId};
use eonsim::spectrum::{
    select_modulation, slots_needed, FitPolicy, LightpathId, ReachTable, SlotRange, SpectrumGrid,
};

fn mask_string(grid: &SpectrumGrid, links: &[LinkId], core: usize) -> String {
    grid.free_mask(links, core)
        .iter()
        .map(|&free| if free { '.' } else { '#' })
        .collect()
}

fn main() {
    // Two links in a row; a lightpath crossing both must use the same
    // core and the same slots on each (continuity + contiguity).
    let topo = topology_from_edges(
        "chain",
        &["a", "b", "c"],
        &[("a", "b", 400.0), ("b", "c", 800.0)],
        FiberSpec {
            cores: 1,
            slots_per_core: 16,
        },
    )
    .unwrap();
    let mut grid = SpectrumGrid::new(&topo);
    let links = [LinkId(0), LinkId(1)];

    // Reach decides modulation, modulation decides slot count.
    let table = ReachTable::default();
    for km in [400.0, 1200.0, 3000.0] {
        let m = select_modulation(km, &table).unwrap();
        let n = slots_needed(100.0, m.bits_per_symbol, 12.5, 0);
        println!("{km:>6.0} km path -> {} ({} slots for 100 Gb/s)", m.name, n);
    }

    // Fragment the grid a little: two tenants on link 0 only. Free runs
    // are now 4, 3 and 6 slots wide.
    grid.allocate(LightpathId { request: 900, segment: 0 }, &[LinkId(0)], 0, SlotRange::new(4, 1))
        .unwrap();
    grid.allocate(LightpathId { request: 901, segment: 0 }, &[LinkId(0)], 0, SlotRange::new(8, 2))
        .unwrap();
    println!("\nlink a-b core 0: {}", mask_string(&grid, &links[..1], 0));
    println!("link b-c core 0: {}", mask_string(&grid, &links[1..], 0));
    println!("path a-b-c     : {}  (free only where both links are free)",
        mask_string(&grid, &links, 0));

    // The three policies pick different homes for a 3-slot demand.
    let core_order = [0usize];
    for policy in [FitPolicy::FirstFit, FitPolicy::BestFit, FitPolicy::LastFit] {
        let (_, range) = grid.find_fit(&links, &core_order, 3, policy).unwrap();
        println!("{policy:?} places 3 slots at {}..{}", range.start, range.end());
    }

    // Allocation is all-or-nothing across the path; release restores both
    // links and the audit cross-checks every counter.
    let id = LightpathId { request: 902, segment: 0 };
    let (core, range) = grid.find_fit(&links, &core_order, 3, FitPolicy::BestFit).unwrap();
    grid.allocate(id, &links, core, range).unwrap();
    println!("\nafter best-fit allocation: {}", mask_string(&grid, &links, 0));
    println!("double booking rejected: {}", grid.allocate(id, &links, 0, range).unwrap_err());
    grid.release(id).unwrap();
    println!("after release            : {}", mask_string(&grid, &links, 0));
    grid.audit().unwrap();
    println!("grid audit clean, {} lightpaths active", grid.active_lightpaths());
}
