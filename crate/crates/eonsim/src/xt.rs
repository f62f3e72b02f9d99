//! Inter-core crosstalk model and core-adjacency geometry.
//!
//! Crosstalk for a candidate placement accumulates one per-link coupling
//! term for every adjacent core that carries traffic in the same slot.
//! The per-link term is (1 - exp(-2hL)) / (1 + exp(-2hL)), which equals
//! tanh(h * L).

use serde::{Deserialize, Serialize};

use crate::net::{LinkId, Topology};
use crate::spectrum::{SlotRange, SpectrumGrid};

/// Physical-layer coupling parameters, config-exposed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrosstalkParams {
    /// Power coupling coefficient per km.
    pub h: f64,
    /// Linear crosstalk ceiling for admitting a placement.
    pub xt_threshold: f64,
}

impl Default for CrosstalkParams {
    fn default() -> Self {
        CrosstalkParams {
            h: 2e-5,
            xt_threshold: 1e-6,
        }
    }
}

impl CrosstalkParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.h > 0.0) {
            return Err(format!("h must be positive, got {}", self.h));
        }
        if !(self.xt_threshold > 0.0) {
            return Err(format!(
                "xt_threshold must be positive, got {}",
                self.xt_threshold
            ));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unsupported core count {0} (supported: 1, 4, 7)")]
pub struct UnsupportedLayout(pub usize);

/// Core geometry of the fiber. Supported layouts: a single core, a
/// 4-core square ring, and a 7-core hexagonal layout whose center core
/// is index 0 with the six outer cores 1..=6 forming a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreLayout {
    cores: usize,
    adjacency: Vec<Vec<usize>>,
}

impl CoreLayout {
    pub fn new(cores: usize) -> Result<Self, UnsupportedLayout> {
        let adjacency: Vec<Vec<usize>> = match cores {
            1 => vec![Vec::new()],
            4 => (0..4).map(|i| {
                let mut a = vec![(i + 1) % 4, (i + 3) % 4];
                a.sort_unstable();
                a
            })
            .collect(),
            7 => {
                let mut adj = vec![Vec::new(); 7];
                adj[0] = (1..=6).collect();
                for i in 1..=6usize {
                    let ring_next = 1 + (i % 6);
                    let ring_prev = 1 + ((i + 4) % 6);
                    let mut a = vec![0, ring_next, ring_prev];
                    a.sort_unstable();
                    adj[i] = a;
                }
                adj
            }
            other => return Err(UnsupportedLayout(other)),
        };
        Ok(CoreLayout { cores, adjacency })
    }

    pub fn cores(&self) -> usize {
        self.cores
    }

    /// Cores adjacent to `core`, ascending.
    pub fn adjacent(&self, core: usize) -> &[usize] {
        &self.adjacency[core]
    }

    pub fn degree(&self, core: usize) -> usize {
        self.adjacency[core].len()
    }

    /// Cores with fewer neighbors first (least crosstalk exposure), ties
    /// by index; the 7-core center comes last.
    pub fn prioritized_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cores).collect();
        order.sort_by_key(|&c| (self.adjacency[c].len(), c));
        order
    }

    pub fn index_order(&self) -> Vec<usize> {
        (0..self.cores).collect()
    }
}

/// Which core scan order the assignment pipeline uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreOrder {
    Prioritized,
    #[default]
    Index,
}

impl CoreOrder {
    pub fn order(self, layout: &CoreLayout) -> Vec<usize> {
        match self {
            CoreOrder::Prioritized => layout.prioritized_order(),
            CoreOrder::Index => layout.index_order(),
        }
    }
}

/// Per-link coupling term (1 - e^{-2hL}) / (1 + e^{-2hL}) = tanh(hL).
/// Mathematically below 1; deep saturation rounds to exactly 1.0 in
/// floating point. Written with expm1 so tiny h*L keeps full precision.
pub fn link_xt_term(h: f64, length_km: f64) -> f64 {
    debug_assert!(h >= 0.0 && length_km >= 0.0);
    let x = -2.0 * h * length_km;
    -x.exp_m1() / (1.0 + x.exp())
}

/// Crosstalk seen by a candidate on (core, slot) along `links`: for each
/// link, one coupling term per adjacent core whose same slot is occupied.
pub fn path_xt(
    grid: &SpectrumGrid,
    topology: &Topology,
    params: &CrosstalkParams,
    layout: &CoreLayout,
    links: &[LinkId],
    core: usize,
    slot: usize,
) -> f64 {
    let mut total = 0.0;
    for &link in links {
        let term = link_xt_term(params.h, topology.link(link).length_km);
        for &adj in layout.adjacent(core) {
            if !grid.is_free(link, adj, slot) {
                total += term;
            }
        }
    }
    total
}

/// Admission check for a whole placement: the worst slot in the range
/// must stay at or below the threshold.
pub fn range_xt_ok(
    grid: &SpectrumGrid,
    topology: &Topology,
    params: &CrosstalkParams,
    layout: &CoreLayout,
    links: &[LinkId],
    core: usize,
    range: SlotRange,
) -> bool {
    range
        .slots()
        .all(|slot| path_xt(grid, topology, params, layout, links, core, slot) <= params.xt_threshold)
}

/// Mean crosstalk pressure over every (core, slot) cell of a path,
/// feeding the crosstalk-aware route score. Uses the per-(link, core)
/// occupancy counters, so it is O(links x cores).
pub fn aggregate_path_xt_load(
    grid: &SpectrumGrid,
    topology: &Topology,
    params: &CrosstalkParams,
    layout: &CoreLayout,
    links: &[LinkId],
) -> f64 {
    let cells = (layout.cores() * grid.slots_per_core()) as f64;
    let mut total = 0.0;
    for &link in links {
        let term = link_xt_term(params.h, topology.link(link).length_km);
        let mut weighted = 0.0;
        for core in 0..layout.cores() {
            // each occupied slot on `core` is seen by all of core's neighbors
            weighted += (layout.degree(core) * grid.occupied_in(link, core)) as f64;
        }
        total += term * weighted;
    }
    total / cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{topology_from_edges, FiberSpec, Topology};
    use crate::spectrum::LightpathId;

    fn line_topology(lengths: &[f64], cores: usize, slots: usize) -> Topology {
        let names: Vec<String> = (0..=lengths.len()).map(|i| format!("N{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let edges: Vec<(&str, &str, f64)> = lengths
            .iter()
            .enumerate()
            .map(|(i, &km)| (refs[i], refs[i + 1], km))
            .collect();
        topology_from_edges(
            "line",
            &refs,
            &edges,
            FiberSpec {
                cores,
                slots_per_core: slots,
            },
        )
        .unwrap()
    }

    fn lp(request: u64) -> LightpathId {
        LightpathId {
            request,
            segment: 0,
        }
    }

    #[test]
    fn zero_length_link_has_zero_term() {
        assert_eq!(link_xt_term(1e-3, 0.0), 0.0);
    }

    #[test]
    fn term_saturates_to_one() {
        // h*L = 50 is deep saturation
        assert!((link_xt_term(0.5, 100.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn term_matches_hand_value() {
        // oracle: independent hyperbolic-tangent evaluation
        let got = link_xt_term(1e-3, 100.0);
        assert!((got - 0.1f64.tanh()).abs() < 1e-12);
        assert!((got - 0.09966799462495582).abs() < 1e-9);
    }

    #[test]
    fn term_equals_tanh_over_fuzzed_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0x7A41);
        for _ in 0..10_000 {
            let h = rng.random_range(1e-7f64..1e-2);
            let l = rng.random_range(0.0f64..5000.0);
            let got = link_xt_term(h, l);
            let want = (h * l).tanh();
            assert!((got - want).abs() < 1e-12, "h={h} L={l}: {got} vs {want}");
            assert!((0.0..=1.0).contains(&got));
        }
    }

    #[test]
    fn adjacency_is_symmetric_without_self_loops() {
        for cores in [1usize, 4, 7] {
            let layout = CoreLayout::new(cores).unwrap();
            for c in 0..cores {
                assert!(!layout.adjacent(c).contains(&c));
                for &a in layout.adjacent(c) {
                    assert!(layout.adjacent(a).contains(&c), "{cores}-core: {c} vs {a}");
                }
            }
        }
    }

    #[test]
    fn four_core_ring_degrees() {
        let layout = CoreLayout::new(4).unwrap();
        for c in 0..4 {
            assert_eq!(layout.degree(c), 2);
        }
        assert_eq!(layout.adjacent(0), &[1, 3]);
        assert_eq!(layout.adjacent(2), &[1, 3]);
    }

    #[test]
    fn seven_core_hex_degrees() {
        let layout = CoreLayout::new(7).unwrap();
        assert_eq!(layout.degree(0), 6); // center touches every outer core
        for c in 1..=6 {
            assert_eq!(layout.degree(c), 3);
        }
        assert_eq!(layout.adjacent(1), &[0, 2, 6]);
        assert_eq!(layout.adjacent(4), &[0, 3, 5]);
    }

    #[test]
    fn unsupported_core_count_rejected() {
        assert!(CoreLayout::new(3).is_err());
        assert!(CoreLayout::new(0).is_err());
    }

    #[test]
    fn prioritized_order_puts_center_last() {
        let hex = CoreLayout::new(7).unwrap();
        assert_eq!(hex.prioritized_order(), vec![1, 2, 3, 4, 5, 6, 0]);
        let ring = CoreLayout::new(4).unwrap();
        assert_eq!(ring.prioritized_order(), vec![0, 1, 2, 3]);
        let single = CoreLayout::new(1).unwrap();
        assert_eq!(single.prioritized_order(), vec![0]);
    }

    #[test]
    fn idle_grid_has_zero_xt() {
        let topo = line_topology(&[100.0, 200.0], 4, 16);
        let grid = SpectrumGrid::new(&topo);
        let params = CrosstalkParams::default();
        let layout = CoreLayout::new(4).unwrap();
        let links = [LinkId(0), LinkId(1)];
        for core in 0..4 {
            for slot in 0..16 {
                assert_eq!(
                    path_xt(&grid, &topo, &params, &layout, &links, core, slot),
                    0.0
                );
            }
        }
        assert_eq!(
            aggregate_path_xt_load(&grid, &topo, &params, &layout, &links),
            0.0
        );
    }

    #[test]
    fn single_active_neighbor_contributes_one_term() {
        let topo = line_topology(&[150.0], 4, 16);
        let mut grid = SpectrumGrid::new(&topo);
        let params = CrosstalkParams {
            h: 1e-3,
            ..Default::default()
        };
        let layout = CoreLayout::new(4).unwrap();
        // core 1 is adjacent to core 0; occupy slot 5 on core 1
        grid.allocate(lp(1), &[LinkId(0)], 1, SlotRange::new(5, 1)).unwrap();
        let got = path_xt(&grid, &topo, &params, &layout, &[LinkId(0)], 0, 5);
        assert_eq!(got, link_xt_term(params.h, 150.0));
        // core 3 neighbors only cores 0 and 2, both idle
        let far = path_xt(&grid, &topo, &params, &layout, &[LinkId(0)], 3, 5);
        assert_eq!(far, 0.0);
        // other slots unaffected
        assert_eq!(
            path_xt(&grid, &topo, &params, &layout, &[LinkId(0)], 0, 6),
            0.0
        );
    }

    /// Independent reference: recompute adjacency from scratch and walk
    /// every (link, adjacent core) pair explicitly.
    fn oracle_path_xt(
        grid: &SpectrumGrid,
        topo: &Topology,
        h: f64,
        cores: usize,
        links: &[LinkId],
        core: usize,
        slot: usize,
    ) -> f64 {
        let adjacent: Vec<usize> = match cores {
            1 => Vec::new(),
            4 => (0..4)
                .filter(|&c| c != core && (c.abs_diff(core) == 1 || c.abs_diff(core) == 3))
                .collect(),
            7 => (0..7)
                .filter(|&c| {
                    if c == core {
                        false
                    } else if core == 0 || c == 0 {
                        true
                    } else {
                        let d = (c as i64 - core as i64).rem_euclid(6);
                        d == 1 || d == 5
                    }
                })
                .collect(),
            _ => unreachable!(),
        };
        let mut sum = 0.0;
        for &link in links {
            let l = topo.link(link).length_km;
            let term = (h * l).tanh();
            for &adj in &adjacent {
                if grid.slot_owner(link, adj, slot).is_some() {
                    sum += term;
                }
            }
        }
        sum
    }

    #[test]
    fn two_link_path_sums_per_link_terms() {
        let topo = line_topology(&[100.0, 300.0], 4, 8);
        let mut grid = SpectrumGrid::new(&topo);
        let params = CrosstalkParams {
            h: 1e-3,
            ..Default::default()
        };
        let layout = CoreLayout::new(4).unwrap();
        let links = [LinkId(0), LinkId(1)];
        // link 0: both neighbors (1 and 3) of core 0 active at slot 2
        grid.allocate(lp(1), &[LinkId(0)], 1, SlotRange::new(2, 1)).unwrap();
        grid.allocate(lp(2), &[LinkId(0)], 3, SlotRange::new(2, 1)).unwrap();
        // link 1: one neighbor active
        grid.allocate(lp(3), &[LinkId(1)], 1, SlotRange::new(2, 1)).unwrap();
        let got = path_xt(&grid, &topo, &params, &layout, &links, 0, 2);
        let t1 = link_xt_term(params.h, 100.0);
        let t2 = link_xt_term(params.h, 300.0);
        assert!((got - (2.0 * t1 + t2)).abs() < 1e-15);
        let want = oracle_path_xt(&grid, &topo, params.h, 4, &links, 0, 2);
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn path_xt_matches_oracle_on_fuzzed_grids() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0x0E0);
        for round in 0..200 {
            let cores = if rng.random_bool(0.5) { 4 } else { 7 };
            let n_links = rng.random_range(1usize..=3);
            let lengths: Vec<f64> = (0..n_links)
                .map(|_| rng.random_range(1.0f64..3000.0))
                .collect();
            let slots = rng.random_range(4usize..=12);
            let topo = line_topology(&lengths, cores, slots);
            let mut grid = SpectrumGrid::new(&topo);
            let mut next = 0u64;
            for li in 0..n_links {
                for core in 0..cores {
                    for slot in 0..slots {
                        if rng.random_bool(0.3) {
                            next += 1;
                            grid.allocate(lp(next), &[LinkId(li)], core, SlotRange::new(slot, 1))
                                .unwrap();
                        }
                    }
                }
            }
            let params = CrosstalkParams {
                h: rng.random_range(1e-6f64..1e-3),
                ..Default::default()
            };
            let layout = CoreLayout::new(cores).unwrap();
            let links: Vec<LinkId> = (0..n_links).map(LinkId).collect();
            for core in 0..cores {
                for slot in 0..slots {
                    let got = path_xt(&grid, &topo, &params, &layout, &links, core, slot);
                    let want =
                        oracle_path_xt(&grid, &topo, params.h, cores, &links, core, slot);
                    assert!(
                        (got - want).abs() < 1e-12,
                        "round {round} core {core} slot {slot}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn xt_monotone_in_occupancy() {
        let topo = line_topology(&[500.0], 4, 8);
        let mut grid = SpectrumGrid::new(&topo);
        let params = CrosstalkParams::default();
        let layout = CoreLayout::new(4).unwrap();
        let mut last = 0.0;
        for (i, core) in [1usize, 3].iter().enumerate() {
            grid.allocate(lp(i as u64 + 1), &[LinkId(0)], *core, SlotRange::new(0, 1))
                .unwrap();
            let now = path_xt(&grid, &topo, &params, &layout, &[LinkId(0)], 0, 0);
            assert!(now > last);
            last = now;
        }
    }

    #[test]
    fn xt_additive_over_concatenation() {
        let topo = line_topology(&[100.0, 250.0, 700.0], 4, 8);
        let mut grid = SpectrumGrid::new(&topo);
        let params = CrosstalkParams {
            h: 1e-4,
            ..Default::default()
        };
        let layout = CoreLayout::new(4).unwrap();
        for li in 0..3 {
            grid.allocate(lp(li as u64 + 1), &[LinkId(li)], 1, SlotRange::new(0, 2))
                .unwrap();
        }
        let whole = path_xt(
            &grid, &topo, &params, &layout,
            &[LinkId(0), LinkId(1), LinkId(2)], 0, 0,
        );
        let front = path_xt(&grid, &topo, &params, &layout, &[LinkId(0)], 0, 0);
        let back = path_xt(&grid, &topo, &params, &layout, &[LinkId(1), LinkId(2)], 0, 0);
        assert!((whole - (front + back)).abs() < 1e-12);
    }

    #[test]
    fn range_admission_bounds_worst_slot() {
        let topo = line_topology(&[100.0], 4, 8);
        let mut grid = SpectrumGrid::new(&topo);
        let layout = CoreLayout::new(4).unwrap();
        let one_term = link_xt_term(1e-3, 100.0);
        let params = CrosstalkParams {
            h: 1e-3,
            xt_threshold: 1.5 * one_term,
        };
        // slot 2 sees two active neighbors, slots 0..2 and 3 see one
        grid.allocate(lp(1), &[LinkId(0)], 1, SlotRange::new(0, 4)).unwrap();
        grid.allocate(lp(2), &[LinkId(0)], 3, SlotRange::new(2, 1)).unwrap();
        assert!(range_xt_ok(
            &grid, &topo, &params, &layout,
            &[LinkId(0)], 0, SlotRange::new(0, 2)
        ));
        // range covering slot 2 fails: 2 * term > 1.5 * term
        assert!(!range_xt_ok(
            &grid, &topo, &params, &layout,
            &[LinkId(0)], 0, SlotRange::new(0, 4)
        ));
        // idle core far from traffic always passes
        assert!(range_xt_ok(
            &grid, &topo, &params, &layout,
            &[LinkId(0)], 2, SlotRange::new(4, 4)
        ));
    }

    #[test]
    fn idle_grid_admits_everything() {
        let topo = line_topology(&[1000.0], 7, 8);
        let grid = SpectrumGrid::new(&topo);
        let layout = CoreLayout::new(7).unwrap();
        let params = CrosstalkParams {
            h: 1e-2,
            xt_threshold: 1e-9,
        };
        assert!(range_xt_ok(
            &grid, &topo, &params, &layout,
            &[LinkId(0)], 0, SlotRange::new(0, 8)
        ));
    }

    #[test]
    fn aggregate_load_matches_direct_summation() {
        let topo = line_topology(&[400.0], 4, 8);
        let mut grid = SpectrumGrid::new(&topo);
        let params = CrosstalkParams {
            h: 1e-3,
            ..Default::default()
        };
        let layout = CoreLayout::new(4).unwrap();
        // core 1 fully occupied
        grid.allocate(lp(1), &[LinkId(0)], 1, SlotRange::new(0, 8)).unwrap();
        let got = aggregate_path_xt_load(&grid, &topo, &params, &layout, &[LinkId(0)]);
        // oracle: mean of path_xt over every (core, slot) cell
        let mut sum = 0.0;
        for core in 0..4 {
            for slot in 0..8 {
                sum += path_xt(&grid, &topo, &params, &layout, &[LinkId(0)], core, slot);
            }
        }
        let want = sum / 32.0;
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        // closed form: core 1 has 2 neighbors, 8 slots occupied
        let closed = link_xt_term(params.h, 400.0) * 2.0 * 8.0 / 32.0;
        assert!((got - closed).abs() < 1e-12);
    }

    #[test]
    fn fuller_grid_never_loads_less() {
        let topo = line_topology(&[300.0, 600.0], 4, 8);
        let params = CrosstalkParams::default();
        let layout = CoreLayout::new(4).unwrap();
        let links = [LinkId(0), LinkId(1)];
        let mut grid = SpectrumGrid::new(&topo);
        let mut prev = aggregate_path_xt_load(&grid, &topo, &params, &layout, &links);
        let mut id = 0;
        for li in 0..2usize {
            for core in 0..4 {
                id += 1;
                grid.allocate(lp(id), &[LinkId(li)], core, SlotRange::new(0, 4)).unwrap();
                let now = aggregate_path_xt_load(&grid, &topo, &params, &layout, &links);
                assert!(now >= prev);
                prev = now;
            }
        }
    }
}
