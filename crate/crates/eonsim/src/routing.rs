//! Candidate path computation: shortest path, Yen's k-shortest loopless
//! paths, and a crosstalk-aware weighted reordering of the candidates.
//!
//! All routines are deterministic. Ties in weight are broken by the
//! lexicographically smallest node sequence (node indices follow sorted
//! node names, so index order is name order), then by link ids for
//! parallel links.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::net::{LinkId, NodeId, Topology};

/// Loopless path through the network. `length_km` is always the sum of
/// link lengths in traversal order, regardless of the routing weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub links: Vec<LinkId>,
    pub length_km: f64,
    pub hops: usize,
}

impl Path {
    /// Assemble a path from its node and link sequences, recomputing the
    /// length as a left-to-right sum so equal paths always carry
    /// bit-equal lengths.
    pub fn new(topology: &Topology, nodes: Vec<NodeId>, links: Vec<LinkId>) -> Self {
        debug_assert_eq!(nodes.len(), links.len() + 1);
        debug_assert!(chain_consistent(topology, &nodes, &links));
        let length_km = links
            .iter()
            .fold(0.0, |acc, &l| acc + topology.link(l).length_km);
        let hops = links.len();
        Path {
            nodes,
            links,
            length_km,
            hops,
        }
    }

    pub fn src(&self) -> NodeId {
        *self.nodes.first().expect("path has at least one node")
    }

    pub fn dst(&self) -> NodeId {
        *self.nodes.last().expect("path has at least one node")
    }

    pub fn weight(&self, weight: RouteWeight) -> f64 {
        match weight {
            RouteWeight::Km => self.length_km,
            RouteWeight::Hops => self.hops as f64,
        }
    }

    pub fn is_loopless(&self) -> bool {
        let mut seen = HashSet::new();
        self.nodes.iter().all(|n| seen.insert(*n))
    }

    /// Render as `A-B-C` using node names.
    pub fn display(&self, topology: &Topology) -> String {
        self.nodes
            .iter()
            .map(|&n| topology.node_name(n))
            .collect::<Vec<_>>()
            .join("-")
    }
}

fn chain_consistent(topology: &Topology, nodes: &[NodeId], links: &[LinkId]) -> bool {
    links.iter().enumerate().all(|(i, &l)| {
        let link = topology.link(l);
        link.other(nodes[i]) == Some(nodes[i + 1])
    })
}

/// Edge weight used by the path search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteWeight {
    #[default]
    Km,
    Hops,
}

impl RouteWeight {
    fn cost(self, topology: &Topology, link: LinkId) -> f64 {
        match self {
            RouteWeight::Km => topology.link(link).length_km,
            RouteWeight::Hops => 1.0,
        }
    }
}

/// Which route computation the provisioning pipeline runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteKind {
    Sp,
    #[default]
    Ksp,
    XtAware,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoutePolicy {
    #[serde(default)]
    pub kind: RouteKind,
    #[serde(default = "default_k")]
    pub k: usize,
    /// XT-aware tradeoff: 1.0 ranks purely by length, 0.0 purely by
    /// current crosstalk load.
    #[serde(default = "default_route_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub weight: RouteWeight,
}

fn default_k() -> usize {
    3
}

fn default_route_alpha() -> f64 {
    1.0
}

impl Default for RoutePolicy {
    fn default() -> Self {
        RoutePolicy {
            kind: RouteKind::default(),
            k: default_k(),
            alpha: default_route_alpha(),
            weight: RouteWeight::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RouteError {
    #[error("no route between the requested nodes")]
    Unroutable,
    #[error("source and destination must differ")]
    SameEndpoints,
    #[error("k must be at least 1")]
    BadK,
    #[error("alpha must lie in [0, 1], got {0}")]
    BadAlpha(f64),
}

struct HeapEntry {
    cost: f64,
    node: NodeId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cost == other.cost && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap, we want smallest cost first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Dijkstra over the undirected multigraph with banned nodes/links.
/// Among equal-cost shortest paths the lexicographically smallest node
/// sequence wins; every equal-cost predecessor settles before the target
/// pops (positive weights), so comparing stored paths at relaxation time
/// is sufficient.
fn dijkstra_restricted(
    topology: &Topology,
    src: NodeId,
    dst: NodeId,
    weight: RouteWeight,
    banned_nodes: &[bool],
    banned_links: &HashSet<LinkId>,
) -> Option<Path> {
    let n = topology.node_count();
    let mut dist: Vec<Option<f64>> = vec![None; n];
    let mut node_seq: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut link_seq: Vec<Vec<LinkId>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];

    dist[src.0] = Some(0.0);
    node_seq[src.0] = vec![src];
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        cost: 0.0,
        node: src,
    });

    while let Some(HeapEntry { cost, node: u }) = heap.pop() {
        if settled[u.0] || dist[u.0] != Some(cost) {
            continue;
        }
        settled[u.0] = true;
        if u == dst {
            break;
        }
        for &(v, link) in topology.neighbors(u) {
            if settled[v.0] || banned_nodes[v.0] || banned_links.contains(&link) {
                continue;
            }
            let cand_cost = cost + weight.cost(topology, link);
            let improves = match dist[v.0] {
                None => true,
                Some(cur) => {
                    if cand_cost < cur {
                        true
                    } else if cand_cost > cur {
                        false
                    } else {
                        // equal cost: candidate path = path(u) + v
                        let cand_nodes = &node_seq[u.0];
                        let cand_links = &link_seq[u.0];
                        lex_extension_smaller(
                            cand_nodes,
                            cand_links,
                            v,
                            link,
                            &node_seq[v.0],
                            &link_seq[v.0],
                        )
                    }
                }
            };
            if improves {
                let pushed_new_cost = dist[v.0] != Some(cand_cost);
                dist[v.0] = Some(cand_cost);
                let mut nn = node_seq[u.0].clone();
                nn.push(v);
                let mut ll = link_seq[u.0].clone();
                ll.push(link);
                node_seq[v.0] = nn;
                link_seq[v.0] = ll;
                if pushed_new_cost {
                    heap.push(HeapEntry {
                        cost: cand_cost,
                        node: v,
                    });
                }
            }
        }
    }

    if dist[dst.0].is_some() && settled[dst.0] {
        Some(Path::new(
            topology,
            node_seq[dst.0].clone(),
            link_seq[dst.0].clone(),
        ))
    } else {
        None
    }
}

/// Would `prefix + (v, link)` order before the currently stored path?
fn lex_extension_smaller(
    prefix_nodes: &[NodeId],
    prefix_links: &[LinkId],
    v: NodeId,
    link: LinkId,
    cur_nodes: &[NodeId],
    cur_links: &[LinkId],
) -> bool {
    let cand_nodes = prefix_nodes.iter().copied().chain(std::iter::once(v));
    match cand_nodes.cmp(cur_nodes.iter().copied()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => {
            let cand_links = prefix_links.iter().copied().chain(std::iter::once(link));
            cand_links.cmp(cur_links.iter().copied()) == Ordering::Less
        }
    }
}

/// Minimum-weight loopless path, or `Unroutable`.
pub fn shortest_path(
    topology: &Topology,
    src: NodeId,
    dst: NodeId,
    weight: RouteWeight,
) -> Result<Path, RouteError> {
    if src == dst {
        return Err(RouteError::SameEndpoints);
    }
    let banned_nodes = vec![false; topology.node_count()];
    dijkstra_restricted(topology, src, dst, weight, &banned_nodes, &HashSet::new())
        .ok_or(RouteError::Unroutable)
}

/// Yen's algorithm: the `k` minimum-weight loopless paths in ascending
/// order (all of them, if fewer exist). The result for `k` is a prefix
/// of the result for `k + 1`.
pub fn k_shortest_paths(
    topology: &Topology,
    src: NodeId,
    dst: NodeId,
    k: usize,
    weight: RouteWeight,
) -> Result<Vec<Path>, RouteError> {
    if k == 0 {
        return Err(RouteError::BadK);
    }
    let first = shortest_path(topology, src, dst, weight)?;
    let mut confirmed = vec![first];
    let mut candidates: Vec<Path> = Vec::new();

    while confirmed.len() < k {
        let prev = confirmed.last().expect("nonempty").clone();
        for spur_idx in 0..prev.nodes.len() - 1 {
            let spur_node = prev.nodes[spur_idx];
            let root_nodes = &prev.nodes[..=spur_idx];
            let root_links = &prev.links[..spur_idx];

            let mut banned_links = HashSet::new();
            for p in &confirmed {
                if p.nodes.len() > spur_idx
                    && p.nodes[..=spur_idx] == *root_nodes
                    && p.links[..spur_idx] == *root_links
                {
                    if let Some(&next_link) = p.links.get(spur_idx) {
                        banned_links.insert(next_link);
                    }
                }
            }
            let mut banned_nodes = vec![false; topology.node_count()];
            for &n in &root_nodes[..spur_idx] {
                banned_nodes[n.0] = true;
            }

            if let Some(spur) = dijkstra_restricted(
                topology,
                spur_node,
                dst,
                weight,
                &banned_nodes,
                &banned_links,
            ) {
                let mut nodes = root_nodes.to_vec();
                nodes.extend_from_slice(&spur.nodes[1..]);
                let mut links = root_links.to_vec();
                links.extend_from_slice(&spur.links);
                let total = Path::new(topology, nodes, links);
                let duplicate = confirmed
                    .iter()
                    .chain(candidates.iter())
                    .any(|p| p.nodes == total.nodes && p.links == total.links);
                if !duplicate {
                    candidates.push(total);
                }
            }
        }

        let Some(best_idx) = candidates
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.weight(weight)
                    .total_cmp(&b.weight(weight))
                    .then_with(|| a.nodes.cmp(&b.nodes))
                    .then_with(|| a.links.cmp(&b.links))
            })
            .map(|(i, _)| i)
        else {
            break;
        };
        confirmed.push(candidates.swap_remove(best_idx));
    }
    Ok(confirmed)
}

/// Reorder the k shortest candidates by a weighted blend of normalized
/// length and normalized current crosstalk load.
///
/// `path_load` is evaluated against a read-only grid snapshot (see
/// [`crate::xt::aggregate_path_xt_load`]); `alpha = 1` reproduces the
/// plain k-shortest ordering, `alpha = 0` ranks purely by load.
pub fn xt_aware_route<F>(
    topology: &Topology,
    src: NodeId,
    dst: NodeId,
    k: usize,
    alpha: f64,
    weight: RouteWeight,
    path_load: F,
) -> Result<Vec<Path>, RouteError>
where
    F: Fn(&Path) -> f64,
{
    if !(0.0..=1.0).contains(&alpha) {
        return Err(RouteError::BadAlpha(alpha));
    }
    let candidates = k_shortest_paths(topology, src, dst, k, weight)?;
    Ok(rank_by_xt_score(candidates, alpha, weight, path_load))
}

/// Scoring core of [`xt_aware_route`], usable on precomputed candidates.
pub fn rank_by_xt_score<F>(
    candidates: Vec<Path>,
    alpha: f64,
    weight: RouteWeight,
    path_load: F,
) -> Vec<Path>
where
    F: Fn(&Path) -> f64,
{
    let max_len = candidates
        .iter()
        .map(|p| p.weight(weight))
        .fold(0.0_f64, f64::max);
    let loads: Vec<f64> = candidates.iter().map(&path_load).collect();
    let max_load = loads.iter().fold(0.0_f64, |a, &b| a.max(b));

    let mut scored: Vec<(f64, Path)> = candidates
        .into_iter()
        .zip(loads)
        .map(|(p, load)| {
            let norm_len = if max_len > 0.0 {
                p.weight(weight) / max_len
            } else {
                0.0
            };
            let norm_xt = if max_load > 0.0 { load / max_load } else { 0.0 };
            (alpha * norm_len + (1.0 - alpha) * norm_xt, p)
        })
        .collect();
    scored.sort_by(|(sa, pa), (sb, pb)| {
        sa.total_cmp(sb)
            .then_with(|| pa.length_km.total_cmp(&pb.length_km))
            .then_with(|| pa.nodes.cmp(&pb.nodes))
            .then_with(|| pa.links.cmp(&pb.links))
    });
    scored.into_iter().map(|(_, p)| p).collect()
}
