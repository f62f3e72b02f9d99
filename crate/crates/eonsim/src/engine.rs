//! Discrete-event loop: arrivals and departures in time order, the
//! routing/assignment/slicing pipeline per arrival, optional learning
//! agents for path choice, and blocking statistics.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::learning::{train_tree, BanditTable, DecisionTree, LabeledDataset, QTable};
use crate::net::{NodeId, Topology};
use crate::rng::{stream_rng, substream, STREAM_AGENT, STREAM_EPISODE};
use crate::routing::{k_shortest_paths, rank_by_xt_score, Path, RouteKind, RoutePolicy};
use crate::slicing::{
    provision_with_slicing, BlockReason, LightSegment, ProvisionParams, SliceConfig,
};
use crate::spectrum::{FitPolicy, GridError, ReachTable, SpectrumGrid};
use crate::traffic::{generate_requests, Request, TrafficConfig, TrafficError};
use crate::xt::{aggregate_path_xt_load, CoreLayout, CoreOrder, CrosstalkParams, UnsupportedLayout};

/// Scheduled simulation event. At equal times departures run before
/// arrivals (capacity frees before same-instant demands), then lower
/// request ids first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub request: u64,
}

/// Declaration order gives departures priority at equal times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    Departure,
    Arrival,
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then_with(|| self.kind.cmp(&other.kind))
            .then_with(|| self.request.cmp(&other.request))
    }
}

/// Blocked counts split by cause. The parts always sum to the blocked
/// total of the owning [`RunStats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BlockedByReason {
    pub no_route: usize,
    pub no_spectrum: usize,
    pub xt_threshold: usize,
}

impl BlockedByReason {
    pub fn add(&mut self, reason: BlockReason) {
        match reason {
            BlockReason::NoRoute => self.no_route += 1,
            BlockReason::NoSpectrum => self.no_spectrum += 1,
            BlockReason::XtThreshold => self.xt_threshold += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.no_route + self.no_spectrum + self.xt_threshold
    }
}

/// Outcome counters for one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub total_requests: usize,
    pub blocked: usize,
    pub reasons: BlockedByReason,
    pub warnings: Vec<String>,
}

/// Fraction of requests denied; zero for an empty stream.
pub fn blocking_probability(stats: &RunStats) -> f64 {
    if stats.total_requests == 0 {
        0.0
    } else {
        stats.blocked as f64 / stats.total_requests as f64
    }
}

/// Unweighted mean of per-run blocking probabilities (all runs share a
/// request count, so this is the plain average).
pub fn mean_blocking(stats: &[RunStats]) -> f64 {
    if stats.is_empty() {
        return 0.0;
    }
    stats.iter().map(blocking_probability).sum::<f64>() / stats.len() as f64
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Traffic(#[from] TrafficError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Layout(#[from] UnsupportedLayout),
    #[error("duplicate request id {0} in stream")]
    DuplicateRequestId(u64),
    #[error("post-run audit failed: {0}")]
    Audit(String),
}

/// Everything one run needs besides the topology and the agent.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub traffic: TrafficConfig,
    pub route: RoutePolicy,
    pub fit: FitPolicy,
    pub core_order: CoreOrder,
    pub slice: SliceConfig,
    pub xt: CrosstalkParams,
    pub reach: ReachTable,
    pub slot_width_ghz: f64,
    pub guard_slots: usize,
    /// Leading arrivals excluded from the statistics (still simulated).
    pub warmup_requests: usize,
}

impl EngineConfig {
    /// Size of the candidate list the pipeline actually routes over.
    pub fn effective_k(&self) -> usize {
        match self.route.kind {
            RouteKind::Sp => 1,
            _ => self.route.k,
        }
    }
}

/// Which learning rule drives path selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    QLearning,
    #[serde(rename = "egreedy")]
    EGreedy,
    Ucb,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentParams {
    pub kind: AgentKind,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub ucb_c: f64,
    pub reward_success: f64,
    pub reward_block: f64,
    pub seed: u64,
}

impl Default for AgentParams {
    fn default() -> Self {
        AgentParams {
            kind: AgentKind::QLearning,
            alpha: 0.1,
            gamma: 0.9,
            epsilon: 0.1,
            ucb_c: 1.0,
            reward_success: 1.0,
            reward_block: -1.0,
            seed: 0,
        }
    }
}

type PairState = (NodeId, NodeId);

struct PendingUpdate {
    state: PairState,
    action: usize,
    reward: f64,
}

/// Learning path selector. State is the (source, destination) pair,
/// actions index the k shortest candidate paths, and the reward signals
/// provisioning success. Tables persist across episodes.
pub struct PathAgent {
    params: AgentParams,
    k: usize,
    q: QTable<PairState>,
    bandit: BanditTable<PairState>,
    rng: ChaCha12Rng,
    /// Q-learning bootstraps against the next request's state, so each
    /// transition waits here until that state is known.
    pending: Option<PendingUpdate>,
    tree: Option<DecisionTree>,
    tree_rows: Vec<(Vec<String>, String)>,
}

const TREE_OK: &str = "ok";
const TREE_BLOCKED: &str = "blocked";

impl PathAgent {
    pub fn new(params: AgentParams, k: usize) -> Self {
        debug_assert!(k >= 1);
        PathAgent {
            k,
            q: QTable::new(k, params.alpha, params.gamma),
            bandit: BanditTable::new(k, params.epsilon, params.ucb_c),
            rng: stream_rng(params.seed, &[STREAM_AGENT]),
            pending: None,
            tree: None,
            tree_rows: Vec::new(),
            params,
        }
    }

    pub fn kind(&self) -> AgentKind {
        self.params.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q_table(&self) -> &QTable<PairState> {
        &self.q
    }

    pub fn bandit_table(&self) -> &BanditTable<PairState> {
        &self.bandit
    }

    pub fn tree(&self) -> Option<&DecisionTree> {
        self.tree.as_ref()
    }

    /// Pick a path index among the first `n_avail` candidates.
    pub fn choose(&mut self, state: PairState, n_avail: usize) -> usize {
        debug_assert!(n_avail >= 1 && n_avail <= self.k);
        match self.params.kind {
            AgentKind::QLearning => {
                let row = self.q.row(&state);
                crate::learning::epsilon_greedy_select(
                    &row[..n_avail],
                    self.params.epsilon,
                    &mut self.rng,
                )
            }
            AgentKind::EGreedy => {
                let means = self.bandit.means(&state);
                crate::learning::epsilon_greedy_select(
                    &means[..n_avail],
                    self.params.epsilon,
                    &mut self.rng,
                )
            }
            AgentKind::Ucb => {
                let means = self.bandit.means(&state);
                let counts = self.bandit.counts(&state);
                let t = self.bandit.pulls(&state).max(1);
                crate::learning::ucb_select(
                    &means[..n_avail],
                    &counts[..n_avail],
                    self.params.ucb_c,
                    t,
                )
            }
            AgentKind::Tree => {
                // the classifier only learns about actions it has tried,
                // so keep an epsilon of random exploration
                if self.rng.random_bool(self.params.epsilon) {
                    return self.rng.random_range(0..n_avail);
                }
                match &self.tree {
                    // lowest path index the tree expects to succeed
                    Some(tree) => (0..n_avail)
                        .find(|&a| {
                            crate::learning::classify(tree, &Self::tree_row(state, a)) == TREE_OK
                        })
                        .unwrap_or(0),
                    None => 0,
                }
            }
        }
    }

    fn tree_row(state: PairState, action: usize) -> Vec<String> {
        vec![
            state.0 .0.to_string(),
            state.1 .0.to_string(),
            action.to_string(),
        ]
    }

    /// Record the outcome of the chosen path for one request.
    pub fn observe(&mut self, state: PairState, action: usize, success: bool) {
        let reward = if success {
            self.params.reward_success
        } else {
            self.params.reward_block
        };
        match self.params.kind {
            AgentKind::QLearning => {
                if let Some(prev) = self.pending.replace(PendingUpdate {
                    state,
                    action,
                    reward,
                }) {
                    self.q.update(prev.state, prev.action, prev.reward, Some(&state));
                }
            }
            AgentKind::EGreedy | AgentKind::Ucb => {
                self.bandit.update(state, action, reward);
            }
            AgentKind::Tree => {
                let label = if success { TREE_OK } else { TREE_BLOCKED };
                self.tree_rows
                    .push((Self::tree_row(state, action), label.to_string()));
            }
        }
    }

    /// Close out a request stream: flush the dangling Q transition as
    /// terminal and refit the tree on everything seen so far.
    pub fn end_stream(&mut self) {
        if let Some(prev) = self.pending.take() {
            self.q.update(prev.state, prev.action, prev.reward, None);
        }
        if self.params.kind == AgentKind::Tree && !self.tree_rows.is_empty() {
            let dataset = LabeledDataset {
                attributes: vec!["src".into(), "dst".into(), "path".into()],
                rows: self.tree_rows.clone(),
            };
            self.tree = Some(train_tree(&dataset, 3).expect("nonempty training rows"));
        }
    }
}

/// Simulate a prepared request stream. Requests may arrive in any order
/// in the slice; events are processed in time order.
pub fn run_stream(
    topology: &Topology,
    cfg: &EngineConfig,
    requests: &[Request],
    mut agent: Option<&mut PathAgent>,
) -> Result<RunStats, EngineError> {
    let mut grid = SpectrumGrid::new(topology);
    let layout = CoreLayout::new(grid.cores())?;
    let core_order = cfg.core_order.order(&layout);
    let k = cfg.effective_k();

    let mut by_id: HashMap<u64, &Request> = HashMap::with_capacity(requests.len());
    let mut heap: BinaryHeap<Reverse<Event>> = BinaryHeap::with_capacity(requests.len() * 2);
    for req in requests {
        if by_id.insert(req.id, req).is_some() {
            return Err(EngineError::DuplicateRequestId(req.id));
        }
        heap.push(Reverse(Event {
            time: req.arrival_time,
            kind: EventKind::Arrival,
            request: req.id,
        }));
    }

    let params = ProvisionParams {
        topology,
        reach_table: &cfg.reach,
        slot_width_ghz: cfg.slot_width_ghz,
        guard_slots: cfg.guard_slots,
        policy: cfg.fit,
        core_order: &core_order,
        slice: cfg.slice,
        xt_params: &cfg.xt,
        layout: &layout,
    };

    let mut candidate_cache: HashMap<PairState, Vec<Path>> = HashMap::new();
    let mut active: HashMap<u64, Vec<LightSegment>> = HashMap::new();
    let mut stats = RunStats {
        total_requests: 0,
        blocked: 0,
        reasons: BlockedByReason::default(),
        warnings: Vec::new(),
    };
    if requests.is_empty() {
        stats
            .warnings
            .push("empty request stream: blocking probability reported as 0".into());
    }
    let mut arrivals_seen = 0usize;

    while let Some(Reverse(event)) = heap.pop() {
        match event.kind {
            EventKind::Departure => {
                let segments = active
                    .remove(&event.request)
                    .expect("departure for a request that is not active");
                for seg in &segments {
                    grid.release(seg.lightpath_id())?;
                }
            }
            EventKind::Arrival => {
                let req = by_id[&event.request];
                arrivals_seen += 1;
                let counted = arrivals_seen > cfg.warmup_requests;
                if counted {
                    stats.total_requests += 1;
                }
                let state = (req.src, req.dst);
                let candidates = candidate_cache.entry(state).or_insert_with(|| {
                    k_shortest_paths(topology, state.0, state.1, k, cfg.route.weight)
                        .unwrap_or_default()
                });

                let outcome = if let Some(ag) = agent.as_deref_mut() {
                    if candidates.is_empty() {
                        Err(BlockReason::NoRoute)
                    } else {
                        let n_avail = candidates.len().min(ag.k);
                        let action = ag.choose(state, n_avail);
                        let chosen = std::slice::from_ref(&candidates[action]);
                        let res = provision_with_slicing(req, chosen, &mut grid, &params);
                        ag.observe(state, action, res.is_ok());
                        res
                    }
                } else if cfg.route.kind == RouteKind::XtAware {
                    let ordered = rank_by_xt_score(
                        candidates.clone(),
                        cfg.route.alpha,
                        cfg.route.weight,
                        |p| aggregate_path_xt_load(&grid, topology, &cfg.xt, &layout, &p.links),
                    );
                    provision_with_slicing(req, &ordered, &mut grid, &params)
                } else {
                    provision_with_slicing(req, candidates, &mut grid, &params)
                };

                match outcome {
                    Ok(segments) => {
                        heap.push(Reverse(Event {
                            time: req.departure_time(),
                            kind: EventKind::Departure,
                            request: req.id,
                        }));
                        active.insert(req.id, segments);
                    }
                    Err(reason) => {
                        if counted {
                            stats.blocked += 1;
                            stats.reasons.add(reason);
                        }
                    }
                }
            }
        }
    }

    if let Some(ag) = agent {
        ag.end_stream();
    }

    if !active.is_empty() {
        return Err(EngineError::Audit(format!(
            "{} requests never departed",
            active.len()
        )));
    }
    grid.audit()?;
    if !grid.is_all_free() {
        return Err(EngineError::Audit("grid not empty after final event".into()));
    }
    debug_assert_eq!(stats.reasons.total(), stats.blocked);
    Ok(stats)
}

/// Generate the configured traffic stream and simulate it.
pub fn run(
    topology: &Topology,
    cfg: &EngineConfig,
    agent: Option<&mut PathAgent>,
) -> Result<RunStats, EngineError> {
    let requests = generate_requests(topology, &cfg.traffic)?;
    run_stream(topology, cfg, &requests, agent)
}

/// Traffic seed for an episode: episode 0 reuses the master seed (so a
/// one-episode sequence equals a plain run), later episodes draw
/// derived substreams.
pub fn episode_seed(master: u64, episode: usize) -> u64 {
    if episode == 0 {
        master
    } else {
        substream(master, &[STREAM_EPISODE, episode as u64])
    }
}

/// Repeated runs over freshly seeded streams at the same load. Agent
/// tables persist across episodes; per-episode stats are returned in
/// order.
pub fn run_episodes(
    topology: &Topology,
    cfg: &EngineConfig,
    episodes: usize,
    mut agent: Option<&mut PathAgent>,
) -> Result<Vec<RunStats>, EngineError> {
    debug_assert!(episodes >= 1);
    let mut series = Vec::with_capacity(episodes);
    for e in 0..episodes {
        let mut episode_cfg = cfg.clone();
        episode_cfg.traffic.seed = episode_seed(cfg.traffic.seed, e);
        let requests = generate_requests(topology, &episode_cfg.traffic)?;
        let stats = run_stream(topology, &episode_cfg, &requests, agent.as_deref_mut())?;
        series.push(stats);
    }
    Ok(series)
}
