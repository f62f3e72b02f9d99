//! Experiment configuration: a JSON file with nested blocks, unknown
//! keys rejected, every default materialized at parse time so the
//! effective config can be echoed next to the results it produced.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{AgentKind, AgentParams, EngineConfig};
use crate::routing::{RouteKind, RoutePolicy};
use crate::rng::{substream, STREAM_SEED_INDEX};
use crate::slicing::SliceConfig;
use crate::spectrum::{FitPolicy, Modulation, ReachTable};
use crate::traffic::TrafficConfig;
use crate::xt::{CoreLayout, CoreOrder, CrosstalkParams};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Traffic block. Load is given either as one `arrival_rate` or as a
/// list of offered loads in `erlangs` (each converted back to a rate
/// through the mean holding time); exactly one of the two must be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrival_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erlangs: Option<Vec<f64>>,
    #[serde(default = "one_f64")]
    pub mean_holding: f64,
    #[serde(default = "default_num_requests")]
    pub num_requests: usize,
    /// (bandwidth_gbps, weight) pairs.
    #[serde(default = "crate::traffic::default_bandwidths")]
    pub bandwidths: Vec<(f64, f64)>,
    /// How many independent seeds to aggregate per load point.
    #[serde(default = "one_usize")]
    pub seeds: usize,
    /// Master seed; per-seed-index streams are derived from it.
    #[serde(default = "one_u64")]
    pub seed: u64,
}

impl Default for TrafficBlock {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all traffic keys have defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentChoice {
    #[default]
    None,
    QLearning,
    Egreedy,
    Ucb,
    Tree,
}

impl AgentChoice {
    pub fn kind(self) -> Option<AgentKind> {
        match self {
            AgentChoice::None => None,
            AgentChoice::QLearning => Some(AgentKind::QLearning),
            AgentChoice::Egreedy => Some(AgentKind::EGreedy),
            AgentChoice::Ucb => Some(AgentKind::Ucb),
            AgentChoice::Tree => Some(AgentKind::Tree),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentBlock {
    #[serde(default)]
    pub kind: AgentChoice,
    #[serde(default = "default_learn_alpha")]
    pub alpha: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "one_f64")]
    pub ucb_c: f64,
    #[serde(default = "one_usize")]
    pub episodes: usize,
    #[serde(default = "one_f64")]
    pub reward_success: f64,
    #[serde(default = "neg_one_f64")]
    pub reward_block: f64,
}

impl Default for AgentBlock {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all agent keys have defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "default_out_dir")]
    pub dir: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all output keys have defaults")
    }
}

/// Fully materialized experiment description. Every field has a
/// documented default except `topology_path` and the traffic load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub topology_path: String,
    #[serde(default = "default_cores")]
    pub cores: usize,
    #[serde(default = "default_slots_per_core")]
    pub slots_per_core: usize,
    #[serde(default = "default_slot_width")]
    pub slot_width_ghz: f64,
    #[serde(default)]
    pub guard_slots: usize,
    #[serde(default)]
    pub routing: RoutePolicy,
    #[serde(default)]
    pub allocation: FitPolicy,
    #[serde(default)]
    pub core_order: CoreOrder,
    /// Crosstalk coupling increment per km.
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_xt_threshold")]
    pub xt_threshold: f64,
    #[serde(default)]
    pub xt_check: bool,
    #[serde(default = "one_usize")]
    pub max_segments: usize,
    #[serde(default)]
    pub warmup_requests: usize,
    #[serde(default = "default_modulation_table")]
    pub modulation_table: Vec<Modulation>,
    pub traffic: TrafficBlock,
    #[serde(default)]
    pub agent: AgentBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

fn one_usize() -> usize {
    1
}
fn one_u64() -> u64 {
    1
}
fn one_f64() -> f64 {
    1.0
}
fn neg_one_f64() -> f64 {
    -1.0
}
fn default_num_requests() -> usize {
    10_000
}
fn default_learn_alpha() -> f64 {
    0.1
}
fn default_gamma() -> f64 {
    0.9
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_out_dir() -> String {
    "results".into()
}
fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}
fn default_cores() -> usize {
    4
}
fn default_slots_per_core() -> usize {
    320
}
fn default_slot_width() -> f64 {
    12.5
}
fn default_h() -> f64 {
    2e-5
}
fn default_xt_threshold() -> f64 {
    1e-6
}
fn default_modulation_table() -> Vec<Modulation> {
    ReachTable::default().entries().to_vec()
}

/// Read, parse and validate a config file. The returned value has all
/// defaults filled in, so serializing it yields the effective config.
pub fn parse_config(path: &Path) -> Result<SimConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let config: SimConfig =
        serde_json::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Resolve the topology path relative to the config file's directory
/// (absolute paths pass through).
pub fn resolve_topology_path(config_path: &Path, config: &SimConfig) -> PathBuf {
    let topo = Path::new(&config.topology_path);
    if topo.is_absolute() {
        topo.to_path_buf()
    } else {
        config_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(topo)
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.topology_path.is_empty() {
            return Err(invalid("topology_path", "must not be empty"));
        }
        if CoreLayout::new(self.cores).is_err() {
            return Err(invalid("cores", "supported core counts are 1, 4 and 7"));
        }
        if self.slots_per_core == 0 {
            return Err(invalid("slots_per_core", "must be at least 1"));
        }
        if !(self.slot_width_ghz > 0.0) || !self.slot_width_ghz.is_finite() {
            return Err(invalid("slot_width_ghz", "must be a positive number"));
        }
        if self.routing.k == 0 {
            return Err(invalid("routing.k", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.routing.alpha) {
            return Err(invalid("routing.alpha", "must lie in [0, 1]"));
        }
        if !(self.h >= 0.0) || !self.h.is_finite() {
            return Err(invalid("h", "must be a finite nonnegative number"));
        }
        if !(self.xt_threshold >= 0.0) || !self.xt_threshold.is_finite() {
            return Err(invalid("xt_threshold", "must be a finite nonnegative number"));
        }
        if self.max_segments == 0 {
            return Err(invalid("max_segments", "must be at least 1"));
        }
        ReachTable::new(self.modulation_table.clone())
            .validate()
            .map_err(|reason| invalid("modulation_table", reason))?;

        let t = &self.traffic;
        match (&t.arrival_rate, &t.erlangs) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "traffic",
                    "set either `arrival_rate` or `erlangs`, not both",
                ));
            }
            (None, None) => {
                return Err(invalid(
                    "traffic",
                    "one of `arrival_rate` or `erlangs` is required",
                ));
            }
            (Some(rate), None) => {
                if !(rate > &0.0) || !rate.is_finite() {
                    return Err(invalid("traffic.arrival_rate", "must be a positive number"));
                }
            }
            (None, Some(erlangs)) => {
                if erlangs.is_empty() {
                    return Err(invalid("traffic.erlangs", "must list at least one load"));
                }
                if erlangs.iter().any(|e| !(e > &0.0) || !e.is_finite()) {
                    return Err(invalid("traffic.erlangs", "loads must be positive numbers"));
                }
            }
        }
        if !(t.mean_holding > 0.0) || !t.mean_holding.is_finite() {
            return Err(invalid("traffic.mean_holding", "must be a positive number"));
        }
        if t.bandwidths.is_empty() {
            return Err(invalid("traffic.bandwidths", "must list at least one class"));
        }
        if t.bandwidths.iter().any(|&(b, w)| !(b > 0.0) || !(w > 0.0)) {
            return Err(invalid(
                "traffic.bandwidths",
                "bandwidths and weights must be positive",
            ));
        }
        if t.seeds == 0 {
            return Err(invalid("traffic.seeds", "must be at least 1"));
        }

        let a = &self.agent;
        if !(a.alpha > 0.0 && a.alpha <= 1.0) {
            return Err(invalid("agent.alpha", "must lie in (0, 1]"));
        }
        if !(0.0..1.0).contains(&a.gamma) {
            return Err(invalid("agent.gamma", "must lie in [0, 1)"));
        }
        if !(0.0..=1.0).contains(&a.epsilon) {
            return Err(invalid("agent.epsilon", "must lie in [0, 1]"));
        }
        if !(a.ucb_c >= 0.0) || !a.ucb_c.is_finite() {
            return Err(invalid("agent.ucb_c", "must be a finite nonnegative number"));
        }
        if a.episodes == 0 {
            return Err(invalid("agent.episodes", "must be at least 1"));
        }
        if !a.reward_success.is_finite() || !a.reward_block.is_finite() {
            return Err(invalid("agent.reward_success", "rewards must be finite"));
        }
        if a.kind != AgentChoice::None && self.routing.kind == RouteKind::XtAware {
            return Err(invalid(
                "agent.kind",
                "agents index a fixed candidate list; use routing kind `sp` or `ksp`",
            ));
        }

        if self.output.formats.is_empty() {
            return Err(invalid("output.formats", "must list at least one format"));
        }
        Ok(())
    }

    /// The load axis: the configured erlang list, or the single load
    /// implied by `arrival_rate`.
    pub fn erlangs(&self) -> Vec<f64> {
        match (&self.traffic.arrival_rate, &self.traffic.erlangs) {
            (_, Some(list)) => list.clone(),
            (Some(rate), None) => vec![rate * self.traffic.mean_holding],
            (None, None) => Vec::new(),
        }
    }

    /// Master seed for one seed index of the aggregation. Index 0 reuses
    /// the configured seed so single-seed runs are transparent.
    pub fn run_seed(&self, seed_index: usize) -> u64 {
        if seed_index == 0 {
            self.traffic.seed
        } else {
            substream(self.traffic.seed, &[STREAM_SEED_INDEX, seed_index as u64])
        }
    }

    /// Engine-level view of this config for one (load, seed) run.
    pub fn engine_config(&self, erlang: f64, run_seed: u64) -> EngineConfig {
        EngineConfig {
            traffic: TrafficConfig {
                arrival_rate: erlang / self.traffic.mean_holding,
                mean_holding: self.traffic.mean_holding,
                num_requests: self.traffic.num_requests,
                bandwidth_choices: self.traffic.bandwidths.clone(),
                seed: run_seed,
            },
            route: self.routing,
            fit: self.allocation,
            core_order: self.core_order,
            slice: SliceConfig {
                max_segments: self.max_segments,
                xt_check: self.xt_check,
            },
            xt: CrosstalkParams {
                h: self.h,
                xt_threshold: self.xt_threshold,
            },
            reach: ReachTable::new(self.modulation_table.clone()),
            slot_width_ghz: self.slot_width_ghz,
            guard_slots: self.guard_slots,
            warmup_requests: self.warmup_requests,
        }
    }

    /// Agent hyperparameters for one run, if an agent is configured.
    pub fn agent_params(&self, run_seed: u64) -> Option<AgentParams> {
        self.agent.kind.kind().map(|kind| AgentParams {
            kind,
            alpha: self.agent.alpha,
            gamma: self.agent.gamma,
            epsilon: self.agent.epsilon,
            ucb_c: self.agent.ucb_c,
            reward_success: self.agent.reward_success,
            reward_block: self.agent.reward_block,
            seed: run_seed,
        })
    }

    /// Effective config rendered for the results directory.
    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::RouteWeight;

    fn minimal() -> String {
        r#"{"topology_path": "topo.json", "traffic": {"erlangs": [100]}}"#.to_string()
    }

    fn parse_str(text: &str) -> Result<SimConfig, ConfigError> {
        let config: SimConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    #[test]
    fn minimal_config_fills_documented_defaults() {
        let c = parse_str(&minimal()).unwrap();
        assert_eq!(c.cores, 4);
        assert_eq!(c.slots_per_core, 320);
        assert_eq!(c.slot_width_ghz, 12.5);
        assert_eq!(c.guard_slots, 0);
        assert_eq!(c.routing.kind, RouteKind::Ksp);
        assert_eq!(c.routing.k, 3);
        assert_eq!(c.routing.alpha, 1.0);
        assert_eq!(c.routing.weight, RouteWeight::Km);
        assert_eq!(c.allocation, FitPolicy::FirstFit);
        assert_eq!(c.core_order, CoreOrder::Index);
        assert_eq!(c.h, 2e-5);
        assert_eq!(c.xt_threshold, 1e-6);
        assert!(!c.xt_check);
        assert_eq!(c.max_segments, 1);
        assert_eq!(c.warmup_requests, 0);
        assert_eq!(c.modulation_table.len(), 4);
        assert_eq!(c.traffic.mean_holding, 1.0);
        assert_eq!(c.traffic.num_requests, 10_000);
        assert_eq!(c.traffic.bandwidths.len(), 5);
        assert_eq!(c.traffic.seeds, 1);
        assert_eq!(c.traffic.seed, 1);
        assert_eq!(c.agent.kind, AgentChoice::None);
        assert_eq!(c.agent.alpha, 0.1);
        assert_eq!(c.agent.gamma, 0.9);
        assert_eq!(c.agent.epsilon, 0.1);
        assert_eq!(c.agent.ucb_c, 1.0);
        assert_eq!(c.agent.episodes, 1);
        assert_eq!(c.agent.reward_success, 1.0);
        assert_eq!(c.agent.reward_block, -1.0);
        assert_eq!(c.output.dir, "results");
        assert_eq!(
            c.output.formats,
            vec![OutputFormat::Csv, OutputFormat::Json]
        );
        assert_eq!(c.erlangs(), vec![100.0]);
    }

    #[test]
    fn out_of_range_epsilon_names_the_key() {
        let text = r#"{"topology_path": "t.json",
                       "traffic": {"erlangs": [100]},
                       "agent": {"kind": "egreedy", "epsilon": 1.5}}"#;
        let err = parse_str(text).unwrap_err();
        assert!(err.to_string().contains("epsilon"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let text = r#"{"topology_path": "t.json", "slotz": 3,
                       "traffic": {"erlangs": [100]}}"#;
        let err = parse_str(text).unwrap_err();
        assert!(err.to_string().contains("slotz"), "{err}");
        let nested = r#"{"topology_path": "t.json",
                         "traffic": {"erlangs": [100], "burstiness": 2}}"#;
        let err = parse_str(nested).unwrap_err();
        assert!(err.to_string().contains("burstiness"), "{err}");
    }

    #[test]
    fn materialized_config_round_trips() {
        let text = r#"{"topology_path": "t.json",
                       "cores": 7,
                       "routing": {"kind": "sp"},
                       "allocation": "best_fit",
                       "xt_check": true,
                       "traffic": {"erlangs": [50, 150], "seeds": 3},
                       "agent": {"kind": "ucb", "ucb_c": 2.0, "episodes": 5}}"#;
        let parsed = parse_str(text).unwrap();
        let echoed = parsed.to_json_pretty();
        let reparsed = parse_str(&echoed).unwrap();
        assert_eq!(parsed, reparsed);
    }

    #[test]
    fn load_axis_requires_exactly_one_spelling() {
        let both = r#"{"topology_path": "t.json",
                       "traffic": {"erlangs": [100], "arrival_rate": 5.0}}"#;
        assert!(parse_str(both).unwrap_err().to_string().contains("traffic"));
        let neither = r#"{"topology_path": "t.json", "traffic": {}}"#;
        assert!(parse_str(neither)
            .unwrap_err()
            .to_string()
            .contains("traffic"));
    }

    #[test]
    fn arrival_rate_spelling_maps_to_one_erlang_point() {
        let text = r#"{"topology_path": "t.json",
                       "traffic": {"arrival_rate": 5.0, "mean_holding": 10.0}}"#;
        let c = parse_str(text).unwrap();
        assert_eq!(c.erlangs(), vec![50.0]);
    }

    #[test]
    fn unsupported_core_count_names_cores() {
        let text = r#"{"topology_path": "t.json", "cores": 5,
                       "traffic": {"erlangs": [100]}}"#;
        let err = parse_str(text).unwrap_err();
        assert!(err.to_string().contains("cores"), "{err}");
    }

    #[test]
    fn agents_require_a_stable_candidate_list() {
        let text = r#"{"topology_path": "t.json",
                       "routing": {"kind": "xt_aware"},
                       "traffic": {"erlangs": [100]},
                       "agent": {"kind": "q_learning"}}"#;
        let err = parse_str(text).unwrap_err();
        assert!(err.to_string().contains("agent.kind"), "{err}");
    }

    #[test]
    fn engine_mapping_derives_rate_from_erlang() {
        let text = r#"{"topology_path": "t.json",
                       "traffic": {"erlangs": [200], "mean_holding": 10.0}}"#;
        let c = parse_str(text).unwrap();
        let e = c.engine_config(200.0, c.run_seed(0));
        assert_eq!(e.traffic.arrival_rate, 20.0);
        assert_eq!(e.traffic.mean_holding, 10.0);
        assert_eq!(e.traffic.seed, 1);
        assert_eq!(e.reach.entries().len(), 4);
        // derived seeds differ per index but are stable
        assert_ne!(c.run_seed(0), c.run_seed(1));
        assert_eq!(c.run_seed(3), c.run_seed(3));
    }

    #[test]
    fn agent_params_follow_the_block() {
        let text = r#"{"topology_path": "t.json",
                       "traffic": {"erlangs": [100]},
                       "agent": {"kind": "egreedy", "epsilon": 0.25}}"#;
        let c = parse_str(text).unwrap();
        let p = c.agent_params(99).unwrap();
        assert_eq!(p.kind, AgentKind::EGreedy);
        assert_eq!(p.epsilon, 0.25);
        assert_eq!(p.seed, 99);
        let none = parse_str(&minimal()).unwrap();
        assert!(none.agent_params(0).is_none());
    }

    #[test]
    fn parse_config_reads_files_and_resolves_topology() {
        let dir = tempfile::tempdir().unwrap();
        let config_path = dir.path().join("exp.json");
        std::fs::write(&config_path, minimal()).unwrap();
        let c = parse_config(&config_path).unwrap();
        assert_eq!(c.topology_path, "topo.json");
        let resolved = resolve_topology_path(&config_path, &c);
        assert_eq!(resolved, dir.path().join("topo.json"));
        let missing = parse_config(&dir.path().join("absent.json"));
        assert!(matches!(missing, Err(ConfigError::Io { .. })));
    }

    #[test]
    fn modulation_table_override_is_validated() {
        let text = r#"{"topology_path": "t.json",
                       "traffic": {"erlangs": [100]},
                       "modulation_table": [
                         {"name": "QPSK", "bits_per_symbol": 2, "reach_km": 0.0}
                       ]}"#;
        let err = parse_str(text).unwrap_err();
        assert!(err.to_string().contains("modulation_table"), "{err}");
    }
}
