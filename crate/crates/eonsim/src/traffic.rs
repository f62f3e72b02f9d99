//! Dynamic traffic generation.
//!
//! Requests arrive as a Poisson process: inter-arrival gaps and holding
//! times are exponentially distributed, source/destination pairs are
//! uniform over ordered node pairs, and bandwidth is drawn from a
//! weighted discrete set. The stream is a pure function of
//! `(topology, config)`.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::net::{NodeId, Topology};
use crate::rng::{stream_rng, STREAM_TRAFFIC};

/// One connection demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub id: u64,
    pub src: NodeId,
    pub dst: NodeId,
    pub bandwidth_gbps: f64,
    pub arrival_time: f64,
    pub holding_time: f64,
}

impl Request {
    pub fn departure_time(&self) -> f64 {
        self.arrival_time + self.holding_time
    }
}

/// Default bandwidth menu: equal-weight mix of common demand sizes.
pub fn default_bandwidths() -> Vec<(f64, f64)> {
    [25.0, 50.0, 100.0, 200.0, 400.0]
        .iter()
        .map(|&b| (b, 1.0))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficConfig {
    /// Arrival rate lambda, requests per time unit.
    pub arrival_rate: f64,
    /// Mean holding time 1/mu.
    pub mean_holding: f64,
    pub num_requests: usize,
    /// (bandwidth_gbps, weight) pairs.
    pub bandwidth_choices: Vec<(f64, f64)>,
    pub seed: u64,
}

impl TrafficConfig {
    /// Total offered load in Erlang: lambda times mean holding time.
    pub fn offered_load_erlang(&self) -> f64 {
        self.arrival_rate * self.mean_holding
    }

    pub fn validate(&self) -> Result<(), TrafficError> {
        if !(self.arrival_rate >= 0.0) {
            return Err(TrafficError::BadConfig("arrival_rate must be >= 0"));
        }
        if !(self.mean_holding > 0.0) {
            return Err(TrafficError::BadConfig("mean_holding must be > 0"));
        }
        if self.bandwidth_choices.is_empty() {
            return Err(TrafficError::BadConfig("bandwidths must be nonempty"));
        }
        if self.bandwidth_choices.iter().any(|&(b, w)| b <= 0.0 || w <= 0.0) {
            return Err(TrafficError::BadConfig(
                "bandwidths and weights must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TrafficError {
    #[error("topology needs at least 2 nodes to generate traffic")]
    TooFewNodes,
    #[error("invalid traffic config: {0}")]
    BadConfig(&'static str),
}

/// Offered load per core for the normalized load axis.
pub fn erlang_per_core(config: &TrafficConfig, cores: usize) -> f64 {
    assert!(cores >= 1, "core count must be at least 1");
    config.offered_load_erlang() / cores as f64
}

/// Generate the full request stream. Deterministic given the seed;
/// arrival times are strictly increasing.
pub fn generate_requests(
    topology: &Topology,
    config: &TrafficConfig,
) -> Result<Vec<Request>, TrafficError> {
    config.validate()?;
    let n = topology.node_count();
    if n < 2 {
        return Err(TrafficError::TooFewNodes);
    }

    let mut rng = stream_rng(config.seed, &[STREAM_TRAFFIC]);
    let interarrival = Exp::new(config.arrival_rate)
        .map_err(|_| TrafficError::BadConfig("arrival_rate must be positive"))?;
    let holding = Exp::new(1.0 / config.mean_holding)
        .map_err(|_| TrafficError::BadConfig("mean_holding must be positive"))?;
    let weights: Vec<f64> = config.bandwidth_choices.iter().map(|&(_, w)| w).collect();
    let bandwidth_pick =
        WeightedIndex::new(&weights).map_err(|_| TrafficError::BadConfig("bad weights"))?;

    let mut requests = Vec::with_capacity(config.num_requests);
    let mut clock = 0.0_f64;
    for id in 0..config.num_requests as u64 {
        // resample degenerate zero gaps so arrival times strictly increase
        let mut gap = interarrival.sample(&mut rng);
        while gap <= 0.0 {
            gap = interarrival.sample(&mut rng);
        }
        clock += gap;

        let src = NodeId(rng.random_range(0..n));
        let mut dst = NodeId(rng.random_range(0..n - 1));
        if dst.0 >= src.0 {
            dst.0 += 1;
        }

        let mut hold = holding.sample(&mut rng);
        while hold <= 0.0 {
            hold = holding.sample(&mut rng);
        }

        let bandwidth_gbps = config.bandwidth_choices[bandwidth_pick.sample(&mut rng)].0;
        requests.push(Request {
            id,
            src,
            dst,
            bandwidth_gbps,
            arrival_time: clock,
            holding_time: hold,
        });
    }
    Ok(requests)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{topology_from_edges, FiberSpec};

    fn topo(n: usize) -> Topology {
        let names: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let edges: Vec<(&str, &str, f64)> = (1..n)
            .map(|i| (name_refs[i - 1], name_refs[i], 100.0))
            .collect();
        topology_from_edges("line", &name_refs, &edges, FiberSpec::default()).unwrap()
    }

    fn cfg(rate: f64, hold: f64, num: usize, seed: u64) -> TrafficConfig {
        TrafficConfig {
            arrival_rate: rate,
            mean_holding: hold,
            num_requests: num,
            bandwidth_choices: default_bandwidths(),
            seed,
        }
    }

    #[test]
    fn zero_requests_is_empty_stream() {
        let reqs = generate_requests(&topo(3), &cfg(1.0, 1.0, 0, 1)).unwrap();
        assert!(reqs.is_empty());
    }

    #[test]
    fn same_seed_same_stream() {
        let t = topo(5);
        let a = generate_requests(&t, &cfg(2.0, 3.0, 500, 99)).unwrap();
        let b = generate_requests(&t, &cfg(2.0, 3.0, 500, 99)).unwrap();
        assert_eq!(a, b);
        let c = generate_requests(&t, &cfg(2.0, 3.0, 500, 100)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn offered_load_is_rate_times_holding() {
        let c = cfg(7.5, 100.0, 0, 0);
        assert_eq!(c.offered_load_erlang(), 750.0);
        assert_eq!(erlang_per_core(&c, 1), 750.0);
    }

    #[test]
    fn erlang_per_core_divides_by_cores() {
        let c = cfg(4.0, 100.0, 0, 0);
        assert_eq!(c.offered_load_erlang(), 400.0);
        assert_eq!(erlang_per_core(&c, 4), 100.0);
        let zero = cfg(0.0, 100.0, 0, 0);
        assert_eq!(erlang_per_core(&zero, 4), 0.0);
    }

    #[test]
    fn interarrival_mean_converges() {
        let t = topo(4);
        let reqs = generate_requests(&t, &cfg(10.0, 75.0, 100_000, 7)).unwrap();
        let mean_gap = reqs.last().unwrap().arrival_time / reqs.len() as f64;
        assert!(
            (mean_gap - 0.1).abs() / 0.1 < 0.01,
            "mean inter-arrival {mean_gap} not within 1% of 0.1"
        );
    }

    #[test]
    fn holding_mean_converges() {
        let t = topo(4);
        let reqs = generate_requests(&t, &cfg(10.0, 75.0, 100_000, 11)).unwrap();
        let mean_hold: f64 =
            reqs.iter().map(|r| r.holding_time).sum::<f64>() / reqs.len() as f64;
        assert!(
            (mean_hold - 75.0).abs() / 75.0 < 0.01,
            "mean holding {mean_hold} not within 1% of 75"
        );
    }

    #[test]
    fn arrivals_strictly_increase_and_pairs_valid() {
        let t = topo(6);
        let reqs = generate_requests(&t, &cfg(5.0, 2.0, 20_000, 3)).unwrap();
        for pair in reqs.windows(2) {
            assert!(pair[0].arrival_time < pair[1].arrival_time);
        }
        for r in &reqs {
            assert_ne!(r.src, r.dst);
            assert!(r.holding_time > 0.0);
        }
    }

    #[test]
    fn single_node_topology_rejected() {
        let t = topology_from_edges("one", &["A"], &[], FiberSpec::default()).unwrap();
        assert!(matches!(
            generate_requests(&t, &cfg(1.0, 1.0, 1, 0)),
            Err(TrafficError::TooFewNodes)
        ));
    }

    /// Pearson chi-square test on (src,dst) uniformity. The 0.01 critical
    /// value is computed with the Wilson-Hilferty cube approximation.
    #[test]
    fn source_destination_pairs_uniform() {
        let t = topo(5); // 20 ordered pairs
        let reqs = generate_requests(&t, &cfg(1.0, 1.0, 1_000_000, 1234)).unwrap();
        let n_nodes = 5;
        let n_pairs = n_nodes * (n_nodes - 1);
        let mut counts = vec![0u64; n_nodes * n_nodes];
        for r in &reqs {
            counts[r.src.0 * n_nodes + r.dst.0] += 1;
        }
        let expected = reqs.len() as f64 / n_pairs as f64;
        let chi2: f64 = (0..n_nodes * n_nodes)
            .filter(|i| i / n_nodes != i % n_nodes)
            .map(|i| {
                let d = counts[i] as f64 - expected;
                d * d / expected
            })
            .sum();
        let df = (n_pairs - 1) as f64;
        let z = 2.3263478740408408; // 99th percentile of the standard normal
        let crit = df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3);
        assert!(
            chi2 < crit,
            "chi-square {chi2:.2} exceeds critical value {crit:.2} at alpha=0.01"
        );
    }

    #[test]
    fn bandwidths_come_from_menu() {
        let t = topo(3);
        let menu = vec![(50.0, 1.0), (200.0, 3.0)];
        let c = TrafficConfig {
            arrival_rate: 1.0,
            mean_holding: 1.0,
            num_requests: 10_000,
            bandwidth_choices: menu.clone(),
            seed: 5,
        };
        let reqs = generate_requests(&t, &c).unwrap();
        let heavy = reqs.iter().filter(|r| r.bandwidth_gbps == 200.0).count();
        let light = reqs.iter().filter(|r| r.bandwidth_gbps == 50.0).count();
        assert_eq!(heavy + light, reqs.len());
        let frac = heavy as f64 / reqs.len() as f64;
        assert!((frac - 0.75).abs() < 0.02, "weighted pick frac {frac}");
    }
}
