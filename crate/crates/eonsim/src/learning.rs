//! Tabular learning for path selection: Q-learning, epsilon-greedy and
//! UCB bandits, and an information-gain decision tree. All tables map a
//! state to a fixed-size action-value vector defaulting to zeros.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum LearnError {
    #[error("dataset must not be empty")]
    EmptyDataset,
    #[error("max_depth must be at least 1")]
    BadDepth,
    #[error("row has {got} attribute values, expected {expected}")]
    ArityMismatch { got: usize, expected: usize },
}

/// Lowest-index argmax, the tie-break used by every selector here.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Pick uniformly with probability `epsilon`, otherwise the greedy
/// (lowest-index argmax) action over `values`.
pub fn epsilon_greedy_select<R: Rng>(values: &[f64], epsilon: f64, rng: &mut R) -> usize {
    debug_assert!(!values.is_empty());
    debug_assert!((0.0..=1.0).contains(&epsilon));
    if epsilon > 0.0 && rng.random_bool(epsilon) {
        rng.random_range(0..values.len())
    } else {
        argmax(values)
    }
}

/// UCB rule over per-action `means` and pull `counts` at decision step
/// `t`: argmax of mean + c * sqrt(2 ln t / n). Untried actions carry an
/// infinite bonus, so the lowest untried index wins outright.
pub fn ucb_select(means: &[f64], counts: &[u64], c: f64, t: u64) -> usize {
    debug_assert_eq!(means.len(), counts.len());
    debug_assert!(t >= 1);
    if let Some(i) = counts.iter().position(|&n| n == 0) {
        return i;
    }
    let scores: Vec<f64> = means
        .iter()
        .zip(counts)
        .map(|(&m, &n)| m + c * (2.0 * (t as f64).ln() / n as f64).sqrt())
        .collect();
    argmax(&scores)
}

/// State-action value table updated by the one-step Q rule
/// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).
#[derive(Debug, Clone)]
pub struct QTable<S> {
    values: HashMap<S, Vec<f64>>,
    pub n_actions: usize,
    pub alpha: f64,
    pub gamma: f64,
}

impl<S: Eq + Hash + Clone> QTable<S> {
    pub fn new(n_actions: usize, alpha: f64, gamma: f64) -> Self {
        debug_assert!(n_actions >= 1);
        debug_assert!(alpha > 0.0 && alpha <= 1.0 || alpha == 0.0);
        debug_assert!((0.0..1.0).contains(&gamma));
        QTable {
            values: HashMap::new(),
            n_actions,
            alpha,
            gamma,
        }
    }

    pub fn q(&self, s: &S, a: usize) -> f64 {
        self.values.get(s).map_or(0.0, |v| v[a])
    }

    /// Action-value row for `s`; zeros for unseen states.
    pub fn row(&self, s: &S) -> Vec<f64> {
        self.values
            .get(s)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.n_actions])
    }

    pub fn set(&mut self, s: S, a: usize, value: f64) {
        let n = self.n_actions;
        self.values.entry(s).or_insert_with(|| vec![0.0; n])[a] = value;
    }

    pub fn max_q(&self, s: &S) -> f64 {
        self.values
            .get(s)
            .map_or(0.0, |v| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
    }

    /// One-step update; `s_next = None` marks a terminal transition
    /// (the bootstrap term is dropped).
    pub fn update(&mut self, s: S, a: usize, r: f64, s_next: Option<&S>) {
        let bootstrap = s_next.map_or(0.0, |sn| self.max_q(sn));
        let old = self.q(&s, a);
        let new = old + self.alpha * (r + self.gamma * bootstrap - old);
        self.set(s, a, new);
    }

    pub fn select<R: Rng>(&self, s: &S, epsilon: f64, rng: &mut R) -> usize {
        epsilon_greedy_select(&self.row(s), epsilon, rng)
    }

    pub fn greedy(&self, s: &S) -> usize {
        argmax(&self.row(s))
    }

    pub fn states(&self) -> usize {
        self.values.len()
    }
}

impl<S: Eq + Hash + Clone + Ord> QTable<S> {
    /// Deterministically ordered snapshot for export.
    pub fn entries(&self) -> Vec<(S, Vec<f64>)> {
        let mut out: Vec<(S, Vec<f64>)> = self
            .values
            .iter()
            .map(|(s, v)| (s.clone(), v.clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

#[derive(Debug, Clone)]
struct Arms {
    mean: Vec<f64>,
    count: Vec<u64>,
    pulls: u64,
}

/// Per-state bandit arms: incremental mean and pull count per action.
#[derive(Debug, Clone)]
pub struct BanditTable<S> {
    arms: HashMap<S, Arms>,
    pub n_actions: usize,
    pub epsilon: f64,
    pub c: f64,
}

impl<S: Eq + Hash + Clone> BanditTable<S> {
    pub fn new(n_actions: usize, epsilon: f64, c: f64) -> Self {
        debug_assert!(n_actions >= 1);
        BanditTable {
            arms: HashMap::new(),
            n_actions,
            epsilon,
            c,
        }
    }

    pub fn mean(&self, s: &S, a: usize) -> f64 {
        self.arms.get(s).map_or(0.0, |arm| arm.mean[a])
    }

    pub fn count(&self, s: &S, a: usize) -> u64 {
        self.arms.get(s).map_or(0, |arm| arm.count[a])
    }

    /// Total pulls recorded for `s` (the t of the UCB bonus).
    pub fn pulls(&self, s: &S) -> u64 {
        self.arms.get(s).map_or(0, |arm| arm.pulls)
    }

    pub fn means(&self, s: &S) -> Vec<f64> {
        self.arms
            .get(s)
            .map_or_else(|| vec![0.0; self.n_actions], |arm| arm.mean.clone())
    }

    pub fn counts(&self, s: &S) -> Vec<u64> {
        self.arms
            .get(s)
            .map_or_else(|| vec![0; self.n_actions], |arm| arm.count.clone())
    }

    /// Record a pull: count += 1, incremental mean, total pulls += 1.
    pub fn update(&mut self, s: S, a: usize, reward: f64) {
        let n = self.n_actions;
        let arm = self.arms.entry(s).or_insert_with(|| Arms {
            mean: vec![0.0; n],
            count: vec![0; n],
            pulls: 0,
        });
        arm.count[a] += 1;
        arm.mean[a] += (reward - arm.mean[a]) / arm.count[a] as f64;
        arm.pulls += 1;
    }

    pub fn select_egreedy<R: Rng>(&self, s: &S, epsilon: f64, rng: &mut R) -> usize {
        epsilon_greedy_select(&self.means(s), epsilon, rng)
    }

    pub fn select_ucb(&self, s: &S, c: f64, t: u64) -> usize {
        ucb_select(&self.means(s), &self.counts(s), c, t)
    }
}

impl<S: Eq + Hash + Clone + Ord> BanditTable<S> {
    pub fn entries(&self) -> Vec<(S, Vec<f64>, Vec<u64>)> {
        let mut out: Vec<(S, Vec<f64>, Vec<u64>)> = self
            .arms
            .iter()
            .map(|(s, arm)| (s.clone(), arm.mean.clone(), arm.count.clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Rows of named, finite-valued attributes with a class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub attributes: Vec<String>,
    pub rows: Vec<(Vec<String>, String)>,
}

impl LabeledDataset {
    pub fn validate(&self) -> Result<(), LearnError> {
        if self.rows.is_empty() {
            return Err(LearnError::EmptyDataset);
        }
        let expected = self.attributes.len();
        for (values, _) in &self.rows {
            if values.len() != expected {
                return Err(LearnError::ArityMismatch {
                    got: values.len(),
                    expected,
                });
            }
        }
        Ok(())
    }
}

fn label_entropy<'a>(labels: impl Iterator<Item = &'a str>, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    let n = total as f64;
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        })
        .sum()
}

/// Shannon entropy (base 2) of the label distribution.
pub fn entropy(dataset: &LabeledDataset) -> f64 {
    label_entropy(
        dataset.rows.iter().map(|(_, l)| l.as_str()),
        dataset.rows.len(),
    )
}

/// Information gain of splitting on `attribute`: the entropy drop from
/// the parent to the value-weighted children. Clamped at zero against
/// float rounding, matching the mathematical lower bound.
pub fn info_gain(dataset: &LabeledDataset, attribute: usize) -> f64 {
    let total = dataset.rows.len();
    if total == 0 {
        return 0.0;
    }
    let parent = entropy(dataset);
    let mut by_value: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (values, label) in &dataset.rows {
        by_value
            .entry(values[attribute].as_str())
            .or_default()
            .push(label.as_str());
    }
    let weighted: f64 = by_value
        .values()
        .map(|labels| {
            let weight = labels.len() as f64 / total as f64;
            weight * label_entropy(labels.iter().copied(), labels.len())
        })
        .sum();
    (parent - weighted).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        label: String,
    },
    Split {
        attribute: usize,
        /// Fallback prediction for attribute values unseen in training.
        majority: String,
        branches: BTreeMap<String, TreeNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub attributes: Vec<String>,
    pub root: TreeNode,
}

/// Majority label, ties to the lexicographically smallest.
fn majority_label(rows: &[(Vec<String>, String)]) -> String {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, l) in rows {
        *counts.entry(l.as_str()).or_default() += 1;
    }
    // ascending label iteration plus strict improvement keeps the
    // smallest label among equal counts
    let mut best: Option<(&str, usize)> = None;
    for (&label, &count) in &counts {
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((label, count));
        }
    }
    best.expect("majority of nonempty rows").0.to_string()
}

/// Greedy recursive training: split on the max-information-gain
/// attribute (ties to the first declared), stopping at purity, the
/// depth cap, or when no attribute takes two values among the rows.
/// Zero-gain splits are still taken when a distinguishing attribute
/// exists, so parity-style concepts remain learnable.
pub fn train_tree(dataset: &LabeledDataset, max_depth: usize) -> Result<DecisionTree, LearnError> {
    dataset.validate()?;
    if max_depth == 0 {
        return Err(LearnError::BadDepth);
    }
    let root = build(dataset, &dataset.rows, max_depth);
    Ok(DecisionTree {
        attributes: dataset.attributes.clone(),
        root,
    })
}

fn build(dataset: &LabeledDataset, rows: &[(Vec<String>, String)], depth_left: usize) -> TreeNode {
    let first_label = &rows[0].1;
    if rows.iter().all(|(_, l)| l == first_label) {
        return TreeNode::Leaf {
            label: first_label.clone(),
        };
    }
    let majority = majority_label(rows);
    if depth_left == 0 {
        return TreeNode::Leaf { label: majority };
    }
    let subset = LabeledDataset {
        attributes: dataset.attributes.clone(),
        rows: rows.to_vec(),
    };
    let splittable = |a: usize| {
        let first = &rows[0].0[a];
        rows.iter().any(|(v, _)| &v[a] != first)
    };
    let mut best: Option<(usize, f64)> = None;
    for a in 0..dataset.attributes.len() {
        if !splittable(a) {
            continue;
        }
        let gain = info_gain(&subset, a);
        let better = match best {
            None => true,
            Some((_, g)) => gain > g,
        };
        if better {
            best = Some((a, gain));
        }
    }
    let Some((attribute, _)) = best else {
        // no attribute distinguishes these rows
        return TreeNode::Leaf { label: majority };
    };
    let mut partitions: BTreeMap<String, Vec<(Vec<String>, String)>> = BTreeMap::new();
    for row in rows {
        partitions
            .entry(row.0[attribute].clone())
            .or_default()
            .push(row.clone());
    }
    let branches = partitions
        .into_iter()
        .map(|(value, part)| (value, build(dataset, &part, depth_left - 1)))
        .collect();
    TreeNode::Split {
        attribute,
        majority,
        branches,
    }
}

/// Walk the tree; unseen attribute values fall back to the node's
/// majority label.
pub fn classify<'a>(tree: &'a DecisionTree, row: &[String]) -> &'a str {
    let mut node = &tree.root;
    loop {
        match node {
            TreeNode::Leaf { label } => return label,
            TreeNode::Split {
                attribute,
                majority,
                branches,
            } => match branches.get(&row[*attribute]) {
                Some(child) => node = child,
                None => return majority,
            },
        }
    }
}
