//! Network topologies and fiber resources.
//!
//! A [`Topology`] is an undirected multigraph of named nodes and fiber
//! links. Links are stored once; spectrum state is shared by both
//! traversal directions. Node and link identifiers are compact indices
//! assigned at load time: nodes are indexed in sorted-name order, so
//! comparing index sequences is the same as comparing name sequences
//! lexicographically.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

/// Index of a node inside a [`Topology`]. Order follows sorted node names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

/// Index of a link inside a [`Topology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// One undirected fiber link. Endpoints are canonicalized so that
/// `src <= dst` in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub src: NodeId,
    pub dst: NodeId,
    pub length_km: f64,
    pub cores: usize,
    pub slots_per_core: usize,
}

impl Link {
    /// The endpoint opposite to `node`, if `node` is an endpoint at all.
    pub fn other(&self, node: NodeId) -> Option<NodeId> {
        if node == self.src {
            Some(self.dst)
        } else if node == self.dst {
            Some(self.src)
        } else {
            None
        }
    }
}

/// Fiber parameters applied uniformly to every link. These come from the
/// run configuration, not from the topology file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSpec {
    pub cores: usize,
    pub slots_per_core: usize,
}

impl Default for FiberSpec {
    fn default() -> Self {
        FiberSpec {
            cores: 4,
            slots_per_core: 320,
        }
    }
}

pub const SUPPORTED_CORE_COUNTS: [usize; 3] = [1, 4, 7];

/// Validated network graph. Immutable after load; safe to share
/// read-only across parallel simulation runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub name: String,
    nodes: Vec<String>,
    links: Vec<Link>,
    /// Per node: (neighbor, link) pairs sorted by (neighbor, link id).
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
    connected: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum NetError {
    #[error("cannot read topology file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed topology file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("topology must declare at least one node")]
    NoNodes,
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("link references undeclared node `{0}`")]
    UnknownEndpoint(String),
    #[error("link {src}-{dst} has nonpositive length {length_km}")]
    NonPositiveLength {
        src: String,
        dst: String,
        length_km: f64,
    },
    #[error("link {0}-{0} is a self-loop")]
    SelfLoop(String),
    #[error("unsupported core count {0} (supported: 1, 4, 7)")]
    UnsupportedCores(usize),
    #[error("slots_per_core must be at least 1")]
    NoSlots,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

/// On-disk topology representation: `name`, `nodes`, `links`. Core and
/// slot counts are deliberately absent; they belong to the run config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyFile {
    pub name: String,
    pub nodes: Vec<String>,
    pub links: Vec<LinkEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkEntry {
    pub src: String,
    pub dst: String,
    pub length_km: f64,
}

impl Topology {
    /// Build a validated topology from a parsed file and fiber parameters.
    ///
    /// Nodes are indexed in sorted-name order; links are canonicalized
    /// (`src <= dst`) and sorted by `(src, dst, length_km)`, so two files
    /// describing the same graph in different orders load identically.
    pub fn from_file(file: &TopologyFile, fiber: FiberSpec) -> Result<Self, NetError> {
        if file.nodes.is_empty() {
            return Err(NetError::NoNodes);
        }
        if !SUPPORTED_CORE_COUNTS.contains(&fiber.cores) {
            return Err(NetError::UnsupportedCores(fiber.cores));
        }
        if fiber.slots_per_core == 0 {
            return Err(NetError::NoSlots);
        }

        let mut nodes = file.nodes.clone();
        nodes.sort();
        if let Some(dup) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(NetError::DuplicateNode(dup[0].clone()));
        }
        let index: HashMap<&str, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), NodeId(i)))
            .collect();

        let mut links = Vec::with_capacity(file.links.len());
        for entry in &file.links {
            let a = *index
                .get(entry.src.as_str())
                .ok_or_else(|| NetError::UnknownEndpoint(entry.src.clone()))?;
            let b = *index
                .get(entry.dst.as_str())
                .ok_or_else(|| NetError::UnknownEndpoint(entry.dst.clone()))?;
            if a == b {
                return Err(NetError::SelfLoop(entry.src.clone()));
            }
            if !(entry.length_km > 0.0) {
                return Err(NetError::NonPositiveLength {
                    src: entry.src.clone(),
                    dst: entry.dst.clone(),
                    length_km: entry.length_km,
                });
            }
            let (src, dst) = if a <= b { (a, b) } else { (b, a) };
            links.push(Link {
                src,
                dst,
                length_km: entry.length_km,
                cores: fiber.cores,
                slots_per_core: fiber.slots_per_core,
            });
        }
        links.sort_by(|x, y| {
            (x.src, x.dst)
                .cmp(&(y.src, y.dst))
                .then(x.length_km.total_cmp(&y.length_km))
        });

        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (i, link) in links.iter().enumerate() {
            adjacency[link.src.0].push((link.dst, LinkId(i)));
            adjacency[link.dst.0].push((link.src, LinkId(i)));
        }
        for list in &mut adjacency {
            list.sort();
        }

        let connected = is_connected(nodes.len(), &adjacency);
        Ok(Topology {
            name: file.name.clone(),
            nodes,
            links,
            adjacency,
            connected,
        })
    }

    /// Serialize back into the on-disk representation.
    pub fn to_file(&self) -> TopologyFile {
        TopologyFile {
            name: self.name.clone(),
            nodes: self.nodes.clone(),
            links: self
                .links
                .iter()
                .map(|l| LinkEntry {
                    src: self.nodes[l.src.0].clone(),
                    dst: self.nodes[l.dst.0].clone(),
                    length_km: l.length_km,
                })
                .collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.nodes[id.0]
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId, NetError> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(name))
            .map(NodeId)
            .map_err(|_| NetError::UnknownNode(name.to_string()))
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// All links incident to `node`, sorted by (neighbor, link id).
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[node.0]
    }

    /// Whether the graph is connected. A disconnected topology loads
    /// fine (some pairs are simply unroutable) but is worth a warning.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn total_length_km(&self) -> f64 {
        self.links.iter().map(|l| l.length_km).sum()
    }
}

fn is_connected(n: usize, adjacency: &[Vec<(NodeId, LinkId)>]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([NodeId(0)]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adjacency[u.0] {
            if !seen[v.0] {
                seen[v.0] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Load and validate a topology file (see [`TopologyFile`] for the format).
pub fn load_topology(path: impl AsRef<FsPath>, fiber: FiberSpec) -> Result<Topology, NetError> {
    let text = std::fs::read_to_string(path)?;
    let file: TopologyFile = serde_json::from_str(&text)?;
    Topology::from_file(&file, fiber)
}

/// Convenience constructor used across tests and examples: nodes by name,
/// links as (src, dst, length_km).
pub fn topology_from_edges(
    name: &str,
    nodes: &[&str],
    edges: &[(&str, &str, f64)],
    fiber: FiberSpec,
) -> Result<Topology, NetError> {
    let file = TopologyFile {
        name: name.to_string(),
        nodes: nodes.iter().map(|s| s.to_string()).collect(),
        links: edges
            .iter()
            .map(|&(s, d, km)| LinkEntry {
                src: s.to_string(),
                dst: d.to_string(),
                length_km: km,
            })
            .collect(),
    };
    Topology::from_file(&file, fiber)
}
