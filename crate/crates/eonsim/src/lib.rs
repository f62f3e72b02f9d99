//! Discrete-event simulator for dynamic lightpath provisioning in
//! multi-core elastic optical networks.
//!
//! The crate models a flex-grid optical network in which connection
//! requests arrive dynamically, are routed over candidate paths, and are
//! assigned contiguous spectrum slots on a single core of each traversed
//! fiber link. It covers:
//!
//! * topology loading and validation ([`net`]),
//! * Poisson traffic generation ([`traffic`]),
//! * shortest-path / k-shortest-path / crosstalk-aware routing ([`routing`]),
//! * first-fit / best-fit / last-fit spectrum assignment with continuity
//!   and contiguity constraints ([`spectrum`]),
//! * an inter-core crosstalk model with admission checks ([`xt`]),
//! * light-segment slicing of requests that do not fit whole ([`slicing`]),
//! * tabular learning agents for path selection ([`learning`]),
//! * the event loop and blocking statistics ([`engine`]),
//! * configuration, parallel sweeps and CSV/JSON emission ([`config`],
//!   [`sweep`], [`output`]).
//!
//! The `examples/` directory carries one runnable program per capability;
//! the `eonsim` binary exposes the same machinery as a batch CLI.

pub mod config;
pub mod engine;
pub mod learning;
pub mod net;
pub mod output;
pub mod rng;
pub mod routing;
pub mod slicing;
pub mod spectrum;
pub mod sweep;
pub mod traffic;
pub mod xt;

pub use config::SimConfig;
pub use engine::{blocking_probability, RunStats};
pub use net::{load_topology, Topology};
pub use routing::Path;
pub use spectrum::SpectrumGrid;
