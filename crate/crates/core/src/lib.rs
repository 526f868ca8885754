//! Population protocols that identify the class of their communication graph.
//!
//! The crate simulates anonymous finite-state agents interacting over the
//! edges of an undirected graph, checks stability exhaustively on small
//! instances, and replays the counterexample executions behind the known
//! impossibility results for weak fairness and arbitrary initial states.
//!
//! * [`graph`]: graphs, generators and exact class oracles.
//! * [`engine`]: transition tables, stepping, runs, traces and the bottom-SCC
//!   stability checker.
//! * [`scheduler`]: random, round-robin and scripted interaction sources.
//! * [`protocols`]: the tree, k-regular and star identification protocols.
//! * [`impossibility`]: executable indistinguishability constructions.
//! * [`cli`]: the command implementations behind the `popgraph` binary.

pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod impossibility;
pub mod protocols;
pub mod scheduler;

pub use error::{Error, Result};
