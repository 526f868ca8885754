use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid graph spec `{spec}`: {reason}")]
    GraphSpec { spec: String, reason: String },

    #[error("malformed edge-list file at line {line}: {reason}")]
    GraphFile { line: usize, reason: String },

    #[error("generator gave up after {attempts} attempts: {reason}")]
    GeneratorExhausted { attempts: usize, reason: String },

    #[error("invalid protocol spec `{spec}`: {reason}")]
    ProtocolSpec { spec: String, reason: String },

    #[error("invalid scheduler spec `{spec}`: {reason}")]
    SchedulerSpec { spec: String, reason: String },

    #[error("interaction ({initiator}, {responder}) is not an edge of the graph")]
    NotAnEdge { initiator: usize, responder: usize },

    #[error("configuration invalid for protocol/graph: {0}")]
    InvalidConfiguration(String),

    #[error("graph has no edges; no interaction is possible")]
    NoEdges,

    #[error("reachable configuration count exceeded cap of {cap}")]
    CapExceeded { cap: usize },

    #[error("trace replay diverged at step {step}: {reason}")]
    ReplayMismatch { step: u64, reason: String },

    #[error("construction budget exhausted: {0}")]
    Budget(String),

    #[error("construction assertion failed: {0}")]
    Construction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
