//! The three identification protocols and their spec strings.
//!
//! * `tree-id`
//! * `kreg-id:k=K,bound=B[,exact]`
//! * `star-id:n=N` (or bare `star-id`, taking `n` from the graph)

pub mod kreg_id;
pub mod star_id;
pub mod tree_id;

use std::fmt;
use std::str::FromStr;

pub use kreg_id::{kreg_id, level_probe, KriParams, KriState, KriToken, LevelProbe};
pub use star_id::{completed_layout_holds, si_conservation, star_id, SiRole, SiState, Star};
pub use tree_id::{token_census, tree_id, TiState, TiToken, TokenCensus};

use crate::engine::{Configuration, Protocol};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolSpec {
    TreeId,
    KregId { k: usize, bound: usize, exact: bool },
    StarId { n: Option<usize> },
}

impl ProtocolSpec {
    /// Builds the transition table; `n` fills in a missing star-id size.
    pub fn instantiate(&self, n: usize) -> Result<Protocol> {
        match *self {
            ProtocolSpec::TreeId => Ok(tree_id()),
            ProtocolSpec::KregId { k, bound, exact } => kreg_id(k, bound, exact),
            ProtocolSpec::StarId { n: given } => star_id(given.unwrap_or(n)),
        }
    }
}

impl fmt::Display for ProtocolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolSpec::TreeId => write!(f, "tree-id"),
            ProtocolSpec::KregId { k, bound, exact: false } => write!(f, "kreg-id:k={k},bound={bound}"),
            ProtocolSpec::KregId { k, bound, exact: true } => write!(f, "kreg-id:k={k},bound={bound},exact"),
            ProtocolSpec::StarId { n: Some(n) } => write!(f, "star-id:n={n}"),
            ProtocolSpec::StarId { n: None } => write!(f, "star-id"),
        }
    }
}

impl FromStr for ProtocolSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::ProtocolSpec { spec: s.to_string(), reason: reason.to_string() };
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for part in args.split(',').filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some((key, v)) => kv.push((key, Some(v.parse::<usize>().map_err(|_| err("parameter values must be integers"))?))),
                None => kv.push((part, None)),
            }
        }
        let get = |key: &str| kv.iter().find(|(k, _)| *k == key).and_then(|(_, v)| *v);
        let allow = |keys: &[&str]| {
            if kv.iter().all(|(k, _)| keys.contains(k)) {
                Ok(())
            } else {
                Err(err(&format!("allowed parameters: {}", keys.join(", "))))
            }
        };
        match name {
            "tree-id" => {
                allow(&[])?;
                Ok(ProtocolSpec::TreeId)
            }
            "kreg-id" => {
                allow(&["k", "bound", "exact"])?;
                let k = get("k").ok_or_else(|| err("missing k"))?;
                let bound = get("bound").ok_or_else(|| err("missing bound"))?;
                let exact = kv.iter().any(|(k, v)| *k == "exact" && v.is_none());
                KriParams::new(k, bound, exact)?;
                Ok(ProtocolSpec::KregId { k, bound, exact })
            }
            "star-id" => {
                allow(&["n"])?;
                Ok(ProtocolSpec::StarId { n: get("n") })
            }
            _ => Err(err("expected tree-id, kreg-id:k=K,bound=B[,exact] or star-id:n=N")),
        }
    }
}
