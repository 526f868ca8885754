//! Interaction sources.
//!
//! * `random:SEED` picks an edge uniformly, then an orientation uniformly, so
//!   every ordered adjacent pair has probability `1 / (2|E|)` per step. This is
//!   the globally-fair source (globally fair with probability 1).
//! * `rr` sweeps all `2|E|` ordered pairs in canonical order: the sorted edge
//!   list, `(u, v)` then `(v, u)`. Weakly fair and fully deterministic.
//! * `rr-oneway` sweeps only the `(u, v)`, `u < v` orientation of each edge.
//!   Every adjacent pair interacts infinitely often but one agent never
//!   initiates on that edge.
//! * `script:PATH` replays a JSON list of `[initiator, responder]` pairs and
//!   then signals its end.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::Interaction;
use crate::error::{Error, Result};
use crate::graph::{AgentId, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchedulerSpec {
    Random { seed: u64 },
    RoundRobin,
    RoundRobinOneWay,
    Script { path: Option<String>, steps: Vec<Interaction> },
}

impl SchedulerSpec {
    pub fn random(seed: u64) -> Self {
        SchedulerSpec::Random { seed }
    }

    pub fn script(steps: Vec<Interaction>) -> Self {
        SchedulerSpec::Script { path: None, steps }
    }

    pub fn seed(&self) -> u64 {
        match self {
            SchedulerSpec::Random { seed } => *seed,
            _ => 0,
        }
    }

    pub fn build(&self, graph: &Graph) -> Result<Box<dyn Scheduler>> {
        if graph.edge_count() == 0 && !matches!(self, SchedulerSpec::Script { .. }) {
            return Err(Error::NoEdges);
        }
        Ok(match self {
            SchedulerSpec::Random { seed } => Box::new(RandomScheduler::new(*seed)),
            SchedulerSpec::RoundRobin => Box::new(RoundRobin::new(graph, true)),
            SchedulerSpec::RoundRobinOneWay => Box::new(RoundRobin::new(graph, false)),
            SchedulerSpec::Script { steps, .. } => {
                for it in steps {
                    it.validate(graph)?;
                }
                Box::new(ScriptScheduler { steps: steps.clone() })
            }
        })
    }
}

impl fmt::Display for SchedulerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchedulerSpec::Random { seed } => write!(f, "random:{seed}"),
            SchedulerSpec::RoundRobin => write!(f, "rr"),
            SchedulerSpec::RoundRobinOneWay => write!(f, "rr-oneway"),
            SchedulerSpec::Script { path: Some(p), .. } => write!(f, "script:{p}"),
            SchedulerSpec::Script { path: None, .. } => write!(f, "script"),
        }
    }
}

impl FromStr for SchedulerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::SchedulerSpec { spec: s.to_string(), reason };
        match s {
            "rr" => return Ok(SchedulerSpec::RoundRobin),
            "rr-oneway" => return Ok(SchedulerSpec::RoundRobinOneWay),
            _ => {}
        }
        if let Some(seed) = s.strip_prefix("random:") {
            let seed = seed.parse().map_err(|_| err("seed must be a u64".into()))?;
            return Ok(SchedulerSpec::Random { seed });
        }
        if let Some(path) = s.strip_prefix("script:") {
            let bytes = std::fs::read(path).map_err(|e| err(e.to_string()))?;
            let steps = parse_script(&bytes).map_err(|e| err(e.to_string()))?;
            return Ok(SchedulerSpec::Script { path: Some(path.to_string()), steps });
        }
        Err(err("expected random:SEED, rr, rr-oneway or script:PATH".into()))
    }
}

/// Parses a script file: a JSON list of `[initiator, responder]` pairs.
pub fn parse_script(bytes: &[u8]) -> Result<Vec<Interaction>> {
    let pairs: Vec<(AgentId, AgentId)> = serde_json::from_slice(bytes)?;
    Ok(pairs.into_iter().map(Interaction::from).collect())
}

pub fn write_script(steps: &[Interaction]) -> String {
    let pairs: Vec<(AgentId, AgentId)> = steps.iter().map(|it| (it.initiator, it.responder)).collect();
    serde_json::to_string(&pairs).expect("pairs serialize")
}

pub trait Scheduler {
    /// The interaction for step `step`, or `None` once a script is exhausted.
    fn next(&mut self, graph: &Graph, step: u64) -> Option<Interaction>;
}

pub struct RandomScheduler {
    rng: ChaCha8Rng,
}

impl RandomScheduler {
    pub fn new(seed: u64) -> Self {
        RandomScheduler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Scheduler for RandomScheduler {
    fn next(&mut self, graph: &Graph, _step: u64) -> Option<Interaction> {
        let (u, v) = graph.edges()[self.rng.gen_range(0..graph.edge_count())];
        Some(if self.rng.gen::<bool>() { Interaction::new(u, v) } else { Interaction::new(v, u) })
    }
}

pub struct RoundRobin {
    order: Vec<Interaction>,
}

impl RoundRobin {
    pub fn new(graph: &Graph, both_orientations: bool) -> Self {
        RoundRobin { order: canonical_order(graph, both_orientations) }
    }
}

impl Scheduler for RoundRobin {
    fn next(&mut self, _graph: &Graph, step: u64) -> Option<Interaction> {
        Some(self.order[(step % self.order.len() as u64) as usize])
    }
}

/// The canonical sweep: sorted edges, `(u, v)` then (optionally) `(v, u)`.
pub fn canonical_order(graph: &Graph, both_orientations: bool) -> Vec<Interaction> {
    graph
        .edges()
        .iter()
        .flat_map(|&(u, v)| {
            let fwd = Interaction::new(u, v);
            if both_orientations {
                vec![fwd, fwd.reversed()]
            } else {
                vec![fwd]
            }
        })
        .collect()
}

pub struct ScriptScheduler {
    steps: Vec<Interaction>,
}

impl Scheduler for ScriptScheduler {
    fn next(&mut self, _graph: &Graph, step: u64) -> Option<Interaction> {
        self.steps.get(step as usize).copied()
    }
}

/// Per-ordered-pair interaction counts over a finite execution prefix.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FairnessAudit {
    /// `(initiator, responder, count)` for every ordered adjacent pair, in
    /// canonical order.
    pub counts: Vec<(AgentId, AgentId, u64)>,
    /// Ordered pairs that never interacted (weak-fairness debt).
    pub debt: Vec<(AgentId, AgentId)>,
    /// Edges on which neither orientation occurred.
    pub unordered_debt: Vec<(AgentId, AgentId)>,
}

impl FairnessAudit {
    pub fn zero_debt(&self) -> bool {
        self.debt.is_empty()
    }
}

pub fn fairness_audit(interactions: &[Interaction], graph: &Graph) -> FairnessAudit {
    let order = canonical_order(graph, true);
    let mut counts: Vec<u64> = vec![0; order.len()];
    for it in interactions {
        if let Ok(i) = order.binary_search_by(|o| canonical_key(*o).cmp(&canonical_key(*it))) {
            counts[i] += 1;
        }
    }
    let counts: Vec<(AgentId, AgentId, u64)> = order.iter().zip(&counts).map(|(o, &c)| (o.initiator, o.responder, c)).collect();
    let debt = counts.iter().filter(|c| c.2 == 0).map(|c| (c.0, c.1)).collect();
    let unordered_debt = counts.chunks(2).filter(|pair| pair.iter().all(|c| c.2 == 0)).map(|pair| (pair[0].0, pair[0].1)).collect();
    FairnessAudit { counts, debt, unordered_debt }
}

// Sort key matching `canonical_order`: edge, then forward before reverse.
fn canonical_key(it: Interaction) -> (AgentId, AgentId, bool) {
    let (u, v) = (it.initiator.min(it.responder), it.initiator.max(it.responder));
    (u, v, it.initiator != u)
}
