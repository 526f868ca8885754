//! Protocols as transition tables, configurations, and single-step semantics.
//!
//! A [`Protocol`] is a fully materialised `(Q, Y, gamma, delta)`: states are
//! dense ids `0..state_count`, `delta` is total and deterministic, and the
//! output of every state is either yes or no. The protocol factories in
//! [`crate::protocols`] build these tables from structured state types.

mod reach;
mod run;

pub use reach::{
    check_stable, check_stable_from, enumerate_reachable, is_stable_configuration, BottomScc, ReachableGraph, StabilityReport,
    StabilityVerdict,
};
pub use run::{replay, run, run_from, run_observed, OutputSample, RunOptions, StepEvent, StepRecord, Trace, Verdict};

use std::fmt;
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AgentId, Graph, GraphClass};

pub type StateId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Yes,
    No,
}

impl Output {
    pub fn from_bool(yes: bool) -> Self {
        if yes {
            Output::Yes
        } else {
            Output::No
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Output::Yes => 'y',
            Output::No => 'n',
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Output::Yes => "yes",
            Output::No => "no",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Protocol {
    name: String,
    params: serde_json::Value,
    state_count: usize,
    initial: StateId,
    table: Vec<(StateId, StateId)>,
    outputs: Vec<Output>,
    labels: Vec<String>,
    weak_fair: bool,
    class: Option<GraphClass>,
}

impl Protocol {
    /// Materialises a protocol by evaluating `delta` on every ordered state
    /// pair.
    pub fn from_fn(
        name: impl Into<String>,
        params: serde_json::Value,
        state_count: usize,
        initial: StateId,
        delta: impl Fn(StateId, StateId) -> (StateId, StateId),
        gamma: impl Fn(StateId) -> Output,
        label: impl Fn(StateId) -> String,
    ) -> Result<Self> {
        let name = name.into();
        let bad = |reason: String| Error::ProtocolSpec { spec: name.clone(), reason };
        if state_count == 0 || state_count > StateId::MAX as usize {
            return Err(bad(format!("state count {state_count} out of range")));
        }
        if initial as usize >= state_count {
            return Err(bad("initial state out of range".into()));
        }
        let mut table = Vec::with_capacity(state_count * state_count);
        for p in 0..state_count as StateId {
            for q in 0..state_count as StateId {
                let (p2, q2) = delta(p, q);
                if p2 as usize >= state_count || q2 as usize >= state_count {
                    return Err(bad(format!("delta({p}, {q}) leaves the state space")));
                }
                table.push((p2, q2));
            }
        }
        let ids = 0..state_count as StateId;
        Ok(Protocol {
            params,
            state_count,
            initial,
            table,
            outputs: ids.clone().map(gamma).collect(),
            labels: ids.map(label).collect(),
            weak_fair: false,
            class: None,
            name,
        })
    }

    /// Declares the protocol weak-fairness compatible; its table must then be
    /// orientation-symmetric.
    pub fn weak_fair(mut self) -> Result<Self> {
        if let Some((p, q)) = self.symmetry_violations().into_iter().next() {
            return Err(Error::ProtocolSpec {
                spec: self.name.clone(),
                reason: format!("claims weak-fair compatibility but delta({p}, {q}) is not mirrored"),
            });
        }
        self.weak_fair = true;
        Ok(self)
    }

    pub fn with_class(mut self, class: GraphClass) -> Self {
        self.class = Some(class);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn is_weak_fair(&self) -> bool {
        self.weak_fair
    }

    /// The graph property this protocol identifies, if any.
    pub fn class(&self) -> Option<GraphClass> {
        self.class
    }

    /// Designated initial state; identical for every agent.
    pub fn initial_state(&self, _agent: AgentId, _n: usize) -> StateId {
        self.initial
    }

    pub fn initial_configuration(&self, n: usize) -> Configuration {
        Configuration((0..n).map(|a| self.initial_state(a, n)).collect())
    }

    #[inline]
    pub fn delta(&self, p: StateId, q: StateId) -> (StateId, StateId) {
        self.table[p as usize * self.state_count + q as usize]
    }

    #[inline]
    pub fn gamma(&self, s: StateId) -> Output {
        self.outputs[s as usize]
    }

    pub fn label(&self, s: StateId) -> &str {
        &self.labels[s as usize]
    }

    /// Ordered pairs `(p, q)`, `p != q`, where `delta(q, p)` is not the mirror
    /// of `delta(p, q)`.
    pub fn symmetry_violations(&self) -> Vec<(StateId, StateId)> {
        let mut out = Vec::new();
        for p in 0..self.state_count as StateId {
            for q in 0..self.state_count as StateId {
                if p != q {
                    let (p2, q2) = self.delta(p, q);
                    if self.delta(q, p) != (q2, p2) {
                        out.push((p, q));
                    }
                }
            }
        }
        out
    }

    pub fn outputs_of(&self, config: &Configuration) -> Vec<Output> {
        config.iter().map(|&s| self.gamma(s)).collect()
    }

    /// The common output of every agent, if there is one.
    pub fn uniform_output(&self, config: &[StateId]) -> Option<Output> {
        let first = self.gamma(*config.first()?);
        config.iter().all(|&s| self.gamma(s) == first).then_some(first)
    }

    pub fn validate_configuration(&self, graph: &Graph, config: &Configuration) -> Result<()> {
        if config.len() != graph.n() {
            return Err(Error::InvalidConfiguration(format!("{} states for {} agents", config.len(), graph.n())));
        }
        if let Some(&s) = config.iter().find(|&&s| s as usize >= self.state_count) {
            return Err(Error::InvalidConfiguration(format!("state {s} out of range")));
        }
        Ok(())
    }

    /// Transition with the identity table and a constant output.
    pub fn constant(output: Output) -> Self {
        Protocol::from_fn("constant", serde_json::json!({ "output": output }), 1, 0, |p, q| (p, q), |_| output, |_| "c".into())
            .expect("one-state protocol is valid")
    }
}

/// The vector of agent states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration(pub Vec<StateId>);

impl Deref for Configuration {
    type Target = Vec<StateId>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for Configuration {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl From<Vec<StateId>> for Configuration {
    fn from(v: Vec<StateId>) -> Self {
        Configuration(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interaction {
    pub initiator: AgentId,
    pub responder: AgentId,
}

impl Interaction {
    pub fn new(initiator: AgentId, responder: AgentId) -> Self {
        Interaction { initiator, responder }
    }

    pub fn reversed(self) -> Self {
        Interaction { initiator: self.responder, responder: self.initiator }
    }

    pub fn validate(&self, graph: &Graph) -> Result<()> {
        if self.initiator != self.responder && graph.has_edge(self.initiator, self.responder) {
            Ok(())
        } else {
            Err(Error::NotAnEdge { initiator: self.initiator, responder: self.responder })
        }
    }
}

impl From<(AgentId, AgentId)> for Interaction {
    fn from((a, b): (AgentId, AgentId)) -> Self {
        Interaction::new(a, b)
    }
}

/// Applies one interaction in place. Only the two participants change.
pub fn apply(protocol: &Protocol, graph: &Graph, config: &mut Configuration, it: Interaction) -> Result<()> {
    it.validate(graph)?;
    let (a, b) = (it.initiator, it.responder);
    let (p, q) = protocol.delta(config[a], config[b]);
    config[a] = p;
    config[b] = q;
    Ok(())
}

/// Returns the successor configuration of `config` under `it`.
pub fn step(protocol: &Protocol, graph: &Graph, config: &Configuration, it: Interaction) -> Result<Configuration> {
    let mut next = config.clone();
    apply(protocol, graph, &mut next, it)?;
    Ok(next)
}
