//! Pump pairs: the 4-line and the 4-ring look alike under weak fairness.
//!
//! Two agents `a` and `b` start in the initial state and interact with the
//! initiator alternating, `a` first. Some pair of states `(sa, sb)` recurs.
//! Driving adjacent pairs back to `(sa, sb)` one edge at a time produces
//! executions on the line and on the ring whose phase-boundary
//! configurations are identical.

use std::collections::HashMap;

use serde::Serialize;

use super::replay_script;
use crate::engine::{Configuration, Interaction, Output, Protocol, StateId, Trace};
use crate::error::{Error, Result};
use crate::graph::{generate, AgentId, Graph, GraphFamily, GraphSpec};
use crate::scheduler::{fairness_audit, FairnessAudit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PumpPair {
    pub sa: StateId,
    pub sb: StateId,
    pub i: usize,
    pub j: usize,
}

/// Positions `0..=len` of the alternating sequence; position 0 is the
/// initial pair and position `t` is reached by the `t`-th transition, in
/// which `a` initiates iff `t` is odd.
pub fn pump_sequence(protocol: &Protocol, len: usize) -> Vec<(StateId, StateId)> {
    let s0 = protocol.initial_state(0, 2);
    let mut out = Vec::with_capacity(len + 1);
    let (mut a, mut b) = (s0, s0);
    out.push((a, b));
    for t in 1..=len {
        (a, b) = step_pair(protocol, (a, b), a_initiates(t));
        out.push((a, b));
    }
    out
}

fn a_initiates(t: usize) -> bool {
    t % 2 == 1
}

fn step_pair(protocol: &Protocol, (a, b): (StateId, StateId), a_first: bool) -> (StateId, StateId) {
    if a_first {
        protocol.delta(a, b)
    } else {
        let (b2, a2) = protocol.delta(b, a);
        (a2, b2)
    }
}

/// The first repetition `i < j` among positions `1, 2, ...`.
pub fn find_pump_pair(protocol: &Protocol) -> PumpPair {
    let s0 = protocol.initial_state(0, 2);
    let mut seen: HashMap<(StateId, StateId), usize> = HashMap::new();
    let mut pair = (s0, s0);
    let mut t = 0;
    loop {
        t += 1;
        pair = step_pair(protocol, pair, a_initiates(t));
        if let Some(&i) = seen.get(&pair) {
            return PumpPair { sa: pair.0, sb: pair.1, i, j: t };
        }
        seen.insert(pair, t);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanKind {
    /// The cycle is positions `i + 1 ..= j` of the first repeat.
    FirstRepeat,
    /// `j = i + 1` and the pair is also fixed by the opposite orientation.
    MirroredFixpoint,
    /// A later repeat with both positions of the same parity, used when the
    /// first repeat has length 1 and is not fixed by both orientations.
    ParityAligned,
}

/// How to reach `(sa, sb)` from the initial pair and how to return to it.
/// Each entry says whether the `a`-role agent initiates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PumpPlan {
    pub pair: PumpPair,
    pub kind: PlanKind,
    pub prefix: Vec<bool>,
    pub cycle: Vec<bool>,
}

pub fn pump_plan(protocol: &Protocol) -> PumpPlan {
    let pair = find_pump_pair(protocol);
    let orient = |range: std::ops::RangeInclusive<usize>| range.map(a_initiates).collect::<Vec<_>>();
    let prefix = orient(1..=pair.i);
    if pair.j - pair.i >= 2 {
        return PumpPlan { pair, kind: PlanKind::FirstRepeat, prefix, cycle: orient(pair.i + 1..=pair.j) };
    }
    let o = a_initiates(pair.j);
    if step_pair(protocol, (pair.sa, pair.sb), !o) == (pair.sa, pair.sb) {
        return PumpPlan { pair, kind: PlanKind::MirroredFixpoint, prefix, cycle: vec![o, !o] };
    }
    // the sequence is eventually periodic in (pair, parity), so this ends
    let s0 = protocol.initial_state(0, 2);
    let mut seen: HashMap<((StateId, StateId), bool), usize> = HashMap::new();
    let mut cur = (s0, s0);
    let mut t = 0;
    loop {
        t += 1;
        cur = step_pair(protocol, cur, a_initiates(t));
        if let Some(&t1) = seen.get(&(cur, t % 2 == 1)) {
            let pair = PumpPair { sa: cur.0, sb: cur.1, i: t1, j: t };
            return PumpPlan { pair, kind: PlanKind::ParityAligned, prefix: orient(1..=t1), cycle: orient(t1 + 1..=t) };
        }
        seen.insert((cur, t % 2 == 1), t);
    }
}

impl PumpPlan {
    fn emit(&self, a: AgentId, b: AgentId, from_initial: bool, cycles: usize, out: &mut Vec<Interaction>) {
        let it = |a_first: bool| if a_first { Interaction::new(a, b) } else { Interaction::new(b, a) };
        if from_initial {
            out.extend(self.prefix.iter().map(|&o| it(o)));
        }
        for _ in 0..cycles {
            out.extend(self.cycle.iter().map(|&o| it(o)));
        }
    }
}

/// `(a-role agent, b-role agent)` driven in the phase after boundary `i`.
fn line_phase(i: usize) -> (AgentId, AgentId) {
    match i {
        0 => (0, 1),
        1 => (2, 3),
        _ => [(0, 1), (2, 1), (2, 3)][i % 3],
    }
}

fn ring_phase(i: usize) -> (AgentId, AgentId) {
    match i {
        0 => (0, 1),
        1 => (2, 3),
        _ => [(0, 1), (2, 1), (2, 3), (0, 3)][i % 4],
    }
}

#[derive(Debug, Clone)]
pub struct LineRingExecution {
    pub plan: PumpPlan,
    pub line: Graph,
    pub ring: Graph,
    pub line_trace: Trace,
    pub ring_trace: Trace,
    /// Configuration at each phase boundary, starting with the initial one.
    pub line_boundaries: Vec<Configuration>,
    pub ring_boundaries: Vec<Configuration>,
    /// Audit of one full period (three phases on the line, four on the ring).
    pub line_audit: FairnessAudit,
    pub ring_audit: FairnessAudit,
}

#[derive(Debug, Clone, Serialize)]
pub struct LineRingReport {
    pub plan: PumpPlan,
    pub phases: usize,
    pub expected_boundary: Vec<StateId>,
    pub line_periodic: bool,
    pub ring_periodic: bool,
    pub boundaries_agree: bool,
    pub boundary_output: Option<Output>,
    pub line_debt: usize,
    pub ring_debt: usize,
    pub passed: bool,
}

impl LineRingExecution {
    /// `[sa, sb, sa, sb]`, the configuration every boundary from the second
    /// one on must equal.
    pub fn expected_boundary(&self) -> Configuration {
        let (sa, sb) = (self.plan.pair.sa, self.plan.pair.sb);
        Configuration(vec![sa, sb, sa, sb])
    }

    fn periodic(&self, boundaries: &[Configuration]) -> bool {
        let want = self.expected_boundary();
        boundaries.len() > 2 && boundaries[2..].iter().all(|c| *c == want)
    }

    pub fn line_periodic(&self) -> bool {
        self.periodic(&self.line_boundaries)
    }

    pub fn ring_periodic(&self) -> bool {
        self.periodic(&self.ring_boundaries)
    }

    pub fn boundary_output(&self, protocol: &Protocol) -> Option<Output> {
        protocol.uniform_output(&self.expected_boundary())
    }

    pub fn passed(&self) -> bool {
        self.line_periodic() && self.ring_periodic() && self.line_audit.zero_debt() && self.ring_audit.zero_debt()
    }

    pub fn report(&self, protocol: &Protocol) -> LineRingReport {
        LineRingReport {
            plan: self.plan.clone(),
            phases: self.line_boundaries.len() - 1,
            expected_boundary: self.expected_boundary().0,
            line_periodic: self.line_periodic(),
            ring_periodic: self.ring_periodic(),
            boundaries_agree: self.line_boundaries[2..] == self.ring_boundaries[2..],
            boundary_output: self.boundary_output(protocol),
            line_debt: self.line_audit.debt.len(),
            ring_debt: self.ring_audit.debt.len(),
            passed: self.passed(),
        }
    }
}

/// Builds `phases` phases on the 4-line and on the 4-ring. Each phase drives
/// its pair through at least two full cycles.
pub fn build_line_ring_executions(protocol: &Protocol, phases: usize) -> Result<LineRingExecution> {
    if phases < 6 {
        return Err(Error::Construction("need at least 6 phases to cover a ring period after the start".into()));
    }
    let plan = pump_plan(protocol);
    let line = generate(&GraphSpec::new(GraphFamily::Line(4)))?;
    let ring = generate(&GraphSpec::new(GraphFamily::Ring(4)))?;

    let build = |phase: fn(usize) -> (AgentId, AgentId)| {
        let mut script = Vec::new();
        let mut marks = vec![0u64];
        for i in 0..phases {
            let (a, b) = phase(i);
            plan.emit(a, b, i < 2, 2, &mut script);
            marks.push(script.len() as u64);
        }
        (script, marks)
    };
    let (line_script, line_marks) = build(line_phase);
    let (ring_script, ring_marks) = build(ring_phase);

    let (line_trace, line_boundaries) =
        replay_script(protocol, &line, "line:4", &line_script, protocol.initial_configuration(4), &line_marks)?;
    let (ring_trace, ring_boundaries) =
        replay_script(protocol, &ring, "ring:4", &ring_script, protocol.initial_configuration(4), &ring_marks)?;

    let period = |marks: &[u64], len: usize| marks[2] as usize..marks[2 + len] as usize;
    let line_audit = fairness_audit(&line_script[period(&line_marks, 3)], &line);
    let ring_audit = fairness_audit(&ring_script[period(&ring_marks, 4)], &ring);

    Ok(LineRingExecution { plan, line, ring, line_trace, ring_trace, line_boundaries, ring_boundaries, line_audit, ring_audit })
}
