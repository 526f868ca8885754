//! A triangle simulated by a 6-ring, and the doubled triangle.
//!
//! Agents `x` and `x + 3` of the ring both mirror agent `x` of the triangle.
//! An interaction touching agent 0 is played once in each half; any other
//! interaction `(x, y)` is played crosswise as `(x, y + 3)` then `(x + 3, y)`.
//! A protocol that accepts the 6-ring as bipartite must therefore accept the
//! triangle, and by doubling also a non-bipartite 6-agent graph.

use serde::Serialize;

use super::double::{double_graph, DoubledGraph};
use super::{replay_script, EquivalenceWitness};
use crate::engine::{run, Interaction, Protocol, RunOptions, Trace};
use crate::error::Result;
use crate::graph::{is_bipartite, is_kregular, Graph};
use crate::scheduler::SchedulerSpec;

#[derive(Debug, Clone)]
pub struct BipartiteTriple {
    pub triangle: Graph,
    pub ring6: Graph,
    pub doubled: DoubledGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleChecks {
    pub triangle_bipartite: bool,
    pub ring6_bipartite: bool,
    pub ring6_two_regular: bool,
    pub doubled_bipartite: bool,
    pub doubled_edges: usize,
}

impl TripleChecks {
    pub fn passed(&self) -> bool {
        !self.triangle_bipartite && self.ring6_bipartite && self.ring6_two_regular && !self.doubled_bipartite && self.doubled_edges == 10
    }
}

pub fn build_bipartite_triple() -> BipartiteTriple {
    let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).expect("triangle");
    let ring6 = Graph::from_edges(6, [(0, 1), (1, 5), (5, 3), (3, 4), (4, 2), (2, 0)]).expect("6-ring");
    let doubled = double_graph(&triangle).expect("triangle doubles");
    BipartiteTriple { triangle, ring6, doubled }
}

impl BipartiteTriple {
    pub fn checks(&self) -> TripleChecks {
        TripleChecks {
            triangle_bipartite: is_bipartite(&self.triangle),
            ring6_bipartite: is_bipartite(&self.ring6),
            ring6_two_regular: is_kregular(&self.ring6, 2),
            doubled_bipartite: is_bipartite(&self.doubled.doubled),
            doubled_edges: self.doubled.doubled.edge_count(),
        }
    }
}

/// The two ring interactions that simulate one triangle interaction.
pub fn map_triangle_interaction(it: Interaction) -> [Interaction; 2] {
    let (x, y) = (it.initiator, it.responder);
    if x == 0 || y == 0 {
        [Interaction::new(x, y), Interaction::new(x + 3, y + 3)]
    } else {
        [Interaction::new(x, y + 3), Interaction::new(x + 3, y)]
    }
}

#[derive(Debug, Clone)]
pub struct TriangleRingExecution {
    pub triangle_trace: Trace,
    pub ring_trace: Trace,
    /// Triangle and ring configurations after every simulated step.
    pub witness: EquivalenceWitness,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangleRingReport {
    pub checks: TripleChecks,
    pub steps: u64,
    pub witness_pairs: usize,
    pub witness_violations: usize,
    pub triangle_verdict: String,
    pub witness_sample: Vec<(Vec<u32>, Vec<u32>)>,
    pub passed: bool,
}

impl TriangleRingExecution {
    pub fn passed(&self) -> bool {
        self.witness.holds()
    }

    pub fn report(&self, checks: TripleChecks) -> TriangleRingReport {
        TriangleRingReport {
            checks,
            steps: self.triangle_trace.steps_taken,
            witness_pairs: self.witness.pairs.len(),
            witness_violations: self.witness.violations().len(),
            triangle_verdict: self.triangle_trace.verdict.to_string(),
            witness_sample: self.witness.sample(3),
            passed: checks.passed() && self.passed(),
        }
    }
}

/// Runs `steps` triangle steps under `scheduler` and mirrors them on the
/// 6-ring.
pub fn build_triangle_to_ring_execution(protocol: &Protocol, scheduler: &SchedulerSpec, steps: u64) -> Result<TriangleRingExecution> {
    let triple = build_bipartite_triple();
    let opts = RunOptions { max_steps: steps, window: steps, record_steps: true };
    let triangle_trace = run(protocol, &triple.triangle, "ring:3", scheduler, opts)?;
    let script: Vec<Interaction> = triangle_trace.interactions().into_iter().flat_map(map_triangle_interaction).collect();
    let marks: Vec<u64> = (0..=triangle_trace.steps.len() as u64).map(|i| 2 * i).collect();
    let (ring_trace, ring_at) = replay_script(protocol, &triple.ring6, "ring6", &script, protocol.initial_configuration(6), &marks)?;

    let mut witness = EquivalenceWitness::new(3);
    let mut config = protocol.initial_configuration(3);
    witness.push(&config, &ring_at[0]);
    for (s, d) in triangle_trace.steps.iter().zip(&ring_at[1..]) {
        for (&agent, &state) in &s.after {
            config[agent] = state;
        }
        witness.push(&config, d);
    }
    Ok(TriangleRingExecution { triangle_trace, ring_trace, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_oracles() {
        let t = build_bipartite_triple();
        let c = t.checks();
        assert!(c.passed(), "{c:?}");
        assert_eq!(t.ring6.edges(), &[(0, 1), (0, 2), (1, 5), (2, 4), (3, 4), (3, 5)]);
    }

    #[test]
    fn mapping_rules() {
        assert_eq!(map_triangle_interaction(Interaction::new(0, 1)), [Interaction::new(0, 1), Interaction::new(3, 4)]);
        assert_eq!(map_triangle_interaction(Interaction::new(1, 2)), [Interaction::new(1, 5), Interaction::new(4, 2)]);
        assert_eq!(map_triangle_interaction(Interaction::new(2, 0)), [Interaction::new(2, 0), Interaction::new(5, 3)]);
        let ring = build_bipartite_triple().ring6;
        for (x, y) in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)] {
            for it in map_triangle_interaction(Interaction::new(x, y)) {
                assert!(it.validate(&ring).is_ok(), "{it:?}");
            }
        }
    }
}
