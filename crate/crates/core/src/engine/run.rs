//! Running a protocol under a scheduler and recording what happened.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Configuration, Interaction, Output, Protocol, StateId};
use crate::error::{Error, Result};
use crate::graph::{AgentId, Graph};
use crate::scheduler::{Scheduler, SchedulerSpec};

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub max_steps: u64,
    /// Output-quiescence window: convergence is declared once every agent
    /// agrees and no output has changed for this many steps.
    pub window: u64,
    /// Keep every step in the trace (off for large sweeps).
    pub record_steps: bool,
}

impl RunOptions {
    pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

    /// `max_steps = 10^6`, `window = 50 |E|`, steps not recorded.
    pub fn for_graph(graph: &Graph) -> Self {
        RunOptions { max_steps: Self::DEFAULT_MAX_STEPS, window: 50 * graph.edge_count().max(1) as u64, record_steps: false }
    }

    pub fn max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn window(mut self, window: u64) -> Self {
        self.window = window;
        self
    }

    pub fn record_steps(mut self, record: bool) -> Self {
        self.record_steps = record;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConvergedYes,
    ConvergedNo,
    Timeout,
    ScriptEnd,
}

impl Verdict {
    pub fn converged(output: Output) -> Self {
        match output {
            Output::Yes => Verdict::ConvergedYes,
            Output::No => Verdict::ConvergedNo,
        }
    }

    pub fn output(self) -> Option<Output> {
        match self {
            Verdict::ConvergedYes => Some(Output::Yes),
            Verdict::ConvergedNo => Some(Output::No),
            _ => None,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::ConvergedYes => "converged yes",
            Verdict::ConvergedNo => "converged no",
            Verdict::Timeout => "timeout",
            Verdict::ScriptEnd => "script end",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub i: u64,
    pub init: AgentId,
    pub resp: AgentId,
    /// States of the two participants after the step, keyed by agent id.
    pub after: BTreeMap<AgentId, StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSample {
    pub i: u64,
    /// One character per agent, `y` or `n`.
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub protocol: String,
    pub params: serde_json::Value,
    pub graph: String,
    pub scheduler: String,
    pub seed: u64,
    pub initial: Vec<StateId>,
    pub steps: Vec<StepRecord>,
    pub outputs: Vec<OutputSample>,
    pub steps_taken: u64,
    #[serde(rename = "final")]
    pub final_config: Vec<StateId>,
    pub verdict: Verdict,
}

impl Trace {
    pub fn interactions(&self) -> Vec<Interaction> {
        self.steps.iter().map(|s| Interaction::new(s.init, s.resp)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// What an observer sees after each interaction.
pub struct StepEvent<'a> {
    pub index: u64,
    pub interaction: Interaction,
    pub before: (StateId, StateId),
    pub config: &'a Configuration,
}

/// Runs from the designated initial configuration.
pub fn run(protocol: &Protocol, graph: &Graph, graph_label: &str, scheduler: &SchedulerSpec, opts: RunOptions) -> Result<Trace> {
    run_observed(protocol, graph, graph_label, scheduler, protocol.initial_configuration(graph.n()), opts, |_| {})
}

/// Runs from an arbitrary starting configuration.
pub fn run_from(
    protocol: &Protocol,
    graph: &Graph,
    graph_label: &str,
    scheduler: &SchedulerSpec,
    initial: Configuration,
    opts: RunOptions,
) -> Result<Trace> {
    run_observed(protocol, graph, graph_label, scheduler, initial, opts, |_| {})
}

/// Runs and calls `observer` after every interaction.
pub fn run_observed(
    protocol: &Protocol,
    graph: &Graph,
    graph_label: &str,
    scheduler: &SchedulerSpec,
    initial: Configuration,
    opts: RunOptions,
    mut observer: impl FnMut(&StepEvent<'_>),
) -> Result<Trace> {
    assert!(opts.window >= 1 && opts.max_steps >= opts.window, "need max_steps >= window >= 1");
    protocol.validate_configuration(graph, &initial)?;
    let mut sched: Box<dyn Scheduler> = scheduler.build(graph)?;

    let n = graph.n();
    let mut config = initial.clone();
    let mut outputs: Vec<Output> = protocol.outputs_of(&config);
    let mut yes = outputs.iter().filter(|&&o| o == Output::Yes).count();
    let mut last_change = 0u64;
    let mut steps = Vec::new();
    let mut samples = Vec::new();
    let mut verdict = Verdict::Timeout;
    let mut taken = 0u64;

    while taken < opts.max_steps {
        let Some(it) = sched.next(graph, taken) else {
            verdict = Verdict::ScriptEnd;
            break;
        };
        it.validate(graph)?;
        let (a, b) = (it.initiator, it.responder);
        let before = (config[a], config[b]);
        let (p, q) = protocol.delta(before.0, before.1);
        config[a] = p;
        config[b] = q;
        for (agent, s) in [(a, p), (b, q)] {
            let o = protocol.gamma(s);
            if o != outputs[agent] {
                if o == Output::Yes {
                    yes += 1;
                } else {
                    yes -= 1;
                }
                outputs[agent] = o;
                last_change = taken + 1;
            }
        }
        if opts.record_steps {
            steps.push(StepRecord { i: taken, init: a, resp: b, after: BTreeMap::from([(a, p), (b, q)]) });
        }
        observer(&StepEvent { index: taken, interaction: it, before, config: &config });
        taken += 1;
        if taken.is_multiple_of(opts.window) {
            samples.push(OutputSample { i: taken, out: outputs.iter().map(|o| o.as_char()).collect() });
        }
        if taken - last_change >= opts.window && (yes == 0 || yes == n) {
            verdict = Verdict::converged(if yes == n { Output::Yes } else { Output::No });
            break;
        }
    }

    Ok(Trace {
        protocol: protocol.name().to_string(),
        params: protocol.params().clone(),
        graph: graph_label.to_string(),
        scheduler: scheduler.to_string(),
        seed: scheduler.seed(),
        initial: initial.0,
        steps,
        outputs: samples,
        steps_taken: taken,
        final_config: config.0,
        verdict,
    })
}

/// Re-executes a recorded trace and checks every recorded state.
pub fn replay(protocol: &Protocol, graph: &Graph, trace: &Trace) -> Result<Configuration> {
    if trace.steps.len() as u64 != trace.steps_taken {
        return Err(Error::ReplayMismatch {
            step: trace.steps.len() as u64,
            reason: format!("{} steps recorded out of {}", trace.steps.len(), trace.steps_taken),
        });
    }
    let mut config = Configuration(trace.initial.clone());
    protocol.validate_configuration(graph, &config)?;
    for s in &trace.steps {
        super::apply(protocol, graph, &mut config, Interaction::new(s.init, s.resp))?;
        for (&agent, &state) in &s.after {
            if config[agent] != state {
                return Err(Error::ReplayMismatch {
                    step: s.i,
                    reason: format!("agent {agent} recorded {state}, replay gives {}", config[agent]),
                });
            }
        }
    }
    if config.0 != trace.final_config {
        return Err(Error::ReplayMismatch { step: trace.steps_taken, reason: "final configuration differs".into() });
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn g(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    /// Two states; the responder copies "no" from a "no" initiator.
    fn epidemic() -> Protocol {
        Protocol::from_fn(
            "epidemic",
            serde_json::json!({}),
            2,
            0,
            |p, q| if p == 1 { (1, 1) } else { (p, q) },
            |s| Output::from_bool(s == 0),
            |s| s.to_string(),
        )
        .unwrap()
    }

    #[test]
    fn constant_protocol_converges_after_one_window() {
        let graph = g("ring:4");
        let p = Protocol::constant(Output::Yes);
        let t = run(&p, &graph, "ring:4", &SchedulerSpec::RoundRobin, RunOptions::for_graph(&graph).window(10)).unwrap();
        assert_eq!(t.verdict, Verdict::ConvergedYes);
        assert_eq!(t.steps_taken, 10);
    }

    #[test]
    fn epidemic_converges_no_and_replays() {
        let graph = g("line:5");
        let p = epidemic();
        let mut init = p.initial_configuration(5);
        init[2] = 1;
        let t = run_from(&p, &graph, "line:5", &SchedulerSpec::random(3), init, RunOptions::for_graph(&graph).record_steps(true)).unwrap();
        assert_eq!(t.verdict, Verdict::ConvergedNo);
        assert_eq!(replay(&p, &graph, &t).unwrap().0, t.final_config);
        let back = Trace::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let graph = g("line:3");
        let p = epidemic();
        let mut init = p.initial_configuration(3);
        init[0] = 1;
        let mut t =
            run_from(&p, &graph, "line:3", &SchedulerSpec::RoundRobin, init, RunOptions::for_graph(&graph).record_steps(true)).unwrap();
        let first = t.steps[0].clone();
        t.steps[0].after.insert(first.resp, 0);
        assert!(matches!(replay(&p, &graph, &t), Err(Error::ReplayMismatch { step: 0, .. })));
    }

    #[test]
    fn timeout_and_script_end() {
        let graph = g("line:2");
        let flip =
            Protocol::from_fn("flip", serde_json::json!({}), 2, 0, |p, q| (1 - p, 1 - q), |s| Output::from_bool(s == 0), |s| s.to_string())
                .unwrap();
        let t = run(&flip, &graph, "line:2", &SchedulerSpec::RoundRobin, RunOptions::for_graph(&graph).max_steps(100).window(5)).unwrap();
        assert_eq!(t.verdict, Verdict::Timeout);
        assert_eq!(t.steps_taken, 100);
        assert_eq!(t.outputs.len(), 20);
        let script = SchedulerSpec::script(vec![Interaction::new(0, 1)]);
        let t = run(&flip, &graph, "line:2", &script, RunOptions::for_graph(&graph).max_steps(100).window(5)).unwrap();
        assert_eq!(t.verdict, Verdict::ScriptEnd);
        assert_eq!(t.steps_taken, 1);
    }

    #[test]
    fn trace_json_shape() {
        let graph = g("line:2");
        let p = epidemic();
        let t = run(&p, &graph, "line:2", &SchedulerSpec::RoundRobin, RunOptions::for_graph(&graph).window(2).record_steps(true)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        for key in ["protocol", "params", "graph", "scheduler", "seed", "steps", "verdict", "outputs"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["steps"][0]["init"], 0);
        assert_eq!(v["steps"][0]["after"]["1"], 0);
        assert_eq!(v["verdict"], "converged_yes");
    }
}
