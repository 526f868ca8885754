// A converged ring configuration copied onto the line left by removing an
// edge keeps answering `no`.

use popgraph::engine::RunOptions;
use popgraph::graph::generate;
use popgraph::impossibility::edge_removal_counterexample;
use popgraph::protocols::tree_id;
use popgraph::scheduler::SchedulerSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(&"ring:4".parse()?)?;
    let r = edge_removal_counterexample(&tree_id(), &g, "ring:4", (0, 1), &SchedulerSpec::random(0), RunOptions::for_graph(&g), 1_000_000)?;
    println!("stable {:?} after {} steps", r.base_output, r.base_steps);
    println!("{} configurations reachable on {:?}, all {:?}: {}", r.reachable_count, r.reduced_edges, r.base_output, r.outputs_preserved);
    println!("tree before {} after {}", r.base_classes["tree"], r.reduced_classes["tree"]);
    assert!(r.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
