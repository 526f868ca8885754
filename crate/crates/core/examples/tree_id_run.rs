// Simulate the tree-identification protocol on a random tree and on a ring.

use popgraph::engine::{run, RunOptions};
use popgraph::graph::generate;
use popgraph::protocols::{token_census, tree_id};
use popgraph::scheduler::SchedulerSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = tree_id();
    let tree = generate(&"tree:10:7".parse()?)?;
    let t = run(&p, &tree, "tree:10:7", &SchedulerSpec::random(42), RunOptions::for_graph(&tree))?;
    println!("tree:10:7  {} after {} steps", t.verdict, t.steps_taken);
    assert_eq!(t.verdict.to_string(), "converged yes");

    // A cycle is only noticed once a trial succeeds, which on a small ring
    // takes a few thousand steps; give the quiet window room for that.
    let ring = generate(&"ring:3".parse()?)?;
    let opts = RunOptions::for_graph(&ring).window(100_000);
    let t = run(&p, &ring, "ring:3", &SchedulerSpec::random(1), opts)?;
    let census = token_census(&popgraph::engine::Configuration(t.final_config.clone()));
    println!("ring:3     {} after {} steps, tokens {census:?}", t.verdict, t.steps_taken);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
