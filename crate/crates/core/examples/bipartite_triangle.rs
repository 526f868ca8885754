// A 6-ring that mirrors every step of a triangle.

use popgraph::impossibility::{build_bipartite_triple, build_triangle_to_ring_execution};
use popgraph::protocols::tree_id;
use popgraph::scheduler::SchedulerSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let triple = build_bipartite_triple();
    let checks = triple.checks();
    println!("{checks:?}");
    let ex = build_triangle_to_ring_execution(&tree_id(), &SchedulerSpec::random(5), 10_000)?;
    let r = ex.report(checks);
    println!("{} steps mirrored, {} witness violations", r.steps, r.witness_violations);
    assert!(r.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
