// Doubling a line: a weakly-fair execution on a cyclic graph that the tree
// protocol still answers `yes` on.

use popgraph::graph::generate;
use popgraph::impossibility::build_doubled_execution;
use popgraph::protocols::tree_id;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(&"line:3".parse()?)?;
    let ex = build_doubled_execution(&tree_id(), &g, "line:3", 100, 1_000_000)?;
    let r = ex.report();
    println!("doubled edges {:?}", r.doubled_edges);
    println!("prefix {} sweeps, period {} sweeps, {} segments", r.prefix_sweeps, r.period_sweeps, r.segments);
    println!("output {:?} at every boundary: {}, fairness debt {}", r.base_output, r.boundary_outputs_uniform, r.fairness_debt);
    assert!(r.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
