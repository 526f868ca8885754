// Exhaustive stability check of the tree protocol on every small graph.

use popgraph::engine::{check_stable, Output};
use popgraph::graph::inventory::connected_graphs_up_to;
use popgraph::graph::is_tree;
use popgraph::protocols::tree_id;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = tree_id();
    for g in connected_graphs_up_to(4) {
        let r = check_stable(&p, &g, 10_000_000)?;
        println!("n={} edges={:?}: {} ({} configurations), tree={}", g.n(), g.edges(), r.verdict, r.reachable_count, is_tree(&g));
        assert_eq!(r.verdict.output(), Some(Output::from_bool(is_tree(&g))));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
