// Pumping a repeating state pair to make a 4-line and a 4-ring look alike.

use popgraph::impossibility::{build_line_ring_executions, pump_plan};
use popgraph::protocols::{star_id, tree_id};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (name, p) in [("tree-id", tree_id()), ("star-id:n=4", star_id(4)?)] {
        let plan = pump_plan(&p);
        println!("{name}: pair {:?}, {:?}", plan.pair, plan.kind);
        let ex = build_line_ring_executions(&p, 8)?;
        let r = ex.report(&p);
        println!("  line periodic {}, ring periodic {}, output {:?}", r.line_periodic, r.ring_periodic, r.boundary_output);
        assert!(r.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
