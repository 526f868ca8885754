// Schedulers and the weak-fairness audit.

use popgraph::graph::generate;
use popgraph::scheduler::{fairness_audit, SchedulerSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(&"ring:5".parse()?)?;
    for spec in ["rr", "rr-oneway", "random:4"] {
        let sched: SchedulerSpec = spec.parse()?;
        let mut s = sched.build(&g)?;
        let window: Vec<_> = (0..2 * g.edge_count() as u64).map_while(|i| s.next(&g, i)).collect();
        let audit = fairness_audit(&window, &g);
        println!("{spec:<10} ordered pairs missed {:>2}, edges missed {}", audit.debt.len(), audit.unordered_debt.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
