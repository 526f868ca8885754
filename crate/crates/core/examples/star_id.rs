// Star identification under deterministic round-robin schedules.

use popgraph::engine::{run, RunOptions};
use popgraph::graph::generate;
use popgraph::protocols::star_id;
use popgraph::scheduler::SchedulerSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for spec in ["star:6", "star:12", "line:4", "ring:5", "star:6+add:1-2"] {
        let g = generate(&spec.parse()?)?;
        let p = star_id(g.n())?;
        for sched in [SchedulerSpec::RoundRobin, SchedulerSpec::RoundRobinOneWay] {
            let t = run(&p, &g, spec, &sched, RunOptions::for_graph(&g))?;
            println!("{spec:<16} {sched:<10} {} after {} steps", t.verdict, t.steps_taken);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
