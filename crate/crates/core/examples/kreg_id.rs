// k-regularity identification: exact check on small graphs, simulation on
// the Petersen graph.

use popgraph::engine::{check_stable, run, Output, RunOptions};
use popgraph::graph::{generate, is_kregular};
use popgraph::protocols::kreg_id;
use popgraph::scheduler::SchedulerSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (spec, k) in [("ring:4", 2), ("line:4", 2), ("complete:4", 3), ("star:4", 3)] {
        let g = generate(&spec.parse()?)?;
        let p = kreg_id(k, g.n(), false)?;
        let r = check_stable(&p, &g, 10_000_000)?;
        println!("{spec} k={k}: {} over {} configurations ({} states)", r.verdict, r.reachable_count, p.state_count());
        assert_eq!(r.verdict.output(), Some(Output::from_bool(is_kregular(&g, k))));
    }

    let g = generate(&"petersen".parse()?)?;
    let p = kreg_id(3, g.n(), false)?;
    let t = run(&p, &g, "petersen", &SchedulerSpec::random(3), RunOptions::for_graph(&g).max_steps(2_000_000).window(200_000))?;
    println!("petersen k=3: {} after {} steps", t.verdict, t.steps_taken);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
