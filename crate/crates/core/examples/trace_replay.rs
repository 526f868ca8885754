// Record a trace, round-trip it through JSON and replay it.

use popgraph::engine::{replay, run, RunOptions, Trace};
use popgraph::graph::generate;
use popgraph::protocols::star_id;
use popgraph::scheduler::{write_script, SchedulerSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(&"star:5".parse()?)?;
    let p = star_id(5)?;
    let t = run(&p, &g, "star:5", &SchedulerSpec::random(9), RunOptions::for_graph(&g).record_steps(true))?;
    let json = t.to_json();
    let back = Trace::from_json(&json)?;
    let final_config = replay(&p, &g, &back)?;
    assert_eq!(final_config.0, t.final_config);
    println!("{} steps, {} bytes of JSON, replay matches", t.steps_taken, json.len());

    // The same interactions as a scheduler script.
    let script = write_script(&t.interactions());
    println!("script starts {}", &script[..script.len().min(40)]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
