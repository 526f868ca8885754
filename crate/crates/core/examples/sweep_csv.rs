// Batch runs over sizes and seeds, printed as CSV.

use popgraph::cli::sweep;
use popgraph::protocols::ProtocolSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rows = sweep(&ProtocolSpec::StarId { n: None }, "star", "rr", &[3, 5, 8], &[0], 1_000_000, None)?;
    println!("family,n,seed,verdict,steps");
    for r in &rows {
        println!("{}", r.csv());
        assert!(!r.contradicts());
    }
    let rows = sweep(&ProtocolSpec::TreeId, "tree", "random", &[6, 12], &[0, 1, 2], 1_000_000, None)?;
    for r in &rows {
        println!("{}", r.csv());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
