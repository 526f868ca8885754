// Graph generators, class oracles and the edge-list file format.

use popgraph::graph::{generate, is_bipartite, is_kregular, is_line, is_ring, is_star, is_tree, parse_graph_file, write_graph_file};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for spec in
        ["line:5", "ring:6", "star:5", "complete:4", "tree:8:1", "kregular:3:8:2", "bipartite:3:4:0.5:9", "petersen", "ring:5+add:0-2"]
    {
        let g = generate(&spec.parse()?)?;
        println!(
            "{spec:<22} n={:<2} m={:<2} tree={:<5} line={:<5} ring={:<5} star={:<5} 3-regular={:<5} bipartite={}",
            g.n(),
            g.edge_count(),
            is_tree(&g),
            is_line(&g),
            is_ring(&g),
            is_star(&g),
            is_kregular(&g, 3),
            is_bipartite(&g)
        );
    }
    let g = generate(&"petersen".parse()?)?;
    let bytes = write_graph_file(&g);
    assert_eq!(parse_graph_file(&bytes)?, g);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
