//! Graph constructor descriptors and generators.
//!
//! Spec strings look like `ring:5`, `tree:10:7` (n, seed),
//! `kregular:3:10:1` (k, n, seed), `bipartite:3:4:0.5:9` (a, b, p, seed),
//! `petersen` or `file:path/to/graph.txt`, optionally followed by edge
//! mutations `+add:u-v` and `+del:u-v`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_graph_file, AgentId, Graph};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    Line(usize),
    Ring(usize),
    Star(usize),
    Complete(usize),
    Tree { n: usize, seed: u64 },
    KRegular { k: usize, n: usize, seed: u64 },
    Bipartite { a: usize, b: usize, p: f64, seed: u64 },
    Petersen,
    File(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    AddEdge(AgentId, AgentId),
    DelEdge(AgentId, AgentId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    pub family: GraphFamily,
    pub mutations: Vec<Mutation>,
}

impl GraphSpec {
    pub fn new(family: GraphFamily) -> Self {
        GraphSpec { family, mutations: Vec::new() }
    }

    pub fn add_edge(mut self, u: AgentId, v: AgentId) -> Self {
        self.mutations.push(Mutation::AddEdge(u, v));
        self
    }

    pub fn del_edge(mut self, u: AgentId, v: AgentId) -> Self {
        self.mutations.push(Mutation::DelEdge(u, v));
        self
    }
}

/// Builds the graph described by `spec`. Randomized families are a pure
/// function of their seed.
pub fn generate(spec: &GraphSpec) -> Result<Graph> {
    let err = |reason: String| Error::GraphSpec { spec: spec.to_string(), reason };
    let mut g = match spec.family {
        GraphFamily::Line(n) => {
            if n < 1 {
                return Err(err("line needs n >= 1".into()));
            }
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))?
        }
        GraphFamily::Ring(n) => {
            if n < 3 {
                return Err(err("ring needs n >= 3".into()));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?
        }
        GraphFamily::Star(n) => {
            if n < 1 {
                return Err(err("star needs n >= 1".into()));
            }
            Graph::from_edges(n, (1..n).map(|i| (0, i)))?
        }
        GraphFamily::Complete(n) => {
            if n < 1 {
                return Err(err("complete needs n >= 1".into()));
            }
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))?
        }
        GraphFamily::Tree { n, seed } => {
            if n < 1 {
                return Err(err("tree needs n >= 1".into()));
            }
            random_tree(n, seed)?
        }
        GraphFamily::KRegular { k, n, seed } => {
            if k < 1 || n <= k || (n * k) % 2 != 0 {
                return Err(err(format!("kregular needs k >= 1, n > k and n*k even (k = {k}, n = {n})")));
            }
            if k == 1 && n != 2 {
                return Err(err("the only connected 1-regular graph has n = 2".into()));
            }
            random_regular(k, n, seed)?
        }
        GraphFamily::Bipartite { a, b, p, seed } => {
            if a < 1 || b < 1 || !(p > 0.0 && p <= 1.0) {
                return Err(err("bipartite needs a, b >= 1 and 0 < p <= 1".into()));
            }
            random_bipartite(a, b, p, seed)?
        }
        GraphFamily::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))?
        }
        GraphFamily::File(ref path) => parse_graph_file(&std::fs::read(path)?)?,
    };
    for m in &spec.mutations {
        g = match *m {
            Mutation::AddEdge(u, v) => g.with_edge(u, v)?,
            Mutation::DelEdge(u, v) => g.without_edge(u, v)?,
        };
    }
    Ok(g)
}

/// Uniform labeled tree via a Prüfer sequence.
fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n <= 2 {
        return Graph::from_edges(n, (1..n).map(|i| (0, i)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a Prüfer decode always has a leaf");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges)
}

/// Pairing model: shuffle `n*k` half-edges, pair them up, reject loops,
/// multi-edges and disconnected results.
fn random_regular(k: usize, n: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    for _ in 0..MAX_ATTEMPTS {
        points.shuffle(&mut rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
        if let Ok(g) = Graph::from_edges(n, edges) {
            return Ok(g);
        }
    }
    Err(Error::GeneratorExhausted { attempts: MAX_ATTEMPTS, reason: format!("no simple connected {k}-regular graph on {n} agents") })
}

fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(g) = Graph::from_edges(a + b, edges) {
            return Ok(g);
        }
    }
    Err(Error::GeneratorExhausted { attempts: MAX_ATTEMPTS, reason: format!("no connected bipartite({a}, {b}, {p}) sample") })
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            GraphFamily::Line(n) => write!(f, "line:{n}")?,
            GraphFamily::Ring(n) => write!(f, "ring:{n}")?,
            GraphFamily::Star(n) => write!(f, "star:{n}")?,
            GraphFamily::Complete(n) => write!(f, "complete:{n}")?,
            GraphFamily::Tree { n, seed } => write!(f, "tree:{n}:{seed}")?,
            GraphFamily::KRegular { k, n, seed } => write!(f, "kregular:{k}:{n}:{seed}")?,
            GraphFamily::Bipartite { a, b, p, seed } => write!(f, "bipartite:{a}:{b}:{p}:{seed}")?,
            GraphFamily::Petersen => write!(f, "petersen")?,
            GraphFamily::File(path) => write!(f, "file:{path}")?,
        }
        for m in &self.mutations {
            match m {
                Mutation::AddEdge(u, v) => write!(f, "+add:{u}-{v}")?,
                Mutation::DelEdge(u, v) => write!(f, "+del:{u}-{v}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::GraphSpec { spec: s.to_string(), reason: reason.to_string() };
        let mut parts = s.split('+');
        let head = parts.next().unwrap_or_default();
        let family = if let Some(path) = head.strip_prefix("file:") {
            GraphFamily::File(path.to_string())
        } else {
            let fields: Vec<&str> = head.split(':').collect();
            let int = |i: usize| -> Result<usize> {
                fields.get(i).ok_or_else(|| err("missing parameter"))?.parse().map_err(|_| err("bad integer"))
            };
            let seed = |i: usize| -> Result<u64> { fields.get(i).ok_or_else(|| err("missing seed"))?.parse().map_err(|_| err("bad seed")) };
            let arity = |want: usize| -> Result<()> {
                if fields.len() == want + 1 {
                    Ok(())
                } else {
                    Err(err(&format!("expected {want} parameter(s)")))
                }
            };
            match fields[0] {
                "line" => {
                    arity(1)?;
                    GraphFamily::Line(int(1)?)
                }
                "ring" => {
                    arity(1)?;
                    GraphFamily::Ring(int(1)?)
                }
                "star" => {
                    arity(1)?;
                    GraphFamily::Star(int(1)?)
                }
                "complete" => {
                    arity(1)?;
                    GraphFamily::Complete(int(1)?)
                }
                "tree" => {
                    arity(2)?;
                    GraphFamily::Tree { n: int(1)?, seed: seed(2)? }
                }
                "kregular" => {
                    arity(3)?;
                    GraphFamily::KRegular { k: int(1)?, n: int(2)?, seed: seed(3)? }
                }
                "bipartite" => {
                    arity(4)?;
                    let p: f64 = fields[3].parse().map_err(|_| err("bad probability"))?;
                    GraphFamily::Bipartite { a: int(1)?, b: int(2)?, p, seed: seed(4)? }
                }
                "petersen" => {
                    arity(0)?;
                    GraphFamily::Petersen
                }
                _ => return Err(err("unknown graph family")),
            }
        };
        let mut mutations = Vec::new();
        for part in parts {
            let (kind, pair) = part.split_once(':').ok_or_else(|| err("mutation must be add:u-v or del:u-v"))?;
            let (u, v) = pair.split_once('-').ok_or_else(|| err("mutation edge must be u-v"))?;
            let u: usize = u.parse().map_err(|_| err("bad mutation vertex"))?;
            let v: usize = v.parse().map_err(|_| err("bad mutation vertex"))?;
            mutations.push(match kind {
                "add" => Mutation::AddEdge(u, v),
                "del" => Mutation::DelEdge(u, v),
                _ => return Err(err("unknown mutation")),
            });
        }
        Ok(GraphSpec { family, mutations })
    }
}
