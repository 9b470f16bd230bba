//! Read a DIMACS max-flow file and find its minimum s-t cut.
//!
//! `cargo run --example dimacs_cut -- graph.max` reads a file; without an
//! argument a small built-in network is used.

use submin::dimacs::{parse_dimacs, read_dimacs};
use submin::prelude::*;

const NETWORK: &str = "c small network
p max 6 9
n 1 s
n 6 t
a 1 2 4
a 1 3 4
a 2 3 1
a 2 4 3
a 3 5 2
a 4 5 1
a 4 6 4
a 5 6 4
a 3 4 1
";

fn main() -> Result<()> {
    let graph = match std::env::args().nth(1) {
        Some(path) => read_dimacs(path)?,
        None => parse_dimacs(NETWORK)?,
    };
    println!("{} nodes, {} arcs, free nodes {:?}", graph.nodes, graph.arcs, graph.node_ids);
    let cut = graph.instance;
    let h = Counted::new(cut.clone());
    let r = minimize(&h, &PgmConfig::new(3000).with_lipschitz(cut.lipschitz_bound()))?;
    let source_side: Vec<usize> = r.rounded_set.iter().map(|i| graph.node_ids[i]).collect();
    println!("source side {source_side:?}, cut value {}", cut.raw_cut_value(r.rounded_set));
    if cut.dim() <= 20 {
        let (s, v) = brute_force_min(&Counted::new(cut.clone()))?;
        println!("brute force: {s} with H = {v}, cut value {}", cut.raw_cut_value(s));
    }
    Ok(())
}
