//! Builds the barrier graph G1 and checks it against F1.
//!
//! `cargo run --example barrier_construction -- [l t s x n]`
//! (defaults to the C4 instance l = t = 2, s = 12, x = 12, n = 79).

use bipartite_turan::bounds::{f1, Params};
use bipartite_turan::constructions::{build_g1, ConstructionParams, Variant};
use bipartite_turan::{forbidden, graph6, matching};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let [l, t, s, x, n] = match args.as_slice() {
        &[l, t, s, x, n] => [l, t, s, x, n],
        _ => [2, 2, 12, 12, 79],
    };
    let p = match ConstructionParams::new(l, t, s, x, n, Variant::G1) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let c = build_g1(&p).expect("validated");
    let formula = f1(x as u64, &Params::new(l as u64, t as u64, s as u64, n as u64)).expect("validated");
    println!("G1(l={l}, t={t}, s={s}, x={x}) on {n} vertices");
    println!("  edges            {}", c.edge_count());
    println!("  F1(x)            {formula}");
    println!("  K_{{{l},{t}}}-free     {}", forbidden::is_free(&c.graph, l, t));
    println!("  matching number  {} (bound {s})", matching::matching_number(&c.graph));
    println!("  |X| = {}, pieces = {}, spare = {}", c.layout.x.len(), c.layout.blocks.len(), c.layout.u.len());
    println!("  graph6           {}", graph6::encode(&c.graph));
}
