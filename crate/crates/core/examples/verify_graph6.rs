//! Reads graph6 lines from stdin and reports K_{l,t}-freeness and the
//! matching number with its Tutte–Berge certificate.
//!
//! `echo 'Dhc' | cargo run --example verify_graph6 -- 2 2`

use bipartite_turan::{forbidden, graph6, matching};
use std::io::BufRead;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (l, t) = match args.as_slice() {
        &[l, t, ..] => (l, t),
        _ => (2, 2),
    };
    for (i, line) in std::io::stdin().lock().lines().enumerate() {
        let line = line.expect("stdin");
        if line.trim().is_empty() {
            continue;
        }
        let g = match graph6::decode(line.trim()) {
            Ok(g) => g,
            Err(e) => {
                println!("line {}: {e}", i + 1);
                continue;
            }
        };
        let nu = matching::matching_number(&g);
        let cert = matching::tutte_berge_certificate(&g);
        match forbidden::contains_klt(&g, l, t) {
            None => print!("n={} e={} K_{{{l},{t}}}-free", g.order(), g.edge_count()),
            Some(h) => print!("n={} e={} contains K_{{{l},{t}}} horn {:?}", g.order(), g.edge_count(), h.horn.to_vec()),
        }
        println!(
            "  nu={nu}  barrier X={:?} components={:?}",
            cert.x_set.to_vec(),
            cert.component_sizes
        );
    }
}
