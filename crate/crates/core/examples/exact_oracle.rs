//! Exact Turán numbers for small orders, with timings.
//!
//! `cargo run --release --example exact_oracle -- [max_n] [workers]`

use bipartite_turan::oracle::{exact_ex, FamilySpec, SearchConfig};
use std::time::Instant;

fn main() {
    let mut args = std::env::args().skip(1);
    let max_n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(8);
    let workers: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let cfg = SearchConfig::with_workers(workers);
    let specs = [
        FamilySpec::klt(2, 2),
        FamilySpec::klt(2, 3),
        FamilySpec::both(2, 2, 2),
        FamilySpec::both(2, 2, 3),
        FamilySpec::matching(3),
    ];
    println!("{:<12} {:>3} {:>6} {:>12} {:>9}", "family", "n", "ex", "nodes", "seconds");
    for spec in &specs {
        for n in 1..=max_n {
            let start = Instant::now();
            match exact_ex(n, spec, &cfg) {
                Ok(r) => println!(
                    "{:<12} {:>3} {:>6} {:>12} {:>9.3}",
                    spec.to_string(),
                    n,
                    r.value,
                    r.node_count,
                    start.elapsed().as_secs_f64()
                ),
                Err(e) => println!("{:<12} {:>3} {e}", spec.to_string(), n),
            }
        }
    }
}
