//! Fills a JSON-lines table with exact values, then reopens it, which
//! re-verifies every stored witness.
//!
//! `cargo run --release --example fill_table -- [path] [max_n]`

use bipartite_turan::oracle::{table_fill, ExTable, FamilySpec, SearchConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "ex_table.jsonl".into());
    let max_n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);
    let mut table = ExTable::open(&path).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(1);
    });
    let cfg = SearchConfig::default();
    for spec in [FamilySpec::klt(2, 2), FamilySpec::klt(2, 3), FamilySpec::both(2, 2, 2)] {
        let entries = table_fill(&mut table, 1..=max_n, &spec, &cfg).expect("fill");
        let values: Vec<usize> = entries.iter().map(|e| e.value).collect();
        println!("{spec:<12} {values:?}");
    }
    let reopened = ExTable::open(&path).expect("reopen");
    println!("{path}: {} verified entries", reopened.len());
    for v in reopened.monotonicity_violations() {
        println!("violation: {v}");
    }
}
