//! Hill climbing past the exhaustive cap, seeded with the barrier graph.
//!
//! `cargo run --release --example local_search -- [budget] [seed]`

use bipartite_turan::bounds::{theorem_value, ExResolver, Params};
use bipartite_turan::constructions::{build_g1, ConstructionParams, Variant};
use bipartite_turan::oracle::{lower_bound_search, Effort, FamilySpec};

fn main() {
    let mut args = std::env::args().skip(1);
    let budget: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(200_000);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    for (l, t, s, x, n) in [(2, 2, 12, 12, 79), (2, 3, 4, 4, 30)] {
        let spec = FamilySpec::both(l, t, s);
        let p = ConstructionParams::new(l, t, s, x, n, Variant::G1).expect("valid");
        let g1 = build_g1(&p).expect("valid").graph;
        let report = theorem_value(&Params::new(l as u64, t as u64, s as u64, n as u64), &ExResolver::surrogates_only());
        for start in [None, Some(&g1)] {
            let r = lower_bound_search(n, &spec, Effort { node_budget: budget, seed }, start).expect("order");
            println!(
                "{spec} n={n} seeded={:<5} found {} edges in {} nodes (upper bound {})",
                start.is_some(),
                r.value,
                r.nodes,
                report.upper_bound.map(|u| u.value.to_string()).unwrap_or_else(|| "-".into())
            );
        }
    }
}
