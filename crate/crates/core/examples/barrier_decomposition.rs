//! Splits ex(n, {K_{l,t}, M_{s+1}}) by the barrier size x(G) and compares
//! each slice with its per-x upper bound.
//!
//! `cargo run --release --example barrier_decomposition -- [n] [s]`

use bipartite_turan::bounds::{per_x_upper, ExResolver, Params};
use bipartite_turan::oracle::{exact_ex, exact_ex_by_x, FamilySpec, SearchConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(8);
    let s: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let spec = FamilySpec::both(2, 2, s);
    let cfg = SearchConfig::default();
    let whole = exact_ex(n, &spec, &cfg).expect("within cap");
    let p = Params::new(2, 2, s as u64, n as u64);
    println!("ex({n}, {spec}) = {}", whole.value);
    println!("{:>3} {:>10} {:>10}  source", "x", "restricted", "per-x");
    for (x, r) in exact_ex_by_x(n, &spec, &cfg).expect("within cap").into_iter().enumerate() {
        let b = per_x_upper(x as u64, &p, &ExResolver::surrogates_only());
        let shown = r.map(|r| r.value.to_string()).unwrap_or_else(|| "empty".into());
        match b {
            Ok(b) => println!(
                "{x:>3} {shown:>10} {:>10}  {:?}{}",
                b.bound.value,
                b.source,
                if b.hypotheses_met { "" } else { " (hypotheses not met)" }
            ),
            Err(e) => println!("{x:>3} {shown:>10} {:>10}  {e}", "-"),
        }
    }
}
