//! Prints the full bound report for one instance, then the lower/upper
//! gap along a range of orders.
//!
//! `cargo run --example bounds_report -- [l t s n]`

use bipartite_turan::bounds::{theorem_value, ExResolver, Params};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let [l, t, s, n] = match args.as_slice() {
        &[l, t, s, n] => [l, t, s, n],
        _ => [3, 4, 5, 400],
    };
    let ex = ExResolver::surrogates_only();
    print!("{}", theorem_value(&Params::new(l, t, s, n), &ex).to_table());
    println!();
    println!("{:>6} {:>8} {:>8} {:>8}", "n", "lower", "upper", "gap");
    for m in (n..n + 200).step_by(40) {
        let r = theorem_value(&Params::new(l, t, s, m), &ex);
        let lo = r.lower_bound.map(|b| b.value);
        let hi = r.upper_bound.map(|b| b.value);
        let show = |v: Option<i128>| v.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        let gap = lo.zip(hi).map(|(a, b)| b - a);
        println!("{m:>6} {:>8} {:>8} {:>8}", show(lo), show(hi), show(gap));
    }
}
