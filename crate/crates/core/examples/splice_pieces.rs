//! Glues two graphs at a vertex and compares the edge count with the sum,
//! which is how extremal pieces combine.
//!
//! `cargo run --example splice_pieces`

use bipartite_turan::constructions::splice;
use bipartite_turan::oracle::{exact_ex, FamilySpec, SearchConfig};
use bipartite_turan::{forbidden, Graph};

fn main() {
    let cfg = SearchConfig::default();
    for (l, t) in [(2, 2), (2, 3)] {
        let spec = FamilySpec::klt(l, t);
        println!("K_{{{l},{t}}}");
        for (m1, m2) in [(3, 3), (4, 4), (5, 3), (5, 5)] {
            let a = exact_ex(m1, &spec, &cfg).expect("within cap");
            let b = exact_ex(m2, &spec, &cfg).expect("within cap");
            let glued: Graph = splice(&a.witness, 0, &b.witness, 0).expect("fits");
            let whole = exact_ex(m1 + m2 - 1, &spec, &cfg).expect("within cap");
            println!(
                "  ex({m1}) + ex({m2}) = {:>2}  spliced free: {:<5}  ex({}) = {}",
                a.value + b.value,
                forbidden::is_free(&glued, l, t),
                m1 + m2 - 1,
                whole.value
            );
        }
    }
}
