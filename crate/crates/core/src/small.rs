//! Single-word adjacency masks for graphs on at most 64 vertices.
//!
//! The exhaustive oracles and the search live here; they never touch the
//! general [`Graph`] representation in their inner loops.

use crate::graph::Graph;

/// `adj[v]` is the neighbourhood of `v` as a bit mask.
pub type Masks = Vec<u64>;

pub fn masks_of(g: &Graph) -> Masks {
    assert!(g.order() <= 64, "mask form needs at most 64 vertices");
    (0..g.order())
        .map(|v| g.row(v).first().copied().unwrap_or(0))
        .collect()
}

pub fn graph_of(adj: &[u64]) -> Graph {
    let n = adj.len();
    let mut g = Graph::empty(n).expect("capacity");
    for (u, &row) in adj.iter().enumerate() {
        let mut m = row & u64::MAX.checked_shl(u as u32 + 1).unwrap_or(0);
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            g.insert_unchecked(u, v);
        }
    }
    g
}

#[inline]
pub fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Connected component of `start` inside `within`.
#[inline]
pub fn component(adj: &[u64], within: u64, start: usize) -> u64 {
    let mut comp = 1u64 << start;
    let mut frontier = comp;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        next &= within & !comp;
        comp |= next;
        frontier = next;
    }
    comp
}

/// Component masks of `G[within]`, ordered by smallest member.
pub fn components(adj: &[u64], within: u64) -> Vec<u64> {
    let mut rest = within;
    let mut out = Vec::new();
    while rest != 0 {
        let c = component(adj, rest, rest.trailing_zeros() as usize);
        rest &= !c;
        out.push(c);
    }
    out
}

/// `|X| + Σ ⌊|C_i|/2⌋` over the components `C_i` of `G - X`.
#[inline]
pub fn barrier_value(adj: &[u64], n: usize, x: u64) -> u32 {
    let mut rest = full(n) & !x;
    let mut total = x.count_ones();
    while rest != 0 {
        let c = component(adj, rest, rest.trailing_zeros() as usize);
        rest &= !c;
        total += c.count_ones() / 2;
    }
    total
}

/// Whether `G[mask]` has a matching with at least `k` edges.
pub fn matching_at_least(adj: &[u64], mask: u64, k: u32) -> bool {
    if k == 0 {
        return true;
    }
    // drop isolated vertices first; they never help
    let mut m = mask;
    let mut live = 0u64;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        if adj[v] & mask != 0 {
            live |= 1 << v;
        }
    }
    if live.count_ones() < 2 * k {
        return false;
    }
    let v = live.trailing_zeros() as usize;
    let rest = live & !(1 << v);
    let mut nb = adj[v] & rest;
    while nb != 0 {
        let w = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        if matching_at_least(adj, rest & !(1 << w), k - 1) {
            return true;
        }
    }
    matching_at_least(adj, rest, k)
}

/// Matching number by exhaustive search.
pub fn matching_number(adj: &[u64]) -> u32 {
    let all = full(adj.len());
    let mut k = 0;
    while matching_at_least(adj, all, k + 1) {
        k += 1;
    }
    k
}
