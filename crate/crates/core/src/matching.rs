//! Maximum matchings, Tutte–Berge certificates and the barrier inequality
//! `|X| + Σ ⌊|C_i|/2⌋ ≤ s` over the components `C_i` of `G - X`.

use crate::graph::{Graph, VertexSet};
use crate::small;
use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

const NONE: usize = usize::MAX;

/// Largest order accepted by [`tutte_berge_min`].
pub const TUTTE_BERGE_CAP: usize = 20;
/// Largest order accepted by [`compute_xg`].
pub const XG_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("exhaustive search over {order} vertices exceeds the cap of {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("no vertex set satisfies the barrier inequality for s = {s} (matching number {nu})")]
    NoQualifyingSet { s: usize, nu: usize },
}

/// A set of pairwise disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks that every pair is an edge of `g` and no vertex is used twice.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = VertexSet::empty(g.order());
        self.edges
            .iter()
            .all(|&(u, v)| g.has_edge(u, v) && used.insert(u) && used.insert(v))
    }

    fn from_mate(mate: &[usize]) -> Self {
        let edges = mate
            .iter()
            .enumerate()
            .filter(|&(v, &m)| m != NONE && v < m)
            .map(|(v, &m)| (v, m))
            .collect();
        Matching { edges }
    }

    fn mate_vector(&self, n: usize) -> Vec<usize> {
        let mut mate = vec![NONE; n];
        for &(u, v) in &self.edges {
            mate[u] = v;
            mate[v] = u;
        }
        mate
    }
}

/// Tutte–Berge certificate: a set `X` with the component orders of `G - X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TbWitness {
    pub x_set: VertexSet,
    pub component_sizes: Vec<usize>,
    /// `|V| + |X| - odd(G - X)`.
    pub deficiency: usize,
}

impl TbWitness {
    pub fn for_set(g: &Graph, x_set: &VertexSet) -> Self {
        let rest = x_set.complement();
        let component_sizes: Vec<usize> = g
            .components_within(&rest)
            .iter()
            .map(VertexSet::len)
            .collect();
        let odd = component_sizes.iter().filter(|&&c| c % 2 == 1).count();
        TbWitness {
            x_set: x_set.clone(),
            deficiency: g.order() + x_set.len() - odd,
            component_sizes,
        }
    }

    /// Left-hand side of the barrier inequality; always `deficiency / 2`.
    pub fn barrier_value(&self) -> usize {
        self.x_set.len() + self.component_sizes.iter().map(|c| c / 2).sum::<usize>()
    }
}

/// Edmonds' blossom search state (single-root and forest variants).
struct Blossom<'g> {
    g: &'g Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    outer: Vec<bool>,
    in_blossom: Vec<bool>,
    tree: Vec<usize>,
    queue: VecDeque<usize>,
    mark: Vec<bool>,
}

enum ForestOutcome {
    Augmenting,
    Exhausted,
}

impl<'g> Blossom<'g> {
    fn new(g: &'g Graph, mate: Vec<usize>) -> Self {
        let n = g.order();
        Blossom {
            g,
            mate,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            in_blossom: vec![false; n],
            tree: vec![NONE; n],
            queue: VecDeque::new(),
            mark: vec![false; n],
        }
    }

    fn reset(&mut self) {
        self.parent.fill(NONE);
        self.outer.fill(false);
        self.tree.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.mark.fill(false);
        loop {
            a = self.base[a];
            self.mark[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.mark[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn contract(&mut self, v: usize, to: usize) {
        let cur = self.lca(v, to);
        self.in_blossom.fill(false);
        self.mark_path(v, cur, to);
        self.mark_path(to, cur, v);
        for i in 0..self.g.order() {
            if self.in_blossom[self.base[i]] {
                self.base[i] = cur;
                if !self.outer[i] {
                    self.outer[i] = true;
                    self.tree[i] = self.tree[cur];
                    self.queue.push_back(i);
                }
            }
        }
    }

    /// Grows an alternating tree from `root`; returns an exposed endpoint of
    /// an augmenting path if one exists.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        self.reset();
        self.outer[root] = true;
        self.tree[root] = root;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            let g = self.g;
            for to in g.neighbor_iter(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    self.contract(v, to);
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.outer[next] = true;
                    self.tree[next] = root;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    /// Grows alternating trees from every exposed vertex at once. With a
    /// maximum matching this ends with `outer` marking exactly the vertices
    /// missed by some maximum matching.
    fn grow_forest(&mut self) -> ForestOutcome {
        self.reset();
        for v in 0..self.g.order() {
            if self.mate[v] == NONE {
                self.outer[v] = true;
                self.tree[v] = v;
                self.queue.push_back(v);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            let g = self.g;
            for to in g.neighbor_iter(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                let to_outer = self.mate[to] == NONE
                    || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE);
                if to_outer {
                    if self.tree[to] != self.tree[v] {
                        return ForestOutcome::Augmenting;
                    }
                    self.contract(v, to);
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    self.tree[to] = self.tree[v];
                    let next = self.mate[to];
                    self.outer[next] = true;
                    self.tree[next] = self.tree[v];
                    self.queue.push_back(next);
                }
            }
        }
        ForestOutcome::Exhausted
    }
}

fn greedy_mate(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut mate = vec![NONE; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| g.degree(v));
    for &u in &order {
        if mate[u] != NONE {
            continue;
        }
        if let Some(v) = g
            .neighbor_iter(u)
            .filter(|&v| mate[v] == NONE)
            .min_by_key(|&v| g.degree(v))
        {
            mate[u] = v;
            mate[v] = u;
        }
    }
    mate
}

/// Maximum-cardinality matching by Edmonds' blossom algorithm.
pub fn max_matching(g: &Graph) -> Matching {
    let mut b = Blossom::new(g, greedy_mate(g));
    // a vertex with no augmenting path stays that way after later augmentations
    for v in 0..g.order() {
        if b.mate[v] == NONE {
            if let Some(end) = b.find_path(v) {
                b.augment(end);
            }
        }
    }
    Matching::from_mate(&b.mate)
}

pub fn matching_number(g: &Graph) -> usize {
    max_matching(g).len()
}

/// The Gallai–Edmonds split computed from a maximum matching.
#[derive(Debug, Clone)]
pub struct GallaiEdmonds {
    /// Vertices missed by at least one maximum matching.
    pub deficient: VertexSet,
    /// Neighbours of `deficient` outside it; a Tutte–Berge minimiser.
    pub barrier: VertexSet,
    pub matching: Matching,
}

impl GallaiEdmonds {
    /// Panics if `m` is not a maximum matching of `g`.
    pub fn new(g: &Graph, m: Matching) -> Self {
        let mut b = Blossom::new(g, m.mate_vector(g.order()));
        match b.grow_forest() {
            ForestOutcome::Augmenting => panic!("matching passed to GallaiEdmonds is not maximum"),
            ForestOutcome::Exhausted => {}
        }
        let deficient = VertexSet::from_vertices(
            g.order(),
            (0..g.order()).filter(|&v| b.outer[v]),
        );
        let mut barrier = VertexSet::empty(g.order());
        for v in deficient.iter() {
            barrier.union_with(g.row(v));
        }
        barrier.difference_with(deficient.words());
        GallaiEdmonds {
            deficient,
            barrier,
            matching: m,
        }
    }

    pub fn of(g: &Graph) -> Self {
        Self::new(g, max_matching(g))
    }
}

/// Polynomial-time Tutte–Berge certificate (the Gallai–Edmonds barrier).
pub fn tutte_berge_certificate(g: &Graph) -> TbWitness {
    TbWitness::for_set(g, &GallaiEdmonds::of(g).barrier)
}

/// Exhaustive minimisation of `|V| + |X| - odd(G - X)` over all `X`.
///
/// Ties go to the numerically smallest subset mask.
pub fn tutte_berge_min(g: &Graph) -> Result<TbWitness, MatchingError> {
    let n = g.order();
    if n > TUTTE_BERGE_CAP {
        return Err(MatchingError::CapExceeded {
            order: n,
            cap: TUTTE_BERGE_CAP,
        });
    }
    let adj = small::masks_of(g);
    let mut best = (u32::MAX, 0u64);
    for x in 0..(1u64 << n) {
        let v = small::barrier_value(&adj, n, x);
        if v < best.0 {
            best = (v, x);
        }
    }
    let x_set = VertexSet::from_vertices(n, (0..n).filter(|&v| best.1 >> v & 1 == 1));
    Ok(TbWitness::for_set(g, &x_set))
}

/// Answer of [`is_matching_bounded`].
#[derive(Debug, Clone, Serialize)]
pub struct MatchingBound {
    pub bounded: bool,
    pub matching_number: usize,
    /// When bounded: a set satisfying the barrier inequality.
    pub certificate: Option<TbWitness>,
    /// When not bounded: `s + 1` disjoint edges.
    pub violation: Option<Matching>,
}

/// `ν(G) ≤ s`, with a barrier certificate or an oversized matching.
pub fn is_matching_bounded(g: &Graph, s: usize) -> MatchingBound {
    let ge = GallaiEdmonds::of(g);
    let nu = ge.matching.len();
    if nu <= s {
        MatchingBound {
            bounded: true,
            matching_number: nu,
            certificate: Some(TbWitness::for_set(g, &ge.barrier)),
            violation: None,
        }
    } else {
        let mut m = ge.matching;
        m.edges.truncate(s + 1);
        MatchingBound {
            bounded: false,
            matching_number: nu,
            certificate: None,
            violation: Some(m),
        }
    }
}

/// Result of [`compute_xg`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XgReport {
    pub value: usize,
    /// Lexicographically smallest maximiser.
    pub set: VertexSet,
    /// `true` when the value is 0, outside the range `1..=s` usually assumed.
    pub below_unit_range: bool,
}

/// Largest `|X|` over sets with `|X| + Σ ⌊|C_i|/2⌋ ≤ s`, by exhaustive search.
pub fn compute_xg(g: &Graph, s: usize) -> Result<XgReport, MatchingError> {
    compute_xg_capped(g, s, XG_CAP)
}

pub fn compute_xg_capped(g: &Graph, s: usize, cap: usize) -> Result<XgReport, MatchingError> {
    let n = g.order();
    if n > cap || n > 64 {
        return Err(MatchingError::CapExceeded { order: n, cap });
    }
    let adj = small::masks_of(g);
    match xg_of_masks(&adj, s) {
        Some((value, mask)) => Ok(XgReport {
            value,
            set: VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1)),
            below_unit_range: value == 0,
        }),
        None => Err(MatchingError::NoQualifyingSet {
            s,
            nu: small::matching_number(&adj) as usize,
        }),
    }
}

/// Mask-level x(G): `(size, lexicographically smallest maximiser)`.
pub(crate) fn xg_of_masks(adj: &[u64], s: usize) -> Option<(usize, u64)> {
    let n = adj.len();
    for k in (0..=s.min(n)).rev() {
        let mut found = None;
        for_each_combination(n, k, |mask| {
            if small::barrier_value(adj, n, mask) as usize <= s {
                found = Some(mask);
                true
            } else {
                false
            }
        });
        if let Some(mask) = found {
            return Some((k, mask));
        }
    }
    None
}

/// Visits `k`-subsets of `0..n` in lexicographic order of their sorted
/// members; stops when `f` returns true.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(u64) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u64, |m, &i| m | 1 << i);
        if f(mask) {
            return;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
    }
}

/// Answers "does adding `uv` raise the matching number?" for a fixed graph
/// without rerunning the blossom algorithm per query.
///
/// Adding `uv` raises `ν` exactly when some maximum matching misses both
/// endpoints. That needs `u, v` deficient, in different deficient
/// components, and the barrier still matchable into the remaining
/// deficient components.
#[derive(Debug, Clone)]
pub struct EdgeAdditionOracle {
    nu: usize,
    comp_of: Vec<usize>,
    /// For each barrier vertex: bitset over deficient components it touches.
    barrier_adj: Vec<Vec<u64>>,
    ncomp: usize,
}

impl EdgeAdditionOracle {
    pub fn new(g: &Graph) -> Self {
        let ge = GallaiEdmonds::of(g);
        let mut comp_of = vec![NONE; g.order()];
        let comps = g.components_within(&ge.deficient);
        for (i, c) in comps.iter().enumerate() {
            for v in c.iter() {
                comp_of[v] = i;
            }
        }
        let ncomp = comps.len();
        let words = ncomp.div_ceil(64).max(1);
        let barrier_adj = ge
            .barrier
            .iter()
            .map(|a| {
                let mut row = vec![0u64; words];
                for w in g.neighbor_iter(a) {
                    let c = comp_of[w];
                    if c != NONE {
                        row[c / 64] |= 1 << (c % 64);
                    }
                }
                row
            })
            .collect();
        EdgeAdditionOracle {
            nu: ge.matching.len(),
            comp_of,
            barrier_adj,
            ncomp,
        }
    }

    pub fn matching_number(&self) -> usize {
        self.nu
    }

    /// `ν(G + uv) > ν(G)`; `uv` must not already be an edge.
    pub fn addition_increases(&self, u: usize, v: usize) -> bool {
        let (cu, cv) = (self.comp_of[u], self.comp_of[v]);
        if u == v || cu == NONE || cv == NONE || cu == cv {
            return false;
        }
        self.barrier_saturable_without(cu, cv)
    }

    fn barrier_saturable_without(&self, k1: usize, k2: usize) -> bool {
        let mut owner = vec![NONE; self.ncomp];
        let words = self.ncomp.div_ceil(64).max(1);
        for a in 0..self.barrier_adj.len() {
            let mut seen = vec![0u64; words];
            seen[k1 / 64] |= 1 << (k1 % 64);
            seen[k2 / 64] |= 1 << (k2 % 64);
            if !self.kuhn(a, &mut owner, &mut seen) {
                return false;
            }
        }
        true
    }

    fn kuhn(&self, a: usize, owner: &mut [usize], seen: &mut [u64]) -> bool {
        for (w, &row) in self.barrier_adj[a].iter().enumerate() {
            let mut cand = row & !seen[w];
            while cand != 0 {
                let b = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let c = w * 64 + b;
                if seen[w] >> b & 1 == 1 {
                    continue;
                }
                seen[w] |= 1 << b;
                if owner[c] == NONE || self.kuhn(owner[c], owner, seen) {
                    owner[c] = a;
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    fn random_graph(rng: &mut SmallRng, n: usize, p: f64) -> Graph {
        let mut g = Graph::empty(n).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn matching_examples() {
        assert_eq!(matching_number(&Graph::complete(5)), 2);
        assert_eq!(matching_number(&Graph::star(4)), 1);
        assert_eq!(matching_number(&Graph::empty(6).unwrap()), 0);
        let p = Graph::petersen();
        let m = max_matching(&p);
        assert_eq!(m.len(), 5);
        assert!(m.is_valid_in(&p));
    }

    #[test]
    fn tutte_berge_examples() {
        let star = Graph::star(4);
        let w = tutte_berge_min(&star).unwrap();
        assert_eq!(w.x_set.to_vec(), vec![0]);
        assert_eq!(w.deficiency, 2);
        assert_eq!(w.component_sizes, vec![1, 1, 1, 1]);

        let k4 = tutte_berge_min(&Graph::complete(4)).unwrap();
        assert!(k4.x_set.is_empty());
        assert_eq!(k4.deficiency, 4);

        assert_eq!(tutte_berge_min(&Graph::cycle(5)).unwrap().deficiency, 4);
        assert_eq!(
            tutte_berge_min(&Graph::empty(21).unwrap()),
            Err(MatchingError::CapExceeded { order: 21, cap: 20 })
        );
    }

    #[test]
    fn bounded_examples() {
        assert!(!is_matching_bounded(&Graph::complete(4), 1).bounded);
        let three_k2 = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let yes = is_matching_bounded(&three_k2, 3);
        assert!(yes.bounded);
        assert!(yes.certificate.unwrap().barrier_value() <= 3);
        let no = is_matching_bounded(&three_k2, 2);
        assert!(!no.bounded);
        let m = no.violation.unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.is_valid_in(&three_k2));
    }

    #[test]
    fn xg_examples() {
        assert_eq!(compute_xg(&Graph::star(4), 1).unwrap().value, 1);
        let k27 = compute_xg(&Graph::complete_bipartite(2, 7), 2).unwrap();
        assert_eq!(k27.value, 2);
        assert_eq!(k27.set.to_vec(), vec![0, 1]);
        let e5 = compute_xg(&Graph::empty(5).unwrap(), 2).unwrap();
        assert_eq!((e5.value, e5.set.to_vec()), (2, vec![0, 1]));
        // a single edge with s = 1 has x = 1
        assert_eq!(compute_xg(&Graph::complete(2), 1).unwrap().value, 1);
        // a triangle with s = 1 only admits X = ∅
        let tri = compute_xg(&Graph::complete(3), 1).unwrap();
        assert_eq!(tri.value, 0);
        assert!(tri.below_unit_range);
        assert_eq!(
            compute_xg(&Graph::complete(4), 1),
            Err(MatchingError::NoQualifyingSet { s: 1, nu: 2 })
        );
        assert!(matches!(
            compute_xg(&Graph::empty(17).unwrap(), 2),
            Err(MatchingError::CapExceeded { .. })
        ));
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |m| {
            seen.push(m);
            false
        });
        assert_eq!(seen, vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        let mut zero = Vec::new();
        for_each_combination(3, 0, |m| {
            zero.push(m);
            false
        });
        assert_eq!(zero, vec![0]);
    }

    #[test]
    fn blossom_matches_exhaustive() {
        let mut rng = SmallRng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(0..=12);
            let g = { let p = rng.gen_range(0.05..0.7); random_graph(&mut rng, n, p) };
            let m = max_matching(&g);
            assert!(m.is_valid_in(&g));
            assert_eq!(m.len() as u32, small::matching_number(&small::masks_of(&g)));
            let cert = tutte_berge_certificate(&g);
            assert_eq!(cert.deficiency, 2 * m.len(), "{g:?}");
        }
    }

    #[test]
    fn edge_addition_oracle_matches_recomputation() {
        let mut rng = SmallRng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(2..=11);
            let g = { let p = rng.gen_range(0.05..0.5); random_graph(&mut rng, n, p) };
            let oracle = EdgeAdditionOracle::new(&g);
            let nu = matching_number(&g);
            assert_eq!(oracle.matching_number(), nu);
            for u in 0..n {
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(u, v).unwrap();
                    assert_eq!(
                        oracle.addition_increases(u, v),
                        matching_number(&h) > nu,
                        "{g:?} + {u}{v}"
                    );
                }
            }
        }
    }
}
