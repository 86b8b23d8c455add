//! Dense undirected simple graphs stored as per-vertex bitsets.
//!
//! Vertices are the integers `0..n`. Row `v` of the adjacency matrix is a run
//! of `u64` words; loops and parallel edges cannot be represented.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest vertex count a [`Graph`] may have.
pub const MAX_VERTICES: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("loop at vertex {0} rejected")]
    Loop(usize),
    #[error("graph order {0} exceeds capacity {MAX_VERTICES}")]
    Capacity(usize),
    #[error("vertex sets overlap at vertex {0}")]
    Overlap(usize),
    #[error("vertex set universe {set} does not match graph order {order}")]
    UniverseMismatch { set: usize, order: usize },
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(universe);
            *w = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        s
    }

    /// Builds a set from vertices; panics if any vertex is outside the universe.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(universe: usize, vs: I) -> Self {
        let mut s = Self::empty(universe);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn from_range(universe: usize, r: std::ops::Range<usize>) -> Self {
        Self::from_vertices(universe, r)
    }

    pub(crate) fn from_words(universe: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(universe));
        VertexSet { universe, words }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (w, b) = (v / 64, v % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / 64, v % 64);
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        had
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> SetIter<'_> {
        SetIter::new(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn intersect_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(&other.words);
        s
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(&other.words);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(&other.words);
        s
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.universe).difference(self)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// `|self ∩ other|` without allocating.
    #[inline]
    pub fn count_common(&self, other: &[u64]) -> usize {
        popcount_and(&self.words, other)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.iter())
    }
}

#[inline]
pub(crate) fn popcount_and(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

/// Iterator over the set bits of a word slice, in increasing order.
pub struct SetIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> SetIter<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        SetIter {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for SetIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::Capacity(n));
        }
        let stride = words_for(n);
        Ok(Graph {
            n,
            stride,
            rows: vec![0; stride * n],
        })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n).expect("capacity");
        for u in 0..n {
            for v in u + 1..n {
                g.insert_unchecked(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("capacity")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("capacity")
    }

    /// `K_{a,b}` with the `a`-side on `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::empty(a + b).expect("capacity");
        for u in 0..a {
            for v in a..a + b {
                g.insert_unchecked(u, v);
            }
        }
        g
    }

    /// Star `K_{1,k}` with center 0.
    pub fn star(k: usize) -> Self {
        Self::complete_bipartite(1, k)
    }

    /// Petersen graph: outer cycle `0..5`, spokes `i ~ i+5`, inner pentagram on `5..10`.
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, edges).expect("capacity")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Number of `u64` words per adjacency row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Raw adjacency row of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    pub fn neighbor_iter(&self, v: usize) -> SetIter<'_> {
        SetIter::new(self.row(v))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `d_S(v)`: number of neighbours of `v` inside `s`.
    pub fn degree_in(&self, v: usize, s: &VertexSet) -> usize {
        popcount_and(self.row(v), s.words())
    }

    pub fn edge_count(&self) -> usize {
        let twice: usize = (0..self.n).map(|v| self.degree(v)).sum();
        twice / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.stride + v / 64] & (1 << (v % 64)) != 0
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.n,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn insert_unchecked(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] |= 1 << (v % 64);
        self.rows[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub(crate) fn remove_unchecked(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.stride + u / 64] &= !(1 << (u % 64));
    }

    /// Adds `uv`; returns whether the edge is new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let fresh = !self.has_edge(u, v);
        self.insert_unchecked(u, v);
        Ok(fresh)
    }

    /// Removes `uv`; returns whether it was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let had = self.has_edge(u, v);
        if had {
            self.remove_unchecked(u, v);
        }
        Ok(had)
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbor_iter(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.universe() != self.n {
            return Err(GraphError::UniverseMismatch {
                set: s.universe(),
                order: self.n,
            });
        }
        Ok(())
    }

    /// `G[S]`, relabelling the members of `s` to `0..|s|` in increasing order.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        self.check_set(s)?;
        let members = s.to_vec();
        let mut h = Graph::empty(members.len())?;
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    h.insert_unchecked(i, j);
                }
            }
        }
        Ok(h)
    }

    /// `G - S`.
    pub fn remove_vertices(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        self.check_set(s)?;
        self.induced_subgraph(&s.complement())
    }

    /// Connected components, each returned once, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices())
    }

    /// Components of `G[within]`, as subsets of `V(G)`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut unseen = within.clone();
        let mut out = Vec::new();
        while let Some(start) = unseen.first() {
            let mut comp = VertexSet::empty(self.n);
            comp.insert(start);
            unseen.remove(start);
            let mut frontier = comp.clone();
            while !frontier.is_empty() {
                let mut next = VertexSet::empty(self.n);
                for v in frontier.iter() {
                    next.union_with(self.row(v));
                }
                next.intersect_with(unseen.words());
                unseen.difference_with(next.words());
                comp.union_with(next.words());
                frontier = next;
            }
            out.push(comp);
        }
        out
    }

    /// Vertices of `other` are shifted by `self.order()`; no cross edges.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let off = self.n;
        let mut g = Graph::empty(self.n + other.n)?;
        for (u, v) in self.edges() {
            g.insert_unchecked(u, v);
        }
        for (u, v) in other.edges() {
            g.insert_unchecked(u + off, v + off);
        }
        Ok(g)
    }

    /// Adds every edge between `a` and `b`; returns the number of new edges.
    pub fn join(&mut self, a: &VertexSet, b: &VertexSet) -> Result<usize, GraphError> {
        self.check_set(a)?;
        self.check_set(b)?;
        if let Some(v) = a.intersection(b).first() {
            return Err(GraphError::Overlap(v));
        }
        let mut added = 0;
        for u in a.iter() {
            for v in b.iter() {
                if !self.has_edge(u, v) {
                    self.insert_unchecked(u, v);
                    added += 1;
                }
            }
        }
        Ok(added)
    }

    /// Functional form of [`Graph::join`].
    pub fn joined(&self, a: &VertexSet, b: &VertexSet) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.join(a, b)?;
        Ok(g)
    }

    pub fn to_adjacency_json(&self) -> AdjacencyJson {
        AdjacencyJson {
            n: self.n,
            edges: self.edge_count(),
            adjacency: (0..self.n).map(|v| self.neighbor_iter(v).collect()).collect(),
        }
    }

    pub fn from_adjacency_json(a: &AdjacencyJson) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(a.n)?;
        for (u, nbrs) in a.adjacency.iter().enumerate() {
            for &v in nbrs {
                g.add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    /// Checks symmetry and irreflexivity of the adjacency rows.
    pub fn is_well_formed(&self) -> bool {
        if self.rows.len() != self.n * self.stride {
            return false;
        }
        (0..self.n).all(|u| {
            !self.has_edge(u, u) && self.neighbor_iter(u).all(|v| v < self.n && self.has_edge(v, u))
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, e={}, ", self.n, self.edge_count())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Adjacency-list export used for debugging dumps.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AdjacencyJson {
    pub n: usize,
    pub edges: usize,
    pub adjacency: Vec<Vec<usize>>,
}
