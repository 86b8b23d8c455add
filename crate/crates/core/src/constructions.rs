//! The two barrier constructions, their auxiliary pieces, and the splice.
//!
//! Vertex layout, in label order: `X` (carrying a near-regular `K_{1,l}`-free
//! graph), one block `V_F` of `t - 1` vertices per `l`-subset `F` of `X` in
//! lexicographic order, then `S`, then `U`. `F_0` is the first `l - 1`
//! vertices of `X`.

use crate::bounds::{self, binomial};
use crate::forbidden;
use crate::graph::{Graph, GraphError, VertexSet};
use crate::matching::{self, EdgeAdditionOracle};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("constraint `{constraint}` violated: {detail}")]
    Constraint {
        constraint: &'static str,
        detail: String,
    },
    #[error("piece has order {got}, expected 2(s-x)+1 = {expected}")]
    PieceOrder { got: usize, expected: usize },
    #[error("piece contains K_{{{l},{t}}} (horn {horn:?})")]
    PieceNotFree {
        l: usize,
        t: usize,
        horn: Vec<usize>,
    },
    #[error(
        "no extremal K_{{{l},{t}}}-free graph on {m} vertices is stored; \
         fill it with `bturan oracle --n {m} --forbid-klt {l},{t}`"
    )]
    MissingPiece { m: usize, l: usize, t: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `S` complete, joined to `F_0`.
    G1,
    /// `S` a supplied `K_{l,t}`-free piece with no edges to `X`.
    G2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    pub l: usize,
    pub t: usize,
    pub s: usize,
    pub x: usize,
    pub n: usize,
    pub variant: Variant,
}

fn violated(constraint: &'static str, detail: String) -> ConstructionError {
    ConstructionError::Constraint { constraint, detail }
}

impl ConstructionParams {
    /// Validates every constraint, naming the first one that fails.
    pub fn new(
        l: usize,
        t: usize,
        s: usize,
        x: usize,
        n: usize,
        variant: Variant,
    ) -> Result<Self, ConstructionError> {
        let p = ConstructionParams { l, t, s, x, n, variant };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let &ConstructionParams { l, t, s, x, n, variant } = self;
        if l < 2 {
            return Err(violated("l >= 2", format!("l = {l}")));
        }
        if !(l <= x && x <= s) {
            return Err(violated("l <= x <= s", format!("x = {x}, expected {l}..={s}")));
        }
        if t < l {
            return Err(violated("t >= l", format!("t = {t}, l = {l}")));
        }
        if s < l + 1 {
            return Err(violated("s >= l + 1", format!("s = {s}, expected at least {}", l + 1)));
        }
        if n < 2 * s + 1 {
            return Err(violated("n >= 2s + 1", format!("n = {n}, expected at least {}", 2 * s + 1)));
        }
        let piece = self.piece_order();
        match variant {
            Variant::G1 if piece > t => {
                return Err(violated("2(s-x)+1 <= t", format!("2(s-x)+1 = {piece}, t = {t}")));
            }
            Variant::G2 if piece < t + 1 => {
                return Err(violated("2(s-x)+1 >= t+1", format!("2(s-x)+1 = {piece}, t = {t}")));
            }
            _ => {}
        }
        let nx = self.n_of_x();
        if (n as i128) < nx {
            return Err(violated("n >= n(x)", format!("n = {n}, n(x) = {nx}")));
        }
        Ok(())
    }

    pub fn piece_order(&self) -> usize {
        2 * (self.s - self.x) + 1
    }

    pub fn n_of_x(&self) -> i128 {
        bounds::n_of_x(self.x as u64, self.l as u64, self.t as u64, self.s as u64)
    }
}

/// One `V_F` block.
#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub f: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// Named blocks partitioning the vertex set.
#[derive(Debug, Clone, Serialize)]
pub struct Layout {
    #[serde(rename = "X")]
    pub x: VertexSet,
    #[serde(rename = "F_0")]
    pub f0: VertexSet,
    #[serde(rename = "V_F")]
    pub blocks: Vec<Block>,
    #[serde(rename = "S")]
    pub s: VertexSet,
    #[serde(rename = "U")]
    pub u: VertexSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledConstruction {
    pub params: ConstructionParams,
    #[serde(skip)]
    pub graph: Graph,
    pub layout: Layout,
}

impl LabeledConstruction {
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// JSON sidecar: parameters, edge count and the named blocks.
    pub fn layout_json(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "n": self.graph.order(),
            "edges": self.graph.edge_count(),
            "layout": self.layout,
        })
    }
}

/// `⌊(l-1)x/2⌋` edges on `x` vertices with maximum degree `l - 1`; the
/// complete graph when `x < l`.
pub fn near_regular_star_free(x: usize, l: usize) -> Graph {
    assert!(x >= 1 && l >= 2, "needs x >= 1, l >= 2");
    let d = l - 1;
    if x <= d {
        return Graph::complete(x);
    }
    let mut g = Graph::empty(x).expect("capacity");
    for i in 0..x {
        for k in 1..=d / 2 {
            g.insert_unchecked(i, (i + k) % x);
        }
    }
    if d % 2 == 1 {
        let h = x / 2;
        if x.is_multiple_of(2) {
            for i in 0..h {
                g.insert_unchecked(i, i + h);
            }
        } else {
            // vertex 0 stays one short
            for i in 1..=h {
                g.insert_unchecked(i, i + h);
            }
        }
    }
    g
}

fn combinations(x: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    fn rec(start: usize, x: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for v in start..=x - (l - cur.len()) {
            cur.push(v);
            rec(v + 1, x, l, cur, out);
            cur.pop();
        }
    }
    rec(0, x, l, &mut cur, &mut out);
    out
}

/// Everything except `S`'s internal edges and its link to `X`.
fn skeleton(p: &ConstructionParams) -> Result<LabeledConstruction, ConstructionError> {
    p.validate()?;
    let &ConstructionParams { l, t, x, n, .. } = p;
    let mut g = Graph::empty(n)?;
    for (u, v) in near_regular_star_free(x, l).edges() {
        g.insert_unchecked(u, v);
    }
    let mut next = x;
    let mut blocks = Vec::with_capacity(binomial(x as u64, l as u64) as usize);
    for f in combinations(x, l) {
        let vertices: Vec<usize> = (next..next + t - 1).collect();
        next += t - 1;
        for &v in &vertices {
            for &w in &f {
                g.insert_unchecked(v, w);
            }
        }
        blocks.push(Block { f, vertices });
    }
    let s_set = VertexSet::from_range(n, next..next + p.piece_order());
    let u_set = VertexSet::from_range(n, next + p.piece_order()..n);
    let f0 = VertexSet::from_range(n, 0..l - 1);
    g.join(&u_set, &f0)?;
    Ok(LabeledConstruction {
        params: *p,
        graph: g,
        layout: Layout {
            x: VertexSet::from_range(n, 0..x),
            f0,
            blocks,
            s: s_set,
            u: u_set,
        },
    })
}

/// The construction with a complete piece joined to `F_0`.
pub fn build_g1(p: &ConstructionParams) -> Result<LabeledConstruction, ConstructionError> {
    if p.variant != Variant::G1 {
        return Err(violated("variant = G1", format!("{:?}", p.variant)));
    }
    let mut c = skeleton(p)?;
    let s_vec = c.layout.s.to_vec();
    for (i, &a) in s_vec.iter().enumerate() {
        for &b in &s_vec[i + 1..] {
            c.graph.insert_unchecked(a, b);
        }
    }
    c.graph.join(&c.layout.s, &c.layout.f0)?;
    Ok(c)
}

/// The construction with a detached, caller-supplied `K_{l,t}`-free piece.
pub fn build_g2(p: &ConstructionParams, piece: &Graph) -> Result<LabeledConstruction, ConstructionError> {
    if p.variant != Variant::G2 {
        return Err(violated("variant = G2", format!("{:?}", p.variant)));
    }
    p.validate()?;
    if piece.order() != p.piece_order() {
        return Err(ConstructionError::PieceOrder {
            got: piece.order(),
            expected: p.piece_order(),
        });
    }
    if let Some(cert) = forbidden::contains_klt(piece, p.l, p.t) {
        return Err(ConstructionError::PieceNotFree {
            l: p.l,
            t: p.t,
            horn: cert.horn,
        });
    }
    let mut c = skeleton(p)?;
    let base = c.layout.s.first().expect("piece is non-empty");
    for (u, v) in piece.edges() {
        c.graph.insert_unchecked(base + u, base + v);
    }
    Ok(c)
}

/// Source of stored extremal `K_{l,t}`-free graphs.
pub trait ExtremalPieces {
    fn extremal_klt(&self, m: usize, l: usize, t: usize) -> Option<Graph>;
}

/// [`build_g2`] with the piece taken from a store of extremal graphs.
pub fn build_g2_from(
    p: &ConstructionParams,
    store: &dyn ExtremalPieces,
) -> Result<LabeledConstruction, ConstructionError> {
    p.validate()?;
    let m = p.piece_order();
    let piece = store
        .extremal_klt(m, p.l.min(p.t), p.l.max(p.t))
        .ok_or(ConstructionError::MissingPiece { m, l: p.l, t: p.t })?;
    build_g2(p, &piece)
}

/// Identify `u2` of `g2` with `u1` of `g1`. The other vertices of `g2` follow
/// those of `g1` in order.
pub fn splice(g1: &Graph, u1: usize, g2: &Graph, u2: usize) -> Result<Graph, GraphError> {
    let (n1, n2) = (g1.order(), g2.order());
    if u1 >= n1 {
        return Err(GraphError::VertexOutOfRange { vertex: u1, order: n1 });
    }
    if u2 >= n2 {
        return Err(GraphError::VertexOutOfRange { vertex: u2, order: n2 });
    }
    let relabel = |v: usize| {
        if v == u2 {
            u1
        } else if v < u2 {
            n1 + v
        } else {
            n1 + v - 1
        }
    };
    let mut g = Graph::empty(n1 + n2 - 1)?;
    for (a, b) in g1.edges() {
        g.insert_unchecked(a, b);
    }
    for (a, b) in g2.edges() {
        g.insert_unchecked(relabel(a), relabel(b));
    }
    Ok(g)
}

/// `K_{l-1, n-l+1}`, the side of size `l - 1` first.
pub fn complete_split(l_minus_1: usize, n: usize) -> Graph {
    assert!(l_minus_1 >= 1 && n > l_minus_1, "needs n > l-1 >= 1");
    Graph::complete_bipartite(l_minus_1, n - l_minus_1)
}

/// Result of [`augment_barrier_to_piece`].
#[derive(Debug, Clone, Serialize)]
pub struct Augmentation {
    pub added: Vec<(usize, usize)>,
    pub edges_before: usize,
    pub edges_after: usize,
}

/// Experimental: greedily add `X`–`S` edges while the graph stays
/// `K_{l,t}`-free with matching number at most `s`. The count is empirical
/// and not covered by any bound.
pub fn augment_barrier_to_piece(c: &mut LabeledConstruction) -> Augmentation {
    let (l, t, s) = (c.params.l, c.params.t, c.params.s);
    let before = c.graph.edge_count();
    let mut added = Vec::new();
    let mut oracle = EdgeAdditionOracle::new(&c.graph);
    for u in c.layout.x.to_vec() {
        for v in c.layout.s.to_vec() {
            if c.graph.has_edge(u, v) || forbidden::addition_creates_klt(&c.graph, u, v, l, t) {
                continue;
            }
            if oracle.matching_number() >= s && oracle.addition_increases(u, v) {
                continue;
            }
            c.graph.insert_unchecked(u, v);
            added.push((u, v));
            oracle = EdgeAdditionOracle::new(&c.graph);
        }
    }
    debug_assert!(matching::matching_number(&c.graph) <= s);
    Augmentation {
        added,
        edges_before: before,
        edges_after: c.graph.edge_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{f1, f2, ExResolver, Need, Params};
    use crate::matching::is_matching_bounded;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    fn g1(l: usize, t: usize, s: usize, x: usize, n: usize) -> LabeledConstruction {
        build_g1(&ConstructionParams::new(l, t, s, x, n, Variant::G1).unwrap()).unwrap()
    }

    #[test]
    fn star_free_pieces() {
        let m = near_regular_star_free(12, 2);
        assert_eq!((m.edge_count(), m.max_degree()), (6, 1));
        let c5 = near_regular_star_free(5, 3);
        assert_eq!(c5, Graph::cycle(5));
        let p = near_regular_star_free(3, 2);
        assert_eq!(p.edge_count(), 1);
        assert_eq!(p.degree(0), 0);
        for x in 1..40 {
            for l in 2..9 {
                let g = near_regular_star_free(x, l);
                assert!(g.max_degree() < l, "x={x} l={l}");
                // below l vertices the complete graph is the best possible
                let want = ((l - 1) * x / 2).min(x * (x - 1) / 2);
                assert_eq!(g.edge_count(), want, "x={x} l={l}");
            }
        }
    }

    #[test]
    fn desk_instance() {
        let c = g1(2, 2, 12, 12, 79);
        assert_eq!(c.graph.order(), 79);
        assert_eq!(c.edge_count(), 139);
        assert!(forbidden::is_free(&c.graph, 2, 2));
        assert!(is_matching_bounded(&c.graph, 12).bounded);
        assert_eq!(c.layout.s.len(), 1);
        assert_eq!(c.layout.blocks.len(), 66);
    }

    #[test]
    fn small_g1_count() {
        let c = g1(3, 3, 4, 3, 20);
        assert_eq!(c.edge_count(), 42);
        // independent count: X + V_F + S + U
        let (x_e, vf_e, s_e, su_link) = (3, 3 * 2, 3, 2 * (3 + 20 - 3 - 2 - 3));
        assert_eq!(x_e + vf_e + s_e + su_link, 42);
    }

    #[test]
    fn invalid_params_name_the_constraint() {
        let e = ConstructionParams::new(2, 2, 12, 12, 78, Variant::G1).unwrap_err();
        assert!(e.to_string().contains("n >= n(x)"), "{e}");
        let e = ConstructionParams::new(2, 2, 12, 5, 500, Variant::G1).unwrap_err();
        assert!(e.to_string().contains("2(s-x)+1 <= t"), "{e}");
        let e = ConstructionParams::new(3, 3, 3, 3, 50, Variant::G1).unwrap_err();
        assert!(e.to_string().contains("s >= l + 1"), "{e}");
        let e = ConstructionParams::new(3, 3, 6, 6, 50, Variant::G2).unwrap_err();
        assert!(e.to_string().contains("2(s-x)+1 >= t+1"), "{e}");
    }

    #[test]
    fn layout_partitions_vertices() {
        let c = g1(3, 5, 6, 4, 60);
        let l = &c.layout;
        assert_eq!(l.f0.len(), 2);
        assert!(l.f0.is_subset(&l.x));
        assert_eq!(l.blocks.len(), 4);
        assert!(l.blocks.iter().all(|b| b.vertices.len() == 4));
        assert_eq!(l.s.len(), 5);
        assert_eq!(l.u.len() as i128, 60 - c.params.n_of_x());
        let mut all = l.x.union(&l.s).union(&l.u);
        for b in &l.blocks {
            let vf = VertexSet::from_vertices(60, b.vertices.iter().copied());
            assert!(all.is_disjoint(&vf));
            all = all.union(&vf);
        }
        assert_eq!(all.len(), 60);
        let json = c.layout_json();
        assert_eq!(json["layout"]["S"].as_array().unwrap().len(), 5);
        assert_eq!(json["edges"], c.edge_count());
    }

    #[test]
    fn barrier_meets_the_inequality_with_equality() {
        let c = g1(2, 3, 5, 4, 40);
        let w = matching::TbWitness::for_set(&c.graph, &c.layout.x);
        assert_eq!(w.barrier_value(), 5);
        assert_eq!(matching::matching_number(&c.graph), 5);
    }

    #[test]
    fn g2_counts() {
        let p = ConstructionParams::new(3, 3, 6, 3, 40, Variant::G2).unwrap();
        let empty = build_g2(&p, &Graph::empty(7).unwrap()).unwrap();
        let expected = 2 * (40 - 7) + 2 - 3;
        assert_eq!(empty.edge_count(), expected);

        // K_{3,3}-free piece on 7 vertices: K_{1,6} plus a perfect matching on the leaves
        let mut piece = Graph::star(6);
        for (a, b) in [(1, 2), (3, 4), (5, 6)] {
            piece.add_edge(a, b).unwrap();
        }
        let c = build_g2(&p, &piece).unwrap();
        assert_eq!(c.edge_count(), expected + 9);
        assert!(forbidden::is_free(&c.graph, 3, 3));
        assert!(is_matching_bounded(&c.graph, 6).bounded);
        let mut table = std::collections::BTreeMap::new();
        table.insert((7, 3, 3), 9);
        let e = f2(3, &Params::new(3, 3, 6, 40), &ExResolver::strict(&table), Need::Lower).unwrap();
        assert_eq!(e.value as usize, c.edge_count());

        let bad = Graph::complete(7);
        assert!(matches!(build_g2(&p, &bad), Err(ConstructionError::PieceNotFree { .. })));
        assert!(matches!(
            build_g2(&p, &Graph::empty(6).unwrap()),
            Err(ConstructionError::PieceOrder { got: 6, expected: 7 })
        ));
    }

    #[test]
    fn missing_piece_is_actionable() {
        struct Nothing;
        impl ExtremalPieces for Nothing {
            fn extremal_klt(&self, _: usize, _: usize, _: usize) -> Option<Graph> {
                None
            }
        }
        let p = ConstructionParams::new(3, 3, 6, 3, 40, Variant::G2).unwrap();
        let e = build_g2_from(&p, &Nothing).unwrap_err();
        assert!(e.to_string().contains("bturan oracle --n 7 --forbid-klt 3,3"), "{e}");
    }

    #[test]
    fn splice_examples() {
        let k2 = Graph::complete(2);
        let p3 = splice(&k2, 1, &k2, 0).unwrap();
        assert_eq!(p3, Graph::path(3));
        let c5 = Graph::cycle(5);
        let g = splice(&c5, 0, &c5, 0).unwrap();
        assert_eq!((g.order(), g.edge_count()), (9, 10));
        assert!(forbidden::is_free(&g, 2, 2));
        let id = splice(&Graph::petersen(), 3, &Graph::empty(1).unwrap(), 0).unwrap();
        assert_eq!(id, Graph::petersen());
    }

    #[test]
    fn splice_preserves_freeness() {
        let mut rng = SmallRng::seed_from_u64(11);
        for trial in 0..300 {
            let (l, t) = [(2, 2), (2, 3), (3, 3)][trial % 3];
            let make = |rng: &mut SmallRng| {
                let n = rng.gen_range(1..=7);
                let mut g = Graph::empty(n).unwrap();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen_bool(0.5) && !forbidden::addition_creates_klt(&g, u, v, l, t) {
                            g.add_edge(u, v).unwrap();
                        }
                    }
                }
                g
            };
            let (a, b) = (make(&mut rng), make(&mut rng));
            let (u1, u2) = (rng.gen_range(0..a.order()), rng.gen_range(0..b.order()));
            let g = splice(&a, u1, &b, u2).unwrap();
            assert_eq!(g.edge_count(), a.edge_count() + b.edge_count());
            assert!(forbidden::is_free(&g, l, t), "{a:?} {b:?}");
        }
    }

    #[test]
    fn complete_split_examples() {
        let k28 = complete_split(2, 10);
        assert_eq!(k28.edge_count(), 16);
        assert_eq!(complete_split(1, 5), Graph::star(4));
        assert_eq!(matching::matching_number(&complete_split(3, 9)), 3);
    }

    #[test]
    fn parameter_grid() {
        let mut checked = 0;
        for l in 2..=4 {
            for t in l..=6 {
                for s in l + 1..=10 {
                    for x in l..=s {
                        for variant in [Variant::G1, Variant::G2] {
                            let nx = bounds::n_of_x(x as u64, l as u64, t as u64, s as u64) as usize;
                            if nx > 400 {
                                continue;
                            }
                            for n in [nx.max(2 * s + 1), nx.max(2 * s + 1) + 7] {
                                let Ok(p) = ConstructionParams::new(l, t, s, x, n, variant) else {
                                    continue;
                                };
                                let q = Params::new(l as u64, t as u64, s as u64, n as u64);
                                let c = match variant {
                                    Variant::G1 => build_g1(&p).unwrap(),
                                    // K_m when m < l + t, else a max-degree t-1 circulant
                                    Variant::G2 => {
                                        let m = p.piece_order();
                                        let piece = if m < l + t { Graph::complete(m) } else { near_regular_star_free(m, t) };
                                        build_g2(&p, &piece).unwrap()
                                    }
                                };
                                assert_eq!(c.graph.order(), n);
                                assert!(forbidden::is_free(&c.graph, l, t), "{p:?}");
                                assert!(is_matching_bounded(&c.graph, s).bounded, "{p:?}");
                                if variant == Variant::G1 {
                                    assert_eq!(c.edge_count() as i128, f1(x as u64, &q).unwrap(), "{p:?}");
                                } else {
                                    let lower = f2(x as u64, &q, &ExResolver::surrogates_only(), Need::Lower).unwrap();
                                    assert_eq!(c.edge_count() as i128, lower.value, "{p:?}");
                                }
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 200, "{checked}");
    }

    #[test]
    fn augmentation_stays_valid() {
        let p = ConstructionParams::new(2, 2, 6, 2, 30, Variant::G2).unwrap();
        let mut c = build_g2(&p, &Graph::cycle(9)).unwrap();
        let before = c.edge_count();
        let a = augment_barrier_to_piece(&mut c);
        assert_eq!(a.edges_before, before);
        assert_eq!(a.edges_after, before + a.added.len());
        assert!(forbidden::is_free(&c.graph, 2, 2));
        assert!(is_matching_bounded(&c.graph, 6).bounded);
    }
}
