//! `K_{l,t}` detection through `l`-horns: an `l`-set `T` whose common
//! neighbourhood `C(T)` has at least `t` vertices spans a `K_{l,t}`.

use crate::graph::{popcount_and, Graph, VertexSet};
use serde::Serialize;

/// An embedded `K_{l,t}`: every center is adjacent to every horn vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HornCertificate {
    pub horn: Vec<usize>,
    pub centers: Vec<usize>,
}

impl HornCertificate {
    /// Re-checks the certificate by adjacency alone.
    pub fn verify(&self, g: &Graph, l: usize, t: usize) -> bool {
        let (l, t) = normalize(l, t);
        self.horn.len() == l
            && self.centers.len() >= t
            && self.horn.iter().all(|h| !self.centers.contains(h))
            && self
                .horn
                .iter()
                .all(|&h| self.centers.iter().all(|&c| g.has_edge(h, c)))
    }
}

#[inline]
fn normalize(l: usize, t: usize) -> (usize, usize) {
    if l <= t {
        (l, t)
    } else {
        (t, l)
    }
}

/// `C(T)`: common neighbours of the horn, outside the horn.
pub fn centers_of(g: &Graph, horn: &VertexSet) -> VertexSet {
    let mut c = g.vertices();
    for h in horn.iter() {
        c.intersect_with(g.row(h));
    }
    c.difference_with(horn.words());
    c
}

/// First certificate in lexicographic horn order, if `g` contains `K_{l,t}`.
/// Parameters are swapped when `l > t`.
pub fn contains_klt(g: &Graph, l: usize, t: usize) -> Option<HornCertificate> {
    let (l, t) = normalize(l, t);
    assert!(l >= 1, "K_{{l,t}} needs l >= 1");
    if g.order() < l + t {
        return None;
    }
    match l {
        1 => (0..g.order()).find(|&v| g.degree(v) >= t).map(|v| HornCertificate {
            horn: vec![v],
            centers: g.neighbor_iter(v).collect(),
        }),
        2 => pair_scan(g, t),
        _ => {
            let mut horn = Vec::with_capacity(l);
            extend_horn(g, l, t, &mut horn, None)
        }
    }
}

pub fn is_free(g: &Graph, l: usize, t: usize) -> bool {
    let (l, t) = normalize(l, t);
    if l == 1 {
        return g.max_degree() < t;
    }
    contains_klt(g, l, t).is_none()
}

/// Vertices at distance exactly 1 or 2 through `via`, above `floor`.
fn second_neighbourhood(g: &Graph, via: &VertexSet, floor: usize) -> VertexSet {
    let mut cand = VertexSet::empty(g.order());
    for c in via.iter() {
        cand.union_with(g.row(c));
    }
    for v in 0..=floor.min(g.order().saturating_sub(1)) {
        cand.remove(v);
    }
    cand
}

fn pair_scan(g: &Graph, t: usize) -> Option<HornCertificate> {
    for u in 0..g.order() {
        if g.degree(u) < t {
            continue;
        }
        let nu = g.neighbors(u);
        for v in second_neighbourhood(g, &nu, u).iter() {
            if popcount_and(g.row(u), g.row(v)) >= t {
                let mut c = nu.clone();
                c.intersect_with(g.row(v));
                return Some(HornCertificate {
                    horn: vec![u, v],
                    centers: c.to_vec(),
                });
            }
        }
    }
    None
}

fn extend_horn(
    g: &Graph,
    l: usize,
    t: usize,
    horn: &mut Vec<usize>,
    common: Option<&VertexSet>,
) -> Option<HornCertificate> {
    if horn.len() == l {
        let c = common.expect("non-empty horn");
        return Some(HornCertificate {
            horn: horn.clone(),
            centers: c.to_vec(),
        });
    }
    let candidates: Vec<usize> = match (horn.last(), common) {
        (Some(&last), Some(c)) => second_neighbourhood(g, c, last)
            .iter()
            .filter(|&v| c.count_common(g.row(v)) >= t)
            .collect(),
        _ => (0..g.order()).filter(|&v| g.degree(v) >= t).collect(),
    };
    for v in candidates {
        let next = match common {
            Some(c) => {
                let mut n = c.clone();
                n.intersect_with(g.row(v));
                n
            }
            None => g.neighbors(v),
        };
        horn.push(v);
        if let Some(cert) = extend_horn(g, l, t, horn, Some(&next)) {
            return Some(cert);
        }
        horn.pop();
    }
    None
}

/// Would adding the non-edge `uv` create a `K_{l,t}`? Only copies using the
/// new edge are examined, so `g` itself is assumed `K_{l,t}`-free.
pub fn addition_creates_klt(g: &Graph, u: usize, v: usize, l: usize, t: usize) -> bool {
    let (l, t) = normalize(l, t);
    if l == 1 {
        return g.degree(u) + 1 >= t || g.degree(v) + 1 >= t;
    }
    let sides = if l == t { vec![(l, t)] } else { vec![(l, t), (t, l)] };
    for (a, b) in sides {
        // u joins a side of size a, v joins the side of size b
        if side_completion(g, u, v, a, b) || side_completion(g, v, u, a, b) {
            return true;
        }
    }
    false
}

/// Is there `A ∋ p` with `|A| = a`, `A - p ⊆ N(q)`, whose common neighbourhood
/// (with `q` counted as a neighbour of `p`) has `b` vertices including `q`?
fn side_completion(g: &Graph, p: usize, q: usize, a: usize, b: usize) -> bool {
    // others in A must be neighbours of q; the common neighbourhood of A
    // must contain q and b-1 further vertices that are neighbours of p.
    let mut pool = g.neighbors(q);
    pool.remove(p);
    let mut base = g.neighbors(p);
    base.remove(q);
    if base.len() < b - 1 || pool.len() < a - 1 {
        return false;
    }
    let pool: Vec<usize> = pool.iter().collect();
    choose_rest(g, &pool, 0, a - 1, &base, b - 1)
}

fn choose_rest(
    g: &Graph,
    pool: &[usize],
    from: usize,
    need: usize,
    common: &VertexSet,
    b: usize,
) -> bool {
    if common.len() < b {
        return false;
    }
    if need == 0 {
        return true;
    }
    for i in from..pool.len() {
        if pool.len() - i < need {
            break;
        }
        let w = pool[i];
        if common.count_common(g.row(w)) < b {
            continue;
        }
        let mut next = common.clone();
        next.intersect_with(g.row(w));
        next.remove(w);
        if choose_rest(g, pool, i + 1, need - 1, &next, b) {
            return true;
        }
    }
    false
}

/// `Σ_v C(d_X(v), l)` over all vertices `v`.
pub fn count_horn_excess(g: &Graph, x_set: &VertexSet, l: usize) -> u128 {
    (0..g.order())
        .map(|v| crate::bounds::binomial(g.degree_in(v, x_set) as u64, l as u64))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    /// All `l`-subsets against all `t`-subsets of the rest.
    fn naive_contains(g: &Graph, l: usize, t: usize) -> bool {
        let n = g.order();
        let subsets = |k: usize| -> Vec<u64> {
            (0u64..1 << n).filter(|m| m.count_ones() as usize == k).collect()
        };
        for a in subsets(l) {
            for b in subsets(t) {
                if a & b != 0 {
                    continue;
                }
                let ok = (0..n).filter(|i| a >> i & 1 == 1).all(|i| {
                    (0..n)
                        .filter(|j| b >> j & 1 == 1)
                        .all(|j| g.has_edge(i, j))
                });
                if ok {
                    return true;
                }
            }
        }
        false
    }

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
    fn centers_examples() {
        let star = Graph::star(3);
        let c = centers_of(&star, &VertexSet::from_vertices(4, [1, 2]));
        assert_eq!(c.to_vec(), vec![0]);

        let k33 = Graph::complete_bipartite(3, 3);
        let c = centers_of(&k33, &VertexSet::from_vertices(6, [0, 1]));
        assert_eq!(c.to_vec(), vec![3, 4, 5]);

        let c5 = Graph::cycle(5);
        assert!(centers_of(&c5, &VertexSet::from_vertices(5, [0, 1])).is_empty());
    }

    #[test]
    fn detection_examples() {
        let c4 = Graph::cycle(4);
        let cert = contains_klt(&c4, 2, 2).unwrap();
        assert!(cert.verify(&c4, 2, 2));
        assert_eq!(cert.horn, vec![0, 2]);

        let k33 = Graph::complete_bipartite(3, 3);
        assert!(contains_klt(&k33, 2, 3).unwrap().verify(&k33, 2, 3));
        assert!(contains_klt(&k33, 3, 2).is_some());

        assert!(contains_klt(&Graph::petersen(), 2, 2).is_none());
        assert!(contains_klt(&Graph::complete(3), 2, 2).is_none());
    }

    #[test]
    fn freeness_examples() {
        let k15 = Graph::star(5);
        assert!(!is_free(&k15, 1, 5));
        assert!(is_free(&k15, 1, 6));
        // K_m contains K_{l,t} exactly when m >= l + t
        for (l, t) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
            assert!(is_free(&Graph::complete(l + t - 1), l, t));
            assert!(!is_free(&Graph::complete(l + t), l, t));
        }
    }

    #[test]
    fn petersen_pairs_share_at_most_one_neighbour() {
        let p = Graph::petersen();
        for u in 0..10 {
            for v in u + 1..10 {
                assert!(popcount_and(p.row(u), p.row(v)) <= 1);
            }
        }
    }

    #[test]
    fn horn_excess_examples() {
        let k23 = Graph::complete_bipartite(2, 3);
        assert_eq!(count_horn_excess(&k23, &VertexSet::from_vertices(5, [0, 1]), 2), 3);
        let k4 = Graph::complete(4);
        assert_eq!(count_horn_excess(&k4, &k4.vertices(), 2), 12);
        assert_eq!(count_horn_excess(&k4, &k4.vertices(), 4), 0);
    }

    #[test]
    fn agrees_with_double_subset_scan() {
        let mut rng = SmallRng::seed_from_u64(3);
        for trial in 0..2500 {
            let n = rng.gen_range(0..=7);
            let g = { let p = rng.gen_range(0.2..0.9); random_graph(&mut rng, n, p) };
            let (l, t) = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 3), (2, 4), (3, 4)][trial % 7];
            let found = contains_klt(&g, l, t);
            if let Some(c) = &found {
                assert!(c.verify(&g, l, t));
            }
            assert_eq!(found.is_some(), naive_contains(&g, l, t), "{g:?} l={l} t={t}");
        }
    }

    #[test]
    fn incremental_check_agrees_with_full_check() {
        let mut rng = SmallRng::seed_from_u64(5);
        for trial in 0..1500 {
            let n = rng.gen_range(2..=8);
            let (l, t) = [(2, 2), (2, 3), (3, 3), (2, 4), (1, 3)][trial % 5];
            let mut g = { let p = rng.gen_range(0.1..0.6); random_graph(&mut rng, n, p) };
            // strip copies until free
            while let Some(c) = contains_klt(&g, l, t) {
                g.remove_edge(c.horn[0], c.centers[0]).unwrap();
            }
            for u in 0..n {
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(u, v).unwrap();
                    assert_eq!(
                        addition_creates_klt(&g, u, v, l, t),
                        !is_free(&h, l, t),
                        "{g:?} + {u}{v} l={l} t={t}"
                    );
                }
            }
        }
    }
}
