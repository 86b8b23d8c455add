//! Brute-force references shared by the integration tests. Nothing here
//! calls the library's matching, forbidden-subgraph or bound routines.
#![allow(dead_code)]

use bipartite_turan::oracle::FamilySpec;
use bipartite_turan::Graph;
use rand::Rng;

pub type Adj = Vec<Vec<bool>>;

pub fn adjacency(g: &Graph) -> Adj {
    let n = g.order();
    (0..n).map(|u| (0..n).map(|v| u != v && g.has_edge(u, v)).collect()).collect()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid edges")
}

fn subsets_of_size(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if cur.len() == k {
        return f(cur);
    }
    for v in start..n {
        cur.push(v);
        if subsets_of_size(n, k, v + 1, cur, f) {
            return true;
        }
        cur.pop();
    }
    false
}

/// Some `l` vertices with `t` common neighbours.
pub fn naive_contains_klt(adj: &Adj, l: usize, t: usize) -> bool {
    let n = adj.len();
    subsets_of_size(n, l, 0, &mut Vec::new(), &mut |set| {
        let common = (0..n).filter(|&w| set.iter().all(|&u| adj[u][w])).count();
        common >= t
    })
}

/// Exhaustive maximum matching; fine up to a dozen vertices.
pub fn naive_matching_number(adj: &Adj) -> usize {
    fn go(adj: &Adj, used: &mut Vec<bool>, from: usize) -> usize {
        let n = adj.len();
        let Some(u) = (from..n).find(|&u| !used[u]) else {
            return 0;
        };
        used[u] = true;
        let mut best = go(adj, used, u + 1);
        for v in u + 1..n {
            if adj[u][v] && !used[v] {
                used[v] = true;
                best = best.max(1 + go(adj, used, u + 1));
                used[v] = false;
            }
        }
        used[u] = false;
        best
    }
    go(adj, &mut vec![false; adj.len()], 0)
}

pub fn naive_admits(adj: &Adj, spec: &FamilySpec) -> bool {
    spec.forbid_klt.is_none_or(|(l, t)| !naive_contains_klt(adj, l, t))
        && spec.forbid_matching.is_none_or(|s| naive_matching_number(adj) <= s)
}

/// Largest admissible edge subset of `K_n`, every subset tried.
pub fn naive_ex(n: usize, spec: &FamilySpec) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut best = 0;
    for mask in 0u64..1 << pairs.len() {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut adj = vec![vec![false; n]; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u][v] = true;
                adj[v][u] = true;
            }
        }
        if naive_admits(&adj, spec) {
            best = size;
        }
    }
    best
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Clique on `2s+1` vertices versus `s` universal vertices.
pub fn naive_erdos_gallai(n: usize, s: usize) -> usize {
    if n < 2 * s + 1 {
        return choose2(n);
    }
    choose2(2 * s + 1).max(choose2(s) + s * (n - s))
}

/// Largest `k` with `4k <= n + n*sqrt(d)`, by squaring and bisection.
fn floor_quarter_surd(n: usize, d: usize) -> usize {
    let (n, d) = (n as i128, d as i128);
    let fits = |k: i128| {
        let lhs = 4 * k - n;
        lhs <= 0 || lhs * lhs <= n * n * d
    };
    // fits is monotone in k and fails below n^2 + 1
    let (mut lo, mut hi) = (0i128, n * n + 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo as usize
}

/// `floor((n/4)(1 + sqrt(4n - 3)))`.
pub fn floor_c4_bound(n: usize) -> usize {
    floor_quarter_surd(n, 4 * n - 3)
}

/// `floor((n/4)(1 + sqrt(4(t-1)n - (4t-5))))`.
pub fn floor_k2t_bound(n: usize, t: usize) -> usize {
    floor_quarter_surd(n, 4 * (t - 1) * n - (4 * t - 5))
}

/// Component orders of `G - X`.
pub fn component_sizes(adj: &Adj, removed: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut seen = vec![false; n];
    for &x in removed {
        seen[x] = true;
    }
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for v in 0..n {
                if adj[u][v] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// `|X| + sum floor(|C|/2)` over the components of `G - X`.
pub fn barrier_value(adj: &Adj, x: &[usize]) -> usize {
    x.len() + component_sizes(adj, x).iter().map(|c| c / 2).sum::<usize>()
}

fn all_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
}

/// `min over X of |V| + |X| - odd(G - X)`, over all `2^n` sets.
pub fn tutte_berge_by_subsets(adj: &Adj) -> usize {
    let n = adj.len();
    all_subsets(n)
        .map(|x| {
            let odd = component_sizes(adj, &x).iter().filter(|c| *c % 2 == 1).count();
            n + x.len() - odd
        })
        .min()
        .expect("the empty set")
}

pub fn exists_barrier(adj: &Adj, s: usize) -> bool {
    all_subsets(adj.len()).any(|x| barrier_value(adj, &x) <= s)
}
