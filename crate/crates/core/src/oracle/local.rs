//! Hill climbing for large orders: greedy edge additions over shuffled
//! non-edges, random removals with a short tabu list, restarts from
//! structured seeds. One node is one tested addition.

use super::{FamilySpec, OracleError};
use crate::constructions::complete_split;
use crate::forbidden;
use crate::graph::{Graph, MAX_VERTICES};
use crate::matching::EdgeAdditionOracle;
use rand::rngs::SmallRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
pub struct Effort {
    pub node_budget: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub value: usize,
    #[serde(skip)]
    pub witness: Graph,
    pub nodes: u64,
    /// Index into the seed list the best graph grew from (0 is the caller's seed if given).
    pub seed_index: usize,
}

struct Climber<'a> {
    spec: &'a FamilySpec,
    g: Graph,
    oracle: Option<EdgeAdditionOracle>,
}

impl<'a> Climber<'a> {
    fn new(spec: &'a FamilySpec, g: Graph) -> Self {
        let oracle = spec.forbid_matching.map(|_| EdgeAdditionOracle::new(&g));
        Climber { spec, g, oracle }
    }

    fn can_add(&self, u: usize, v: usize) -> bool {
        if let Some((l, t)) = self.spec.forbid_klt {
            if forbidden::addition_creates_klt(&self.g, u, v, l, t) {
                return false;
            }
        }
        match (self.spec.forbid_matching, &self.oracle) {
            (Some(s), Some(o)) => o.matching_number() < s || !o.addition_increases(u, v),
            _ => true,
        }
    }

    fn add(&mut self, u: usize, v: usize) {
        self.g.add_edge(u, v).expect("in range");
        if self.oracle.is_some() {
            self.oracle = Some(EdgeAdditionOracle::new(&self.g));
        }
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.g.remove_edge(u, v).expect("in range");
        if self.oracle.is_some() {
            self.oracle = Some(EdgeAdditionOracle::new(&self.g));
        }
    }
}

/// Tries every non-edge outside `tabu` once, in random order.
fn greedy_pass(c: &mut Climber, rng: &mut SmallRng, tabu: &[(usize, usize)], nodes: &mut u64, budget: u64) {
    let n = c.g.order();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !c.g.has_edge(u, v) && !tabu.contains(&(u, v)))
        .collect();
    pairs.shuffle(rng);
    for (u, v) in pairs {
        if *nodes >= budget {
            return;
        }
        *nodes += 1;
        if c.can_add(u, v) {
            c.add(u, v);
        }
    }
}

fn seeds(n: usize, spec: &FamilySpec, given: Option<&Graph>) -> Vec<Graph> {
    let mut out: Vec<Graph> = given.filter(|g| g.order() == n && spec.admits(g)).cloned().into_iter().collect();
    if let Some(s) = spec.forbid_matching {
        let k = n.min(2 * s + 1);
        let mut clique = Graph::empty(n).expect("capacity");
        for u in 0..k {
            for v in u + 1..k {
                clique.insert_unchecked(u, v);
            }
        }
        out.push(clique);
        if s >= 1 && n > s {
            out.push(complete_split(s, n));
        }
    }
    out.push(Graph::empty(n).expect("capacity"));
    out.retain(|g| spec.admits(g));
    out
}

/// A valid graph found by local search; never claims optimality.
pub fn lower_bound_search(
    n: usize,
    spec: &FamilySpec,
    effort: Effort,
    seed_graph: Option<&Graph>,
) -> Result<SearchOutcome, OracleError> {
    if n > MAX_VERTICES {
        return Err(OracleError::CapExceeded { n, cap: MAX_VERTICES, spec: *spec });
    }
    let mut rng = SmallRng::seed_from_u64(effort.seed);
    let seeds = seeds(n, spec, seed_graph);
    let (mut best_i, mut best) = seeds
        .iter()
        .enumerate()
        .max_by_key(|(i, g)| (g.edge_count(), std::cmp::Reverse(*i)))
        .map(|(i, g)| (i, g.clone()))
        .expect("the empty graph is always a seed");
    let mut nodes = 0u64;
    let budget = effort.node_budget;
    // one greedy closure per seed first, so every seed gets a chance
    let mut closed = Vec::with_capacity(seeds.len());
    for (i, seed) in seeds.iter().enumerate() {
        let mut c = Climber::new(spec, seed.clone());
        greedy_pass(&mut c, &mut rng, &[], &mut nodes, budget);
        if c.g.edge_count() > best.edge_count() {
            best = c.g.clone();
            best_i = i;
        }
        closed.push(c.g);
    }
    let mut round = 0usize;
    while nodes < budget {
        let start = round % closed.len();
        round += 1;
        let mut c = Climber::new(spec, closed[start].clone());
        let mut tabu: VecDeque<(usize, usize)> = VecDeque::new();
        let mut stale = 0;
        while stale < 20 && nodes < budget {
            // perturb, then close greedily again
            let edges: Vec<_> = c.g.edges().collect();
            if edges.is_empty() {
                greedy_pass(&mut c, &mut rng, &[], &mut nodes, budget);
                if c.g.edge_count() == 0 {
                    break;
                }
                continue;
            }
            let k = rng.gen_range(1..=3.min(edges.len()));
            for &(u, v) in edges.choose_multiple(&mut rng, k) {
                c.remove(u, v);
                tabu.push_back((u, v));
            }
            while tabu.len() > 6 {
                tabu.pop_front();
            }
            let tabu_now: Vec<_> = tabu.iter().copied().collect();
            greedy_pass(&mut c, &mut rng, &tabu_now, &mut nodes, budget);
            if c.g.edge_count() > best.edge_count() {
                best = c.g.clone();
                best_i = start;
                stale = 0;
            } else {
                stale += 1;
            }
        }
    }
    debug_assert!(spec.admits(&best));
    Ok(SearchOutcome {
        value: best.edge_count(),
        witness: best,
        nodes,
        seed_index: best_i,
    })
}
