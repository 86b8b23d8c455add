//! Branch-and-bound over the edges of `K_n` in column order
//! `(0,1), (0,2), (1,2), (0,3), ...`, including an edge before excluding it.
//!
//! Pruning: the incumbent (`current + remaining <= best`), adjacent-swap
//! canonicity whenever a column is complete (only graphs whose column key
//! cannot be raised by swapping two consecutive labels survive), and
//! incremental constraint checks through the new edge. No closed-form bound
//! on the answer is ever used to prune.

use super::{FamilySpec, OracleError};
use crate::graph::Graph;
use crate::matching::xg_of_masks;
use crate::{graph6, small};
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, AtomicUsize, Ordering::Relaxed};
use std::sync::Mutex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    /// The node budget ran out; the value is only a lower bound.
    LowerOnly,
}

/// Largest orders searched without an explicit override.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Families forbidding `C_4`.
    pub c4: usize,
    pub general: usize,
    /// Searches restricted to one value of `x(G)`.
    pub restricted: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            c4: 10,
            general: 9,
            restricted: 9,
        }
    }
}

impl Caps {
    pub fn for_spec(&self, spec: &FamilySpec) -> usize {
        if spec.forbid_klt == Some((2, 2)) {
            self.c4
        } else {
            self.general
        }
    }

    /// Caps that admit any order the mask representation supports.
    pub fn unlimited() -> Self {
        Caps {
            c4: 64,
            general: 64,
            restricted: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub workers: usize,
    pub node_budget: Option<u64>,
    pub caps: Caps,
    /// Edge decisions fixed per work unit.
    pub split_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            workers: 1,
            node_budget: None,
            caps: Caps::default(),
            split_depth: 12,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        SearchConfig {
            workers,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub n: usize,
    pub spec: FamilySpec,
    pub x: Option<usize>,
    pub value: usize,
    pub mode: Mode,
    #[serde(skip)]
    pub witness: Graph,
    pub witness_graph6: String,
    pub node_count: u64,
    pub workers: usize,
    /// With several workers the witness (not the value) depends on timing.
    pub witness_schedule_dependent: bool,
}

struct Problem {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// `true` where the edge completes its column.
    closes: Vec<bool>,
    klt: Option<(usize, usize)>,
    s: Option<usize>,
    target_x: Option<usize>,
}

impl Problem {
    fn new(n: usize, spec: &FamilySpec, target_x: Option<usize>) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        let mut closes = Vec::with_capacity(edges.capacity());
        for v in 1..n {
            for u in 0..v {
                edges.push((u, v));
                closes.push(u + 1 == v);
            }
        }
        Problem {
            n,
            edges,
            closes,
            klt: spec.forbid_klt,
            s: spec.forbid_matching,
            target_x,
        }
    }
}

struct Shared {
    best: AtomicI64,
    witness: Mutex<Option<Vec<u64>>>,
    nodes: AtomicU64,
    budget: u64,
    stop: AtomicBool,
}

const FLUSH: u64 = 1024;

struct Worker<'a> {
    p: &'a Problem,
    sh: &'a Shared,
    adj: Vec<u64>,
    count: usize,
    local: u64,
}

/// Would adding `uv` complete a `K_{l,t}` through the new edge?
pub(crate) fn creates_klt(adj: &[u64], u: usize, v: usize, l: usize, t: usize) -> bool {
    if l == 1 {
        return adj[u].count_ones() as usize + 1 >= t || adj[v].count_ones() as usize + 1 >= t;
    }
    let sides: &[(usize, usize)] = if l == t { &[(l, t)] } else { &[(l, t), (t, l)] };
    sides
        .iter()
        .any(|&(a, b)| side_completes(adj, u, v, a, b) || side_completes(adj, v, u, a, b))
}

/// `p` on the side of size `a`, `q` on the side of size `b`.
fn side_completes(adj: &[u64], p: usize, q: usize, a: usize, b: usize) -> bool {
    let pool = adj[q] & !(1 << p);
    let common = adj[p] & !(1 << q);
    pool.count_ones() as usize >= a - 1 && choose(adj, pool, a - 1, common, b - 1)
}

fn choose(adj: &[u64], pool: u64, need: usize, common: u64, b: usize) -> bool {
    if (common.count_ones() as usize) < b {
        return false;
    }
    if need == 0 {
        return true;
    }
    let mut rest = pool;
    while rest.count_ones() as usize >= need {
        let w = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let next = common & adj[w] & !(1 << w);
        if choose(adj, rest, need - 1, next, b) {
            return true;
        }
    }
    false
}

#[inline]
fn below(j: usize) -> u64 {
    (1u64 << j) - 1
}

/// Column `j` after swapping labels `i` and `i + 1`.
#[inline]
fn swapped_column(adj: &[u64], i: usize, j: usize) -> u64 {
    let old = if j == i {
        adj[i + 1]
    } else if j == i + 1 {
        adj[i]
    } else {
        adj[j]
    };
    let (bi, bj) = (old >> i & 1, old >> (i + 1) & 1);
    let m = (old & !(3 << i)) | bi << (i + 1) | bj << i;
    m & below(j)
}

/// No adjacent swap raises the key of the first `k + 1` columns. Within a
/// column, the lower vertex is the more significant bit.
fn prefix_canonical(adj: &[u64], k: usize) -> bool {
    for i in 0..k {
        for j in i..=k {
            let a = adj[j] & below(j);
            let b = swapped_column(adj, i, j);
            if a != b {
                let d = a ^ b;
                if b & d & d.wrapping_neg() != 0 {
                    return false;
                }
                break;
            }
        }
    }
    true
}

impl<'a> Worker<'a> {
    fn new(p: &'a Problem, sh: &'a Shared) -> Self {
        Worker {
            p,
            sh,
            adj: vec![0; p.n],
            count: 0,
            local: 0,
        }
    }

    #[inline]
    fn tick(&mut self) {
        self.local += 1;
        if self.local == FLUSH {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let total = self.sh.nodes.fetch_add(self.local, Relaxed) + self.local;
        self.local = 0;
        if total >= self.sh.budget {
            self.sh.stop.store(true, Relaxed);
        }
    }

    fn admissible(&self, u: usize, v: usize) -> bool {
        if let Some((l, t)) = self.p.klt {
            if creates_klt(&self.adj, u, v, l, t) {
                return false;
            }
        }
        if let Some(s) = self.p.s {
            let rest = small::full(self.p.n) & !(1 << u | 1 << v);
            if small::matching_at_least(&self.adj, rest, s as u32) {
                return false;
            }
        }
        true
    }

    #[inline]
    fn column_ok(&self, idx: usize) -> bool {
        !self.p.closes[idx] || prefix_canonical(&self.adj, self.p.edges[idx].1)
    }

    fn leaf(&mut self) {
        if let Some(target) = self.p.target_x {
            let s = self.p.s.expect("restricted search has a matching bound");
            match xg_of_masks(&self.adj, s) {
                Some((x, _)) if x == target => {}
                _ => return,
            }
        }
        let mut w = self.sh.witness.lock().expect("poisoned");
        if self.count as i64 > self.sh.best.load(Relaxed) {
            self.sh.best.store(self.count as i64, Relaxed);
            *w = Some(self.adj.clone());
        }
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        if on {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
            self.count += 1;
        } else {
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
            self.count -= 1;
        }
    }

    fn dfs(&mut self, idx: usize) {
        if self.sh.stop.load(Relaxed) {
            return;
        }
        self.tick();
        let total = self.p.edges.len();
        if (self.count + (total - idx)) as i64 <= self.sh.best.load(Relaxed) {
            return;
        }
        if idx == total {
            self.leaf();
            return;
        }
        let (u, v) = self.p.edges[idx];
        if self.admissible(u, v) {
            self.set(u, v, true);
            if self.column_ok(idx) {
                self.dfs(idx + 1);
            }
            self.set(u, v, false);
        }
        if self.column_ok(idx) {
            self.dfs(idx + 1);
        }
    }

    /// Collects the surviving assignments of the first `depth` edges.
    fn plan(&mut self, idx: usize, depth: usize, out: &mut Vec<(Vec<u64>, usize)>) {
        self.tick();
        if idx == depth {
            out.push((self.adj.clone(), self.count));
            return;
        }
        let (u, v) = self.p.edges[idx];
        if self.admissible(u, v) {
            self.set(u, v, true);
            if self.column_ok(idx) {
                self.plan(idx + 1, depth, out);
            }
            self.set(u, v, false);
        }
        if self.column_ok(idx) {
            self.plan(idx + 1, depth, out);
        }
    }
}

fn run(problem: &Problem, cfg: &SearchConfig) -> (Option<(usize, Vec<u64>)>, Mode, u64) {
    let sh = Shared {
        best: AtomicI64::new(-1),
        witness: Mutex::new(None),
        nodes: AtomicU64::new(0),
        budget: cfg.node_budget.unwrap_or(u64::MAX),
        stop: AtomicBool::new(false),
    };
    let depth = cfg.split_depth.min(problem.edges.len());
    let mut units = Vec::new();
    {
        let mut planner = Worker::new(problem, &sh);
        planner.plan(0, depth, &mut units);
        planner.flush();
    }
    let next = AtomicUsize::new(0);
    let workers = cfg.workers.max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut w = Worker::new(problem, &sh);
                loop {
                    let i = next.fetch_add(1, Relaxed);
                    if i >= units.len() || sh.stop.load(Relaxed) {
                        break;
                    }
                    w.adj.copy_from_slice(&units[i].0);
                    w.count = units[i].1;
                    w.dfs(depth);
                }
                w.flush();
            });
        }
    });
    let mode = if sh.stop.load(Relaxed) {
        Mode::LowerOnly
    } else {
        Mode::Exact
    };
    let best = sh.best.load(Relaxed);
    let witness = sh.witness.into_inner().expect("poisoned");
    let found = (best >= 0).then(|| (best as usize, witness.expect("witness recorded with best")));
    (found, mode, sh.nodes.load(Relaxed))
}

fn result(
    n: usize,
    spec: &FamilySpec,
    x: Option<usize>,
    found: (usize, Vec<u64>),
    mode: Mode,
    nodes: u64,
    cfg: &SearchConfig,
) -> OracleResult {
    let witness = small::graph_of(&found.1);
    OracleResult {
        n,
        spec: *spec,
        x,
        value: found.0,
        mode,
        witness_graph6: graph6::encode(&witness),
        witness,
        node_count: nodes,
        workers: cfg.workers.max(1),
        witness_schedule_dependent: cfg.workers > 1,
    }
}

/// `ex(n, spec)` by exhaustive search. A budget overrun yields the best
/// graph found so far in [`Mode::LowerOnly`].
pub fn exact_ex(n: usize, spec: &FamilySpec, cfg: &SearchConfig) -> Result<OracleResult, OracleError> {
    let cap = cfg.caps.for_spec(spec).min(64);
    if n > cap {
        return Err(OracleError::CapExceeded { n, cap, spec: *spec });
    }
    let problem = Problem::new(n, spec, None);
    let (found, mode, nodes) = run(&problem, cfg);
    // the empty graph is always admissible, so something is found unless stopped first
    let found = found.unwrap_or((0, vec![0; n]));
    Ok(result(n, spec, None, found, mode, nodes, cfg))
}

/// Largest graph in the family with `x(G) = x`; `Ok(None)` when no such
/// graph exists (proved only when the search completes).
pub fn exact_ex_restricted(
    n: usize,
    spec: &FamilySpec,
    x: usize,
    cfg: &SearchConfig,
) -> Result<Option<OracleResult>, OracleError> {
    let (Some(_), Some(s)) = (spec.forbid_klt, spec.forbid_matching) else {
        return Err(OracleError::NeedsBoth);
    };
    if x > s {
        return Err(OracleError::XOutOfRange { x, s });
    }
    let cap = cfg.caps.restricted.min(64);
    if n > cap {
        return Err(OracleError::CapExceeded { n, cap, spec: *spec });
    }
    let problem = Problem::new(n, spec, Some(x));
    let (found, mode, nodes) = run(&problem, cfg);
    Ok(found.map(|f| result(n, spec, Some(x), f, mode, nodes, cfg)))
}

/// [`exact_ex_restricted`] for every `x` in `0..=s`.
pub fn exact_ex_by_x(
    n: usize,
    spec: &FamilySpec,
    cfg: &SearchConfig,
) -> Result<Vec<Option<OracleResult>>, OracleError> {
    let s = spec.forbid_matching.ok_or(OracleError::NeedsBoth)?;
    (0..=s).map(|x| exact_ex_restricted(n, spec, x, cfg)).collect()
}
