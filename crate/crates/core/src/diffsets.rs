//! Subsets of `[N]` whose pairwise differences avoid `{(p - 1)/d}`: validation,
//! a greedy construction, an exact maximum via branch and bound, and the
//! density curve.
//!
//! The exact solver treats the problem as maximum independent set in the
//! graph on `[N]` joining `x, y` when `|x - y|` is a target. It branches on a
//! greedy clique cover of the candidate set, whose size bounds the
//! independence number from above.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::shifted_prime_targets;
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_CEILING: u64 = 500;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;
/// Witnesses of the exact solver are canonicalized up to this `N`.
pub const CANONICAL_WITNESS_MAX_N: u64 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidingSet {
    pub n: u64,
    pub d: u64,
    pub elements: Vec<u64>,
}

impl AvoidingSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn density(&self) -> f64 {
        self.elements.len() as f64 / self.n as f64
    }
}

/// Indicator of the forbidden differences `1..N-1`.
fn forbidden_differences(n: u64, d: u64) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(n as usize + 1);
    for t in shifted_prime_targets(n, d) {
        if t < n {
            bits.insert(t as usize);
        }
    }
    bits
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    /// First pair `(x, y)`, `x > y`, with `x - y` forbidden.
    pub violation: Option<(u64, u64)>,
}

/// Checks that no difference of two elements of `a` is a target.
pub fn validate(a: &[u64], n: u64, d: u64) -> Result<Validation> {
    if let Some(&x) = a.iter().find(|&&x| x == 0 || x > n) {
        return Err(Error::ElementOutOfRange { element: x, n });
    }
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let forbidden = forbidden_differences(n, d);
    for (i, &x) in sorted.iter().enumerate() {
        for &y in &sorted[..i] {
            if forbidden.contains((x - y) as usize) {
                return Ok(Validation {
                    valid: false,
                    violation: Some((x, y)),
                });
            }
        }
    }
    Ok(Validation {
        valid: true,
        violation: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanOrder {
    Ascending,
    Random(u64),
}

/// Scans `[N]` in the given order, keeping every element compatible with
/// those already kept. The result is maximal by inclusion.
pub fn greedy_set(n: u64, d: u64, order: ScanOrder) -> AvoidingSet {
    let targets: Vec<u64> = shifted_prime_targets(n, d)
        .into_iter()
        .filter(|&t| t < n)
        .collect();
    let mut scan: Vec<u64> = (1..=n).collect();
    if let ScanOrder::Random(seed) = order {
        scan.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut blocked = FixedBitSet::with_capacity(n as usize + 1);
    let mut elements = Vec::new();
    for x in scan {
        if blocked.contains(x as usize) {
            continue;
        }
        elements.push(x);
        for &t in &targets {
            if x + t <= n {
                blocked.insert((x + t) as usize);
            }
            if x > t {
                blocked.insert((x - t) as usize);
            }
        }
    }
    elements.sort_unstable();
    AvoidingSet { n, d, elements }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactOutcome {
    pub set: AvoidingSet,
    /// False when the node budget ran out; `set` is then the best found.
    pub optimal: bool,
    pub nodes: u64,
}

/// Conflict graph on `[N]`, vertices relabelled by increasing degree.
struct ConflictGraph {
    // label[i] is the element of [N] at internal index i
    label: Vec<u64>,
    index_of: Vec<usize>,
    adj: Vec<FixedBitSet>,
    non_adj: Vec<FixedBitSet>,
}

impl ConflictGraph {
    fn new(n: u64, d: u64) -> Self {
        let forbidden = forbidden_differences(n, d);
        let nu = n as usize;
        let degree = |x: usize| (1..=nu).filter(|&y| forbidden.contains(x.abs_diff(y))).count();
        let mut label: Vec<u64> = (1..=n).collect();
        label.sort_by_key(|&x| (degree(x as usize), x));
        let mut index_of = vec![0; nu + 1];
        for (i, &x) in label.iter().enumerate() {
            index_of[x as usize] = i;
        }
        let mut adj = vec![FixedBitSet::with_capacity(nu); nu];
        for i in 0..nu {
            for j in 0..nu {
                if forbidden.contains((label[i] as usize).abs_diff(label[j] as usize)) {
                    adj[i].insert(j);
                }
            }
        }
        let non_adj = (0..nu)
            .map(|i| {
                let mut s = adj[i].clone();
                s.toggle_range(..);
                s.set(i, false);
                s
            })
            .collect();
        ConflictGraph {
            label,
            index_of,
            adj,
            non_adj,
        }
    }

    fn len(&self) -> usize {
        self.label.len()
    }
}

struct Search<'g> {
    g: &'g ConflictGraph,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    /// Greedy cover of `p` by cliques; returns vertices grouped by clique
    /// with the running clique count for each.
    fn cover(&self, p: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncovered = p.clone();
        let mut order = Vec::with_capacity(p.count_ones(..));
        let mut bound = Vec::with_capacity(order.capacity());
        let mut k = 0;
        while let Some(first) = uncovered.ones().next() {
            k += 1;
            let mut q = uncovered.clone();
            let mut v = first;
            loop {
                order.push(v);
                bound.push(k);
                uncovered.set(v, false);
                q.set(v, false);
                q.intersect_with(&self.g.adj[v]);
                match q.ones().next() {
                    Some(w) => v = w,
                    None => break,
                }
            }
        }
        (order, bound)
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: FixedBitSet) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let (order, bound) = self.cover(&p);
        for i in (0..order.len()).rev() {
            if r.len() + bound[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            r.push(v);
            let mut next = p.clone();
            next.intersect_with(&self.g.non_adj[v]);
            if next.is_clear() {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, next);
            }
            r.pop();
            p.set(v, false);
            if self.exhausted {
                return;
            }
        }
    }
}

fn max_independent(g: &ConflictGraph, p: FixedBitSet, seed: Vec<usize>, budget: u64) -> (Vec<usize>, bool, u64) {
    let mut s = Search {
        g,
        best: seed,
        nodes: 0,
        budget,
        exhausted: false,
    };
    if !p.is_clear() {
        s.expand(&mut Vec::new(), p);
    }
    (s.best, !s.exhausted, s.nodes)
}

/// Maximum avoiding set by branch and bound, seeded with the greedy set.
pub fn max_set_exact(n: u64, d: u64, node_budget: u64) -> Result<ExactOutcome> {
    max_set_exact_with_ceiling(n, d, node_budget, DEFAULT_EXACT_CEILING)
}

pub fn max_set_exact_with_ceiling(
    n: u64,
    d: u64,
    node_budget: u64,
    ceiling: u64,
) -> Result<ExactOutcome> {
    if n > ceiling {
        return Err(Error::LimitExceeded {
            what: "exact-mode N",
            value: n,
            max: ceiling,
        });
    }
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("N and d must be positive".into()));
    }
    let g = ConflictGraph::new(n, d);
    let greedy = greedy_set(n, d, ScanOrder::Ascending);
    let seed: Vec<usize> = greedy.elements.iter().map(|&x| g.index_of[x as usize]).collect();
    let mut all = FixedBitSet::with_capacity(g.len());
    all.insert_range(..);
    let (best, optimal, nodes) = max_independent(&g, all.clone(), seed, node_budget);
    let mut elements: Vec<u64> = if optimal && n <= CANONICAL_WITNESS_MAX_N {
        lexicographically_least(&g, all, best.len())
    } else {
        best.iter().map(|&i| g.label[i]).collect()
    };
    elements.sort_unstable();
    Ok(ExactOutcome {
        set: AvoidingSet { n, d, elements },
        optimal,
        nodes,
    })
}

/// The lexicographically least independent set of the given (maximum) size.
fn lexicographically_least(g: &ConflictGraph, mut allowed: FixedBitSet, size: usize) -> Vec<u64> {
    let mut chosen = Vec::new();
    for x in 1..=g.len() as u64 {
        let v = g.index_of[x as usize];
        if !allowed.contains(v) {
            continue;
        }
        let mut rest = allowed.clone();
        rest.intersect_with(&g.non_adj[v]);
        let (more, _, _) = max_independent(g, rest.clone(), Vec::new(), u64::MAX);
        if chosen.len() + 1 + more.len() >= size {
            chosen.push(x);
            allowed = rest;
            if chosen.len() == size {
                break;
            }
        } else {
            allowed.set(v, false);
        }
    }
    chosen
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Exact,
    Greedy,
}

impl std::fmt::Display for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Solver::Exact => "exact",
            Solver::Greedy => "greedy",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub n: u64,
    pub d: u64,
    pub solver: Solver,
    pub size: usize,
    pub density: f64,
    pub bound: f64,
    /// False when an exact run hit its node budget.
    pub optimal: bool,
}

impl DensityRow {
    pub const CSV_HEADER: &'static str = "N,d,solver,size,density,bound";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.d, self.solver, self.size, self.density, self.bound
        )
    }
}

/// `C exp(-c (log N)^{1/3})`.
pub fn density_bound(n: u64, big_c: f64, c: f64) -> f64 {
    big_c * (-c * (n as f64).ln().cbrt()).exp()
}

/// Densities of the chosen solver next to the bound shape; no comparison
/// is asserted.
pub fn density_curve(
    ns: &[u64],
    d: u64,
    big_c: f64,
    c: f64,
    solver: Solver,
    node_budget: u64,
) -> Result<Vec<DensityRow>> {
    ns.iter()
        .map(|&n| {
            let (set, optimal) = match solver {
                Solver::Greedy => (greedy_set(n, d, ScanOrder::Ascending), true),
                Solver::Exact => {
                    let r = max_set_exact(n, d, node_budget)?;
                    (r.set, r.optimal)
                }
            };
            Ok(DensityRow {
                n,
                d,
                solver,
                size: set.len(),
                density: set.density(),
                bound: density_bound(n, big_c, c),
                optimal,
            })
        })
        .collect()
}
