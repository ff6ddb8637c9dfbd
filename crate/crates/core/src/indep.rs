//! Independent sets: exact solver, constructive lower bounds, Shearer's
//! bound and the distance of an intersecting family to the nearest star.
//!
//! The exact solver is a branch and bound over bitset candidate sets.
//! Nodes are pruned first with a greedy clique cover and, when that fails,
//! with the inertia bound `α(H) <= |H| - max(n+, n-)` on the candidate
//! subgraph. Clique covers are useless on triangle-free Kneser graphs
//! (`n < 3k`); the inertia bound is exact on every full Kneser graph and
//! stays strong on their random induced subgraphs.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::bitset::VertexSet;
use crate::combinatorics::KSubset;
use crate::error::{param, Result};
use crate::graph::ExplicitGraph;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsMethod {
    Exact,
    Greedy,
    Deletion,
    TriangleFreeGreedy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ISResult {
    pub size: usize,
    /// Sorted vertex indices.
    pub witness: Vec<usize>,
    pub method: IsMethod,
    /// Only the exact solver sets this, and only when the search finished.
    pub optimal: bool,
}

impl ISResult {
    fn new(mut witness: Vec<usize>, method: IsMethod, optimal: bool) -> Self {
        witness.sort_unstable();
        Self {
            size: witness.len(),
            witness,
            method,
            optimal,
        }
    }
}

/// Default node budget for the exact solver.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Candidate sets at least this large get the spectral bound.
const INERTIA_MIN: usize = 10;

/// Maximum independent set within `budget` search nodes.
pub fn max_independent_set(g: &ExplicitGraph, budget: u64) -> ISResult {
    max_independent_set_with_hint(g, budget, &[])
}

/// As [`max_independent_set`], starting from `hint` as incumbent when it is
/// independent and larger than the built-in heuristics.
pub fn max_independent_set_with_hint(g: &ExplicitGraph, budget: u64, hint: &[usize]) -> ISResult {
    let mut best = degree_greedy_is(g).witness;
    if hint.len() > best.len() && g.is_independent(hint) {
        best = hint.to_vec();
    }
    let mut solver = Solver {
        g,
        best,
        nodes: 0,
        budget,
        exhausted: false,
    };
    solver.search(g.full_set(), Vec::new());
    ISResult::new(solver.best, IsMethod::Exact, !solver.exhausted)
}

struct Solver<'a> {
    g: &'a ExplicitGraph,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Solver<'_> {
    fn search(&mut self, mut cand: VertexSet, mut current: Vec<usize>) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        self.reduce(&mut cand, &mut current);
        if cand.is_empty() {
            if current.len() > self.best.len() {
                self.best = current;
            }
            return;
        }
        let need = self.best.len() + 1 - current.len(); // cand must supply this many
        if cand.len() < need {
            return;
        }
        if clique_cover_bound(self.g, &cand) < need {
            return;
        }
        if cand.len() >= INERTIA_MIN && inertia_bound(self.g, &cand) < need {
            return;
        }

        let v = cand
            .iter()
            .max_by_key(|&v| (self.g.degree_into(v, &cand), std::cmp::Reverse(v)))
            .expect("non-empty");
        let mut with_v = cand.difference(self.g.neighbors(v));
        with_v.remove(v);
        let mut current_with = current.clone();
        current_with.push(v);
        self.search(with_v, current_with);

        cand.remove(v);
        self.search(cand, current);
    }

    /// Degree-0 and degree-1 vertices always belong to some maximum
    /// independent set of the candidate subgraph.
    fn reduce(&self, cand: &mut VertexSet, current: &mut Vec<usize>) {
        loop {
            let mut changed = false;
            for v in cand.to_vec() {
                if !cand.contains(v) {
                    continue;
                }
                let d = self.g.degree_into(v, cand);
                if d <= 1 {
                    current.push(v);
                    cand.remove(v);
                    if d == 1 {
                        let u = self.g.neighbors(v).intersection(cand).first().expect("degree 1");
                        cand.remove(u);
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// Number of cliques in a greedy clique cover of `G[cand]`; an upper bound on `α(G[cand])`.
pub fn clique_cover_bound(g: &ExplicitGraph, cand: &VertexSet) -> usize {
    let mut left = cand.clone();
    let mut cliques = 0;
    while let Some(v) = left.first() {
        left.remove(v);
        let mut pool = g.neighbors(v).intersection(&left);
        while let Some(w) = pool.first() {
            left.remove(w);
            pool.intersect_with(g.neighbors(w));
        }
        cliques += 1;
    }
    cliques
}

/// Cvetković inertia bound on `G[cand]`: `|cand| - max(n+, n-)`.
pub fn inertia_bound(g: &ExplicitGraph, cand: &VertexSet) -> usize {
    let verts = cand.to_vec();
    let m = verts.len();
    if m == 0 {
        return 0;
    }
    let a = DMatrix::from_fn(m, m, |i, j| if g.has_edge(verts[i], verts[j]) { 1.0 } else { 0.0 });
    let tol = 1e-7 * (m as f64).max(1.0);
    let (mut pos, mut neg) = (0usize, 0usize);
    for &ev in a.symmetric_eigenvalues().iter() {
        if ev > tol {
            pos += 1;
        } else if ev < -tol {
            neg += 1;
        }
    }
    m - pos.max(neg)
}

/// Repeatedly takes a minimum-degree vertex (smallest index on ties) and
/// deletes its closed neighbourhood.
pub fn degree_greedy_is(g: &ExplicitGraph) -> ISResult {
    ISResult::new(degree_greedy(g, g.full_set()), IsMethod::Greedy, false)
}

fn degree_greedy(g: &ExplicitGraph, mut left: VertexSet) -> Vec<usize> {
    let mut deg: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree_into(v, &left)).collect();
    let mut out = Vec::new();
    while let Some(v) = left.iter().min_by_key(|&v| (deg[v], v)) {
        out.push(v);
        let mut gone = g.neighbors(v).intersection(&left);
        gone.insert(v);
        left.difference_with(&gone);
        for u in gone.iter() {
            for w in g.neighbors(u).intersection(&left).iter() {
                deg[w] -= 1;
            }
        }
    }
    out
}

/// Scans edges in lexicographic order and deletes the larger endpoint of
/// every edge still present; at least `|V| - e(G)` vertices survive.
pub fn deletion_lower_bound(g: &ExplicitGraph) -> ISResult {
    let mut alive = g.full_set();
    for (u, v) in g.edges() {
        if alive.contains(u) && alive.contains(v) {
            alive.remove(v);
        }
    }
    ISResult::new(alive.to_vec(), IsMethod::Deletion, false)
}

#[derive(Clone, Debug)]
pub struct TriangleFreeReduction {
    /// Subgraph on `kept`; vertex `i` of `graph` is `kept[i]` of the input.
    pub graph: ExplicitGraph,
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
}

/// Removes the lowest vertex of the lexicographically first triangle until
/// none remain.
pub fn triangle_free_reduce(g: &ExplicitGraph) -> TriangleFreeReduction {
    let mut alive = g.full_set();
    let mut removed = Vec::new();
    // the first triangle's lowest vertex is never below the previous one
    let mut start = 0;
    'outer: while let Some(u) = (start..g.vertex_count()).find(|&u| alive.contains(u) && has_triangle_from(g, u, &alive)) {
        start = u;
        alive.remove(u);
        removed.push(u);
        if alive.is_empty() {
            break 'outer;
        }
    }
    let kept = alive.to_vec();
    TriangleFreeReduction {
        graph: g.induced(&kept),
        kept,
        removed,
    }
}

fn has_triangle_from(g: &ExplicitGraph, u: usize, alive: &VertexSet) -> bool {
    let nu = g.neighbors(u).intersection(alive);
    let found = nu.iter().filter(|&v| v > u).any(|v| g.neighbors(v).intersection(&nu).iter().any(|w| w > v));
    found
}

/// Triangle removal followed by the degree greedy; witness in the input's indices.
pub fn triangle_free_greedy_is(g: &ExplicitGraph) -> ISResult {
    let red = triangle_free_reduce(g);
    let local = degree_greedy(&red.graph, red.graph.full_set());
    ISResult::new(local.into_iter().map(|i| red.kept[i]).collect(), IsMethod::TriangleFreeGreedy, false)
}

/// `Σ_v 1/(deg(v)+1)`, exactly.
pub fn caro_wei(g: &ExplicitGraph) -> Rational {
    let mut by_degree = vec![0i64; g.vertex_count() + 1];
    for v in 0..g.vertex_count() {
        by_degree[g.degree(v)] += 1;
    }
    by_degree
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(Rational::zero(), |acc, (d, &c)| acc + Rational::new(BigInt::from(c), BigInt::from(d as i64 + 1)))
}

/// `⌈Σ_v 1/(deg(v)+1)⌉`; every graph has an independent set this large.
pub fn caro_wei_floor(g: &ExplicitGraph) -> usize {
    let c = caro_wei(g).ceil().to_integer();
    c.try_into().expect("bounded by vertex count")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShearerBound {
    /// `N (D ln D - D + 1) / (D-1)^2`
    pub bound: f64,
    /// `N (ln D - 1) / D`
    pub weak: f64,
}

/// Independent-set guarantee for triangle-free graphs of average degree `D > 1`.
pub fn shearer_bound(n: f64, d: f64) -> Result<ShearerBound> {
    if !(d > 1.0) || !d.is_finite() {
        return param(format!("Shearer's bound needs D > 1, got {d}"));
    }
    let x = d - 1.0;
    // D ln D - D + 1 = (1+x) ln(1+x) - x, kept accurate for small x
    let numer = (1.0 + x) * x.ln_1p() - x;
    Ok(ShearerBound {
        bound: n * numer / (x * x),
        weak: n * (d.ln() - 1.0) / d,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilityDistance {
    /// Element whose star misses the fewest members (1-based).
    pub best_i: u32,
    /// `|F \ F_best_i|`
    pub residual: usize,
}

/// `min_i |F \ F_i|`, ties to the smallest `i`.
pub fn stability_distance(family: &[KSubset], n: u32) -> Result<StabilityDistance> {
    if family.is_empty() {
        return param("stability distance of an empty family");
    }
    if family.iter().any(|s| s.ground_n() != n) {
        return param(format!("family members must be subsets of [{n}]"));
    }
    let mut hits = vec![0usize; n as usize + 1];
    for s in family {
        for e in s.elements() {
            hits[e as usize] += 1;
        }
    }
    let (best_i, best) = (1..=n as usize).map(|i| (i, hits[i])).max_by_key(|&(i, h)| (h, std::cmp::Reverse(i))).unwrap();
    Ok(StabilityDistance {
        best_i: best_i as u32,
        residual: family.len() - best,
    })
}

/// `counts[t]` = number of independent sets of size `t`.
pub fn independent_set_counts(g: &ExplicitGraph) -> Vec<u64> {
    fn walk(g: &ExplicitGraph, cand: &VertexSet, size: usize, counts: &mut Vec<u64>) {
        if counts.len() <= size {
            counts.push(0);
        }
        counts[size] += 1;
        for v in cand.iter() {
            let mut next = cand.difference(g.neighbors(v));
            // only extend with larger indices so each set is generated once
            for w in 0..=v {
                next.remove(w);
            }
            walk(g, &next, size + 1, counts);
        }
    }
    let mut counts = Vec::new();
    walk(g, &g.full_set(), 0, &mut counts);
    counts
}

/// All maximal independent sets (Bron–Kerbosch with pivoting on the complement).
pub fn maximal_independent_sets(g: &ExplicitGraph) -> Vec<Vec<usize>> {
    let m = g.vertex_count();
    let non_nbr: Vec<VertexSet> = (0..m)
        .map(|v| {
            let mut s = g.full_set().difference(g.neighbors(v));
            s.remove(v);
            s
        })
        .collect();
    let mut out = Vec::new();
    fn bk(non_nbr: &[VertexSet], r: &mut Vec<usize>, p: VertexSet, mut x: VertexSet, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut s = r.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| p.intersection_len(&non_nbr[u]))
            .expect("p or x non-empty");
        let mut p = p;
        for v in p.difference(&non_nbr[pivot]).to_vec() {
            r.push(v);
            bk(non_nbr, r, p.intersection(&non_nbr[v]), x.intersection(&non_nbr[v]), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    bk(&non_nbr, &mut Vec::new(), g.full_set(), VertexSet::new(m), &mut out);
    out.sort();
    out
}
