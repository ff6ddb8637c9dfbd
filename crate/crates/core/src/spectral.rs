//! Hoffman-type edge lower bounds and `(λ,γ)`-supersaturation certificates.
//!
//! A graph on `N` vertices is `(λ,γ)`-supersaturated when every vertex set
//! `S` with `|S| >= λN` spans at least `γ (|S|/N)^2 e(G)` edges. For a
//! `D`-regular graph with smallest adjacency eigenvalue `λ_min` every set
//! satisfies
//!
//! ```text
//! e(S) >= (λ_min/D · N/|S| + (D-λ_min)/D) · (|S|/N)^2 · e(G)
//! ```
//!
//! which for `K(n,k)` yields the certificate `((1+τ)k/n, τ/(1+τ))`.
//! All bounds are exact rationals; eigenvalues are only computed numerically
//! for the verification routines.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::error::{param, Result};
use crate::graph::ExplicitGraph;
use crate::indep;
use crate::kneser::KneserParams;
use crate::Rational;

/// Graphs up to this size are scanned over all `2^N` vertex subsets.
pub const EXHAUSTIVE_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct SupersatParams {
    pub lambda: Rational,
    pub gamma: Rational,
    /// Generator `τ` when the pair came from [`kneser_supersat_params`].
    pub tau: Option<Rational>,
}

impl SupersatParams {
    pub fn new(lambda: Rational, gamma: Rational) -> Result<Self> {
        let unit = |x: &Rational| x.is_positive() && *x <= Rational::one();
        if !unit(&lambda) || !unit(&gamma) {
            return param(format!("supersaturation needs lambda, gamma in (0,1], got ({lambda}, {gamma})"));
        }
        Ok(Self { lambda, gamma, tau: None })
    }
}

/// A `D`-regular graph described by its counts and smallest eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularSpec {
    pub vertices: u128,
    pub degree: u128,
    pub lambda_min: Rational,
    pub edges: u128,
}

impl From<&KneserParams> for RegularSpec {
    fn from(p: &KneserParams) -> Self {
        Self {
            vertices: p.vertices,
            degree: p.degree,
            lambda_min: Rational::from_integer(BigInt::from(p.lambda_min)),
            edges: p.edge_count,
        }
    }
}

fn rat(x: u128) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `(λ_min/D · N/s + (D-λ_min)/D) · (s/N)^2 · e(G)`, unclamped.
pub fn hoffman_lower_bound(spec: &RegularSpec, s: u128) -> Result<Rational> {
    if s == 0 || s > spec.vertices {
        return param(format!("set size {s} outside [1, {}]", spec.vertices));
    }
    if spec.degree == 0 {
        return param("Hoffman bound needs degree D >= 1");
    }
    let (n, d, s_r) = (rat(spec.vertices), rat(spec.degree), rat(s));
    let lm = &spec.lambda_min;
    let factor = lm / &d * (&n / &s_r) + (&d - lm) / &d;
    let frac = &s_r / &n;
    Ok(factor * &frac * &frac * rat(spec.edges))
}

/// Relative size `-λ_min/(D-λ_min)` at which the bound changes sign.
pub fn hoffman_root(spec: &RegularSpec) -> Rational {
    let d = rat(spec.degree);
    -spec.lambda_min.clone() / (d - &spec.lambda_min)
}

/// `((1+τ)k/n, τ/(1+τ))` for `K(n,k)`.
pub fn kneser_supersat_params(n: u32, k: u32, tau: Rational) -> Result<SupersatParams> {
    if !tau.is_positive() {
        return param(format!("tau must be positive, got {tau}"));
    }
    crate::kneser::kneser_params(n, k)?;
    let one = Rational::one();
    let lambda = (&one + &tau) * Rational::new(BigInt::from(k), BigInt::from(n));
    if lambda > one {
        return param(format!("lambda = (1+tau)k/n = {lambda} exceeds 1; certificate is vacuous"));
    }
    let gamma = &tau / (&one + &tau);
    Ok(SupersatParams {
        lambda,
        gamma,
        tau: Some(tau),
    })
}

/// Adjacency eigenvalues in ascending order (dense symmetric solver).
pub fn adjacency_eigenvalues(g: &ExplicitGraph) -> Vec<f64> {
    let m = g.vertex_count();
    let a = DMatrix::from_fn(m, m, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// For every size `s`, the minimum of `e(S)` over `|S| = s` and the first
/// set attaining it in Gray-code order.
#[derive(Clone, Debug)]
pub struct SizeProfile {
    pub min_edges: Vec<usize>,
    pub witness: Vec<u32>,
    pub subsets_scanned: u64,
}

impl SizeProfile {
    pub fn witness_vertices(&self, size: usize) -> Vec<usize> {
        let mask = self.witness[size];
        (0..32).filter(|b| mask >> b & 1 == 1).collect()
    }
}

pub fn min_edges_by_size(g: &ExplicitGraph) -> Result<SizeProfile> {
    let m = g.vertex_count();
    if m > EXHAUSTIVE_LIMIT {
        return param(format!("exhaustive scan limited to {EXHAUSTIVE_LIMIT} vertices, graph has {m}"));
    }
    let adj: Vec<u32> = (0..m)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, w| acc | 1 << w))
        .collect();
    let mut min_edges = vec![usize::MAX; m + 1];
    let mut witness = vec![0u32; m + 1];
    min_edges[0] = 0;
    let (mut mask, mut edges, mut size) = (0u32, 0usize, 0usize);
    let total = 1u64 << m;
    for i in 1..total {
        let b = i.trailing_zeros() as usize;
        let bit = 1u32 << b;
        if mask & bit != 0 {
            mask ^= bit;
            edges -= (adj[b] & mask).count_ones() as usize;
            size -= 1;
        } else {
            edges += (adj[b] & mask).count_ones() as usize;
            mask |= bit;
            size += 1;
        }
        if edges < min_edges[size] {
            min_edges[size] = edges;
            witness[size] = mask;
        }
    }
    Ok(SizeProfile {
        min_edges,
        witness,
        subsets_scanned: total,
    })
}

/// `e(S) >= γ (s/N)^2 e(G)`, exactly: `e(S)·N^2 >= γ·s^2·e(G)`.
pub fn meets_supersaturation(edges_in_s: usize, s: usize, n: usize, total_edges: usize, gamma: &Rational) -> bool {
    let lhs = Rational::from_integer(BigInt::from(edges_in_s) * BigInt::from(n) * BigInt::from(n));
    let rhs = gamma * Rational::from_integer(BigInt::from(s) * BigInt::from(s) * BigInt::from(total_edges));
    lhs >= rhs
}

/// Smallest integer size covered by the certificate, `⌈λN⌉`.
pub fn threshold_size(lambda: &Rational, n: usize) -> usize {
    let t = (lambda * Rational::from_integer(BigInt::from(n))).ceil();
    t.to_integer().try_into().unwrap_or(usize::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleBudget {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupersatVerdict {
    /// Exhaustive scan found no violation.
    Holds,
    /// Some `S` with `|S| >= λN` spans too few edges.
    Violated { witness: Vec<usize>, edges: usize },
    /// Randomized refutation found nothing; this is not a proof.
    NoViolationFound { subsets_checked: usize },
}

impl SupersatVerdict {
    pub fn accepted(&self) -> bool {
        !matches!(self, SupersatVerdict::Violated { .. })
    }
}

/// Exhaustive check for graphs with at most [`EXHAUSTIVE_LIMIT`] vertices,
/// randomized refutation with `budget` otherwise. The exhaustive witness is
/// the minimum-edge set at the smallest violating size.
pub fn verify_supersaturation(
    g: &ExplicitGraph,
    params: &SupersatParams,
    budget: Option<SampleBudget>,
) -> Result<SupersatVerdict> {
    let n = g.vertex_count();
    let e = g.edge_count();
    let s0 = threshold_size(&params.lambda, n).max(1);
    if n <= EXHAUSTIVE_LIMIT {
        let profile = min_edges_by_size(g)?;
        for s in s0..=n {
            if !meets_supersaturation(profile.min_edges[s], s, n, e, &params.gamma) {
                return Ok(SupersatVerdict::Violated {
                    witness: profile.witness_vertices(s),
                    edges: profile.min_edges[s],
                });
            }
        }
        return Ok(SupersatVerdict::Holds);
    }
    let Some(budget) = budget else {
        return param(format!(
            "graph has {n} vertices; exhaustive mode needs at most {EXHAUSTIVE_LIMIT}, supply a sample budget"
        ));
    };
    randomized_refutation(g, params, s0, budget)
}

fn randomized_refutation(
    g: &ExplicitGraph,
    params: &SupersatParams,
    s0: usize,
    budget: SampleBudget,
) -> Result<SupersatVerdict> {
    let n = g.vertex_count();
    let e = g.edge_count();
    let mut checked = 0usize;

    // Near-independent sets are the natural violators: grow heuristic
    // independent sets by min-degree padding and test every size >= s0.
    let mut seeds = vec![indep::degree_greedy_is(g).witness];
    if n <= 200 {
        seeds.push(indep::max_independent_set(g, 20_000).witness);
    }
    for seed in seeds {
        let mut s = VertexSet::from_indices(n, seed.iter().copied());
        let mut edges = g.edges_within(&s);
        loop {
            let size = s.len();
            if size >= s0 {
                checked += 1;
                if !meets_supersaturation(edges, size, n, e, &params.gamma) {
                    return Ok(SupersatVerdict::Violated {
                        witness: s.to_vec(),
                        edges,
                    });
                }
            }
            if size == n {
                break;
            }
            let (v, add) = (0..n)
                .filter(|&v| !s.contains(v))
                .map(|v| (v, g.degree_into(v, &s)))
                .min_by_key(|&(v, d)| (d, v))
                .expect("set is not full");
            s.insert(v);
            edges += add;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.samples {
        let pick = index::sample(&mut rng, n, s0).into_vec();
        let s = VertexSet::from_indices(n, pick);
        let edges = g.edges_within(&s);
        checked += 1;
        if !meets_supersaturation(edges, s0, n, e, &params.gamma) {
            return Ok(SupersatVerdict::Violated {
                witness: s.to_vec(),
                edges,
            });
        }
    }
    Ok(SupersatVerdict::NoViolationFound {
        subsets_checked: checked,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoffmanCheck {
    pub holds: bool,
    pub lambda_min: f64,
    pub degree: usize,
    /// Smallest `e(S) - bound(|S|)` over all sizes.
    pub worst_slack: f64,
    /// A set violating the bound, if any.
    pub witness: Option<Vec<usize>>,
}

/// Exhaustively checks every subset of a regular graph against the Hoffman
/// bound, using the numerically computed smallest eigenvalue.
pub fn verify_hoffman(g: &ExplicitGraph) -> Result<HoffmanCheck> {
    let Some(d) = g.regular_degree() else {
        return param("Hoffman bound needs a regular graph");
    };
    let n = g.vertex_count();
    let profile = min_edges_by_size(g)?;
    let lambda_min = adjacency_eigenvalues(g).first().copied().unwrap_or(0.0);
    let mut check = HoffmanCheck {
        holds: true,
        lambda_min,
        degree: d,
        worst_slack: f64::INFINITY,
        witness: None,
    };
    if d == 0 {
        check.worst_slack = 0.0;
        return Ok(check);
    }
    let (nf, df, ef) = (n as f64, d as f64, g.edge_count() as f64);
    for s in 1..=n {
        let sf = s as f64;
        let bound = (lambda_min / df * nf / sf + (df - lambda_min) / df) * (sf / nf).powi(2) * ef;
        let slack = profile.min_edges[s] as f64 - bound;
        if slack < check.worst_slack {
            check.worst_slack = slack;
        }
        if slack < -1e-9 && check.holds {
            check.holds = false;
            check.witness = Some(profile.witness_vertices(s));
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::kneser::{kneser_params, materialize};
    use crate::ratio;

    fn petersen() -> ExplicitGraph {
        materialize(&kneser_params(5, 2).unwrap()).unwrap()
    }

    /// Brute force over all subsets of a fixed size, independent of the Gray-code scan.
    fn brute_min_edges(g: &ExplicitGraph, size: usize) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == size)
            .map(|m| {
                let s = VertexSet::from_indices(n, (0..n).filter(|b| m >> b & 1 == 1));
                g.edges_within(&s)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn hoffman_examples() {
        let spec = RegularSpec::from(&kneser_params(5, 2).unwrap());
        assert_eq!(hoffman_lower_bound(&spec, 4).unwrap(), Rational::zero());
        assert_eq!(hoffman_lower_bound(&spec, 5).unwrap(), ratio(5, 4));
        assert_eq!(brute_min_edges(&petersen(), 5), 2);
        for s in [1u128, 7, 10] {
            let b = hoffman_lower_bound(&spec, s).unwrap();
            if s == 10 {
                assert_eq!(b, rat(15));
            }
        }
        assert!(hoffman_lower_bound(&spec, 0).is_err());
        assert!(hoffman_lower_bound(&spec, 11).is_err());
        assert_eq!(hoffman_root(&spec), ratio(2, 5));
    }

    #[test]
    fn hoffman_sign_change_at_ratio_bound() {
        for (n, k) in [(5, 2), (6, 2), (7, 2), (7, 3), (9, 4), (12, 3), (20, 6)] {
            let p = kneser_params(n, k).unwrap();
            let spec = RegularSpec::from(&p);
            let root = hoffman_root(&spec);
            assert_eq!(root, ratio(k as i64, n as i64));
            let s_star = threshold_size(&root, p.vertices as usize) as u128;
            assert!(hoffman_lower_bound(&spec, s_star).unwrap() <= Rational::zero());
            for s in s_star + 1..=(s_star + 5).min(p.vertices) {
                assert!(hoffman_lower_bound(&spec, s).unwrap().is_positive(), "K({n},{k}) s={s}");
            }
            assert_eq!(hoffman_lower_bound(&spec, p.vertices).unwrap(), rat(p.edge_count));
        }
    }

    #[test]
    fn supersat_params_examples() {
        let p = kneser_supersat_params(5, 2, ratio(1, 4)).unwrap();
        assert_eq!((p.lambda.clone(), p.gamma.clone()), (ratio(1, 2), ratio(1, 5)));
        let p = kneser_supersat_params(12, 3, ratio(1, 2)).unwrap();
        assert_eq!((p.lambda, p.gamma), (ratio(3, 8), ratio(1, 3)));
        assert!(kneser_supersat_params(5, 2, ratio(2, 1)).is_err());
        assert!(kneser_supersat_params(5, 2, ratio(0, 1)).is_err());
    }

    #[test]
    fn petersen_supersaturation() {
        let g = petersen();
        let ok = SupersatParams::new(ratio(1, 2), ratio(1, 5)).unwrap();
        assert_eq!(verify_supersaturation(&g, &ok, None).unwrap(), SupersatVerdict::Holds);

        let bad = SupersatParams::new(ratio(2, 5), ratio(1, 100)).unwrap();
        match verify_supersaturation(&g, &bad, None).unwrap() {
            SupersatVerdict::Violated { witness, edges } => {
                assert_eq!(edges, 0);
                assert_eq!(witness.len(), 4);
                let subsets: Vec<_> = witness.iter().map(|&v| g.subset(v).unwrap()).collect();
                let common = subsets.iter().fold(!0u64, |acc, s| acc & s.bits());
                assert_eq!(common.count_ones(), 1, "witness is a star");
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn empty_graph_supersaturation_is_degenerate_true() {
        let g = ExplicitGraph::empty(6);
        let p = SupersatParams::new(ratio(1, 3), ratio(1, 2)).unwrap();
        assert_eq!(verify_supersaturation(&g, &p, None).unwrap(), SupersatVerdict::Holds);
    }

    #[test]
    fn large_graph_needs_budget() {
        let g = materialize(&kneser_params(7, 3).unwrap()).unwrap();
        let p = kneser_supersat_params(7, 3, ratio(1, 2)).unwrap();
        assert!(verify_supersaturation(&g, &p, None).is_err());
        let v = verify_supersaturation(&g, &p, Some(SampleBudget { samples: 200, seed: 1 })).unwrap();
        assert!(matches!(v, SupersatVerdict::NoViolationFound { .. }));
        // an absurd certificate is refuted by the padded independent sets
        let bogus = SupersatParams::new(ratio(3, 7), ratio(1, 1)).unwrap();
        let v = verify_supersaturation(&g, &bogus, Some(SampleBudget { samples: 10, seed: 1 })).unwrap();
        assert!(!v.accepted());
    }

    #[test]
    fn kneser_certificates_verify_exhaustively() {
        for (n, k) in [(5, 2), (6, 2)] {
            let g = materialize(&kneser_params(n, k).unwrap()).unwrap();
            for tau in [ratio(1, 4), ratio(1, 2), ratio(1, 1)] {
                let p = kneser_supersat_params(n, k, tau).unwrap();
                assert_eq!(verify_supersaturation(&g, &p, None).unwrap(), SupersatVerdict::Holds);
            }
        }
    }

    #[test]
    fn profile_matches_brute_force() {
        for seed in 0..5 {
            let g = ExplicitGraph::gnm(9, 14, seed).unwrap();
            let prof = min_edges_by_size(&g).unwrap();
            for s in 0..=9 {
                assert_eq!(prof.min_edges[s], brute_min_edges(&g, s));
                let w = VertexSet::from_indices(9, prof.witness_vertices(s));
                assert_eq!(w.len(), s);
                assert_eq!(g.edges_within(&w), prof.min_edges[s]);
            }
        }
    }

    #[test]
    fn hoffman_verification_examples() {
        let c = verify_hoffman(&petersen()).unwrap();
        assert!(c.holds);
        assert!((c.lambda_min + 2.0).abs() < 1e-9);
        let c = verify_hoffman(&ExplicitGraph::complete(4)).unwrap();
        assert!(c.holds && (c.lambda_min + 1.0).abs() < 1e-9);
        let c = verify_hoffman(&ExplicitGraph::complete(2)).unwrap();
        assert!(c.holds);
        assert!(verify_hoffman(&ExplicitGraph::path(3)).is_err());
        assert!(verify_hoffman(&ExplicitGraph::empty(4)).unwrap().holds);
    }

    #[test]
    fn kneser_spectrum_endpoints() {
        for (n, k) in [(5, 2), (6, 2), (7, 2), (6, 3), (7, 3)] {
            let p = kneser_params(n, k).unwrap();
            let ev = adjacency_eigenvalues(&materialize(&p).unwrap());
            assert!((ev[0] - p.lambda_min as f64).abs() < 1e-9, "K({n},{k}) min {}", ev[0]);
            assert!((ev[ev.len() - 1] - p.degree as f64).abs() < 1e-9);
        }
    }
}
