//! Kleitman–Winston containers.
//!
//! Every independent set `I` with `|I| > ℓ` is encoded by an ordered
//! fingerprint `L = [x_1..x_ℓ] ⊆ I` and a container `P(L) ⊇ I \ L` that is
//! computable from `L` alone. Step `i` orders `X_{i-1}` by repeatedly taking a
//! vertex of maximum remaining degree (ties to the smallest index), lets `x_i`
//! be the first ordered vertex lying in `I`, drops everything up to and
//! including `x_i`, and then either keeps the rest (`sparse`, when `x_i` has
//! fewer than `2γ|S|e(G)/N^2` neighbours left) or also drops `N(x_i)`
//! (`shrink`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::bitset::VertexSet;
use crate::combinatorics::binomial_big;
use crate::error::{param, Error, Result};
use crate::graph::ExplicitGraph;
use crate::spectral::SupersatParams;
use crate::Rational;
use num_bigint::BigUint;

#[derive(Clone, Debug, PartialEq)]
pub struct ContainerConfig {
    pub gamma: Rational,
    pub ell: usize,
    pub t: usize,
}

impl ContainerConfig {
    pub fn new(gamma: Rational, ell: usize, t: usize) -> Result<Self> {
        if gamma <= Rational::zero() {
            return param(format!("gamma must be positive, got {gamma}"));
        }
        if ell == 0 || ell >= t {
            return param(format!("need 0 < ell < t, got ell={ell} t={t}"));
        }
        Ok(Self { gamma, ell, t })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Shrink,
    Sparse,
}

impl Branch {
    fn token(self) -> &'static str {
        match self {
            Branch::Shrink => "s",
            Branch::Sparse => "k",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainerCertificate {
    pub fingerprint: Vec<usize>,
    /// Sorted vertex indices of `P(L)`.
    pub container: Vec<usize>,
    /// `|X_1| .. |X_ℓ|`
    pub chain_sizes: Vec<usize>,
    pub branch: Vec<Branch>,
    pub nu: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityFamily {
    pub members: Vec<VertexSet>,
    pub lambda: Rational,
    pub epsilon: Rational,
    pub delta: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityTag {
    /// `|P| <= (1-δ)λN`
    Small,
    /// `|P \ B_index| <= ελN`
    NearB { index: usize, residual: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityCertificate {
    pub certificate: ContainerCertificate,
    pub tag: StabilityTag,
}

/// Repeated maximum-degree extraction from `x`, ties to the smallest index.
pub fn max_ordering(g: &ExplicitGraph, x: &VertexSet) -> Vec<usize> {
    let members = x.to_vec();
    let mut deg: Vec<usize> = members.iter().map(|&v| g.degree_into(v, x)).collect();
    let mut alive = vec![true; members.len()];
    let pos: std::collections::HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut order = Vec::with_capacity(members.len());
    for _ in 0..members.len() {
        let mut best = usize::MAX;
        for i in 0..members.len() {
            if alive[i] && (best == usize::MAX || deg[i] > deg[best]) {
                best = i;
            }
        }
        alive[best] = false;
        let v = members[best];
        order.push(v);
        for w in g.neighbors(v).iter() {
            if let Some(&j) = pos.get(&w) {
                if alive[j] {
                    deg[j] -= 1;
                }
            }
        }
    }
    order
}

struct Chain {
    sets: Vec<VertexSet>,
    branch: Vec<Branch>,
}

fn step(g: &ExplicitGraph, prev: &VertexSet, order: &[usize], j: usize, gamma: &Rational) -> (VertexSet, Branch) {
    let mut s = prev.clone();
    for &v in &order[..=j] {
        s.remove(v);
    }
    let x = order[j];
    let e = g.edge_count();
    let n = g.vertex_count();
    let sparse = e == 0 || {
        let d = BigInt::from(g.degree_into(x, &s)) * BigInt::from(n) * BigInt::from(n);
        let rhs = gamma * Rational::from_integer(BigInt::from(2 * s.len()) * BigInt::from(e));
        Rational::from_integer(d) < rhs
    };
    if sparse {
        (s, Branch::Sparse)
    } else {
        s.difference_with(g.neighbors(x));
        (s, Branch::Shrink)
    }
}

fn run(g: &ExplicitGraph, cfg: &ContainerConfig, mut pick: impl FnMut(usize, &[usize]) -> Result<usize>) -> Result<(Vec<usize>, Chain)> {
    let mut x = g.full_set();
    let mut chain = Chain { sets: Vec::new(), branch: Vec::new() };
    let mut fingerprint = Vec::with_capacity(cfg.ell);
    for i in 1..=cfg.ell {
        let order = max_ordering(g, &x);
        let j = pick(i, &order)?;
        fingerprint.push(order[j]);
        let (next, b) = step(g, &x, &order, j, &cfg.gamma);
        chain.sets.push(next.clone());
        chain.branch.push(b);
        x = next;
    }
    Ok((fingerprint, chain))
}

fn certificate(fingerprint: Vec<usize>, chain: &Chain, container: &VertexSet) -> ContainerCertificate {
    ContainerCertificate {
        fingerprint,
        container: container.to_vec(),
        chain_sizes: chain.sets.iter().map(VertexSet::len).collect(),
        branch: chain.branch.clone(),
        nu: None,
    }
}

fn check_independent(g: &ExplicitGraph, independent: &[usize], cfg: &ContainerConfig) -> Result<VertexSet> {
    if independent.iter().any(|&v| v >= g.vertex_count()) {
        return param("independent set has a vertex outside the graph");
    }
    if !g.is_independent(independent) {
        return param("the given set is not independent");
    }
    let set = VertexSet::from_indices(g.vertex_count(), independent.iter().copied());
    if set.len() < cfg.t {
        return param(format!("|I| = {} is below t = {}", set.len(), cfg.t));
    }
    Ok(set)
}

fn fingerprint_chain(g: &ExplicitGraph, set: &VertexSet, cfg: &ContainerConfig) -> Result<(Vec<usize>, Chain)> {
    run(g, cfg, |_, order| {
        Ok(order.iter().position(|&v| set.contains(v)).expect("I minus the fingerprint stays inside X"))
    })
}

fn replay_chain(g: &ExplicitGraph, fingerprint: &[usize], cfg: &ContainerConfig) -> Result<Chain> {
    if fingerprint.len() != cfg.ell {
        return param(format!("fingerprint has {} vertices, ell = {}", fingerprint.len(), cfg.ell));
    }
    let (_, chain) = run(g, cfg, |i, order| {
        let vertex = fingerprint[i - 1];
        order
            .iter()
            .position(|&v| v == vertex)
            .ok_or(Error::InconsistentFingerprint { step: i - 1, vertex })
    })?;
    Ok(chain)
}

/// Fingerprint of `independent` with container `X_ℓ`.
pub fn fingerprint(g: &ExplicitGraph, independent: &[usize], cfg: &ContainerConfig) -> Result<ContainerCertificate> {
    let set = check_independent(g, independent, cfg)?;
    let (l, chain) = fingerprint_chain(g, &set, cfg)?;
    let last = chain.sets.last().expect("ell >= 1").clone();
    Ok(certificate(l, &chain, &last))
}

/// `P(L)` from the fingerprint alone.
pub fn reconstruct(g: &ExplicitGraph, fingerprint: &[usize], cfg: &ContainerConfig) -> Result<VertexSet> {
    Ok(replay_chain(g, fingerprint, cfg)?.sets.pop().expect("ell >= 1"))
}

/// `max((1 - γ·d/N)^ℓ, λ)` with average degree `d = 2e(G)/N`; the base is
/// clamped at zero.
pub fn container_bound_nu(vertices: u128, degree: &Rational, cfg: &ContainerConfig, supersat: &SupersatParams) -> Rational {
    let n = Rational::from_integer(BigInt::from(vertices));
    let mut base = Rational::from_integer(1.into()) - &cfg.gamma * degree / n;
    if base < Rational::zero() {
        base = Rational::zero();
    }
    let shrink = num_traits::pow(base, cfg.ell);
    if shrink > supersat.lambda {
        shrink
    } else {
        supersat.lambda.clone()
    }
}

/// `C(N,ℓ)·C(⌊νN⌋, t-ℓ)`
pub fn count_independent_sets_bound(vertices: u64, cfg: &ContainerConfig, nu: &Rational) -> BigUint {
    let top = (nu * Rational::from_integer(BigInt::from(vertices))).floor().to_integer();
    let top = top.to_u64().unwrap_or(0);
    binomial_big(vertices, cfg.ell as u64) * binomial_big(top, (cfg.t - cfg.ell) as u64)
}

/// `⌈ln(1/((1-δ)λ)) · N^2 / (2δ e(G))⌉`
pub fn canonical_stability_ell(lambda: f64, delta: f64, vertices: f64, edges: f64) -> Result<usize> {
    if !(lambda > 0.0 && lambda <= 1.0 && delta > 0.0 && delta < 1.0 && edges > 0.0) {
        return param(format!("need lambda in (0,1], delta in (0,1), e > 0; got {lambda}, {delta}, {edges}"));
    }
    let ell = (1.0 / ((1.0 - delta) * lambda)).ln() * vertices * vertices / (2.0 * delta * edges);
    Ok(ell.ceil().max(1.0) as usize)
}

fn is_dense_enough(g: &ExplicitGraph, x: &VertexSet, gamma: &Rational) -> bool {
    let n = BigInt::from(g.vertex_count());
    let lhs = Rational::from_integer(BigInt::from(g.edges_within(x)) * &n * &n);
    let len = BigInt::from(x.len());
    lhs >= gamma * Rational::from_integer(&len * &len * BigInt::from(g.edge_count()))
}

/// Container truncated at the first `X_j` with `e(X_j) < δ|X_j|^2 e(G)/N^2`,
/// tagged near a member of the family or, failing that, small.
pub fn stability_container(
    g: &ExplicitGraph,
    independent: &[usize],
    stab: &StabilityFamily,
    cfg: &ContainerConfig,
) -> Result<StabilityCertificate> {
    if cfg.gamma != stab.delta {
        return param(format!("container gamma {} must equal the stability delta {}", cfg.gamma, stab.delta));
    }
    if stab.members.is_empty() {
        return param("stability family is empty");
    }
    let set = check_independent(g, independent, cfg)?;
    let (l, chain) = fingerprint_chain(g, &set, cfg)?;
    let p = chain
        .sets
        .iter()
        .find(|x| !is_dense_enough(g, x, &stab.delta))
        .unwrap_or_else(|| chain.sets.last().expect("ell >= 1"))
        .clone();
    let cert = certificate(l, &chain, &p);
    let n = Rational::from_integer(BigInt::from(g.vertex_count()));
    let size = Rational::from_integer(BigInt::from(p.len()));
    let one = Rational::from_integer(1.into());
    let (index, residual) = stab
        .members
        .iter()
        .enumerate()
        .map(|(i, b)| (i, p.difference(b).len()))
        .min_by_key(|&(i, r)| (r, i))
        .expect("non-empty family");
    if Rational::from_integer(BigInt::from(residual)) <= &stab.epsilon * &stab.lambda * &n {
        Ok(StabilityCertificate { certificate: cert, tag: StabilityTag::NearB { index, residual } })
    } else if size <= (&one - &stab.delta) * &stab.lambda * &n {
        Ok(StabilityCertificate { certificate: cert, tag: StabilityTag::Small })
    } else {
        Err(Error::StabilityViolation { container_size: p.len(), best_index: index, best_residual: residual })
    }
}

/// The `n` stars of a Kneser graph (or induced subgraph), as vertex sets;
/// member `i-1` holds the vertices whose subset contains `i`.
pub fn kneser_star_family(g: &ExplicitGraph, epsilon: Rational, delta: Rational) -> Result<StabilityFamily> {
    let Some((n, k)) = g.kneser_shape() else {
        return param("graph carries no Kneser labels");
    };
    let members = (1..=n)
        .map(|i| {
            VertexSet::from_indices(
                g.vertex_count(),
                (0..g.vertex_count()).filter(|&v| g.subset(v).is_some_and(|s| s.contains(i))),
            )
        })
        .collect();
    Ok(StabilityFamily {
        members,
        lambda: Rational::new(BigInt::from(k), BigInt::from(n)),
        epsilon,
        delta,
    })
}

/// Violations of the fingerprint lemma found in `cert` for `independent`;
/// empty when the certificate is sound.
pub fn audit_fingerprint(
    g: &ExplicitGraph,
    independent: &[usize],
    cfg: &ContainerConfig,
    cert: &ContainerCertificate,
    supersat: Option<&SupersatParams>,
) -> Vec<String> {
    let mut problems = Vec::new();
    let chain = match replay_chain(g, &cert.fingerprint, cfg) {
        Ok(c) => c,
        Err(e) => return vec![e.to_string()],
    };
    let m = g.vertex_count();
    let i_set = VertexSet::from_indices(m, independent.iter().copied());
    if cert.fingerprint.iter().any(|&x| !i_set.contains(x)) {
        problems.push("fingerprint leaves I".into());
    }
    for (i, x) in chain.sets.iter().enumerate() {
        let taken = &cert.fingerprint[..=i];
        if taken.iter().any(|&v| x.contains(v)) {
            problems.push(format!("X_{} contains a fingerprint vertex", i + 1));
        }
        let mut rest = i_set.clone();
        for &v in taken {
            rest.remove(v);
        }
        if !rest.is_subset(x) {
            problems.push(format!("I \\ {{x_1..x_{}}} not inside X_{}", i + 1, i + 1));
        }
    }
    let n2 = BigInt::from(m) * BigInt::from(m);
    let e = BigInt::from(g.edge_count());
    let factor = Rational::from_integer(n2.clone()) - &cfg.gamma * Rational::from_integer(BigInt::from(2) * &e);
    let mut prev = m;
    let all_shrink = chain.sets.iter().all(|x| {
        let ok = Rational::from_integer(BigInt::from(x.len()) * &n2) <= &factor * Rational::from_integer(BigInt::from(prev));
        prev = x.len();
        ok
    });
    let some_sparse = chain.sets.iter().any(|x| {
        let lhs = Rational::from_integer(BigInt::from(g.edges_within(x)) * &n2);
        let len = BigInt::from(x.len());
        lhs < &cfg.gamma * Rational::from_integer(&len * &len * &e)
    });
    if !all_shrink && !some_sparse {
        problems.push("neither every step shrank nor some X_i is sparse".into());
    }
    let last = chain.sets.last().expect("ell >= 1");
    if last.to_vec() != cert.container {
        problems.push("container differs from replay".into());
    }
    let sizes: Vec<usize> = chain.sets.iter().map(VertexSet::len).collect();
    if sizes != cert.chain_sizes || chain.branch != cert.branch {
        problems.push("chain sizes or branch trace differ from replay".into());
    }
    if let Some(ss) = supersat {
        let nu = container_bound_nu(m as u128, &Rational::new(BigInt::from(2) * &e, BigInt::from(m.max(1))), cfg, ss);
        if Rational::from_integer(BigInt::from(last.len())) > nu * Rational::from_integer(BigInt::from(m)) {
            problems.push("container exceeds nu·N".into());
        }
    }
    problems
}

fn join(xs: impl Iterator<Item = String>) -> String {
    xs.collect::<Vec<_>>().join(" ")
}

impl fmt::Display for ContainerCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |label: &str, body: String| if body.is_empty() { format!("{label}:") } else { format!("{label}: {body}") };
        writeln!(f, "{}", line("L", join(self.fingerprint.iter().map(|v| v.to_string()))))?;
        writeln!(f, "{}", line("P", join(self.container.iter().map(|v| v.to_string()))))?;
        writeln!(f, "{}", line("chain", join(self.chain_sizes.iter().map(|v| v.to_string()))))?;
        writeln!(f, "{}", line("branch", join(self.branch.iter().map(|b| b.token().to_string()))))?;
        match &self.nu {
            Some(nu) => writeln!(f, "nu: {}/{}", nu.numer(), nu.denom()),
            None => writeln!(f, "nu: -"),
        }
    }
}

impl FromStr for ContainerCertificate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut field = |label: &str| -> Result<(usize, String)> {
            let (i, l) = lines.next().ok_or(Error::Parse { line: 0, message: format!("missing '{label}:' line") })?;
            let body = l
                .trim()
                .strip_prefix(label)
                .and_then(|r| r.strip_prefix(':'))
                .ok_or(Error::Parse { line: i + 1, message: format!("expected '{label}:'") })?;
            Ok((i + 1, body.trim().to_string()))
        };
        let numbers = |(line, body): (usize, String)| -> Result<Vec<usize>> {
            body.split_whitespace()
                .map(|w| w.parse().map_err(|_| Error::Parse { line, message: format!("bad integer '{w}'") }))
                .collect()
        };
        let fingerprint = numbers(field("L")?)?;
        let container = numbers(field("P")?)?;
        let chain_sizes = numbers(field("chain")?)?;
        let (bl, body) = field("branch")?;
        let branch = body
            .split_whitespace()
            .map(|w| match w {
                "s" => Ok(Branch::Shrink),
                "k" => Ok(Branch::Sparse),
                _ => Err(Error::Parse { line: bl, message: format!("bad branch token '{w}'") }),
            })
            .collect::<Result<Vec<_>>>()?;
        let (nl, body) = field("nu")?;
        let nu = if body == "-" {
            None
        } else {
            let bad = || Error::Parse { line: nl, message: format!("bad rational '{body}'") };
            let (p, q) = body.split_once('/').ok_or_else(bad)?;
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Some(Rational::new(p, q))
        };
        if let Some((i, _)) = lines.next() {
            return Err(Error::Parse { line: i + 1, message: "trailing content".into() });
        }
        if branch.len() != fingerprint.len() || chain_sizes.len() != fingerprint.len() {
            return Err(Error::Parse { line: bl, message: "L, chain and branch lengths differ".into() });
        }
        Ok(Self { fingerprint, container, chain_sizes, branch, nu })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indep::{independent_set_counts, maximal_independent_sets};
    use crate::kneser::{kneser_params, materialize};
    use crate::ratio;
    use crate::spectral::{kneser_supersat_params, min_edges_by_size};

    fn petersen() -> ExplicitGraph {
        materialize(&kneser_params(5, 2).unwrap()).unwrap()
    }

    fn cfg(a: i64, b: i64, ell: usize, t: usize) -> ContainerConfig {
        ContainerConfig::new(ratio(a, b), ell, t).unwrap()
    }

    #[test]
    fn ordering_examples() {
        let path = ExplicitGraph::path(3);
        assert_eq!(max_ordering(&path, &path.full_set())[0], 1);
        let empty = ExplicitGraph::empty(5);
        assert_eq!(max_ordering(&empty, &empty.full_set()), vec![0, 1, 2, 3, 4]);
        let pet = petersen();
        let order = max_ordering(&pet, &pet.full_set());
        assert_eq!(order[0], 0);
        assert_eq!(order.len(), 10);
    }

    #[test]
    fn ordering_dominates_later_degrees() {
        for seed in 0..30 {
            let g = ExplicitGraph::gnm(9, 14, seed).unwrap();
            let order = max_ordering(&g, &g.full_set());
            for i in 0..order.len() {
                let rest = VertexSet::from_indices(9, order[i + 1..].iter().copied());
                let di = g.degree_into(order[i], &rest);
                for j in i + 1..order.len() {
                    let mut later = VertexSet::from_indices(9, order[i..].iter().copied());
                    later.remove(order[j]);
                    assert!(g.degree_into(order[j], &later) <= di);
                }
            }
        }
    }

    #[test]
    fn edgeless_fingerprint() {
        let g = ExplicitGraph::empty(6);
        let c = fingerprint(&g, &[2, 4], &cfg(1, 2, 1, 2)).unwrap();
        assert_eq!(c.fingerprint, vec![2]);
        assert_eq!(c.container, vec![3, 4, 5]);
        assert_eq!(c.branch, vec![Branch::Sparse]);
        assert_eq!(reconstruct(&g, &[3], &cfg(1, 2, 1, 2)).unwrap().to_vec(), vec![4, 5]);
    }

    #[test]
    fn petersen_star_fingerprint() {
        let g = petersen();
        let star: Vec<usize> = (0..10).filter(|&v| g.subset(v).unwrap().contains(1)).collect();
        let c = cfg(1, 5, 1, 4);
        let cert = fingerprint(&g, &star, &c).unwrap();
        assert!(!cert.container.contains(&cert.fingerprint[0]));
        for v in &star {
            assert!(*v == cert.fingerprint[0] || cert.container.contains(v));
        }
        assert!(audit_fingerprint(&g, &star, &c, &cert, None).is_empty());
    }

    #[test]
    fn cycle_fingerprint() {
        let g = ExplicitGraph::cycle(4);
        let c = cfg(1, 2, 1, 2);
        let cert = fingerprint(&g, &[0, 2], &c).unwrap();
        assert!([0, 2].contains(&cert.fingerprint[0]));
        assert!(audit_fingerprint(&g, &[0, 2], &c, &cert, None).is_empty());
    }

    #[test]
    fn petersen_reconstruction() {
        let g = petersen();
        let c = cfg(1, 5, 1, 4);
        let maxima: Vec<_> = maximal_independent_sets(&g).into_iter().filter(|s| s.len() == 4).collect();
        assert_eq!(maxima.len(), 5);
        for i in &maxima {
            let cert = fingerprint(&g, i, &c).unwrap();
            assert_eq!(reconstruct(&g, &cert.fingerprint, &c).unwrap().to_vec(), cert.container);
        }
    }

    #[test]
    fn inconsistent_fingerprint_errors() {
        let g = ExplicitGraph::path(4);
        let c = cfg(1, 2, 2, 3);
        // vertex 1 (centre, highest degree) is removed together with its predecessor
        let err = reconstruct(&g, &[2, 1], &c).unwrap_err();
        assert!(matches!(err, Error::InconsistentFingerprint { step: 1, vertex: 1 }));
        assert!(reconstruct(&g, &[9, 0], &c).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = ExplicitGraph::path(4);
        assert!(fingerprint(&g, &[0, 1], &cfg(1, 2, 1, 2)).is_err());
        assert!(fingerprint(&g, &[0, 2], &cfg(1, 2, 1, 3)).is_err());
        assert!(ContainerConfig::new(ratio(1, 2), 2, 2).is_err());
        assert!(ContainerConfig::new(ratio(1, 2), 0, 2).is_err());
        assert!(ContainerConfig::new(ratio(0, 2), 1, 2).is_err());
    }

    #[test]
    fn nu_examples() {
        let ss = SupersatParams::new(ratio(3, 8), ratio(1, 3)).unwrap();
        let c = cfg(1, 3, 20, 21);
        let nu = container_bound_nu(220, &ratio(84, 1), &c, &ss);
        assert_eq!(nu, ratio(3, 8));
        let shrink = (1.0f64 - 84.0 / 660.0).powi(20);
        assert!((shrink - 0.0662).abs() < 1e-3);

        let big = cfg(2, 1, 3, 4);
        assert_eq!(container_bound_nu(10, &ratio(6, 1), &big, &ss), ratio(3, 8));

        let zero = ContainerConfig { gamma: ratio(1, 3), ell: 0, t: 5 };
        assert_eq!(container_bound_nu(220, &ratio(84, 1), &zero, &ss), ratio(1, 1));

        let one_step = cfg(1, 5, 1, 4);
        let lo = SupersatParams::new(ratio(1, 10), ratio(1, 5)).unwrap();
        assert_eq!(container_bound_nu(10, &ratio(3, 1), &one_step, &lo), ratio(47, 50));
    }

    #[test]
    fn count_examples() {
        let c = cfg(1, 5, 1, 4);
        assert_eq!(count_independent_sets_bound(10, &c, &ratio(1, 2)), BigUint::from(100u32));
        assert_eq!(independent_set_counts(&petersen())[4], 5);
        assert_eq!(count_independent_sets_bound(10, &c, &ratio(1, 5)), BigUint::zero());
        let last = cfg(1, 5, 3, 4);
        assert_eq!(count_independent_sets_bound(10, &last, &ratio(7, 10)), BigUint::from(120u32 * 7));
        assert_eq!(count_independent_sets_bound(10, &last, &ratio(3, 4)), BigUint::from(120u32 * 7));
    }

    #[test]
    fn canonical_ell() {
        let ell = canonical_stability_ell(0.375, 0.5, 56.0, 280.0).unwrap();
        let want = ((1.0f64 / (0.5 * 0.375)).ln() * 3136.0 / 280.0).ceil() as usize;
        assert_eq!(ell, want);
        assert_eq!(ell, 19);
        assert!(canonical_stability_ell(0.375, 0.0, 56.0, 280.0).is_err());
    }

    #[test]
    fn certificate_text_roundtrip() {
        let g = petersen();
        let c = cfg(1, 5, 2, 4);
        let mut cert = fingerprint(&g, &[0, 1, 3, 6], &c).unwrap();
        cert.nu = Some(ratio(47, 50));
        let text = cert.to_string();
        assert!(text.starts_with("L: "));
        assert!(text.contains("\nnu: 47/50\n"));
        assert_eq!(text.parse::<ContainerCertificate>().unwrap(), cert);
        cert.nu = None;
        assert_eq!(cert.to_string().parse::<ContainerCertificate>().unwrap(), cert);
        assert!("L: 1\nP:\nchain: 0\nbranch: x\nnu: -\n".parse::<ContainerCertificate>().is_err());
        assert!("L: 1\nP:\nchain: 0\nbranch: s\nnu: 1/0\n".parse::<ContainerCertificate>().is_err());
        assert!("P: 1\n".parse::<ContainerCertificate>().is_err());
    }

    #[test]
    fn petersen_kneser_certificate_bounds_counts() {
        let g = petersen();
        let ss = kneser_supersat_params(5, 2, ratio(1, 4)).unwrap();
        let counts = independent_set_counts(&g);
        for ell in 1..=3usize {
            for t in ell + 1..=4 {
                let c = ContainerConfig::new(ss.gamma.clone(), ell, t).unwrap();
                let nu = container_bound_nu(10, &ratio(3, 1), &c, &ss);
                assert!(BigUint::from(counts[t]) <= count_independent_sets_bound(10, &c, &nu));
                for i in maximal_independent_sets(&g).into_iter().filter(|s| s.len() >= t) {
                    let cert = fingerprint(&g, &i, &c).unwrap();
                    assert!(audit_fingerprint(&g, &i, &c, &cert, Some(&ss)).is_empty());
                }
            }
        }
    }

    #[test]
    fn random_corpus_bullets() {
        for seed in 0..100u64 {
            let m = 5 + (seed % 4) as usize;
            let e = (seed as usize * 7) % (m * (m - 1) / 2 + 1);
            let g = ExplicitGraph::gnm(m, e, seed).unwrap();
            let profile = min_edges_by_size(&g).unwrap();
            for (a, b) in [(1, 4), (1, 2)] {
                let gamma = ratio(a, b);
                // smallest λ for which the graph is (λ,γ)-supersaturated
                let s0 = (1..=m)
                    .rev()
                    .take_while(|&s| crate::spectral::meets_supersaturation(profile.min_edges[s], s, m, g.edge_count(), &gamma))
                    .last()
                    .unwrap_or(m);
                let ss = SupersatParams::new(ratio(s0 as i64, m as i64), gamma.clone()).unwrap();
                let counts = independent_set_counts(&g);
                for i in maximal_independent_sets(&g) {
                    for ell in 1..=3usize.min(i.len().saturating_sub(1)) {
                        let c = ContainerConfig::new(gamma.clone(), ell, i.len()).unwrap();
                        let cert = fingerprint(&g, &i, &c).unwrap();
                        let bad = audit_fingerprint(&g, &i, &c, &cert, Some(&ss));
                        assert!(bad.is_empty(), "seed {seed}: {bad:?}");
                        assert_eq!(reconstruct(&g, &cert.fingerprint, &c).unwrap().to_vec(), cert.container);
                        let nu = container_bound_nu(m as u128, &ratio(2 * g.edge_count() as i64, m as i64), &c, &ss);
                        assert!(BigUint::from(counts[i.len()]) <= count_independent_sets_bound(m as u64, &c, &nu));
                    }
                }
            }
        }
    }

    #[test]
    fn kneser_8_3_star_is_near_its_star() {
        let g = materialize(&kneser_params(8, 3).unwrap()).unwrap();
        let star: Vec<usize> = (0..56).filter(|&v| g.subset(v).unwrap().contains(1)).collect();
        let fam = kneser_star_family(&g, ratio(1, 2), ratio(1, 2)).unwrap();
        let ell = canonical_stability_ell(0.375, 0.5, 56.0, 280.0).unwrap();
        let c = ContainerConfig::new(ratio(1, 2), ell, 20.max(ell + 1)).unwrap();
        let out = stability_container(&g, &star, &fam, &c).unwrap();
        match out.tag {
            StabilityTag::NearB { index, residual } => {
                assert_eq!(index, 0);
                assert!(residual * 2 <= 21);
            }
            StabilityTag::Small => panic!("star container tagged small"),
        }
        let p = VertexSet::from_indices(56, out.certificate.container.iter().copied());
        assert!(star.iter().filter(|v| !out.certificate.fingerprint.contains(v)).all(|&v| p.contains(v)));
    }

    #[test]
    fn edgeless_stability_is_near_whole_set() {
        let g = ExplicitGraph::empty(6);
        let fam = StabilityFamily {
            members: vec![g.full_set()],
            lambda: ratio(1, 1),
            epsilon: ratio(1, 10),
            delta: ratio(1, 10),
        };
        let out = stability_container(&g, &[0, 1, 2, 3, 4, 5], &fam, &cfg(1, 10, 1, 6)).unwrap();
        assert_eq!(out.tag, StabilityTag::NearB { index: 0, residual: 0 });
        let mismatched = stability_container(&g, &[0, 1], &fam, &cfg(1, 5, 1, 2));
        assert!(mismatched.is_err());
    }

    #[test]
    fn stability_violation_is_reported() {
        let g = ExplicitGraph::empty(6);
        let fam = StabilityFamily {
            members: vec![VertexSet::from_indices(6, [0])],
            lambda: ratio(1, 1),
            epsilon: ratio(1, 10),
            delta: ratio(1, 4),
        };
        let err = stability_container(&g, &[0, 1, 2, 3, 4, 5], &fam, &cfg(1, 4, 1, 6)).unwrap_err();
        assert!(matches!(err, Error::StabilityViolation { container_size: 5, best_index: 0, best_residual: 5 }));
        let lenient = StabilityFamily { delta: ratio(1, 10), ..fam };
        let small = stability_container(&g, &[0, 1, 2, 3, 4, 5], &lenient, &cfg(1, 10, 1, 6)).unwrap();
        assert_eq!(small.tag, StabilityTag::Small);
    }
}
