//! The Kneser graph `K(n,k)`: k-subsets of `[n]`, adjacent when disjoint.
//!
//! The graph stays implicit. Adjacency is a single AND of two bit patterns,
//! and only [`materialize`] ever builds the full edge set.

use crate::combinatorics::{binomial, choose, disjoint, rank_bits, subsets_colex, subsets_of, KSubset, MAX_N};
use crate::error::{param, Error, Result};
use crate::graph::ExplicitGraph;

/// Largest Kneser graph [`materialize`] will build.
pub const MATERIALIZE_LIMIT: u128 = 10_000;

/// Exact parameters of `K(n,k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KneserParams {
    pub n: u32,
    pub k: u32,
    /// `N = C(n,k)`
    pub vertices: u128,
    /// `D = C(n-k,k)`
    pub degree: u128,
    /// `-C(n-k-1, k-1)`
    pub lambda_min: i128,
    /// `N·D/2`
    pub edge_count: u128,
}

pub fn kneser_params(n: u32, k: u32) -> Result<KneserParams> {
    if n > MAX_N {
        return param(format!("n={n} exceeds {MAX_N}"));
    }
    if k < 2 || 2 * k > n {
        return param(format!("need 2 <= k <= n/2, got n={n} k={k}"));
    }
    let vertices = binomial(n, k)?;
    let degree = binomial(n - k, k)?;
    let lambda_min = -(binomial(n - k - 1, k - 1)? as i128);
    Ok(KneserParams {
        n,
        k,
        vertices,
        degree,
        lambda_min,
        edge_count: vertices * degree / 2,
    })
}

impl KneserParams {
    /// `C(n-1,k-1) = (k/n)·N`, the size of a star.
    pub fn star_size(&self) -> u128 {
        choose(self.n - 1, self.k - 1) as u128
    }

    /// All k-subsets in colex order; index = colex rank.
    pub fn vertices_colex(&self) -> impl Iterator<Item = KSubset> {
        let (n, k) = (self.n, self.k);
        subsets_colex(n, k).map(move |b| KSubset::from_bits_unchecked(n, k, b))
    }
}

pub fn is_edge(a: &KSubset, b: &KSubset) -> Result<bool> {
    disjoint(a, b)
}

/// The `C(n-k,k)` subsets disjoint from `v`, in colex order.
pub fn neighbors(v: &KSubset) -> impl Iterator<Item = KSubset> {
    let (n, k) = (v.ground_n(), v.size_k());
    let universe = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    subsets_of(universe & !v.bits(), k).map(move |b| KSubset::from_bits_unchecked(n, k, b))
}

/// The star `F_i`: every k-subset containing `i`, in colex order.
pub fn principal_family(i: u32, n: u32, k: u32) -> Result<Vec<KSubset>> {
    if n > MAX_N || k == 0 || k > n {
        return param(format!("invalid (n,k)=({n},{k})"));
    }
    if i == 0 || i > n {
        return param(format!("element {i} outside [1..{n}]"));
    }
    let universe = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let centre = 1u64 << (i - 1);
    Ok(subsets_of(universe & !centre, k - 1)
        .map(|b| KSubset::from_bits_unchecked(n, k, b | centre))
        .collect())
}

/// Full `K(n,k)` with vertex index = colex rank.
pub fn materialize(params: &KneserParams) -> Result<ExplicitGraph> {
    if params.vertices > MATERIALIZE_LIMIT {
        return Err(Error::Resource(format!(
            "K({},{}) has {} vertices, above the materialization limit {}",
            params.n, params.k, params.vertices, MATERIALIZE_LIMIT
        )));
    }
    let m = params.vertices as usize;
    let mut g = ExplicitGraph::empty(m);
    for (u, s) in params.vertices_colex().enumerate() {
        for t in neighbors(&s) {
            let v = rank_bits(t.bits()) as usize;
            if v > u {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g.with_kneser_labels(params.n, params.k, (0..m as u64).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::colex_rank;

    #[test]
    fn params_examples() {
        let p = kneser_params(5, 2).unwrap();
        assert_eq!((p.vertices, p.degree, p.lambda_min), (10, 3, -2));
        let p = kneser_params(12, 3).unwrap();
        assert_eq!((p.vertices, p.degree, p.lambda_min), (220, 84, -28));
        // -(k/(n-k))·D = -(3/9)·84
        assert_eq!(p.lambda_min * 9, -3 * 84);
        for k in 2..=10 {
            let p = kneser_params(2 * k, k).unwrap();
            assert_eq!((p.degree, p.lambda_min), (1, -1));
        }
        assert!(kneser_params(5, 3).is_err());
        assert!(kneser_params(5, 1).is_err());
        assert!(kneser_params(65, 3).is_err());
    }

    #[test]
    fn params_identities_hold_everywhere() {
        for n in 4..=64 {
            for k in 2..=n / 2 {
                let p = kneser_params(n, k).unwrap();
                assert_eq!(p.lambda_min * (n - k) as i128, -((k as u128 * p.degree) as i128));
                assert_eq!(p.vertices * p.degree % 2, 0);
                assert_eq!(p.star_size() * n as u128, k as u128 * p.vertices);
            }
        }
    }

    #[test]
    fn neighbor_examples() {
        let v = KSubset::new(5, &[1, 2]).unwrap();
        let got: Vec<String> = neighbors(&v).map(|s| s.to_string()).collect();
        assert_eq!(got, vec!["{3,4}", "{3,5}", "{4,5}"]);

        let v = KSubset::new(12, &[2, 7, 9]).unwrap();
        assert_eq!(neighbors(&v).count(), 84);
        assert!(neighbors(&v).all(|w| is_edge(&v, &w).unwrap()));

        let v = KSubset::new(8, &[1, 3, 5, 6]).unwrap();
        let only: Vec<_> = neighbors(&v).collect();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].bits(), !v.bits() & 0xff);
    }

    #[test]
    fn principal_family_examples() {
        let f = principal_family(1, 5, 2).unwrap();
        let got: Vec<String> = f.iter().map(|s| s.to_string()).collect();
        assert_eq!(got, vec!["{1,2}", "{1,3}", "{1,4}", "{1,5}"]);
        let f = principal_family(7, 12, 3).unwrap();
        assert_eq!(f.len(), 55);
        assert_eq!(f.len() as u128 * 12, 3 * 220);
        for a in &f {
            assert!(a.contains(7));
            for b in &f {
                assert!(!disjoint(a, b).unwrap());
            }
        }
        assert!(principal_family(0, 5, 2).is_err());
        assert!(principal_family(6, 5, 2).is_err());
    }

    #[test]
    fn materialize_examples() {
        let g = materialize(&kneser_params(5, 2).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));
        let g = materialize(&kneser_params(12, 3).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (220, 9240));
        let g = materialize(&kneser_params(6, 3).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (20, 10));
        assert!(matches!(
            materialize(&kneser_params(20, 5).unwrap()),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn materialized_graphs_are_regular() {
        for n in 4..=14 {
            for k in 2..=n / 2 {
                let p = kneser_params(n, k).unwrap();
                if p.vertices > MATERIALIZE_LIMIT {
                    continue;
                }
                let g = materialize(&p).unwrap();
                assert_eq!(g.regular_degree(), Some(p.degree as usize), "K({n},{k})");
                assert_eq!(g.edge_count() as u128, p.edge_count);
                for v in 0..g.vertex_count() {
                    assert_eq!(colex_rank(&g.subset(v).unwrap()), v as u64);
                }
            }
        }
    }
}
