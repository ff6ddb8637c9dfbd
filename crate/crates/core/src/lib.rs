//! Executable machinery for intersecting families in random hypergraphs.
//!
//! A family of k-subsets of `[n]` is intersecting exactly when it is an
//! independent set in the Kneser graph `K(n,k)`. This crate models the
//! Kneser graph implicitly, certifies spectral supersaturation, runs the
//! greedy container (fingerprint) algorithm, samples random induced
//! subgraphs, and measures the largest intersecting subfamily with an exact
//! branch-and-bound solver.

pub mod bitset;
pub mod combinatorics;
pub mod containers;
pub mod graph;
pub mod indep;
pub mod kneser;
pub mod random;
pub mod regimes;
pub mod spectral;
pub mod suites;
pub mod trial;

mod error;

pub use bitset::VertexSet;
pub use combinatorics::{binomial, colex_rank, colex_unrank, disjoint, KSubset};
pub use error::{Error, Result};
pub use graph::ExplicitGraph;
pub use kneser::KneserParams;

/// Exact rational used by every bound that is compared against integer counts.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
