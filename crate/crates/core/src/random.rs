//! Seeded vertex sampling `V_p`, induced random subgraphs `H = K(n,k)[V_p]`,
//! Chernoff tails, and the moment formulas for `e(H)` and triangles.
//!
//! Generator: ChaCha8 (`rand_chacha`), seeded through `seed_from_u64`; inclusion gaps are
//! drawn by inverting the geometric distribution.
//! Per-trial seeds are split from a master seed with the SplitMix64
//! finalizer (constants `0x9E3779B97F4A7C15`, `0xBF58476D1CE4E5B9`,
//! `0x94D049BB133111EB`), so a trial's sample depends only on
//! `(master_seed, stream)` and never on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, choose, unrank_bits};
use crate::error::{param, Result};
use crate::graph::ExplicitGraph;
use crate::kneser::kneser_params;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    pub n: u32,
    pub k: u32,
    pub p: f64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(n: u32, k: u32, p: f64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return param(format!("sampling probability must lie in (0,1], got {p}"));
        }
        binomial(n, k)?;
        Ok(Self { n, k, p, seed })
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master) ^ stream)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each of `0..count` independently with probability `p`, by geometric
/// skips: expected cost `O(p·count)`.
pub fn sample_indices<R: Rng>(count: u64, p: f64, rng: &mut R) -> Vec<u64> {
    if p >= 1.0 {
        return (0..count).collect();
    }
    if p <= 0.0 || count == 0 {
        return Vec::new();
    }
    let log_q = (-p).ln_1p();
    let mut out = Vec::with_capacity((p * count as f64 * 1.1) as usize + 4);
    let mut pos: u64 = 0;
    loop {
        // inversion: floor(ln U / ln(1-p)) failures before the next success
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / log_q).floor() as u64;
        pos = match pos.checked_add(gap) {
            Some(x) if x < count => x,
            _ => break,
        };
        out.push(pos);
        pos += 1;
    }
    out
}

/// Sorted colex ranks of `V_p ⊆ C([n],k)`.
pub fn sample_vertices(spec: &SampleSpec) -> Vec<u64> {
    let total = choose(spec.n, spec.k);
    sample_indices(total, spec.p, &mut rng_from_seed(spec.seed))
}

/// `K(n,k)` induced on the given colex ranks (kept in the given order).
pub fn induced_subgraph(sample: &[u64], n: u32, k: u32) -> Result<ExplicitGraph> {
    let total = binomial(n, k)?;
    if let Some(&bad) = sample.iter().find(|&&r| r as u128 >= total) {
        return param(format!("rank {bad} outside [0, {total})"));
    }
    let bits: Vec<u64> = sample.iter().map(|&r| unrank_bits(r, n, k)).collect();
    let mut g = ExplicitGraph::empty(sample.len());
    for (i, &a) in bits.iter().enumerate() {
        for (j, &b) in bits.iter().enumerate().skip(i + 1) {
            if a & b == 0 {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g.with_kneser_labels(n, k, sample.to_vec()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBoundQuery {
    pub m: u64,
    pub zeta: f64,
    pub s: f64,
}

impl TailBoundQuery {
    pub fn new(m: u64, zeta: f64, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&zeta) || !(s >= 0.0) {
            return param(format!("need 0 <= zeta <= 1 and s >= 0, got zeta={zeta} s={s}"));
        }
        Ok(Self { m, zeta, s })
    }
}

/// `P(Bin(m,ζ) >= mζ + s) <= exp(-s^2 / (2ζm + s/3))`
pub fn chernoff_upper(q: &TailBoundQuery) -> f64 {
    if q.s == 0.0 {
        return 1.0;
    }
    let denom = 2.0 * q.zeta * q.m as f64 + q.s / 3.0;
    (-(q.s * q.s) / denom).exp()
}

/// `P(Bin(m,ζ) <= mζ - s) <= exp(-s^2 / (2ζm))`; zero when `ζm = 0` and `s > 0`.
pub fn chernoff_lower(q: &TailBoundQuery) -> f64 {
    if q.s == 0.0 {
        return 1.0;
    }
    let denom = 2.0 * q.zeta * q.m as f64;
    if denom == 0.0 {
        return 0.0;
    }
    (-(q.s * q.s) / denom).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeMoments {
    /// `p^2 N D / 2`
    pub mean: f64,
    /// `2 p^3 N^2 D + p^2 N D`
    pub variance_upper: f64,
}

pub fn edge_count_moments(n: u32, k: u32, p: f64) -> Result<EdgeMoments> {
    let kp = kneser_params(n, k)?;
    let (nn, d) = (kp.vertices as f64, kp.degree as f64);
    Ok(EdgeMoments {
        mean: p * p * nn * d / 2.0,
        variance_upper: 2.0 * p.powi(3) * nn * nn * d + p * p * nn * d,
    })
}

/// `p^3 C(n,k) C(n-k,k) C(n-2k,k)`; zero when `n < 3k`.
pub fn expected_triangles_upper(n: u32, k: u32, p: f64) -> Result<f64> {
    let kp = kneser_params(n, k)?;
    if n < 3 * k {
        return Ok(0.0);
    }
    let third = choose(n - 2 * k, k) as f64;
    Ok(p.powi(3) * kp.vertices as f64 * kp.degree as f64 * third)
}
