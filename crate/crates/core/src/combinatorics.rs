//! Exact subset arithmetic on `[n]` for `n <= 64`.
//!
//! A [`KSubset`] is stored as a single `u64` bit pattern (element `i` is bit
//! `i-1`). Under that encoding colex order is plain numeric order of the
//! masks, which keeps ranking, unranking and enumeration cheap.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{param, Result};

/// Largest supported ground set.
pub const MAX_N: u32 = 64;

/// Exact binomial coefficient. `C(64,32)` fits comfortably in 128 bits.
pub type BinomialValue = u128;

fn pascal() -> &'static [[u64; 65]; 65] {
    static TABLE: OnceLock<Box<[[u64; 65]; 65]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; 65]; 65]);
        for n in 0..=64 {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            }
        }
        t
    })
}

/// `C(n,k)` with `n, k <= 64`, zero when `k > n`. Internal fast path.
#[inline]
pub(crate) fn choose(n: u32, k: u32) -> u64 {
    if k > n {
        0
    } else {
        pascal()[n as usize][k as usize]
    }
}

/// Exact `C(n,k)` for `0 <= k <= n <= 64`.
pub fn binomial(n: u32, k: u32) -> Result<BinomialValue> {
    if n > MAX_N {
        return param(format!("ground set n={n} exceeds {MAX_N}"));
    }
    if k > n {
        return param(format!("k={k} exceeds n={n}"));
    }
    Ok(choose(n, k) as u128)
}

/// `C(n,k)` over arbitrary-size integers; zero when `k > n`.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// A k-element subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSubset {
    bits: u64,
    n: u8,
    k: u8,
}

impl KSubset {
    /// Builds a subset from 1-based elements in any order.
    pub fn new(n: u32, elements: &[u32]) -> Result<Self> {
        if n > MAX_N {
            return param(format!("ground set n={n} exceeds {MAX_N}"));
        }
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return param(format!("element {e} outside [1..{n}]"));
            }
            let b = 1u64 << (e - 1);
            if bits & b != 0 {
                return param(format!("element {e} repeated"));
            }
            bits |= b;
        }
        Ok(Self {
            bits,
            n: n as u8,
            k: elements.len() as u8,
        })
    }

    /// Builds a subset from its bit pattern.
    pub fn from_bits(n: u32, bits: u64) -> Result<Self> {
        if n > MAX_N {
            return param(format!("ground set n={n} exceeds {MAX_N}"));
        }
        if n < 64 && bits >> n != 0 {
            return param(format!("bit pattern {bits:#x} has elements outside [1..{n}]"));
        }
        Ok(Self {
            bits,
            n: n as u8,
            k: bits.count_ones() as u8,
        })
    }

    pub(crate) fn from_bits_unchecked(n: u32, k: u32, bits: u64) -> Self {
        Self {
            bits,
            n: n as u8,
            k: k as u8,
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn ground_n(&self) -> u32 {
        self.n as u32
    }

    pub fn size_k(&self) -> u32 {
        self.k as u32
    }

    pub fn contains(&self, element: u32) -> bool {
        element >= 1 && element <= self.n as u32 && self.bits >> (element - 1) & 1 == 1
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let tz = rest.trailing_zeros();
                rest &= rest - 1;
                Some(tz + 1)
            }
        })
    }

    fn check_comparable(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return param(format!(
                "subsets from different ground sets: ({},{}) vs ({},{})",
                self.n, self.k, other.n, other.k
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Colex rank: `sum_i C(c_i, i)` over the sorted 0-based elements `c_1 < ... < c_k`.
pub fn colex_rank(s: &KSubset) -> u64 {
    rank_bits(s.bits)
}

#[inline]
pub(crate) fn rank_bits(mut bits: u64) -> u64 {
    let mut rank = 0u64;
    let mut i = 1u32;
    while bits != 0 {
        let c = bits.trailing_zeros();
        rank += choose(c, i);
        bits &= bits - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`colex_rank`].
pub fn colex_unrank(rank: u64, n: u32, k: u32) -> Result<KSubset> {
    let total = binomial(n, k)?;
    if rank as u128 >= total {
        return param(format!("rank {rank} outside [0, C({n},{k})={total})"));
    }
    Ok(KSubset::from_bits_unchecked(n, k, unrank_bits(rank, n, k)))
}

#[inline]
pub(crate) fn unrank_bits(mut rank: u64, n: u32, k: u32) -> u64 {
    let mut bits = 0u64;
    let mut hi = n;
    for i in (1..=k).rev() {
        // largest c < hi with C(c, i) <= rank
        let mut c = hi - 1;
        while choose(c, i) > rank {
            c -= 1;
        }
        rank -= choose(c, i);
        bits |= 1u64 << c;
        hi = c;
    }
    bits
}

/// True iff the two subsets share no element.
pub fn disjoint(a: &KSubset, b: &KSubset) -> Result<bool> {
    a.check_comparable(b)?;
    Ok(a.bits & b.bits == 0)
}

/// All k-subsets of `[n]` as bit patterns, in colex order (Gosper's hack).
pub fn subsets_colex(n: u32, k: u32) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut next: Option<u64> = if k <= n {
        Some(if k == 64 { u64::MAX } else { (1u64 << k) - 1 })
    } else {
        None
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let (r, overflow) = cur.overflowing_add(c);
            if overflow {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                if (nxt as u128) < limit {
                    Some(nxt)
                } else {
                    None
                }
            }
        };
        Some(cur)
    })
}

/// All k-subsets of the elements present in `pool`, as bit patterns in
/// colex order.
pub fn subsets_of(pool: u64, k: u32) -> impl Iterator<Item = u64> {
    let positions: Vec<u32> = {
        let mut v = Vec::new();
        let mut r = pool;
        while r != 0 {
            v.push(r.trailing_zeros());
            r &= r - 1;
        }
        v
    };
    let m = positions.len() as u32;
    subsets_colex(m, k).map(move |local| {
        let mut out = 0u64;
        let mut r = local;
        while r != 0 {
            out |= 1u64 << positions[r.trailing_zeros() as usize];
            r &= r - 1;
        }
        out
    })
}
