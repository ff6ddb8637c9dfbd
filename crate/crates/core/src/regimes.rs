//! Probability regimes for the largest intersecting family of
//! `H^k(n,p)`, predicted sizes, and the transference bound calculators.
//!
//! With `D = C(n-k,k)` the boundaries are `p1 = 1/D`, `p2 = (n/k)/D`,
//! `p3 = (n/k)^(1-ε)/D` and `p4 = C (n/k) ln^2(n/k)/D`. A multiplicative
//! margin `m` renders "much smaller/larger than `1/D`" at finite `n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};
use crate::kneser::kneser_params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `p ≪ 1/D`: almost everything sampled is intersecting.
    SubD,
    /// `p3 < p ≤ (n/k)/D`, lower bound side of the flat range.
    FlatLower,
    /// `1/D ≪ p ≤ (n/k)^(1-ε)/D`, upper bound side of the flat range.
    FlatUpper,
    /// `p ≥ C (n/k) ln^2(n/k)/D`: a star is asymptotically optimal.
    Principal,
    Gap,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SubD => "sub_D",
            Regime::FlatLower => "flat_lower",
            Regime::FlatUpper => "flat_upper",
            Regime::Principal => "principal",
            Regime::Gap => "gap",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sub_D" => Regime::SubD,
            "flat_lower" => Regime::FlatLower,
            "flat_upper" => Regime::FlatUpper,
            "principal" => Regime::Principal,
            "gap" => Regime::Gap,
            _ => return param(format!("unknown regime '{s}'")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeOptions {
    pub epsilon: f64,
    /// Stand-in for the theorem's unspecified constant.
    pub c: f64,
    pub margin: f64,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        Self { epsilon: 0.1, c: 1.0, margin: 10.0 }
    }
}

impl RegimeOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return param(format!("epsilon must lie in (0,1), got {}", self.epsilon));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return param(format!("C must be positive, got {}", self.c));
        }
        if !(self.margin >= 1.0 && self.margin.is_finite()) {
            return param(format!("margin must be >= 1, got {}", self.margin));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

/// Boundaries may exceed 1 (e.g. `k = n/2`) and are reported as-is.
pub fn thresholds(n: u32, k: u32, epsilon: f64, c: f64) -> Result<Thresholds> {
    let kp = kneser_params(n, k)?;
    let ln_d = (kp.degree as f64).ln();
    let ratio = n as f64 / k as f64;
    let lr = ratio.ln();
    Ok(Thresholds {
        p1: (-ln_d).exp(),
        p2: (lr - ln_d).exp(),
        p3: ((1.0 - epsilon) * lr - ln_d).exp(),
        p4: (c.ln() + lr + 2.0 * lr.abs().ln() - ln_d).exp(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimePrediction {
    pub regime: Regime,
    pub predicted_size: f64,
    pub lower: f64,
    pub upper: f64,
    pub epsilon: f64,
    pub c: f64,
}

struct Model {
    big_n: f64,
    big_d: f64,
    n: f64,
    k: f64,
    ratio: f64,
    th: Thresholds,
    opts: RegimeOptions,
}

impl Model {
    fn new(n: u32, k: u32, opts: RegimeOptions) -> Result<Self> {
        opts.validate()?;
        let kp = kneser_params(n, k)?;
        Ok(Self {
            big_n: kp.vertices as f64,
            big_d: kp.degree as f64,
            n: n as f64,
            k: k as f64,
            ratio: n as f64 / k as f64,
            th: thresholds(n, k, opts.epsilon, opts.c)?,
            opts,
        })
    }

    fn regime(&self, p: f64) -> Regime {
        let (th, m) = (&self.th, self.opts.margin);
        if p >= th.p4 {
            Regime::Principal
        } else if p <= th.p1 / m {
            Regime::SubD
        } else if p >= m * th.p1 && p <= th.p3 {
            Regime::FlatUpper
        } else if p >= m * th.p1 && p <= th.p2 {
            Regime::FlatLower
        } else {
            Regime::Gap
        }
    }

    fn flat(&self, p: f64) -> f64 {
        self.big_n / self.big_d * (p * self.big_d).ln().max(0.0)
    }

    fn gap_upper(&self) -> f64 {
        let l = self.ratio.ln();
        self.opts.c * self.big_n / self.big_d * l * l
    }

    /// `(lower, predicted, upper)` before monotone smoothing.
    fn raw(&self, p: f64) -> (f64, f64, f64) {
        let eps = self.opts.epsilon;
        match self.regime(p) {
            Regime::SubD => {
                let x = p * self.big_n;
                ((1.0 - eps) * x, x, (1.0 + eps) * x)
            }
            Regime::Principal => {
                let x = p * self.big_n * self.k / self.n;
                ((1.0 - eps) * x, x, (1.0 + eps) * x)
            }
            Regime::FlatUpper => {
                let x = self.flat(p);
                ((1.0 - eps) * x, x, self.opts.c * x)
            }
            Regime::FlatLower => {
                let x = self.flat(p);
                ((1.0 - eps) * x, x, self.gap_upper())
            }
            Regime::Gap => {
                let (a, b) = self.gap_ends(p);
                let (la, va, _) = self.raw(a);
                let (_, vb, _) = self.raw(b);
                let frac = (p / a).ln() / (b / a).ln();
                (la, va + frac * (vb - va), self.gap_upper())
            }
        }
    }

    fn breakpoints(&self) -> [f64; 5] {
        let (th, m) = (&self.th, self.opts.margin);
        [th.p1 / m, m * th.p1, th.p3, th.p2, th.p4]
    }

    fn gap_ends(&self, p: f64) -> (f64, f64) {
        let pts = self.breakpoints();
        let a = pts
            .iter()
            .copied()
            .filter(|&e| e < p && self.regime(e) != Regime::Gap)
            .fold(f64::NAN, f64::max);
        let b = pts
            .iter()
            .copied()
            .filter(|&e| e > p && self.regime(e) != Regime::Gap)
            .fold(f64::NAN, f64::min);
        (a, b)
    }

    fn predict(&self, p: f64) -> RegimePrediction {
        let (lower, mut predicted, upper) = self.raw(p);
        // the true size is monotone in p, so never predict below an earlier boundary value
        for e in self.breakpoints() {
            if e < p {
                predicted = predicted.max(self.raw(e).1);
            }
            if e <= p && e > f64::MIN_POSITIVE {
                let just_below = f64::from_bits(e.to_bits() - 1);
                predicted = predicted.max(self.raw(just_below).1);
            }
        }
        RegimePrediction {
            regime: self.regime(p),
            predicted_size: predicted,
            lower: lower.min(predicted),
            upper: upper.max(predicted),
            epsilon: self.opts.epsilon,
            c: self.opts.c,
        }
    }
}

pub fn classify_and_predict(n: u32, k: u32, p: f64, opts: &RegimeOptions) -> Result<RegimePrediction> {
    if !(p > 0.0 && p <= 1.0) {
        return param(format!("p must lie in (0,1], got {p}"));
    }
    Ok(Model::new(n, k, *opts)?.predict(p))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferenceInput {
    /// Vertex count of the host graph.
    pub vertices: f64,
    /// Average degree of the host graph.
    pub degree: f64,
    pub p: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferenceBounds {
    /// `4N/(εγD) · ln(pD)`
    pub case_ii_size_threshold: f64,
    /// `exp(-(N/(γD)) ln(pD))`
    pub case_ii_prob: f64,
    /// `9/D <= p <= λ^ε/(λγD)` and `pD > 1`
    pub case_ii_applicable: bool,
    /// `(1+ε)λpN`
    pub case_iii_size_threshold: f64,
    /// `exp(-ε^2 pλN/24)`
    pub case_iii_prob: f64,
    /// `p >= C ln^2(e/λ)/(λγD)`
    pub case_iii_applicable: bool,
    /// `exp(-δ^2 λpN/2)`
    pub case_iv_prob: f64,
    /// `p >= C ln^2(e/λ)/(λD)`
    pub case_iv_applicable: bool,
}

fn exp_prob(log_p: f64) -> f64 {
    log_p.min(0.0).exp()
}

pub fn transference_bounds(input: &TransferenceInput) -> Result<TransferenceBounds> {
    let TransferenceInput { vertices: n, degree: d, p, lambda, gamma, epsilon, delta, c } = *input;
    let unit = |x: f64| x > 0.0 && x <= 1.0;
    if !(n > 0.0 && d > 0.0 && unit(p) && unit(lambda) && unit(gamma)) {
        return param("transference needs N, D > 0 and p, lambda, gamma in (0,1]");
    }
    if !(epsilon >= 0.0 && delta >= 0.0 && c > 0.0) {
        return param("transference needs epsilon, delta >= 0 and C > 0");
    }
    let ln_pd = (p * d).ln();
    let ln_e_lambda = 1.0 - lambda.ln();
    let ii_hi = (epsilon * lambda.ln() - lambda.ln() - gamma.ln() - d.ln()).exp();
    Ok(TransferenceBounds {
        case_ii_size_threshold: (4.0 * n / (epsilon * gamma * d) * ln_pd).max(0.0),
        case_ii_prob: exp_prob(-(n / (gamma * d)) * ln_pd),
        case_ii_applicable: ln_pd > 0.0 && p >= 9.0 / d && p <= ii_hi,
        case_iii_size_threshold: (1.0 + epsilon) * lambda * p * n,
        case_iii_prob: exp_prob(-epsilon * epsilon * p * lambda * n / 24.0),
        case_iii_applicable: p >= c * ln_e_lambda * ln_e_lambda / (lambda * gamma * d),
        case_iv_prob: exp_prob(-delta * delta * lambda * p * n / 2.0),
        case_iv_applicable: p >= c * ln_e_lambda * ln_e_lambda / (lambda * d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn threshold_examples() {
        let t = thresholds(12, 3, 0.1, 1.0).unwrap();
        assert!(close(t.p1, 1.0 / 84.0, 1e-12));
        assert!(close(t.p2, 4.0 / 84.0, 1e-12));
        assert!(close(t.p3, 4f64.powf(0.9) / 84.0, 1e-12));
        assert!(close(t.p4, 4.0 * 4f64.ln().powi(2) / 84.0, 1e-12));
        assert!((t.p4 - 0.0915).abs() < 1e-4);
        let half = thresholds(8, 4, 0.1, 1.0).unwrap();
        assert!(close(half.p2, 2.0, 1e-12));
        for n in 4..=30 {
            for k in 2..=n / 2 {
                let t = thresholds(n, k, 0.2, 1.0).unwrap();
                assert!(t.p1 < t.p3 && t.p3 < t.p2);
            }
        }
    }

    #[test]
    fn prediction_examples() {
        let opts = RegimeOptions { epsilon: 0.1, ..Default::default() };
        let sub = classify_and_predict(12, 3, 0.001, &opts).unwrap();
        assert_eq!(sub.regime, Regime::SubD);
        assert!(close(sub.predicted_size, 0.22, 1e-12));
        let full = classify_and_predict(12, 3, 1.0, &opts).unwrap();
        assert_eq!(full.regime, Regime::Principal);
        assert_eq!(full.predicted_size, 55.0);

        let flat = classify_and_predict(12, 3, 0.03, &RegimeOptions { margin: 2.0, ..opts }).unwrap();
        assert!(matches!(flat.regime, Regime::FlatUpper | Regime::FlatLower));
        let x = 220.0 / 84.0 * (0.03f64 * 84.0).ln();
        assert!((0.03f64 * 84.0).ln() - 0.924 < 1e-3);
        assert!(flat.lower <= 0.9 * x + 1e-12 && flat.upper >= x && close(flat.predicted_size, x, 1e-12));
        assert_eq!(classify_and_predict(12, 3, 0.03, &opts).unwrap().regime, Regime::Gap);
        assert!(classify_and_predict(12, 3, 0.0, &opts).is_err());
        assert!(classify_and_predict(12, 3, 0.5, &RegimeOptions { margin: 0.5, ..opts }).is_err());
    }

    #[test]
    fn predictions_are_monotone_and_bracketed() {
        for (n, k) in [(12, 3), (10, 4), (14, 3), (20, 3), (30, 4), (10, 5), (40, 10)] {
            for c in [0.2, 1.0, 8.0] {
                for margin in [1.0, 2.0, 10.0] {
                    let opts = RegimeOptions { epsilon: 0.1, c, margin };
                    let mut prev = 0.0;
                    for i in 0..=2000 {
                        let p = 10f64.powf(-8.0 + 8.0 * i as f64 / 2000.0);
                        let r = classify_and_predict(n, k, p, &opts).unwrap();
                        assert!(r.lower <= r.predicted_size && r.predicted_size <= r.upper, "{n},{k} p={p}: {r:?}");
                        assert!(r.predicted_size >= prev, "{n},{k} c={c} m={margin} p={p}: {} < {prev}", r.predicted_size);
                        prev = r.predicted_size;
                    }
                }
            }
        }
    }

    #[test]
    fn principal_at_one_matches_ekr() {
        for n in 4..=12 {
            for k in 2..=n / 2 {
                let r = classify_and_predict(n, k, 1.0, &RegimeOptions::default()).unwrap();
                let kp = kneser_params(n, k).unwrap();
                if r.regime == Regime::Principal {
                    assert_eq!(r.predicted_size, kp.star_size() as f64, "K({n},{k})");
                }
            }
        }
    }

    #[test]
    fn regime_names_roundtrip() {
        for r in [Regime::SubD, Regime::FlatLower, Regime::FlatUpper, Regime::Principal, Regime::Gap] {
            assert_eq!(r.as_str().parse::<Regime>().unwrap(), r);
        }
        assert!("flat".parse::<Regime>().is_err());
    }

    fn base() -> TransferenceInput {
        TransferenceInput {
            vertices: 220.0,
            degree: 84.0,
            p: 0.03,
            lambda: 3.0 / 8.0,
            gamma: 1.0 / 3.0,
            epsilon: 0.5,
            delta: 0.1,
            c: 1.0,
        }
    }

    #[test]
    fn transference_examples() {
        let b = transference_bounds(&base()).unwrap();
        assert!((b.case_ii_size_threshold - 58.1).abs() < 0.05, "{}", b.case_ii_size_threshold);
        assert!(!b.case_ii_applicable);
        let z = transference_bounds(&TransferenceInput { epsilon: 0.0, ..base() }).unwrap();
        assert_eq!(z.case_iii_prob, 1.0);
        let at_one = transference_bounds(&TransferenceInput { p: 1.0 / 84.0, ..base() }).unwrap();
        assert!((at_one.case_ii_prob - 1.0).abs() < 1e-12);
        let below = transference_bounds(&TransferenceInput { p: 0.001, ..base() }).unwrap();
        assert_eq!(below.case_ii_prob, 1.0);
        assert!(!below.case_ii_applicable);
        let huge = transference_bounds(&TransferenceInput { vertices: 1e300, degree: 1e10, p: 1.0, ..base() }).unwrap();
        assert_eq!(huge.case_iii_prob, 0.0);
        assert!(huge.case_iv_prob >= 0.0);
        assert!(transference_bounds(&TransferenceInput { p: 0.0, ..base() }).is_err());
    }

    #[test]
    fn transference_applicability_windows() {
        let inside = transference_bounds(&TransferenceInput { p: 0.12, gamma: 0.05, ..base() }).unwrap();
        assert!(inside.case_ii_applicable);
        let dense = transference_bounds(&TransferenceInput { p: 1.0, ..base() }).unwrap();
        let need_iii = (1.0 - (3.0f64 / 8.0).ln()).powi(2) / (3.0 / 8.0 / 3.0 * 84.0);
        assert_eq!(dense.case_iii_applicable, 1.0 >= need_iii);
        assert!(dense.case_iv_applicable);
        let probs = [dense.case_ii_prob, dense.case_iii_prob, dense.case_iv_prob];
        assert!(probs.iter().all(|q| (0.0..=1.0).contains(q)));
    }
}
