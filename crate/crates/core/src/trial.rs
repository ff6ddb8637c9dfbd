//! One Monte Carlo trial of `i(H^k(n,p))`, its CSV record, and the sweep
//! configuration.
//!
//! A trial samples `V_p`, builds the induced Kneser subgraph, and records the
//! exact independence number (seeded with the best heuristic witness), the
//! greedy and deletion lower bounds, the best star, and the distance of the
//! solver's witness to the nearest star.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Deserialize;

use crate::error::{param, Error, Result};
use crate::indep::{deletion_lower_bound, degree_greedy_is, max_independent_set_with_hint, stability_distance};
use crate::random::{derive_seed, induced_subgraph, sample_vertices, SampleSpec};
use crate::regimes::{classify_and_predict, RegimeOptions};

pub const CSV_FORMAT_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "format_version,n,k,p,seed,sampled_vertices,sampled_edges,triangle_count,\
alpha_exact,alpha_optimal,alpha_greedy,alpha_deletion,star_best,stability_index,stability_residual,\
regime,predicted,runtime_ms";

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub n: u32,
    pub k: u32,
    pub p: f64,
    pub seed: u64,
    pub sampled_vertices: usize,
    pub sampled_edges: usize,
    pub triangle_count: u64,
    /// Best independent set found; a maximum one when `alpha_optimal`.
    pub alpha_exact: usize,
    pub alpha_optimal: bool,
    pub alpha_greedy: usize,
    pub alpha_deletion: usize,
    pub star_best: usize,
    /// Element (1-based) of the star nearest to the solver's witness; 0 when empty.
    pub stability_index: u32,
    pub stability_residual: usize,
    pub regime: String,
    pub predicted: f64,
    pub runtime_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOptions {
    pub budget: u64,
    pub regime: RegimeOptions,
    /// Record wall-clock time; off keeps rows byte-reproducible.
    pub timing: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        Self {
            budget: crate::indep::DEFAULT_BUDGET,
            regime: RegimeOptions::default(),
            timing: false,
        }
    }
}

pub fn run_trial(n: u32, k: u32, p: f64, seed: u64, opts: &TrialOptions) -> Result<TrialRecord> {
    let start = opts.timing.then(Instant::now);
    let prediction = classify_and_predict(n, k, p, &opts.regime)?;
    let spec = SampleSpec::new(n, k, p, seed)?;
    let sample = sample_vertices(&spec);
    let g = induced_subgraph(&sample, n, k)?;
    let mut rec = TrialRecord {
        n,
        k,
        p,
        seed,
        sampled_vertices: sample.len(),
        sampled_edges: g.edge_count(),
        triangle_count: 0,
        alpha_exact: 0,
        alpha_optimal: true,
        alpha_greedy: 0,
        alpha_deletion: 0,
        star_best: 0,
        stability_index: 0,
        stability_residual: 0,
        regime: prediction.regime.to_string(),
        predicted: prediction.predicted_size,
        runtime_ms: 0,
    };
    if !sample.is_empty() {
        rec.triangle_count = g.triangle_count();
        let greedy = degree_greedy_is(&g);
        let deletion = deletion_lower_bound(&g);
        let star = (1..=n)
            .map(|i| (0..g.vertex_count()).filter(|&v| g.subset(v).is_some_and(|s| s.contains(i))).collect::<Vec<_>>())
            .max_by_key(Vec::len)
            .unwrap_or_default();
        let hint = [&star, &greedy.witness, &deletion.witness].into_iter().max_by_key(|w| w.len()).expect("three candidates");
        let exact = max_independent_set_with_hint(&g, opts.budget, hint);
        let family: Vec<_> = exact.witness.iter().filter_map(|&v| g.subset(v)).collect();
        let dist = stability_distance(&family, n)?;
        rec.alpha_exact = exact.size;
        rec.alpha_optimal = exact.optimal;
        rec.alpha_greedy = greedy.size;
        rec.alpha_deletion = deletion.size;
        rec.star_best = star.len();
        rec.stability_index = dist.best_i;
        rec.stability_residual = dist.residual;
    }
    if let Some(start) = start {
        rec.runtime_ms = start.elapsed().as_millis() as u64;
    }
    rec.check()?;
    Ok(rec)
}

impl TrialRecord {
    /// The record-level invariants every emitted row must satisfy.
    pub fn check(&self) -> Result<()> {
        let lower = self.alpha_greedy.max(self.alpha_deletion).max(self.star_best);
        if self.star_best > self.alpha_exact || (self.alpha_optimal && self.alpha_exact < lower) {
            return param(format!(
                "record invariant broken: exact {} greedy {} deletion {} star {}",
                self.alpha_exact, self.alpha_greedy, self.alpha_deletion, self.star_best
            ));
        }
        if self.alpha_exact > self.sampled_vertices || self.stability_residual > self.alpha_exact {
            return param("record invariant broken: sizes exceed the sample");
        }
        Ok(())
    }

    pub fn to_csv_row(&self) -> String {
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            CSV_FORMAT_VERSION,
            self.n,
            self.k,
            self.p,
            self.seed,
            self.sampled_vertices,
            self.sampled_edges,
            self.triangle_count,
            self.alpha_exact,
            self.alpha_optimal,
            self.alpha_greedy,
            self.alpha_deletion,
            self.star_best,
            self.stability_index,
            self.stability_residual,
            self.regime,
            self.predicted,
            self.runtime_ms
        )
        .expect("writing to a String");
        s
    }

    pub fn from_csv_row(line: &str, line_no: usize) -> Result<Self> {
        let bad = |message: String| Error::Parse { line: line_no, message };
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 18 {
            return Err(bad(format!("expected 18 columns, found {}", f.len())));
        }
        if f[0] != CSV_FORMAT_VERSION.to_string() {
            return Err(bad(format!("unsupported format version '{}'", f[0])));
        }
        fn num<T: std::str::FromStr>(f: &[&str], i: usize, line: usize) -> Result<T> {
            f[i].parse().map_err(|_| Error::Parse { line, message: format!("column {} holds '{}'", i + 1, f[i]) })
        }
        let l = line_no;
        Ok(Self {
            n: num(&f, 1, l)?,
            k: num(&f, 2, l)?,
            p: num(&f, 3, l)?,
            seed: num(&f, 4, l)?,
            sampled_vertices: num(&f, 5, l)?,
            sampled_edges: num(&f, 6, l)?,
            triangle_count: num(&f, 7, l)?,
            alpha_exact: num(&f, 8, l)?,
            alpha_optimal: num(&f, 9, l)?,
            alpha_greedy: num(&f, 10, l)?,
            alpha_deletion: num(&f, 11, l)?,
            star_best: num(&f, 12, l)?,
            stability_index: num(&f, 13, l)?,
            stability_residual: num(&f, 14, l)?,
            regime: f[15].to_string(),
            predicted: num(&f, 16, l)?,
            runtime_ms: num(&f, 17, l)?,
        })
    }
}

/// Parses a CSV document with header.
pub fn parse_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        _ => return Err(Error::Parse { line: 1, message: "missing or unexpected header".into() }),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| TrialRecord::from_csv_row(l, i + 2))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PGrid {
    List(Vec<f64>),
    Geometric { p_min: f64, p_max: f64, points: usize },
}

fn default_budget() -> u64 {
    crate::indep::DEFAULT_BUDGET
}

fn default_margin() -> f64 {
    RegimeOptions::default().margin
}

fn default_epsilon() -> f64 {
    RegimeOptions::default().epsilon
}

fn default_c() -> f64 {
    RegimeOptions::default().c
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: u32,
    pub k: u32,
    pub p_grid: PGrid,
    pub trials_per_p: usize,
    pub master_seed: u64,
    #[serde(default = "default_budget")]
    pub solver_budget: u64,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(rename = "C", default = "default_c")]
    pub c: f64,
}

/// One scheduled trial; `slot` is its row index in the output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialJob {
    pub slot: usize,
    pub p_index: usize,
    pub trial_index: usize,
    pub p: f64,
    pub seed: u64,
}

/// Seed of trial `trial_index` at grid point `p_index`.
pub fn trial_seed(master_seed: u64, p_index: usize, trial_index: usize) -> u64 {
    derive_seed(derive_seed(master_seed, p_index as u64), trial_index as u64)
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        crate::kneser::kneser_params(self.n, self.k)?;
        if self.trials_per_p == 0 {
            return param("trials_per_p must be at least 1");
        }
        if let PGrid::Geometric { p_min, p_max, points } = self.p_grid {
            if points == 0 || !(p_min <= p_max) {
                return param("p_grid needs points >= 1 and p_min <= p_max");
            }
        }
        let grid = self.grid();
        if grid.is_empty() {
            return param("p_grid is empty");
        }
        if let Some(p) = grid.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return param(format!("p_grid value {p} outside (0,1]"));
        }
        self.regime_options().validate()
    }

    /// Grid values in ascending order.
    pub fn grid(&self) -> Vec<f64> {
        let mut g = match &self.p_grid {
            PGrid::List(v) => v.clone(),
            PGrid::Geometric { p_min, p_max, points } => match *points {
                0 => Vec::new(),
                1 => vec![*p_min],
                m => {
                    let step = (p_max / p_min).ln() / (m - 1) as f64;
                    (0..m).map(|i| if i + 1 == m { *p_max } else { p_min * (step * i as f64).exp() }).collect()
                }
            },
        };
        g.sort_by(f64::total_cmp);
        g
    }

    pub fn regime_options(&self) -> RegimeOptions {
        RegimeOptions { epsilon: self.epsilon, c: self.c, margin: self.margin }
    }

    pub fn trial_options(&self) -> TrialOptions {
        TrialOptions { budget: self.solver_budget, regime: self.regime_options(), timing: false }
    }

    /// All trials, sorted by `p` then trial index.
    pub fn jobs(&self) -> Vec<TrialJob> {
        let mut out = Vec::new();
        for (p_index, p) in self.grid().into_iter().enumerate() {
            for trial_index in 0..self.trials_per_p {
                out.push(TrialJob {
                    slot: out.len(),
                    p_index,
                    trial_index,
                    p,
                    seed: trial_seed(self.master_seed, p_index, trial_index),
                });
            }
        }
        out
    }
}

/// Mean and sample standard deviation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub stddev: f64,
}

impl Stat {
    pub fn of(xs: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = xs.into_iter().collect();
        if v.is_empty() {
            return Self { mean: f64::NAN, stddev: f64::NAN };
        }
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let stddev = if v.len() < 2 {
            0.0
        } else {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
        };
        Self { mean, stddev }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PSummary {
    pub p: f64,
    pub trials: usize,
    pub regime: String,
    pub predicted: f64,
    pub alpha_exact: Stat,
    pub alpha_greedy: Stat,
    pub alpha_deletion: Stat,
    pub star_best: Stat,
    pub non_optimal: usize,
    /// Mean `alpha_exact / predicted`.
    pub ratio_to_predicted: f64,
}

/// Per-`p` aggregates; records must be grouped by `p` (as sweeps emit them).
pub fn summarize(records: &[TrialRecord]) -> Vec<PSummary> {
    let mut out: Vec<PSummary> = Vec::new();
    for group in records.chunk_by(|a, b| a.p == b.p) {
        let f = |sel: fn(&TrialRecord) -> usize| Stat::of(group.iter().map(|r| sel(r) as f64));
        let predicted = group[0].predicted;
        out.push(PSummary {
            p: group[0].p,
            trials: group.len(),
            regime: group[0].regime.clone(),
            predicted,
            alpha_exact: f(|r| r.alpha_exact),
            alpha_greedy: f(|r| r.alpha_greedy),
            alpha_deletion: f(|r| r.alpha_deletion),
            star_best: f(|r| r.star_best),
            non_optimal: group.iter().filter(|r| !r.alpha_optimal).count(),
            ratio_to_predicted: Stat::of(group.iter().map(|r| r.alpha_exact as f64 / predicted)).mean,
        });
    }
    out
}

pub fn summary_table(rows: &[PSummary]) -> String {
    let mut s = format!(
        "{:>12} {:>6} {:>10} {:>10} {:>16} {:>16} {:>16} {:>16} {:>7} {:>8}\n",
        "p", "trials", "regime", "predicted", "alpha_exact", "alpha_greedy", "alpha_deletion", "star_best", "nonopt", "ratio"
    );
    let ms = |st: &Stat| format!("{:.3}±{:.3}", st.mean, st.stddev);
    for r in rows {
        writeln!(
            s,
            "{:>12.6} {:>6} {:>10} {:>10.3} {:>16} {:>16} {:>16} {:>16} {:>7} {:>8.4}",
            r.p,
            r.trials,
            r.regime,
            r.predicted,
            ms(&r.alpha_exact),
            ms(&r.alpha_greedy),
            ms(&r.alpha_deletion),
            ms(&r.star_best),
            r.non_optimal,
            r.ratio_to_predicted
        )
        .expect("writing to a String");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_examples() {
        let pet = run_trial(5, 2, 1.0, 3, &TrialOptions::default()).unwrap();
        assert_eq!((pet.alpha_exact, pet.stability_residual, pet.sampled_edges), (4, 0, 15));
        assert!(pet.alpha_optimal);
        let full = run_trial(12, 3, 1.0, 11, &TrialOptions::default()).unwrap();
        assert_eq!(full.alpha_exact, 55);
        assert_eq!(full.star_best, 55);
        assert_eq!(full.regime, "principal");
        let empty = run_trial(12, 3, 1e-12, 5, &TrialOptions::default()).unwrap();
        assert_eq!((empty.sampled_vertices, empty.alpha_exact, empty.stability_index), (0, 0, 0));
        assert_eq!(empty.runtime_ms, 0);
    }

    #[test]
    fn trials_are_deterministic() {
        let a = run_trial(10, 3, 0.4, 99, &TrialOptions::default()).unwrap();
        let b = run_trial(10, 3, 0.4, 99, &TrialOptions::default()).unwrap();
        assert_eq!(a.to_csv_row(), b.to_csv_row());
    }

    #[test]
    fn csv_roundtrip() {
        let r = run_trial(9, 3, 0.37, 12, &TrialOptions::default()).unwrap();
        let row = r.to_csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("1,9,3,0.37,12,"));
        let doc = format!("{CSV_HEADER}\n{row}\n");
        assert_eq!(parse_csv(&doc).unwrap(), vec![r]);
        assert!(parse_csv(&format!("{CSV_HEADER}\n2{}\n", &row[1..])).is_err());
        assert!(parse_csv("n,k\n").is_err());
    }

    #[test]
    fn config_parsing() {
        let cfg = SweepConfig::from_json(
            r#"{"n": 12, "k": 3, "p_grid": [0.5, 0.1], "trials_per_p": 2, "master_seed": 7, "C": 2.0}"#,
        )
        .unwrap();
        assert_eq!(cfg.grid(), vec![0.1, 0.5]);
        assert_eq!(cfg.c, 2.0);
        assert_eq!(cfg.solver_budget, crate::indep::DEFAULT_BUDGET);
        let jobs = cfg.jobs();
        assert_eq!(jobs.len(), 4);
        assert_eq!((jobs[3].p, jobs[3].trial_index, jobs[3].slot), (0.5, 1, 3));
        assert_eq!(jobs[1].seed, trial_seed(7, 0, 1));

        let geo = SweepConfig::from_json(
            r#"{"n": 8, "k": 3, "p_grid": {"p_min": 0.01, "p_max": 1.0, "points": 3}, "trials_per_p": 1, "master_seed": 1}"#,
        )
        .unwrap();
        let g = geo.grid();
        assert_eq!(g.len(), 3);
        assert!((g[1] - 0.1).abs() < 1e-12 && g[2] == 1.0);

        let unknown = SweepConfig::from_json(
            r#"{"n": 8, "k": 3, "p_grid": [0.5], "trials_per_p": 1, "master_seed": 1, "colour": 3}"#,
        );
        assert!(matches!(unknown, Err(Error::Parse { .. })));
        let multi = SweepConfig::from_json("{\n\"n\": 8,\n\"k\": \"three\"\n}").unwrap_err();
        assert!(matches!(multi, Error::Parse { line: 3, .. }), "{multi:?}");
        let bad_p = SweepConfig::from_json(r#"{"n": 8, "k": 3, "p_grid": [1.5], "trials_per_p": 1, "master_seed": 1}"#);
        assert!(matches!(bad_p, Err(Error::Parameter(_))));
        let zero = SweepConfig::from_json(r#"{"n": 8, "k": 3, "p_grid": [0.5], "trials_per_p": 0, "master_seed": 1}"#);
        assert!(zero.is_err());
    }

    #[test]
    fn summary_groups_by_p() {
        let opts = TrialOptions::default();
        let recs: Vec<_> = [0.2, 0.2, 0.6]
            .iter()
            .enumerate()
            .map(|(i, &p)| run_trial(8, 3, p, i as u64, &opts).unwrap())
            .collect();
        let s = summarize(&recs);
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].trials, s[1].trials), (2, 1));
        assert_eq!(s[1].alpha_exact.stddev, 0.0);
        assert!(summary_table(&s).lines().count() == 3);
    }
}
