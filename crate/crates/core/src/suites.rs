//! Self-checking suites behind `ekr verify`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};

use crate::containers::{
    audit_fingerprint, container_bound_nu, count_independent_sets_bound, fingerprint, reconstruct, ContainerCertificate,
    ContainerConfig,
};
use crate::error::{param, Error, Result};
use crate::graph::ExplicitGraph;
use crate::indep::{
    independent_set_counts, max_independent_set, maximal_independent_sets, shearer_bound, stability_distance,
    DEFAULT_BUDGET,
};
use crate::kneser::{kneser_params, materialize, principal_family};
use crate::random::{chernoff_lower, chernoff_upper, edge_count_moments, expected_triangles_upper, TailBoundQuery};
use crate::spectral::{
    kneser_supersat_params, meets_supersaturation, min_edges_by_size, verify_hoffman, verify_supersaturation,
    SampleBudget, SupersatParams, SupersatVerdict,
};
use crate::{ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hoffman,
    Supersat,
    Containers,
    Ekr,
    Chernoff,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Hoffman, Suite::Supersat, Suite::Containers, Suite::Ekr, Suite::Chernoff];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Hoffman => "hoffman",
            Suite::Supersat => "supersat",
            Suite::Containers => "containers",
            Suite::Ekr => "ekr",
            Suite::Chernoff => "chernoff",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .map_or_else(|| param(format!("unknown suite '{s}' (expected hoffman, supersat, containers, ekr or chernoff)")), Ok)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {} {}: {}", self.suite, if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        let failed = self.failures().count();
        writeln!(f, "[{}] {} of {} checks passed", self.suite, self.checks.len() - failed, self.checks.len())
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let mut report = SuiteReport { suite, checks: Vec::new() };
    match suite {
        Suite::Hoffman => hoffman(&mut report)?,
        Suite::Supersat => supersat(&mut report)?,
        Suite::Containers => containers(&mut report)?,
        Suite::Ekr => ekr(&mut report)?,
        Suite::Chernoff => chernoff(&mut report)?,
    }
    Ok(report)
}

fn kneser(n: u32, k: u32) -> Result<ExplicitGraph> {
    materialize(&kneser_params(n, k)?)
}

fn hoffman(report: &mut SuiteReport) -> Result<()> {
    let mut cases: Vec<(String, ExplicitGraph, Option<f64>)> = Vec::new();
    for (n, k) in [(5, 2), (6, 2), (6, 3)] {
        let kp = kneser_params(n, k)?;
        cases.push((format!("K({n},{k})"), materialize(&kp)?, Some(kp.lambda_min as f64)));
    }
    cases.push(("K_4".into(), ExplicitGraph::complete(4), None));
    cases.push(("C_5".into(), ExplicitGraph::cycle(5), None));
    for (name, g, closed_form) in cases {
        let check = verify_hoffman(&g)?;
        report.push(
            format!("{name} every subset meets the Hoffman bound"),
            check.holds,
            format!("worst slack {:.6}, witness {:?}", check.worst_slack, check.witness),
        );
        if let Some(lm) = closed_form {
            let err = (check.lambda_min - lm).abs();
            report.push(
                format!("{name} smallest eigenvalue"),
                err <= 1e-9,
                format!("computed {:.12}, closed form {lm}, error {err:.2e}", check.lambda_min),
            );
        }
    }
    Ok(())
}

fn is_star(g: &ExplicitGraph, witness: &[usize], n: u32) -> bool {
    let family: Vec<_> = witness.iter().filter_map(|&v| g.subset(v)).collect();
    family.len() == witness.len() && stability_distance(&family, n).is_ok_and(|d| d.residual == 0)
}

fn supersat(report: &mut SuiteReport) -> Result<()> {
    for (n, k) in [(5, 2), (6, 2), (7, 3)] {
        let g = kneser(n, k)?;
        for tau in [ratio(1, 4), ratio(1, 2), ratio(1, 1)] {
            let ss = kneser_supersat_params(n, k, tau.clone())?;
            let budget = SampleBudget { samples: 20_000, seed: 2024 };
            let verdict = verify_supersaturation(&g, &ss, Some(budget))?;
            report.push(
                format!("K({n},{k}) tau={tau} certificate ({}, {})", ss.lambda, ss.gamma),
                verdict.accepted(),
                format!("{verdict:?}"),
            );
        }
    }
    let g = kneser(5, 2)?;
    let degenerate = SupersatParams::new(ratio(2, 5), ratio(1, 100))?;
    let verdict = verify_supersaturation(&g, &degenerate, None)?;
    let refuted = match &verdict {
        SupersatVerdict::Violated { witness, edges } => *edges == 0 && witness.len() == 4 && is_star(&g, witness, 5),
        _ => false,
    };
    report.push("K(5,2) (2/5, 1/100) refuted by a star", refuted, format!("{verdict:?}"));
    Ok(())
}

/// Graphs on at most eight vertices plus Petersen and `K(6,3)`.
pub fn container_corpus(random_instances: usize) -> Result<Vec<(String, ExplicitGraph)>> {
    let mut out = Vec::with_capacity(random_instances + 2);
    for i in 0..random_instances {
        let m = 1 + i % 8;
        let max_e = m * (m - 1) / 2;
        let e = (i.wrapping_mul(2_654_435_761) >> 7) % (max_e + 1);
        out.push((format!("G({m},{e})#{i}"), ExplicitGraph::gnm(m, e, i as u64)?));
    }
    out.push(("Petersen".into(), kneser(5, 2)?));
    out.push(("K(6,3)".into(), kneser(6, 3)?));
    Ok(out)
}

/// Smallest `λ = s/N` with every size `>= s` meeting `(λ,γ)` supersaturation.
fn minimal_supersat(g: &ExplicitGraph, gamma: &Rational) -> Result<SupersatParams> {
    let m = g.vertex_count();
    let profile = min_edges_by_size(g)?;
    let mut s0 = m;
    while s0 > 1 && meets_supersaturation(profile.min_edges[s0 - 1], s0 - 1, m, g.edge_count(), gamma) {
        s0 -= 1;
    }
    SupersatParams::new(Rational::new(BigInt::from(s0), BigInt::from(m)), gamma.clone())
}

fn containers(report: &mut SuiteReport) -> Result<()> {
    let corpus = container_corpus(500)?;
    let (mut cases, mut violations) = (0usize, Vec::new());
    for (name, g) in &corpus {
        let m = g.vertex_count();
        let counts = independent_set_counts(g);
        let maxima = maximal_independent_sets(g);
        let avg_degree = Rational::new(BigInt::from(2 * g.edge_count()), BigInt::from(m));
        for gamma in [ratio(1, 4), ratio(1, 2)] {
            let ss = minimal_supersat(g, &gamma)?;
            for ell in 1..=3usize {
                for t in ell + 1..counts.len() {
                    let cfg = ContainerConfig::new(gamma.clone(), ell, t)?;
                    let nu = container_bound_nu(m as u128, &avg_degree, &cfg, &ss);
                    let bound = count_independent_sets_bound(m as u64, &cfg, &nu);
                    if BigUint::from(counts[t]) > bound {
                        violations.push(format!("{name} gamma={gamma} ell={ell} t={t}: {} sets > bound {bound}", counts[t]));
                    }
                }
                for i in maxima.iter().filter(|i| i.len() > ell) {
                    cases += 1;
                    let cfg = ContainerConfig::new(gamma.clone(), ell, i.len())?;
                    let mut cert = fingerprint(g, i, &cfg)?;
                    cert.nu = Some(container_bound_nu(m as u128, &avg_degree, &cfg, &ss));
                    for problem in audit_fingerprint(g, i, &cfg, &cert, Some(&ss)) {
                        violations.push(format!("{name} I={i:?} gamma={gamma} ell={ell}: {problem}"));
                    }
                    if reconstruct(g, &cert.fingerprint, &cfg)?.to_vec() != cert.container {
                        violations.push(format!("{name} I={i:?} gamma={gamma} ell={ell}: reconstruction differs"));
                    }
                    if cert.to_string().parse::<ContainerCertificate>()? != cert {
                        violations.push(format!("{name} I={i:?}: certificate text does not roundtrip"));
                    }
                }
            }
        }
    }
    report.push(
        format!("fingerprint bullets, reconstruction and counting on {} graphs", corpus.len()),
        violations.is_empty(),
        match violations.first() {
            None => format!("{cases} (graph, I, cfg) cases, 0 violations"),
            Some(v) => format!("{} violations, first: {v}", violations.len()),
        },
    );
    Ok(())
}

fn ekr(report: &mut SuiteReport) -> Result<()> {
    for n in 4..=12u32 {
        for k in 2..=n / 2 {
            let kp = kneser_params(n, k)?;
            let g = materialize(&kp)?;
            let best = max_independent_set(&g, DEFAULT_BUDGET);
            let star: Vec<usize> = principal_family(1, n, k)?.iter().map(|s| crate::colex_rank(s) as usize).collect();
            let star_ok = g.is_independent(&star) && star.len() == best.size;
            let ok = best.optimal && best.size as u128 == kp.star_size() && star_ok;
            report.push(
                format!("alpha(K({n},{k})) = (k/n)C(n,k) = {}", kp.star_size()),
                ok,
                format!(
                    "solver {} (optimal {}), star of size {} independent {}, solver witness is a star: {}",
                    best.size,
                    best.optimal,
                    star.len(),
                    g.is_independent(&star),
                    is_star(&g, &best.witness, n)
                ),
            );
        }
    }
    Ok(())
}

fn agree(got: f64, want: f64, digits: i32) -> bool {
    (got - want).abs() <= 10f64.powi(-digits) * want.abs().max(f64::MIN_POSITIVE)
}

fn chernoff(report: &mut SuiteReport) -> Result<()> {
    let q = TailBoundQuery::new(100, 0.5, 10.0)?;
    let mut spot = |name: &str, got: f64, want: f64| {
        report.push(name, agree(got, want, 12), format!("got {got:.15e}, want {want:.15e}"));
    };
    spot("chernoff_upper(100, 1/2, 10)", chernoff_upper(&q), (-100.0f64 / (2.0 * 50.0 + 10.0 / 3.0)).exp());
    spot("chernoff_lower(100, 1/2, 10)", chernoff_lower(&q), (-1.0f64).exp());
    let zero = TailBoundQuery::new(100, 0.5, 0.0)?;
    spot("chernoff_upper at s=0", chernoff_upper(&zero), 1.0);
    spot("chernoff_lower at s=0", chernoff_lower(&zero), 1.0);
    spot("shearer_bound(100, 4)", shearer_bound(100.0, 4.0)?.bound, 100.0 * (4.0 * 4f64.ln() - 3.0) / 9.0);
    spot("shearer weak form (100, 4)", shearer_bound(100.0, 4.0)?.weak, 100.0 * (4f64.ln() - 1.0) / 4.0);
    spot("E e(H) at (12,3,0.3)", edge_count_moments(12, 3, 0.3)?.mean, 9240.0 * 0.09);
    spot("triangle bound at (12,3,0.5)", expected_triangles_upper(12, 3, 0.5)?, 369_600.0 * 0.125);
    let degenerate = TailBoundQuery::new(100, 0.0, 2.0)?;
    report.push(
        "chernoff_lower with zeta = 0",
        chernoff_lower(&degenerate) == 0.0,
        format!("got {}", chernoff_lower(&degenerate)),
    );
    Ok(())
}
