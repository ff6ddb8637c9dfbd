//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust so they can be tested natively.

use num_traits::ToPrimitive;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use ekr_core::kneser::kneser_params;
use ekr_core::regimes::{classify_and_predict, thresholds, RegimeOptions};
use ekr_core::spectral::{hoffman_lower_bound, hoffman_root, RegularSpec};
use ekr_core::trial::{run_trial, TrialOptions};
use ekr_core::{Error, Result};

pub const MAX_POINTS: usize = 2000;

#[derive(Serialize)]
struct HoffmanPoint {
    s: u128,
    min_edges: f64,
}

#[derive(Serialize)]
struct HoffmanCurve {
    n: u32,
    k: u32,
    vertices: u128,
    degree: u128,
    lambda_min: i128,
    edges: u128,
    star: u128,
    root: f64,
    points: Vec<HoffmanPoint>,
}

#[derive(Serialize)]
struct RegimePoint {
    p: f64,
    regime: &'static str,
    predicted: f64,
    lower: f64,
    upper: f64,
}

#[derive(Serialize)]
struct RegimeCurve {
    p1: f64,
    p2: f64,
    p3: f64,
    p4: f64,
    points: Vec<RegimePoint>,
}

#[derive(Serialize)]
struct TrialView {
    sampled_vertices: usize,
    sampled_edges: usize,
    triangle_count: u64,
    alpha: usize,
    alpha_optimal: bool,
    alpha_greedy: usize,
    alpha_deletion: usize,
    star_best: usize,
    stability_index: u32,
    stability_residual: usize,
    regime: String,
    predicted: f64,
    csv_row: String,
}

fn check_points(points: usize) -> Result<()> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(Error::Parameter(format!("points must lie in [2, {MAX_POINTS}], got {points}")));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::Parameter(e.to_string()))
}

/// Hoffman lower bound on `e(S)` for `points` set sizes spread over `[1, N]`.
pub fn hoffman_curve_json(n: u32, k: u32, points: usize) -> Result<String> {
    check_points(points)?;
    let kp = kneser_params(n, k)?;
    let spec = RegularSpec::from(&kp);
    let mut sizes: Vec<u128> = (0..points)
        .map(|i| 1 + (kp.vertices - 1) * i as u128 / (points as u128 - 1))
        .collect();
    sizes.push(kp.star_size());
    sizes.sort_unstable();
    sizes.dedup();
    let points = sizes
        .into_iter()
        .map(|s| {
            let b = hoffman_lower_bound(&spec, s)?;
            Ok(HoffmanPoint { s, min_edges: b.to_f64().unwrap_or(f64::NAN).max(0.0) })
        })
        .collect::<Result<Vec<_>>>()?;
    to_json(&HoffmanCurve {
        n,
        k,
        vertices: kp.vertices,
        degree: kp.degree,
        lambda_min: kp.lambda_min,
        edges: kp.edge_count,
        star: kp.star_size(),
        root: hoffman_root(&spec).to_f64().unwrap_or(f64::NAN),
        points,
    })
}

/// Regime and predicted independence number on a log-spaced grid of `p`.
#[allow(clippy::too_many_arguments)]
pub fn regime_curve_json(
    n: u32,
    k: u32,
    epsilon: f64,
    c: f64,
    margin: f64,
    p_min: f64,
    p_max: f64,
    points: usize,
) -> Result<String> {
    check_points(points)?;
    if !(p_min > 0.0 && p_min < p_max && p_max <= 1.0) {
        return Err(Error::Parameter(format!("need 0 < p_min < p_max <= 1, got {p_min}, {p_max}")));
    }
    let opts = RegimeOptions { epsilon, c, margin };
    opts.validate()?;
    let th = thresholds(n, k, epsilon, c)?;
    let (lo, hi) = (p_min.ln(), p_max.ln());
    let points = (0..points)
        .map(|i| {
            let p = if i + 1 == points { p_max } else { (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp() };
            let r = classify_and_predict(n, k, p, &opts)?;
            Ok(RegimePoint { p, regime: r.regime.as_str(), predicted: r.predicted_size, lower: r.lower, upper: r.upper })
        })
        .collect::<Result<Vec<_>>>()?;
    to_json(&RegimeCurve { p1: th.p1, p2: th.p2, p3: th.p3, p4: th.p4, points })
}

/// One sampled trial with the default regime options.
pub fn trial_json(n: u32, k: u32, p: f64, seed: u64, budget: u64) -> Result<String> {
    let opts = TrialOptions { budget, ..TrialOptions::default() };
    let r = run_trial(n, k, p, seed, &opts)?;
    to_json(&TrialView {
        sampled_vertices: r.sampled_vertices,
        sampled_edges: r.sampled_edges,
        triangle_count: r.triangle_count,
        alpha: r.alpha_exact,
        alpha_optimal: r.alpha_optimal,
        alpha_greedy: r.alpha_greedy,
        alpha_deletion: r.alpha_deletion,
        star_best: r.star_best,
        stability_index: r.stability_index,
        stability_residual: r.stability_residual,
        csv_row: r.to_csv_row(),
        regime: r.regime,
        predicted: r.predicted,
    })
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = hoffmanCurve)]
pub fn hoffman_curve(n: u32, k: u32, points: usize) -> std::result::Result<String, JsError> {
    js(hoffman_curve_json(n, k, points))
}

#[wasm_bindgen(js_name = regimeCurve)]
#[allow(clippy::too_many_arguments)]
pub fn regime_curve(
    n: u32,
    k: u32,
    epsilon: f64,
    c: f64,
    margin: f64,
    p_min: f64,
    p_max: f64,
    points: usize,
) -> std::result::Result<String, JsError> {
    js(regime_curve_json(n, k, epsilon, c, margin, p_min, p_max, points))
}

#[wasm_bindgen(js_name = runTrial)]
pub fn trial(n: u32, k: u32, p: f64, seed: u64, budget: u64) -> std::result::Result<String, JsError> {
    js(trial_json(n, k, p, seed, budget))
}
