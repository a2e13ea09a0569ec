//! Browser bindings: three JSON-in, JSON-out operations behind
//! `wasm-bindgen`, thin enough that every computation stays testable on the
//! host. The page in `www/` drives them from vanilla JavaScript.

use std::path::Path;
use std::str::FromStr;

use serde_json::json;
use wasm_bindgen::prelude::*;

use persnet::centrality::{algorithm1, EdgeCost, ThresholdRank};
use persnet::graph::WeightedMatrix;
use persnet::persistence::{h0_diagram, FiltrationConfig, PersistenceDiagram};
use persnet::pipeline::{diagram_series, pruned_series, wasserstein_series, PipelineConfig};
use persnet::simgen::{generate, Experiment, SimSpec};
use persnet::stats::{adjusted_r2, kendall_tau, linreg};
use persnet::wasserstein::matching;
use persnet::{Error, Result};

/// Size guard for in-browser simulation runs.
const MAX_NETWORKS: usize = 400;
const MAX_NODES: usize = 220;
const MAX_SAMPLE_LEN: usize = 500;

/// Centrality analysis and dimension-0 diagrams of one pasted matrix.
///
/// Returns the selected central node, its threshold ladder, and the full
/// and pruned diagrams, ready for canvas rendering.
pub fn analyze_matrix_json(csv: &str, rank: &str, cost: &str) -> Result<String> {
    let rank = ThresholdRank::from_str(rank)?;
    let cost = EdgeCost::from_str(cost)?;
    let entries = persnet::io::parse_matrix_csv(csv, Path::new("pasted matrix"))?;
    let cap = entries.iter().copied().fold(0.0, f64::max);
    let w = WeightedMatrix::new(entries, cap)?;
    let (pruned, report) = algorithm1(&w, rank, cost)?;

    let full_diagram = h0_diagram(&w, &FiltrationConfig::for_matrix(&w))?;
    let threshold = report.thresholds.get(rank);
    let pruned_cfg = match threshold {
        Some(s) => FiltrationConfig {
            max_scale: s,
            ..FiltrationConfig::for_matrix(&pruned)
        },
        None => FiltrationConfig::for_matrix(&pruned),
    };
    let pruned_diagram = h0_diagram(&pruned, &pruned_cfg)?;

    let doc = json!({
        "n": w.n(),
        "cap": w.cap(),
        "central": report.central,
        "closeness": report.scores,
        "u_c": report.u_c,
        "thresholds": {
            "s0": report.thresholds.s0,
            "s1": report.thresholds.s1,
            "s2": report.thresholds.s2,
            "s3": report.thresholds.s3,
            "s4": report.thresholds.s4,
        },
        "threshold": threshold,
        "pruned_pct": w.pruned_fraction(&pruned)? * 100.0,
        "full": full_diagram.to_json(),
        "pruned": pruned_diagram.to_json(),
    });
    Ok(doc.to_string())
}

/// Seeded simulation run compared against its central subnetworks.
///
/// Produces both distance series and the agreement statistics; timing is
/// left out since a browser tab is no benchmark rig.
pub fn simulate_compare_json(
    experiment: &str,
    seed: u64,
    rank: &str,
    n_networks: Option<u32>,
    n_nodes: Option<u32>,
    sample_len: Option<u32>,
) -> Result<String> {
    let rank = ThresholdRank::from_str(rank)?;
    if rank == ThresholdRank::Full {
        return Err(Error::InvalidConfig(
            "comparison requires a quantile rank, not full".into(),
        ));
    }
    let mut spec = match Experiment::from_str(experiment)? {
        Experiment::Hub => SimSpec::hub(seed),
        Experiment::Covariance => SimSpec::covariance(seed),
        Experiment::Ar1 => SimSpec::ar1(seed),
    };
    if let Some(v) = n_networks {
        spec.n_networks = v as usize;
    }
    if let Some(v) = n_nodes {
        spec.n_nodes = v as usize;
    }
    if let Some(v) = sample_len {
        spec.sample_len = v as usize;
    }
    for (value, limit, name) in [
        (spec.n_networks, MAX_NETWORKS, "networks"),
        (spec.n_nodes, MAX_NODES, "nodes"),
        (spec.sample_len, MAX_SAMPLE_LEN, "sample length"),
    ] {
        if value > limit {
            return Err(Error::InvalidConfig(format!(
                "{name} capped at {limit} in the browser, got {value}"
            )));
        }
    }
    spec.validate()?;
    let output = generate(&spec)?;
    let net = &output.network;

    let full_config = PipelineConfig::default();
    let x = wasserstein_series(&diagram_series(net, &full_config)?, &full_config)?;
    let pruned_config = PipelineConfig {
        threshold_rank: rank,
        ..PipelineConfig::default()
    };
    let x_tilde = wasserstein_series(&diagram_series(net, &pruned_config)?, &pruned_config)?;
    let fractions = pruned_series(net, rank, &pruned_config)?.fractions;
    let avg_pruned_pct = 100.0 * fractions.iter().sum::<f64>() / fractions.len() as f64;

    let fit = linreg(&x_tilde, &x)?;
    let doc = json!({
        "experiment": experiment,
        "seed": seed,
        "rank": rank.to_string(),
        "x": x,
        "x_tilde": x_tilde,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r2_adj": adjusted_r2(fit.r2, x.len())?,
        "kendall_tau": kendall_tau(&x, &x_tilde)?,
        "avg_pruned_pct": avg_pruned_pct,
        "regenerated": output.regenerated,
    });
    Ok(doc.to_string())
}

fn parse_diagram(label: &str, text: &str) -> Result<PersistenceDiagram> {
    let pairs: Vec<(f64, f64)> = serde_json::from_str(text).map_err(|e| {
        Error::InvalidInput(format!("{label}: expected [[birth, death], ...]: {e}"))
    })?;
    PersistenceDiagram::from_pairs(0, pairs)
}

/// p-Wasserstein distance and the optimal matching between two diagrams
/// given as `[[birth, death], ...]` JSON arrays.
pub fn diagram_distance_json(d1: &str, d2: &str, p: f64) -> Result<String> {
    let left = parse_diagram("first diagram", d1)?;
    let right = parse_diagram("second diagram", d2)?;
    let m = matching(&left, &right, p)?;

    let left_pts = left.as_tuples();
    let right_pts = right.as_tuples();
    let mut matches = Vec::new();
    for (i, target) in m.left_to_right.iter().enumerate() {
        matches.push(json!({
            "left": left_pts[i],
            "right": target.map(|j| right_pts[j]),
        }));
    }
    for (j, source) in m.right_to_left.iter().enumerate() {
        if source.is_none() {
            matches.push(json!({ "left": null, "right": right_pts[j] }));
        }
    }
    let doc = json!({ "distance": m.distance, "p": p, "matches": matches });
    Ok(doc.to_string())
}

fn to_js<T>(result: Result<T>) -> std::result::Result<T, JsError> {
    result.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn analyze_matrix(csv: &str, rank: &str, cost: &str) -> std::result::Result<String, JsError> {
    to_js(analyze_matrix_json(csv, rank, cost))
}

#[wasm_bindgen]
pub fn simulate_compare(
    experiment: &str,
    seed: u64,
    rank: &str,
    n_networks: Option<u32>,
    n_nodes: Option<u32>,
    sample_len: Option<u32>,
) -> std::result::Result<String, JsError> {
    to_js(simulate_compare_json(
        experiment, seed, rank, n_networks, n_nodes, sample_len,
    ))
}

#[wasm_bindgen]
pub fn diagram_distance(d1: &str, d2: &str, p: f64) -> std::result::Result<String, JsError> {
    to_js(diagram_distance_json(d1, d2, p))
}
