//! Closeness centrality and central-subnetwork thresholding.
//!
//! The pruning procedure picks the node with the highest closeness
//! centrality, reads the weights incident to it, derives a threshold from a
//! quantile of that row, and removes every edge at or above the threshold
//! from the whole graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::WeightedMatrix;
use crate::{Error, Result};

/// Weights below this floor are clamped before taking reciprocals, and a
/// zero total path cost is clamped to it before inversion.
pub const MIN_WEIGHT: f64 = 1e-12;

/// How an edge weight is converted into a shortest-path step cost.
///
/// `Distance` reads weights as lengths: small weights mean nearby nodes, and
/// a path costs the sum of its weights. `Reciprocal` reads weights as
/// connection strengths, costing each step `1/w` so that heavy edges are
/// cheap; it is the classical convention for strength-valued networks.
///
/// All matrices produced by this crate hold distances, and only `Distance`
/// makes the hub of a correlated family the most central node, so it is the
/// default throughout the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeCost {
    #[default]
    Distance,
    Reciprocal,
}

impl EdgeCost {
    fn step(self, weight: f64) -> f64 {
        match self {
            EdgeCost::Distance => weight,
            EdgeCost::Reciprocal => 1.0 / weight.max(MIN_WEIGHT),
        }
    }
}

impl std::fmt::Display for EdgeCost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeCost::Distance => "distance",
            EdgeCost::Reciprocal => "reciprocal",
        })
    }
}

impl std::str::FromStr for EdgeCost {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distance" => Ok(EdgeCost::Distance),
            "reciprocal" => Ok(EdgeCost::Reciprocal),
            other => Err(Error::InvalidConfig(format!(
                "unknown edge cost '{other}' (expected distance or reciprocal)"
            ))),
        }
    }
}

/// Shortest-path costs from `source` to every node.
///
/// Runs Dijkstra on the dense matrix (`O(n^2)`, no heap: the graphs here are
/// dense). Unreachable nodes get `f64::INFINITY`, the source gets 0.
pub fn path_costs(w: &WeightedMatrix, source: usize, cost: EdgeCost) -> Result<Vec<f64>> {
    let n = w.n();
    if source >= n {
        return Err(Error::InvalidInput(format!(
            "source {source} out of range for {n} nodes"
        )));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    loop {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for v in 0..n {
            if !done[v] && dist[v] < best {
                best = dist[v];
                u = v;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if !done[v] && w.is_edge(u, v) {
                let c = dist[u] + cost.step(w.get(u, v));
                if c < dist[v] {
                    dist[v] = c;
                }
            }
        }
    }
    Ok(dist)
}

/// Closeness centrality of every node: `1 / sum_j path_cost(i, j)`.
///
/// The sum runs over reachable nodes only; a node with no neighbours scores
/// 0. A zero cost sum (possible with zero-weight edges) is clamped to
/// [`MIN_WEIGHT`] before inversion so scores stay finite.
pub fn closeness(w: &WeightedMatrix, cost: EdgeCost) -> Result<Vec<f64>> {
    let n = w.n();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let dist = path_costs(w, i, cost)?;
            let mut total = 0.0;
            let mut reachable = 0_usize;
            for (j, &d) in dist.iter().enumerate() {
                if j != i && d.is_finite() {
                    total += d;
                    reachable += 1;
                }
            }
            if reachable == 0 {
                Ok(0.0)
            } else {
                Ok(1.0 / total.max(MIN_WEIGHT))
            }
        })
        .collect()
}

/// Index of the highest score; ties resolve to the lowest index.
pub fn select_central(scores: &[f64]) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::InvalidInput("no scores to select from".into()));
    }
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Sorted finite off-diagonal weights of row `c`.
///
/// Sentinel entries (absent edges) are skipped, so the result has length
/// `n - 1` only when the central node touches every other node.
pub fn central_row(w: &WeightedMatrix, c: usize) -> Result<Vec<f64>> {
    if c >= w.n() {
        return Err(Error::InvalidInput(format!(
            "node {c} out of range for {} nodes",
            w.n()
        )));
    }
    let mut row: Vec<f64> = (0..w.n())
        .filter(|&j| w.is_edge(c, j))
        .map(|j| w.get(c, j))
        .collect();
    row.sort_by(f64::total_cmp);
    Ok(row)
}

/// Which order statistic of the central row becomes the pruning threshold.
///
/// `Full` disables pruning altogether and has no threshold value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdRank {
    Min,
    Q1,
    Q2,
    Q3,
    Max,
    Full,
}

impl ThresholdRank {
    /// The five concrete ranks, from the most to the least aggressive.
    pub const QUANTILES: [ThresholdRank; 5] = [
        ThresholdRank::Min,
        ThresholdRank::Q1,
        ThresholdRank::Q2,
        ThresholdRank::Q3,
        ThresholdRank::Max,
    ];
}

impl std::fmt::Display for ThresholdRank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ThresholdRank::Min => "min",
            ThresholdRank::Q1 => "q1",
            ThresholdRank::Q2 => "q2",
            ThresholdRank::Q3 => "q3",
            ThresholdRank::Max => "max",
            ThresholdRank::Full => "full",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ThresholdRank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(ThresholdRank::Min),
            "q1" => Ok(ThresholdRank::Q1),
            "q2" => Ok(ThresholdRank::Q2),
            "q3" => Ok(ThresholdRank::Q3),
            "max" => Ok(ThresholdRank::Max),
            "full" => Ok(ThresholdRank::Full),
            other => Err(Error::InvalidConfig(format!(
                "unknown threshold rank '{other}' (expected min|q1|q2|q3|max|full)"
            ))),
        }
    }
}

/// Nearest-rank quantile of a sorted, nonempty slice.
///
/// Quartile `Qk` picks the 1-based position `ceil(k * len / 4)`, so the
/// result is always an element of `u_c`. `Min` and `Max` are the endpoints;
/// `Full` has no threshold and is rejected.
pub fn quantile_threshold(u_c: &[f64], rank: ThresholdRank) -> Result<f64> {
    if u_c.is_empty() {
        return Err(Error::InvalidInput(
            "cannot take a quantile of an empty row".into(),
        ));
    }
    debug_assert!(u_c.windows(2).all(|p| p[0] <= p[1]), "u_c must be sorted");
    let len = u_c.len();
    let pick = |k: usize| u_c[(k * len).div_ceil(4) - 1];
    match rank {
        ThresholdRank::Min => Ok(u_c[0]),
        ThresholdRank::Q1 => Ok(pick(1)),
        ThresholdRank::Q2 => Ok(pick(2)),
        ThresholdRank::Q3 => Ok(pick(3)),
        ThresholdRank::Max => Ok(u_c[len - 1]),
        ThresholdRank::Full => Err(Error::InvalidConfig(
            "rank 'full' has no threshold value".into(),
        )),
    }
}

/// The five candidate thresholds derived from the central row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
}

impl Thresholds {
    /// Computes all five order statistics of a sorted central row.
    pub fn from_row(u_c: &[f64]) -> Result<Self> {
        Ok(Thresholds {
            s0: quantile_threshold(u_c, ThresholdRank::Min)?,
            s1: quantile_threshold(u_c, ThresholdRank::Q1)?,
            s2: quantile_threshold(u_c, ThresholdRank::Q2)?,
            s3: quantile_threshold(u_c, ThresholdRank::Q3)?,
            s4: quantile_threshold(u_c, ThresholdRank::Max)?,
        })
    }

    /// Threshold value for a concrete rank.
    pub fn get(&self, rank: ThresholdRank) -> Option<f64> {
        match rank {
            ThresholdRank::Min => Some(self.s0),
            ThresholdRank::Q1 => Some(self.s1),
            ThresholdRank::Q2 => Some(self.s2),
            ThresholdRank::Q3 => Some(self.s3),
            ThresholdRank::Max => Some(self.s4),
            ThresholdRank::Full => None,
        }
    }
}

/// Everything the pruning step learned about one matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentralityReport {
    /// Closeness score per node.
    pub scores: Vec<f64>,
    /// Index of the selected central node.
    pub central: usize,
    /// Sorted finite weights incident to the central node.
    pub u_c: Vec<f64>,
    /// The five candidate thresholds derived from `u_c`.
    pub thresholds: Thresholds,
}

/// Full central-subnetwork pruning of one matrix.
///
/// Selects the most central node, derives the threshold of the requested
/// rank from its incident weights, and removes every edge of weight at or
/// above the threshold. `Full` skips the pruning but still reports the
/// centrality analysis.
pub fn algorithm1(
    w: &WeightedMatrix,
    rank: ThresholdRank,
    cost: EdgeCost,
) -> Result<(WeightedMatrix, CentralityReport)> {
    let scores = closeness(w, cost)?;
    let central = select_central(&scores)?;
    let u_c = central_row(w, central)?;
    if u_c.is_empty() {
        return Err(Error::InvalidInput(format!(
            "central node {central} is isolated; no thresholds available"
        )));
    }
    let thresholds = Thresholds::from_row(&u_c)?;
    let report = CentralityReport {
        scores,
        central,
        u_c,
        thresholds,
    };
    let pruned = match thresholds.get(rank) {
        None => w.clone(),
        Some(s) => w.apply_threshold(s)?,
    };
    Ok((pruned, report))
}
