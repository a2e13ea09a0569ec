//! End-to-end orchestration: ingestion into a dynamic network, per-step
//! pruning, diagram series, distance series, and the timed comparison of
//! the full pipeline against the central-subnetwork pipeline.

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{
    algorithm1, central_row, closeness, quantile_threshold, select_central, EdgeCost, ThresholdRank,
};
use crate::graph::{
    arithmetic_returns, correlation_matrix, correlation_to_distance, from_point_cloud, log_returns,
    WeightedMatrix,
};
use crate::persistence::{h0_diagram, rips_diagrams, FiltrationConfig, PersistenceDiagram};
use crate::stats::{compare, SeriesComparison, Timings};
use crate::wasserstein::wasserstein;
use crate::{io, Error, Result};

/// A time-indexed sequence of weighted networks over a fixed node set.
///
/// The time axis is positional: snapshot t lives at index t. All matrices
/// share the node count and the filtration cap.
#[derive(Debug, Clone)]
pub struct DynamicNetwork {
    times: Vec<usize>,
    matrices: Vec<WeightedMatrix>,
    node_labels: Option<Vec<String>>,
}

impl DynamicNetwork {
    pub fn new(matrices: Vec<WeightedMatrix>, node_labels: Option<Vec<String>>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidInput("dynamic network has no snapshots".into()))?;
        let (n, cap) = (first.n(), first.cap());
        for (t, m) in matrices.iter().enumerate() {
            if m.n() != n {
                return Err(Error::InvalidInput(format!(
                    "snapshot {t} has {} nodes, expected {n}",
                    m.n()
                )));
            }
            if m.cap() != cap {
                return Err(Error::InvalidInput(format!(
                    "snapshot {t} has cap {}, expected {cap}",
                    m.cap()
                )));
            }
        }
        if let Some(labels) = &node_labels {
            if labels.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: labels.len(),
                });
            }
        }
        Ok(Self {
            times: (0..matrices.len()).collect(),
            matrices,
            node_labels,
        })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n(&self) -> usize {
        self.matrices[0].n()
    }

    pub fn cap(&self) -> f64 {
        self.matrices[0].cap()
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn matrices(&self) -> &[WeightedMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, t: usize) -> &WeightedMatrix {
        &self.matrices[t]
    }

    pub fn node_labels(&self) -> Option<&[String]> {
        self.node_labels.as_deref()
    }

    /// Re-caps every snapshot to `cap`; entries above it become absent.
    pub fn with_cap(&self, cap: f64) -> Result<Self> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| m.with_cap(cap))
            .collect::<Result<Vec<_>>>()?;
        Self::new(matrices, self.node_labels.clone())
    }
}

/// How raw input files become a [`DynamicNetwork`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IngestMode {
    /// A directory of `t_<index>.csv` weight matrices.
    #[default]
    MatrixDir,
    /// A price CSV; each window of arithmetic returns becomes a
    /// correlation-distance matrix.
    PriceCorr,
    /// A price CSV; each window of log returns becomes a point cloud whose
    /// pairwise Euclidean distances form the matrix.
    LogretCloud,
}

impl std::fmt::Display for IngestMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IngestMode::MatrixDir => "matrix-dir",
            IngestMode::PriceCorr => "price-corr",
            IngestMode::LogretCloud => "logret-cloud",
        })
    }
}

impl std::str::FromStr for IngestMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix-dir" => Ok(IngestMode::MatrixDir),
            "price-corr" => Ok(IngestMode::PriceCorr),
            "logret-cloud" => Ok(IngestMode::LogretCloud),
            other => Err(Error::InvalidConfig(format!(
                "unknown ingest mode '{other}' (expected matrix-dir, price-corr, or logret-cloud)"
            ))),
        }
    }
}

/// Settings shared by the analysis entry points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub mode: IngestMode,
    pub threshold_rank: ThresholdRank,
    /// Position t0 of the reference snapshot in the series.
    pub reference_index: usize,
    /// Highest homology dimension to compute, 0 or 1. The distance series
    /// compares diagrams of this dimension.
    pub max_dim: u8,
    /// Wasserstein order.
    pub p: f64,
    /// Overrides the filtration cap; larger entries become absent edges.
    pub cap_override: Option<f64>,
    /// Re-select the central node at every time step; when false the node
    /// chosen at t0 is kept and only its thresholds are re-derived per step.
    pub recompute_central_each_step: bool,
    /// Window length, in return rows, for the windowed ingest modes.
    pub window: Option<usize>,
    /// Window start offset between consecutive snapshots.
    pub stride: usize,
    /// Path-cost convention for closeness centrality.
    pub edge_cost: EdgeCost,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            mode: IngestMode::MatrixDir,
            threshold_rank: ThresholdRank::Full,
            reference_index: 0,
            max_dim: 0,
            p: 2.0,
            cap_override: None,
            recompute_central_each_step: true,
            window: None,
            stride: 1,
            edge_cost: EdgeCost::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_dim > 1 {
            return Err(Error::InvalidConfig(format!(
                "homology dimension {} not supported (0 or 1)",
                self.max_dim
            )));
        }
        if !self.p.is_finite() || self.p < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "Wasserstein order must be a real p >= 1, got {}",
                self.p
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidConfig("stride must be at least 1".into()));
        }
        if let Some(w) = self.window {
            if w < 2 {
                return Err(Error::InvalidConfig(format!(
                    "window must cover at least 2 rows, got {w}"
                )));
            }
        }
        if let Some(cap) = self.cap_override {
            if !cap.is_finite() || cap <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "cap override must be positive and finite, got {cap}"
                )));
            }
        }
        Ok(())
    }

    fn window_or_err(&self) -> Result<usize> {
        self.window.ok_or_else(|| {
            Error::InvalidConfig(format!("mode {} requires a window length", self.mode))
        })
    }
}

/// Start offsets of the sliding windows over `rows` rows.
fn window_starts(rows: usize, window: usize, stride: usize) -> Vec<usize> {
    (0..)
        .step_by(stride)
        .take_while(|start| start + window <= rows)
        .collect()
}

/// Reads input at `path` into a dynamic network according to `config.mode`.
pub fn ingest(path: &Path, config: &PipelineConfig) -> Result<DynamicNetwork> {
    config.validate()?;
    match config.mode {
        IngestMode::MatrixDir => io::read_network_dir(path, config.cap_override),
        IngestMode::PriceCorr => {
            let table = io::read_price_csv(path)?;
            let returns = arithmetic_returns(table.prices.view())?;
            let window = config.window_or_err()?;
            let rows = returns.values().nrows();
            let starts = window_starts(rows, window, config.stride);
            if starts.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "{rows} return rows cannot fill a window of {window}"
                )));
            }
            let matrices = starts
                .into_iter()
                .map(|start| {
                    let win = returns.window(start, window)?;
                    let corr = correlation_matrix(win)?;
                    correlation_to_distance(&corr)
                })
                .collect::<Result<Vec<_>>>()?;
            let net = DynamicNetwork::new(matrices, Some(table.names))?;
            match config.cap_override {
                Some(cap) => net.with_cap(cap),
                None => Ok(net),
            }
        }
        IngestMode::LogretCloud => {
            let table = io::read_price_csv(path)?;
            let returns = log_returns(table.prices.view())?;
            let window = config.window_or_err()?;
            let rows = returns.values().nrows();
            let starts = window_starts(rows, window, config.stride);
            if starts.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "{rows} return rows cannot fill a window of {window}"
                )));
            }
            let matrices = starts
                .into_iter()
                .map(|start| from_point_cloud(returns.window(start, window)?))
                .collect::<Result<Vec<_>>>()?;
            // point-cloud caps are per-snapshot maxima; unify to one scale
            let cap = match config.cap_override {
                Some(cap) => cap,
                None => matrices.iter().map(WeightedMatrix::cap).fold(0.0, f64::max),
            };
            let matrices = matrices
                .into_iter()
                .map(|m| m.with_cap(cap))
                .collect::<Result<Vec<_>>>()?;
            DynamicNetwork::new(matrices, None)
        }
    }
}

/// The central subnetwork of every snapshot, with the threshold that was
/// applied at each step and the resulting pruned-edge fraction.
#[derive(Debug, Clone)]
pub struct PrunedSeries {
    pub matrices: Vec<WeightedMatrix>,
    /// Threshold s_t applied at step t; the pruned snapshot's filtration
    /// ends here, so its essential classes die at s_t.
    pub thresholds: Vec<f64>,
    pub fractions: Vec<f64>,
}

/// Applies the per-step pruning to every snapshot.
pub fn pruned_series(
    net: &DynamicNetwork,
    rank: ThresholdRank,
    config: &PipelineConfig,
) -> Result<PrunedSeries> {
    if rank == ThresholdRank::Full {
        return Err(Error::InvalidConfig(
            "pruning requires a quantile rank, not full".into(),
        ));
    }
    let fixed_central = if config.recompute_central_each_step {
        None
    } else {
        let t0 = reference_position(net.len(), config)?;
        let scores = closeness(net.matrix(t0), config.edge_cost)?;
        Some(select_central(&scores)?)
    };
    let pruned = net
        .matrices()
        .par_iter()
        .map(|m| {
            let (matrix, threshold) = match fixed_central {
                None => {
                    let (matrix, report) = algorithm1(m, rank, config.edge_cost)?;
                    let threshold = report.thresholds.get(rank).ok_or_else(|| {
                        Error::InvalidConfig("pruning requires a quantile rank, not full".into())
                    })?;
                    (matrix, threshold)
                }
                Some(c) => {
                    let u_c = central_row(m, c)?;
                    let threshold = quantile_threshold(&u_c, rank)?;
                    (m.apply_threshold(threshold)?, threshold)
                }
            };
            Ok((matrix, threshold))
        })
        .collect::<Result<Vec<_>>>()?;
    let fractions = net
        .matrices()
        .iter()
        .zip(&pruned)
        .map(|(full, (cut, _))| full.pruned_fraction(cut))
        .collect::<Result<Vec<_>>>()?;
    let (matrices, thresholds) = pruned.into_iter().unzip();
    Ok(PrunedSeries {
        matrices,
        thresholds,
        fractions,
    })
}

fn diagrams_for(
    matrices: &[WeightedMatrix],
    max_scales: Option<&[f64]>,
    config: &PipelineConfig,
) -> Result<Vec<Vec<PersistenceDiagram>>> {
    matrices
        .par_iter()
        .enumerate()
        .map(|(t, m)| {
            let mut filtration =
                FiltrationConfig::for_matrix(m).with_max_dim(config.max_dim.into());
            if let Some(scales) = max_scales {
                filtration.max_scale = scales[t];
            }
            if config.max_dim == 0 {
                Ok(vec![h0_diagram(m, &filtration)?])
            } else {
                rips_diagrams(m, &filtration)
            }
        })
        .collect()
}

/// One list of diagrams per time step, dimensions 0..=max_dim, in time
/// order. When the configured rank is not `full`, each snapshot is pruned
/// to its central subnetwork first and its filtration is truncated at the
/// threshold applied to that snapshot.
pub fn diagram_series(
    net: &DynamicNetwork,
    config: &PipelineConfig,
) -> Result<Vec<Vec<PersistenceDiagram>>> {
    config.validate()?;
    if config.threshold_rank == ThresholdRank::Full {
        diagrams_for(net.matrices(), None, config)
    } else {
        let pruned = pruned_series(net, config.threshold_rank, config)?;
        diagrams_for(&pruned.matrices, Some(&pruned.thresholds), config)
    }
}

fn reference_position(steps: usize, config: &PipelineConfig) -> Result<usize> {
    if config.reference_index >= steps {
        return Err(Error::InvalidConfig(format!(
            "reference index {} out of range for {steps} time steps",
            config.reference_index
        )));
    }
    Ok(config.reference_index)
}

/// The distance series X_t = W_p(diagram_t, diagram_t0) over the diagrams
/// of dimension `config.max_dim`.
pub fn wasserstein_series(
    diagrams: &[Vec<PersistenceDiagram>],
    config: &PipelineConfig,
) -> Result<Vec<f64>> {
    config.validate()?;
    let t0 = reference_position(diagrams.len(), config)?;
    let dim = config.max_dim as usize;
    for (t, dims) in diagrams.iter().enumerate() {
        if dims.len() <= dim {
            return Err(Error::InvalidInput(format!(
                "step {t} carries {} diagram dimensions, need dimension {dim}",
                dims.len()
            )));
        }
    }
    let reference = &diagrams[t0][dim];
    diagrams
        .par_iter()
        .map(|dims| wasserstein(&dims[dim], reference, config.p))
        .collect()
}

fn median_duration(mut samples: Vec<Duration>) -> Duration {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

const TIMING_REPS: usize = 3;

/// Runs the full-network and central-subnetwork pipelines on `net`, times
/// the diagram construction plus distance computation of each (median of
/// three repetitions, pruning excluded), and assembles the comparison.
pub fn run_comparison(
    net: &DynamicNetwork,
    rank: ThresholdRank,
    config: &PipelineConfig,
) -> Result<SeriesComparison> {
    config.validate()?;
    if rank == ThresholdRank::Full {
        return Err(Error::InvalidConfig(
            "comparison requires a quantile rank, not full".into(),
        ));
    }
    reference_position(net.len(), config)?;
    let pruned = pruned_series(net, rank, config)?;

    let timed_series =
        |matrices: &[WeightedMatrix], scales: Option<&[f64]>| -> Result<(Vec<f64>, Duration)> {
            let mut series = Vec::new();
            let mut samples = Vec::with_capacity(TIMING_REPS);
            for _ in 0..TIMING_REPS {
                let start = Instant::now();
                let diagrams = diagrams_for(matrices, scales, config)?;
                series = wasserstein_series(&diagrams, config)?;
                samples.push(start.elapsed());
            }
            Ok((series, median_duration(samples)))
        };

    let (x, full_time) = timed_series(net.matrices(), None)?;
    let (x_tilde, pruned_time) = timed_series(&pruned.matrices, Some(&pruned.thresholds))?;
    compare(
        &x,
        &x_tilde,
        Timings {
            full: full_time,
            pruned: pruned_time,
        },
        &pruned.fractions,
    )
}

/// Everything `comparison.json` carries: the comparison, the configuration
/// it was produced under, and the fixed implementation choices a reader
/// needs to interpret the numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonDocument {
    pub comparison: SeriesComparison,
    pub config: PipelineConfig,
    pub metadata: RunMetadata,
}

/// Fixed implementation choices echoed into output files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    /// Distance between diagram points.
    pub ground_metric: String,
    pub p: f64,
    /// Filtration cap of the analyzed network.
    pub cap: f64,
    /// Kendall correlation variant.
    pub tau_variant: String,
}

impl RunMetadata {
    pub fn new(config: &PipelineConfig, cap: f64) -> Self {
        Self {
            ground_metric: "euclidean".into(),
            p: config.p,
            cap,
            tau_variant: "b".into(),
        }
    }
}
