//! Weighted matrices and the transforms that produce them.
//!
//! A [`WeightedMatrix`] encodes an undirected weighted graph on `n` nodes as a
//! dense symmetric matrix with zero diagonal. Absent edges are stored as a
//! sentinel value `cap + 1`, one past the filtration max-scale `cap`, so the
//! matrix doubles as the input to a clique filtration truncated at `cap`.
//!
//! The module also covers the standard routes into that representation:
//! price matrices to returns, returns to Pearson correlations, correlations
//! to the distance `sqrt(2 * (1 - c))`, and point clouds to Euclidean
//! distance matrices.

use ndarray::{Array2, ArrayView2};

use crate::{Error, Result};

/// Tolerance used when validating symmetry and diagonals of input matrices.
const SYMMETRY_TOL: f64 = 1e-9;

/// How a returns series was derived from prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnsKind {
    /// `(S(t+1) - S(t)) / S(t)`
    Arithmetic,
    /// `ln(S(t+1) / S(t))`
    Log,
}

/// A `(k-1) x n` matrix of per-period returns for `n` series.
#[derive(Debug, Clone)]
pub struct ReturnsMatrix {
    values: Array2<f64>,
    kind: ReturnsKind,
}

impl ReturnsMatrix {
    /// Number of return observations (one fewer than price rows).
    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.nrows() == 0
    }

    /// Number of series (columns).
    pub fn n_series(&self) -> usize {
        self.values.ncols()
    }

    pub fn kind(&self) -> ReturnsKind {
        self.kind
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    /// View of `len` consecutive observations starting at `start`.
    pub fn window(&self, start: usize, len: usize) -> Result<ArrayView2<'_, f64>> {
        if start + len > self.len() {
            return Err(Error::InvalidInput(format!(
                "window [{start}, {}) exceeds {} return rows",
                start + len,
                self.len()
            )));
        }
        Ok(self.values.slice(ndarray::s![start..start + len, ..]))
    }
}

fn validate_prices(prices: &ArrayView2<'_, f64>) -> Result<()> {
    if prices.nrows() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 price rows, got {}",
            prices.nrows()
        )));
    }
    if prices.ncols() == 0 {
        return Err(Error::InvalidInput("price matrix has no columns".into()));
    }
    for ((row, col), &p) in prices.indexed_iter() {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "nonpositive or nonfinite price {p} at row {row}, column {col}"
            )));
        }
    }
    Ok(())
}

/// Arithmetic returns `(S(t+1) - S(t)) / S(t)`, row `t` of the result.
///
/// `prices` has one row per time step and one column per series; all prices
/// must be strictly positive.
pub fn arithmetic_returns(prices: ArrayView2<'_, f64>) -> Result<ReturnsMatrix> {
    validate_prices(&prices)?;
    let (k, n) = (prices.nrows(), prices.ncols());
    let mut values = Array2::zeros((k - 1, n));
    for t in 0..k - 1 {
        for j in 0..n {
            values[[t, j]] = (prices[[t + 1, j]] - prices[[t, j]]) / prices[[t, j]];
        }
    }
    Ok(ReturnsMatrix {
        values,
        kind: ReturnsKind::Arithmetic,
    })
}

/// Log returns `ln(S(t+1) / S(t))`, row `t` of the result.
pub fn log_returns(prices: ArrayView2<'_, f64>) -> Result<ReturnsMatrix> {
    validate_prices(&prices)?;
    let (k, n) = (prices.nrows(), prices.ncols());
    let mut values = Array2::zeros((k - 1, n));
    for t in 0..k - 1 {
        for j in 0..n {
            values[[t, j]] = (prices[[t + 1, j]] / prices[[t, j]]).ln();
        }
    }
    Ok(ReturnsMatrix {
        values,
        kind: ReturnsKind::Log,
    })
}

/// Pearson correlation of the columns of `data` (rows are observations).
///
/// The result is symmetric with unit diagonal and every entry clamped to
/// `[-1, 1]`. A column with zero variance makes the correlation undefined and
/// is reported as an error.
pub fn correlation_matrix(data: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    let (k, n) = (data.nrows(), data.ncols());
    if k < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 observations for a correlation, got {k}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("no columns to correlate".into()));
    }

    let means: Vec<f64> = (0..n).map(|j| data.column(j).sum() / k as f64).collect();
    let mut sq_dev = vec![0.0; n];
    for j in 0..n {
        sq_dev[j] = data.column(j).iter().map(|x| (x - means[j]).powi(2)).sum();
        if sq_dev[j] <= 0.0 {
            return Err(Error::DegenerateColumn { column: j });
        }
    }

    let mut corr = Array2::zeros((n, n));
    for i in 0..n {
        corr[[i, i]] = 1.0;
        for j in i + 1..n {
            let cov: f64 = (0..k)
                .map(|t| (data[[t, i]] - means[i]) * (data[[t, j]] - means[j]))
                .sum();
            let c = (cov / (sq_dev[i] * sq_dev[j]).sqrt()).clamp(-1.0, 1.0);
            corr[[i, j]] = c;
            corr[[j, i]] = c;
        }
    }
    Ok(corr)
}

/// Distance cap for correlation-derived matrices: `sqrt(2 * (1 - (-1)))`.
pub const CORRELATION_CAP: f64 = 2.0;

/// Maps a correlation matrix to the distance matrix `sqrt(2 * (1 - c))`.
///
/// Perfect correlation gives distance 0, perfect anticorrelation 2, so the
/// resulting [`WeightedMatrix`] always has `cap = 2`.
pub fn correlation_to_distance(corr: &Array2<f64>) -> Result<WeightedMatrix> {
    let n = corr.nrows();
    if corr.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: corr.ncols(),
        });
    }
    let mut entries = Array2::zeros((n, n));
    for i in 0..n {
        if (corr[[i, i]] - 1.0).abs() > SYMMETRY_TOL {
            return Err(Error::InvalidInput(format!(
                "correlation diagonal entry {} is {}, expected 1",
                i,
                corr[[i, i]]
            )));
        }
        for j in i + 1..n {
            let c = corr[[i, j]];
            if (c - corr[[j, i]]).abs() > SYMMETRY_TOL {
                return Err(Error::InvalidInput(format!(
                    "correlation matrix is asymmetric at ({i}, {j})"
                )));
            }
            if !c.is_finite() || !(-1.0 - SYMMETRY_TOL..=1.0 + SYMMETRY_TOL).contains(&c) {
                return Err(Error::InvalidInput(format!(
                    "correlation {c} at ({i}, {j}) outside [-1, 1]"
                )));
            }
            let d = (2.0 * (1.0 - c)).max(0.0).sqrt();
            entries[[i, j]] = d;
            entries[[j, i]] = d;
        }
    }
    WeightedMatrix::new(entries, CORRELATION_CAP)
}

/// Euclidean distance matrix of a point cloud (rows are points).
///
/// The cap is the largest pairwise distance; a degenerate cloud in which all
/// points coincide falls back to cap 1 so the filtration range stays positive.
pub fn from_point_cloud(points: ArrayView2<'_, f64>) -> Result<WeightedMatrix> {
    let n = points.nrows();
    if n == 0 {
        return Err(Error::InvalidInput("empty point cloud".into()));
    }
    for ((row, col), &x) in points.indexed_iter() {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!(
                "nonfinite coordinate at point {row}, axis {col}"
            )));
        }
    }
    let mut entries = Array2::zeros((n, n));
    let mut max = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            let d = points
                .row(i)
                .iter()
                .zip(points.row(j).iter())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            entries[[i, j]] = d;
            entries[[j, i]] = d;
            max = max.max(d);
        }
    }
    let cap = if max > 0.0 { max } else { 1.0 };
    WeightedMatrix::new(entries, cap)
}

/// Symmetric weight matrix with zero diagonal and sentinel-coded absent edges.
///
/// Every off-diagonal entry is either a finite edge weight in `[0, cap]` or
/// exactly `cap + 1`, the sentinel marking an absent edge. `cap` is the
/// max-scale of the clique filtration built on the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatrix {
    entries: Array2<f64>,
    cap: f64,
}

impl WeightedMatrix {
    /// Builds a matrix from raw entries, normalising values above `cap` to
    /// the sentinel.
    ///
    /// Entries must be finite-or-above-cap, nonnegative and symmetric, with a
    /// zero diagonal; violations are reported as errors rather than repaired.
    pub fn new(mut entries: Array2<f64>, cap: f64) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: entries.ncols(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidInput("empty weight matrix".into()));
        }
        if !cap.is_finite() || cap <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "cap must be positive and finite, got {cap}"
            )));
        }
        let sentinel = cap + 1.0;
        for i in 0..n {
            let d = entries[[i, i]];
            if d != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry {i} is {d}, expected 0"
                )));
            }
            for j in i + 1..n {
                let a = entries[[i, j]];
                let b = entries[[j, i]];
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "nonfinite weight at ({i}, {j})"
                    )));
                }
                if (a - b).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidInput(format!(
                        "weight matrix is asymmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
                if a < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "negative weight {a} at ({i}, {j})"
                    )));
                }
                let v = if a > cap { sentinel } else { a };
                entries[[i, j]] = v;
                entries[[j, i]] = v;
            }
        }
        Ok(WeightedMatrix { entries, cap })
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Filtration max-scale `m`.
    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// Sentinel value `cap + 1` encoding an absent edge.
    pub fn sentinel(&self) -> f64 {
        self.cap + 1.0
    }

    /// Raw entry, either a weight in `[0, cap]`, the sentinel, or 0 on the
    /// diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn entries(&self) -> ArrayView2<'_, f64> {
        self.entries.view()
    }

    /// True when `i != j` and the edge `{i, j}` is present.
    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.entries[[i, j]] <= self.cap
    }

    /// All finite edges `(i, j, weight)` with `i < j`, in index order.
    pub fn finite_edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = self.entries[[i, j]];
                if w <= self.cap {
                    edges.push((i, j, w));
                }
            }
        }
        edges
    }

    /// Number of finite edges, counting each undirected edge once.
    pub fn finite_edge_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .map(|i| (i + 1..n).filter(|&j| self.is_edge(i, j)).count())
            .sum()
    }

    /// Re-encodes the matrix with a different cap.
    ///
    /// Finite weights above the new cap and old sentinels both become the new
    /// sentinel; weights at or below it are kept as they are.
    pub fn with_cap(&self, cap: f64) -> Result<Self> {
        if !cap.is_finite() || cap <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "cap must be positive and finite, got {cap}"
            )));
        }
        let mut entries = self.entries.clone();
        let n = self.n();
        let sentinel = cap + 1.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let v = entries[[i, j]];
                    if v > self.cap || v > cap {
                        entries[[i, j]] = sentinel;
                    }
                }
            }
        }
        Ok(WeightedMatrix { entries, cap })
    }

    /// Removes every edge of weight `>= s`, keeping the diagonal at 0.
    ///
    /// `s` must satisfy `0 < s <= cap`. Already-absent edges stay absent and
    /// the cap is unchanged, so thresholding is idempotent.
    pub fn apply_threshold(&self, s: f64) -> Result<Self> {
        if !s.is_finite() || s <= 0.0 || s > self.cap {
            return Err(Error::ThresholdOutOfRange {
                threshold: s,
                cap: self.cap,
            });
        }
        let mut entries = self.entries.clone();
        let n = self.n();
        let sentinel = self.sentinel();
        for i in 0..n {
            for j in 0..n {
                if i != j && entries[[i, j]] >= s {
                    entries[[i, j]] = sentinel;
                }
            }
        }
        Ok(WeightedMatrix {
            entries,
            cap: self.cap,
        })
    }

    /// Fraction of this matrix's finite edges that are absent in `pruned`.
    ///
    /// Each undirected edge counts once; a matrix with no finite edges prunes
    /// to fraction 0 by convention.
    pub fn pruned_fraction(&self, pruned: &WeightedMatrix) -> Result<f64> {
        if pruned.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: pruned.n(),
            });
        }
        let mut finite = 0_usize;
        let mut removed = 0_usize;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.is_edge(i, j) {
                    finite += 1;
                    if !pruned.is_edge(i, j) {
                        removed += 1;
                    }
                }
            }
        }
        if finite == 0 {
            return Ok(0.0);
        }
        Ok(removed as f64 / finite as f64)
    }
}
