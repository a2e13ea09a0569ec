//! Agreement and timing statistics between a full-network distance series
//! and the series computed on the pruned central subnetwork.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordinary least-squares fit of a simple regression y = slope * x + intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination in [0, 1].
    pub r2: f64,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{name}[{pos}] is not finite")));
    }
    Ok(())
}

/// Least-squares regression of `y` on `x`.
///
/// Requires at least 3 samples and nonzero variance in both series: a flat
/// regressor leaves the slope undefined and a flat response leaves r2
/// undefined.
pub fn linreg(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "regression needs at least 3 samples, got {}",
            x.len()
        )));
    }
    check_finite("x", x)?;
    check_finite("y", y)?;

    let x_bar = mean(x);
    let y_bar = mean(y);
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_bar;
        let dy = yi - y_bar;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateSeries(
            "regressor has zero variance".into(),
        ));
    }
    if syy == 0.0 {
        return Err(Error::DegenerateSeries("response has zero variance".into()));
    }
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let r2 = ((sxy * sxy) / (sxx * syy)).clamp(0.0, 1.0);
    Ok(LinearFit {
        slope,
        intercept,
        r2,
    })
}

/// Adjusted coefficient of determination for a single-regressor fit on `n`
/// samples: 1 - (1 - r2)(n - 1)/(n - 2).
pub fn adjusted_r2(r2: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "adjusted r2 needs at least 3 samples, got {n}"
        )));
    }
    if !r2.is_finite() {
        return Err(Error::InvalidInput(format!("r2 is not finite: {r2}")));
    }
    Ok(1.0 - (1.0 - r2) * (n as f64 - 1.0) / (n as f64 - 2.0))
}

/// Kendall's tau-b rank correlation with tie correction.
///
/// Counts concordant minus discordant pairs over pairs untied in both
/// series, normalized by the geometric mean of the untied pair counts.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "kendall tau needs at least 2 samples, got {}",
            x.len()
        )));
    }
    check_finite("x", x)?;
    check_finite("y", y)?;

    let n = x.len();
    let mut concordant = 0u64;
    let mut discordant = 0u64;
    let mut tied_x = 0u64;
    let mut tied_y = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[j] - x[i];
            let dy = y[j] - y[i];
            if dx == 0.0 {
                tied_x += 1;
            }
            if dy == 0.0 {
                tied_y += 1;
            }
            if dx != 0.0 && dy != 0.0 {
                if (dx > 0.0) == (dy > 0.0) {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as u64;
    let denom = (((n0 - tied_x) as f64) * ((n0 - tied_y) as f64)).sqrt();
    if denom == 0.0 {
        return Err(Error::DegenerateSeries(
            "all pairs tied, tau is undefined".into(),
        ));
    }
    Ok((concordant as f64 - discordant as f64) / denom)
}

/// Wall-clock totals for the two pipeline variants being compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Timings {
    /// Full-network diagram construction + distance computation.
    pub full: Duration,
    /// The same work on the pruned central subnetwork.
    pub pruned: Duration,
}

impl Timings {
    /// Pruned wall time divided by full wall time.
    pub fn ratio(&self) -> f64 {
        self.pruned.as_secs_f64() / self.full.as_secs_f64()
    }
}

/// Paired distance series with the agreement and cost statistics reported
/// for each pruning threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesComparison {
    /// Full-network distance series.
    pub x: Vec<f64>,
    /// Central-subnetwork distance series.
    pub x_tilde: Vec<f64>,
    /// Regression of x on x_tilde.
    pub slope: f64,
    pub intercept: f64,
    pub r2_adj: f64,
    pub kendall_tau: f64,
    /// Mean percentage of finite edges removed by pruning, in [0, 100].
    pub avg_pruned_pct: f64,
    /// Pruned wall time over full wall time.
    pub time_ratio: f64,
}

impl SeriesComparison {
    /// Column names for [`to_csv_row`](Self::to_csv_row).
    pub fn csv_header() -> &'static str {
        "time_ratio,adjusted_r2,avg_pruned_pct,kendall_tau"
    }

    /// The summary statistics as one CSV row (no trailing newline).
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.time_ratio, self.r2_adj, self.avg_pruned_pct, self.kendall_tau
        )
    }
}

/// Assembles a [`SeriesComparison`] from the two series, the measured wall
/// times, and the per-snapshot pruned-edge fractions (each in [0, 1]).
///
/// The full series is regressed on the subnetwork series. Degenerate input
/// errors from the regression and the rank correlation are propagated.
pub fn compare(
    x: &[f64],
    x_tilde: &[f64],
    timings: Timings,
    pruned_fractions: &[f64],
) -> Result<SeriesComparison> {
    if x.len() != x_tilde.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: x_tilde.len(),
        });
    }
    if pruned_fractions.is_empty() {
        return Err(Error::InvalidInput("no pruned-edge fractions".into()));
    }
    check_finite("pruned_fractions", pruned_fractions)?;
    if let Some(f) = pruned_fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::InvalidInput(format!(
            "pruned fraction {f} outside [0, 1]"
        )));
    }
    if timings.full.is_zero() || timings.pruned.is_zero() {
        return Err(Error::InvalidInput(
            "timings must be positive to form a ratio".into(),
        ));
    }

    let fit = linreg(x_tilde, x)?;
    let r2_adj = adjusted_r2(fit.r2, x.len())?;
    let tau = kendall_tau(x, x_tilde)?;
    Ok(SeriesComparison {
        x: x.to_vec(),
        x_tilde: x_tilde.to_vec(),
        slope: fit.slope,
        intercept: fit.intercept,
        r2_adj,
        kendall_tau: tau,
        avg_pruned_pct: 100.0 * mean(pruned_fractions),
        time_ratio: timings.ratio(),
    })
}
