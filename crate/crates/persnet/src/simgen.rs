//! Seeded generators for the three simulation experiments: a planted hub,
//! random-covariance samples, and mixed white-noise/AR(1) samples.
//!
//! Network t draws from substream t of a counter-based generator seeded by
//! the [`SimSpec`], so parallel generation is order-independent and one
//! spec value pins the output bit for bit.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{correlation_matrix, correlation_to_distance};
use crate::pipeline::DynamicNetwork;
use crate::{Error, Result};

/// Which simulation experiment to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// One node is the sum of all others.
    Hub,
    /// Multivariate normals under random correlation matrices.
    Covariance,
    /// White noise followed by an AR(1) tail in every sample vector.
    Ar1,
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Experiment::Hub => "hub",
            Experiment::Covariance => "covariance",
            Experiment::Ar1 => "ar1",
        })
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hub" => Ok(Experiment::Hub),
            "covariance" => Ok(Experiment::Covariance),
            "ar1" => Ok(Experiment::Ar1),
            other => Err(Error::InvalidConfig(format!(
                "unknown experiment '{other}' (expected hub, covariance, or ar1)"
            ))),
        }
    }
}

/// Full description of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub experiment: Experiment,
    pub n_networks: usize,
    pub n_nodes: usize,
    /// Time samples drawn per node when forming each correlation matrix.
    pub sample_len: usize,
    pub seed: u64,
    /// Beta shape for the covariance experiment's partial correlations.
    pub alpha: f64,
    /// AR coefficient for the ar1 experiment.
    pub phi: f64,
}

impl SimSpec {
    /// The hub experiment at its reference size: 100 networks of 51 nodes
    /// from 10 samples each.
    pub fn hub(seed: u64) -> Self {
        Self {
            experiment: Experiment::Hub,
            n_networks: 100,
            n_nodes: 51,
            sample_len: 10,
            seed,
            alpha: 1.0,
            phi: 0.7,
        }
    }

    /// The covariance experiment at its reference size: 150 networks of 60
    /// nodes from 10 samples each.
    pub fn covariance(seed: u64) -> Self {
        Self {
            experiment: Experiment::Covariance,
            n_networks: 150,
            n_nodes: 60,
            sample_len: 10,
            seed,
            alpha: 1.0,
            phi: 0.7,
        }
    }

    /// The AR(1) experiment at its reference size: 200 networks of 200
    /// nodes from 20 samples each.
    pub fn ar1(seed: u64) -> Self {
        Self {
            experiment: Experiment::Ar1,
            n_networks: 200,
            n_nodes: 200,
            sample_len: 20,
            seed,
            alpha: 1.0,
            phi: 0.7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_networks == 0 || self.n_nodes == 0 {
            return Err(Error::InvalidConfig(
                "network and node counts must be at least 1".into(),
            ));
        }
        if self.n_nodes < 2 {
            return Err(Error::InvalidConfig(
                "correlation networks need at least 2 nodes".into(),
            ));
        }
        if self.sample_len < 2 {
            return Err(Error::InvalidConfig(
                "sample length must be at least 2".into(),
            ));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "Beta shape must be positive, got {}",
                self.alpha
            )));
        }
        if !self.phi.is_finite() || self.phi.abs() >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "AR coefficient must satisfy |phi| < 1, got {}",
                self.phi
            )));
        }
        Ok(())
    }
}

/// A generated dynamic network plus how many degenerate sample vectors had
/// to be redrawn along the way.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub network: DynamicNetwork,
    pub regenerated: usize,
}

/// Runs the generator the spec's experiment field selects.
pub fn generate(spec: &SimSpec) -> Result<SimOutput> {
    match spec.experiment {
        Experiment::Hub => gen_hub(spec),
        Experiment::Covariance => gen_covariance(spec),
        Experiment::Ar1 => gen_ar1(spec),
    }
}

fn stream_rng(seed: u64, t: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    rng
}

/// Standard-normal variates via the Box-Muller transform. Each pair of
/// uniforms yields two values; the second is cached for the next call.
struct NormalSource {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl NormalSource {
    fn new(rng: ChaCha12Rng) -> Self {
        Self { rng, spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u1: f64 = self.rng.random();
            if u1 == 0.0 {
                continue;
            }
            let u2: f64 = self.rng.random();
            let radius = (-2.0 * u1.ln()).sqrt();
            let (sin, cos) = (std::f64::consts::TAU * u2).sin_cos();
            self.spare = Some(radius * sin);
            return radius * cos;
        }
    }
}

fn column_has_variance(data: &Array2<f64>, col: usize) -> bool {
    let column = data.column(col);
    let first = column[0];
    column.iter().any(|&v| v != first)
}

const MAX_REDRAWS: usize = 100;

fn experiment_guard(spec: &SimSpec, expected: Experiment) -> Result<()> {
    spec.validate()?;
    if spec.experiment != expected {
        return Err(Error::InvalidConfig(format!(
            "spec is for the {} experiment, not {expected}",
            spec.experiment
        )));
    }
    Ok(())
}

/// Networks whose last node's sample vector is the sum of all the others,
/// making it a planted hub once correlations become distances.
pub fn gen_hub(spec: &SimSpec) -> Result<SimOutput> {
    experiment_guard(spec, Experiment::Hub)?;
    let (k, n) = (spec.sample_len, spec.n_nodes);
    let per_network = (0..spec.n_networks)
        .into_par_iter()
        .map(|t| {
            let mut normals = NormalSource::new(stream_rng(spec.seed, t));
            let mut data = Array2::zeros((k, n));
            let mut redrawn = 0usize;
            for col in 0..n - 1 {
                loop {
                    for row in 0..k {
                        data[[row, col]] = normals.next();
                    }
                    if column_has_variance(&data, col) {
                        break;
                    }
                    redrawn += 1;
                    if redrawn > MAX_REDRAWS {
                        return Err(Error::DegenerateSeries(format!(
                            "network {t} keeps producing zero-variance sample vectors"
                        )));
                    }
                }
            }
            for row in 0..k {
                data[[row, n - 1]] = (0..n - 1).map(|col| data[[row, col]]).sum();
            }
            let corr = correlation_matrix(data.view())?;
            let matrix = correlation_to_distance(&corr)?;
            Ok((matrix, redrawn))
        })
        .collect::<Result<Vec<_>>>()?;
    let regenerated = per_network.iter().map(|(_, r)| r).sum();
    let matrices = per_network.into_iter().map(|(m, _)| m).collect();
    Ok(SimOutput {
        network: DynamicNetwork::new(matrices, None)?,
        regenerated,
    })
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
fn cholesky(a: &Array2<f64>) -> Result<Array2<f64>> {
    let d = a.nrows();
    let mut l = Array2::zeros((d, d));
    for i in 0..d {
        for j in 0..=i {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "matrix is not positive definite (pivot {sum} at {i})"
                    )));
                }
                l[[i, j]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    Ok(l)
}

/// Cholesky with an escalating diagonal shift. Long partial-correlation
/// chains push conditional variances toward machine epsilon, so an exactly
/// positive definite matrix can still present a nonpositive pivot in
/// floating point; the shift stays orders of magnitude below the sampling
/// noise of the experiments.
fn cholesky_jittered(a: &Array2<f64>) -> Result<Array2<f64>> {
    if let Ok(l) = cholesky(a) {
        return Ok(l);
    }
    let mut shifted = a.clone();
    let mut shift = 1e-14;
    while shift <= 1e-6 {
        for i in 0..a.nrows() {
            shifted[[i, i]] = a[[i, i]] + shift;
        }
        if let Ok(l) = cholesky(&shifted) {
            return Ok(l);
        }
        shift *= 100.0;
    }
    cholesky(&shifted)
}

const CORR_CLAMP: f64 = 1.0 - 1e-12;

/// Converts the D-vine partial correlations `pc[i][j] = rho(i, j | i+1..j-1)`
/// into the full correlation matrix.
///
/// Works entirely through the two pairwise recursions that add or remove one
/// conditioning variable at a time, so every intermediate quantity is itself
/// a correlation in (-1, 1). Solving for the same values through the
/// conditional-covariance projection is unstable at this size: conditional
/// variances shrink as products of 1 - p^2 over long chains and fall below
/// rounding noise near 60 nodes.
fn vine_to_correlation(pc: &Array2<f64>) -> Array2<f64> {
    let d = pc.nrows();
    let clamp = |v: f64| v.clamp(-CORR_CLAMP, CORR_CLAMP);
    let mut r = Array2::eye(d);
    // b[[i, m]] holds rho(i, m | m+1..i+s) at the span s of the previous
    // round; chain[[i, m]] holds rho(i, i+s | m..i+s-1) for the current one
    let mut b_prev = Array2::<f64>::zeros((d, d));
    let mut b_cur = Array2::<f64>::zeros((d, d));
    let mut chain = Array2::<f64>::zeros((d, d + 1));
    for s in 1..d {
        for i in 0..d - s {
            let j = i + s;
            let mut a = pc[[i, j]];
            chain[[i, i + 1]] = a;
            for m in i + 1..j {
                let bb = b_prev[[i, m]];
                let pj = pc[[m, j]];
                a = clamp(a * ((1.0 - bb * bb) * (1.0 - pj * pj)).sqrt() + bb * pj);
                chain[[i, m + 1]] = a;
            }
            r[[i, j]] = a;
            r[[j, i]] = a;
        }
        for i in 0..d - s {
            let h = i + s;
            b_cur[[i, h]] = r[[i, h]];
            for m in i + 1..h {
                let aa = chain[[i, m + 1]];
                let ph = pc[[m, h]];
                let denom = ((1.0 - aa * aa) * (1.0 - ph * ph)).sqrt();
                b_cur[[i, m]] = clamp((b_prev[[i, m]] - aa * ph) / denom);
            }
        }
        std::mem::swap(&mut b_prev, &mut b_cur);
    }
    r
}

/// Random correlation matrix from the D-vine construction: each partial
/// correlation, given the nodes strictly between its pair, is drawn as
/// 2 Beta(alpha, alpha) - 1 and the set is propagated to full correlations.
pub fn random_correlation_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    alpha: f64,
) -> Result<Array2<f64>> {
    let beta = Beta::new(alpha, alpha)
        .map_err(|e| Error::InvalidConfig(format!("invalid Beta shape {alpha}: {e}")))?;
    // extreme draws would make conditional variances collapse to rounding
    // noise; keep them strictly inside (-1, 1)
    let mut pc = Array2::zeros((d, d));
    for i in 0..d {
        for j in i + 1..d {
            pc[[i, j]] = (2.0 * beta.sample(rng) - 1.0).clamp(-(1.0 - 1e-9), 1.0 - 1e-9);
        }
    }
    let r = vine_to_correlation(&pc);
    // the exact matrix can sit within rounding distance of singular, so
    // refactoring and rescaling to unit diagonal returns an exact Gram
    // matrix without moving entries beyond that ambiguity
    let l = cholesky_jittered(&r)?;
    let mut g = l.dot(&l.t());
    let scale: Vec<f64> = (0..d).map(|i| g[[i, i]].sqrt()).collect();
    for i in 0..d {
        for j in 0..d {
            g[[i, j]] /= scale[i] * scale[j];
        }
    }
    for i in 0..d {
        g[[i, i]] = 1.0;
    }
    Ok(g)
}

/// Networks of multivariate-normal samples drawn under a fresh random
/// correlation matrix per time step.
pub fn gen_covariance(spec: &SimSpec) -> Result<SimOutput> {
    experiment_guard(spec, Experiment::Covariance)?;
    let (k, n) = (spec.sample_len, spec.n_nodes);
    let matrices = (0..spec.n_networks)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(spec.seed, t);
            let r = random_correlation_matrix(&mut rng, n, spec.alpha)?;
            let l = cholesky_jittered(&r)?;
            let mut normals = NormalSource::new(rng);
            let mut data = Array2::zeros((k, n));
            let mut z = vec![0.0; n];
            for row in 0..k {
                for value in z.iter_mut() {
                    *value = normals.next();
                }
                for col in 0..n {
                    data[[row, col]] = (0..=col).map(|m| l[[col, m]] * z[m]).sum();
                }
            }
            let corr = correlation_matrix(data.view())?;
            correlation_to_distance(&corr)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimOutput {
        network: DynamicNetwork::new(matrices, None)?,
        regenerated: 0,
    })
}

const AR_BURN_IN: usize = 50;

/// One node's sample vector for the AR(1) experiment: `iid_len` white-noise
/// values followed by `ar_len` consecutive values of an AR(1) chain burned
/// in from zero.
fn ar1_column(normals: &mut NormalSource, phi: f64, iid_len: usize, ar_len: usize) -> Vec<f64> {
    let mut column = Vec::with_capacity(iid_len + ar_len);
    for _ in 0..iid_len {
        column.push(normals.next());
    }
    let mut y = 0.0;
    for _ in 0..AR_BURN_IN {
        y = phi * y + normals.next();
    }
    for _ in 0..ar_len {
        y = phi * y + normals.next();
        column.push(y);
    }
    column
}

/// Networks whose node samples mix white noise with an autocorrelated tail:
/// the first half of each vector is standard normal, the second half is an
/// AR(1) chain.
pub fn gen_ar1(spec: &SimSpec) -> Result<SimOutput> {
    experiment_guard(spec, Experiment::Ar1)?;
    let (k, n) = (spec.sample_len, spec.n_nodes);
    let iid_len = k / 2;
    let ar_len = k - iid_len;
    let matrices = (0..spec.n_networks)
        .into_par_iter()
        .map(|t| {
            let mut normals = NormalSource::new(stream_rng(spec.seed, t));
            let mut data = Array2::zeros((k, n));
            for col in 0..n {
                let column = ar1_column(&mut normals, spec.phi, iid_len, ar_len);
                for (row, value) in column.into_iter().enumerate() {
                    data[[row, col]] = value;
                }
            }
            let corr = correlation_matrix(data.view())?;
            correlation_to_distance(&corr)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimOutput {
        network: DynamicNetwork::new(matrices, None)?,
        regenerated: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::{closeness, select_central, EdgeCost};
    use ndarray::array;

    fn entries_of(net: &DynamicNetwork) -> Vec<Vec<f64>> {
        net.matrices()
            .iter()
            .map(|m| m.entries().iter().copied().collect())
            .collect()
    }

    #[test]
    fn spec_validation_rejects_bad_values() {
        let mut spec = SimSpec::hub(1);
        spec.alpha = 0.0;
        assert!(spec.validate().is_err());
        let mut spec = SimSpec::ar1(1);
        spec.phi = 1.0;
        assert!(spec.validate().is_err());
        let mut spec = SimSpec::hub(1);
        spec.n_networks = 0;
        assert!(spec.validate().is_err());
        let mut spec = SimSpec::covariance(1);
        spec.sample_len = 1;
        assert!(spec.validate().is_err());

        let hub_spec = SimSpec::hub(1);
        assert!(gen_ar1(&hub_spec).is_err(), "experiment mismatch must fail");
    }

    #[test]
    fn normal_source_moments() {
        let mut normals = NormalSource::new(ChaCha12Rng::seed_from_u64(5));
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let z = normals.next();
            sum += z;
            sum_sq += z * z;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "variance {var}");
    }

    #[test]
    fn hub_output_shape_range_and_determinism() {
        let spec = SimSpec {
            n_networks: 8,
            n_nodes: 21,
            ..SimSpec::hub(99)
        };
        let out = gen_hub(&spec).unwrap();
        assert_eq!(out.network.len(), 8);
        assert_eq!(out.network.n(), 21);
        assert_eq!(out.network.cap(), 2.0);
        assert_eq!(out.regenerated, 0);
        for m in out.network.matrices() {
            assert!(m
                .entries()
                .iter()
                .all(|&v| (0.0..=2.0).contains(&v) || v == 3.0));
        }
        let again = gen_hub(&spec).unwrap();
        assert_eq!(entries_of(&out.network), entries_of(&again.network));
    }

    #[test]
    fn hub_node_dominates_closeness() {
        let spec = SimSpec::hub(20260822);
        let out = gen_hub(&spec).unwrap();
        let hub = spec.n_nodes - 1;
        let mut wins = 0;
        let mut hub_weight_sum = 0.0;
        let mut hub_weight_count = 0usize;
        let mut other_weight_sum = 0.0;
        let mut other_weight_count = 0usize;
        for m in out.network.matrices() {
            let scores = closeness(m, EdgeCost::default()).unwrap();
            if select_central(&scores).unwrap() == hub {
                wins += 1;
            }
            for i in 0..m.n() {
                for j in (i + 1)..m.n() {
                    if !m.is_edge(i, j) {
                        continue;
                    }
                    if i == hub || j == hub {
                        hub_weight_sum += m.get(i, j);
                        hub_weight_count += 1;
                    } else {
                        other_weight_sum += m.get(i, j);
                        other_weight_count += 1;
                    }
                }
            }
        }
        assert!(
            wins >= 95,
            "hub won closeness in only {wins} of {} networks",
            out.network.len()
        );
        let hub_mean = hub_weight_sum / hub_weight_count as f64;
        let other_mean = other_weight_sum / other_weight_count as f64;
        assert!(
            hub_mean < other_mean,
            "hub mean distance {hub_mean} not below {other_mean}"
        );
    }

    /// Cyclic Jacobi eigenvalue iteration, used only to certify test
    /// matrices; validated below on hand-computed spectra.
    fn jacobi_eigenvalues(a: &Array2<f64>) -> Vec<f64> {
        let mut a = a.clone();
        let d = a.nrows();
        for _sweep in 0..100 {
            let off: f64 = (0..d)
                .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[[i, j]] * a[[i, j]])
                .sum();
            if off.sqrt() < 1e-11 {
                break;
            }
            for p in 0..d - 1 {
                for q in (p + 1)..d {
                    let apq = a[[p, q]];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..d {
                        let (akp, akq) = (a[[k, p]], a[[k, q]]);
                        a[[k, p]] = c * akp - s * akq;
                        a[[k, q]] = s * akp + c * akq;
                    }
                    for k in 0..d {
                        let (apk, aqk) = (a[[p, k]], a[[q, k]]);
                        a[[p, k]] = c * apk - s * aqk;
                        a[[q, k]] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eigen: Vec<f64> = (0..d).map(|i| a[[i, i]]).collect();
        eigen.sort_by(f64::total_cmp);
        eigen
    }

    #[test]
    fn jacobi_oracle_matches_hand_computed_spectra() {
        let eigen = jacobi_eigenvalues(&array![[2.0, 1.0], [1.0, 2.0]]);
        assert!((eigen[0] - 1.0).abs() < 1e-9 && (eigen[1] - 3.0).abs() < 1e-9);
        // eigenvalues of the all-ones 3x3 are {0, 0, 3}
        let eigen = jacobi_eigenvalues(&Array2::from_elem((3, 3), 1.0));
        assert!(eigen[0].abs() < 1e-9 && eigen[1].abs() < 1e-9);
        assert!((eigen[2] - 3.0).abs() < 1e-9);
        let diag = Array2::from_diag(&ndarray::arr1(&[4.0, -2.0, 0.5]));
        let eigen = jacobi_eigenvalues(&diag);
        assert!((eigen[0] + 2.0).abs() < 1e-12);
        assert!((eigen[1] - 0.5).abs() < 1e-12);
        assert!((eigen[2] - 4.0).abs() < 1e-12);
    }

    fn cholesky_solve(l: &Array2<f64>, b: &[f64]) -> Vec<f64> {
        let d = b.len();
        let mut y = vec![0.0; d];
        for i in 0..d {
            let mut sum = b[i];
            for k in 0..i {
                sum -= l[[i, k]] * y[k];
            }
            y[i] = sum / l[[i, i]];
        }
        let mut x = vec![0.0; d];
        for i in (0..d).rev() {
            let mut sum = y[i];
            for k in (i + 1)..d {
                sum -= l[[k, i]] * x[k];
            }
            x[i] = sum / l[[i, i]];
        }
        x
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Independent partials-to-correlations oracle through the
    /// conditional-covariance projection: r_ij = r1' R3^-1 r3 +
    /// p * sqrt((1 - r1' R3^-1 r1)(1 - r3' R3^-1 r3)) over the block R3 of
    /// nodes strictly between i and j. Only trustworthy at small sizes
    /// where the blocks stay well conditioned.
    fn projection_vine(pc: &Array2<f64>) -> Array2<f64> {
        let d = pc.nrows();
        let mut r = Array2::eye(d);
        for i in 0..d.saturating_sub(1) {
            r[[i, i + 1]] = pc[[i, i + 1]];
            r[[i + 1, i]] = pc[[i, i + 1]];
        }
        for lag in 2..d {
            for i in 0..(d - lag) {
                let j = i + lag;
                let mid: Vec<usize> = (i + 1..j).collect();
                let m = mid.len();
                let mut r3 = Array2::zeros((m, m));
                for (a, &ia) in mid.iter().enumerate() {
                    for (b, &ib) in mid.iter().enumerate() {
                        r3[[a, b]] = r[[ia, ib]];
                    }
                }
                let r1: Vec<f64> = mid.iter().map(|&k| r[[i, k]]).collect();
                let rj: Vec<f64> = mid.iter().map(|&k| r[[j, k]]).collect();
                let l = cholesky(&r3).unwrap();
                let x1 = cholesky_solve(&l, &r1);
                let x3 = cholesky_solve(&l, &rj);
                let base = dot(&r1, &x3);
                let v1 = (1.0 - dot(&r1, &x1)).max(0.0);
                let v3 = (1.0 - dot(&rj, &x3)).max(0.0);
                let value = base + pc[[i, j]] * (v1 * v3).sqrt();
                r[[i, j]] = value;
                r[[j, i]] = value;
            }
        }
        r
    }

    #[test]
    fn recursion_matches_projection_oracle_at_small_sizes() {
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        for &d in &[2usize, 3, 4, 5, 8] {
            for _ in 0..20 {
                let mut pc = Array2::zeros((d, d));
                for i in 0..d {
                    for j in i + 1..d {
                        pc[[i, j]] = rng.random_range(-0.9..0.9);
                    }
                }
                let fast = vine_to_correlation(&pc);
                let oracle = projection_vine(&pc);
                for i in 0..d {
                    for j in 0..d {
                        assert!(
                            (fast[[i, j]] - oracle[[i, j]]).abs() < 1e-10,
                            "d={d} entry ({i},{j}): {} vs {}",
                            fast[[i, j]],
                            oracle[[i, j]]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn vine_small_matrices_are_strictly_positive_definite() {
        let mut rng = ChaCha12Rng::seed_from_u64(71);
        for _ in 0..50 {
            let r = random_correlation_matrix(&mut rng, 8, 1.0).unwrap();
            let min_eigen = jacobi_eigenvalues(&r)[0];
            assert!(min_eigen > 0.0, "min eigenvalue {min_eigen}");
        }
    }

    /// At 60 nodes the exact matrix's smallest eigenvalues sit near machine
    /// epsilon, since conditional variances shrink as products of 1 - p^2
    /// over long chains, so certification allows rounding-level negativity.
    #[test]
    fn vine_large_matrices_are_psd_within_rounding() {
        let mut rng = ChaCha12Rng::seed_from_u64(71);
        for _ in 0..20 {
            let r = random_correlation_matrix(&mut rng, 60, 1.0).unwrap();
            for i in 0..60 {
                assert!((r[[i, i]] - 1.0).abs() < 1e-12);
                for j in 0..60 {
                    assert_eq!(r[[i, j]], r[[j, i]]);
                    assert!(r[[i, j]].abs() <= 1.0 + 1e-12);
                }
            }
            let min_eigen = jacobi_eigenvalues(&r)[0];
            assert!(min_eigen > -1e-10, "min eigenvalue {min_eigen}");
        }
    }

    #[test]
    fn large_alpha_concentrates_correlations_near_zero() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let d = 30;
        let r = random_correlation_matrix(&mut rng, d, 100.0).unwrap();
        let mut total = 0.0;
        let mut count = 0;
        for i in 0..d {
            for j in (i + 1)..d {
                total += r[[i, j]].abs();
                count += 1;
            }
        }
        assert!(total / (count as f64) < 0.15);

        let spec = SimSpec {
            n_networks: 5,
            n_nodes: 20,
            sample_len: 200,
            alpha: 100.0,
            ..SimSpec::covariance(13)
        };
        let out = gen_covariance(&spec).unwrap();
        let root2 = 2.0_f64.sqrt();
        let mut gap = 0.0;
        let mut edges = 0;
        for m in out.network.matrices() {
            for i in 0..m.n() {
                for j in (i + 1)..m.n() {
                    gap += (m.get(i, j) - root2).abs();
                    edges += 1;
                }
            }
        }
        assert!(gap / (edges as f64) < 0.15, "distances not near sqrt(2)");
    }

    #[test]
    fn covariance_output_shape_and_determinism() {
        let spec = SimSpec {
            n_networks: 6,
            n_nodes: 15,
            ..SimSpec::covariance(3)
        };
        let out = gen_covariance(&spec).unwrap();
        assert_eq!(out.network.len(), 6);
        assert_eq!(out.network.n(), 15);
        assert_eq!(out.network.cap(), 2.0);
        let again = gen_covariance(&spec).unwrap();
        assert_eq!(entries_of(&out.network), entries_of(&again.network));
    }

    #[test]
    fn ar1_pooled_lag1_autocorrelation_near_phi() {
        let mut normals = NormalSource::new(ChaCha12Rng::seed_from_u64(8));
        let (iid_len, ar_len) = (10, 10);
        let mut num = 0.0;
        let mut den = 0.0;
        for _ in 0..2000 {
            let column = ar1_column(&mut normals, 0.7, iid_len, ar_len);
            let segment = &column[iid_len..];
            for t in 0..segment.len() - 1 {
                num += segment[t] * segment[t + 1];
                den += segment[t] * segment[t];
            }
        }
        let rho = num / den;
        assert!((rho - 0.7).abs() < 0.1, "pooled autocorrelation {rho}");
    }

    #[test]
    fn ar1_output_shape_and_determinism() {
        let spec = SimSpec {
            n_networks: 5,
            n_nodes: 30,
            ..SimSpec::ar1(17)
        };
        let out = gen_ar1(&spec).unwrap();
        assert_eq!(out.network.len(), 5);
        assert_eq!(out.network.n(), 30);
        for m in out.network.matrices() {
            assert!(m
                .entries()
                .iter()
                .all(|&v| (0.0..=2.0).contains(&v) || v == 3.0));
        }
        let again = gen_ar1(&spec).unwrap();
        assert_eq!(entries_of(&out.network), entries_of(&again.network));
    }

    #[test]
    fn generate_dispatches_on_experiment() {
        let spec = SimSpec {
            n_networks: 2,
            n_nodes: 8,
            ..SimSpec::hub(4)
        };
        let out = generate(&spec).unwrap();
        assert_eq!(out.network.len(), 2);
    }
}
