//! Simulated standard and ancilla-assisted process tomography.
//!
//! Both protocols reduce to `out = chi~ * in` for a known 4x4 input matrix:
//! the Bloch 4-vectors of four probe states (standard) or the correlation
//! matrix of one system-ancilla state (ancilla-assisted). Measurement error is
//! modelled as additive Gaussian noise on the observed output matrix, and the
//! transfer matrix is recovered by plain linear inversion.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::channels::{chi_from_chi_tilde, Channel, ChiMatrix, ChiTilde};
use crate::error::{Error, Result};
use crate::faithfulness::condition_number_with_tol;
use crate::numeric::{determinant, frobenius_norm, invert, svd, RealMatrix};
use crate::pauli::{pauli, trace_product};
use crate::rng::stream_rng;
use crate::states::{rho_from_tau, tau_from_rho, BlochVector, DensityMatrix, TauMatrix};

/// Smallest `|det(a_in)|` accepted for a standard tomography input set.
pub const MIN_SQPT_DET: f64 = 1e-6;

/// Additive measurement noise on an observed output matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseModel {
    None,
    /// I.i.d. `N(0, sigma)` on every entry except those fixed by normalization.
    Gaussian {
        sigma: f64,
        seed: u64,
        stream: u64,
    },
}

impl NoiseModel {
    pub fn gaussian(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma {sigma} must be finite and nonnegative"
            )));
        }
        Ok(NoiseModel::Gaussian {
            sigma,
            seed,
            stream: 0,
        })
    }

    /// Same model on an independent random stream (one per run).
    pub fn for_run(self, run: u64) -> Self {
        match self {
            NoiseModel::None => NoiseModel::None,
            NoiseModel::Gaussian { sigma, seed, .. } => NoiseModel::Gaussian {
                sigma,
                seed,
                stream: run,
            },
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            NoiseModel::None => 0.0,
            NoiseModel::Gaussian { sigma, .. } => *sigma,
        }
    }
}

/// Returns `(observed, delta)` with `observed = exact + delta`; entries where
/// `fixed(i, j)` holds are left exact.
fn perturb(
    exact: &RealMatrix,
    noise: NoiseModel,
    fixed: impl Fn(usize, usize) -> bool,
) -> Result<(RealMatrix, RealMatrix)> {
    let mut delta = RealMatrix::zeros(exact.rows(), exact.cols());
    if let NoiseModel::Gaussian {
        sigma,
        seed,
        stream,
    } = noise
    {
        if sigma > 0.0 {
            let normal =
                Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let mut rng = stream_rng(seed, stream);
            for i in 0..exact.rows() {
                for j in 0..exact.cols() {
                    // Draw for every entry so the stream layout does not depend on `fixed`.
                    let x = normal.sample(&mut rng);
                    if !fixed(i, j) {
                        delta[(i, j)] = x;
                    }
                }
            }
        }
    }
    Ok((exact + &delta, delta))
}

/// Observed correlation matrix of a two-qubit state; `(0, 0)` stays exactly 1.
pub fn simulate_measurement(rho: &DensityMatrix, noise: NoiseModel) -> Result<RealMatrix> {
    let tau = tau_from_rho(rho)?;
    let mut observed = perturb(tau.matrix(), noise, |i, j| i == 0 && j == 0)?.0;
    observed[(0, 0)] = 1.0;
    Ok(observed)
}

/// Four single-qubit probe states and their Bloch 4-vector matrix.
#[derive(Debug, Clone)]
pub struct SqptInputSet {
    states: [DensityMatrix; 4],
    a_in: RealMatrix,
}

fn bloch4(rho: &DensityMatrix) -> [f64; 4] {
    std::array::from_fn(|i| trace_product(rho.matrix(), pauli(i)).re)
}

impl SqptInputSet {
    pub fn new(states: [DensityMatrix; 4]) -> Result<Self> {
        if let Some(bad) = states.iter().find(|s| s.dim() != 2) {
            return Err(Error::dims("single-qubit probe states", bad.dim()));
        }
        let cols: Vec<[f64; 4]> = states.iter().map(bloch4).collect();
        let a_in = RealMatrix::from_fn(4, 4, |i, l| cols[l][i]);
        let det_abs = determinant(&a_in)?.abs();
        if det_abs <= MIN_SQPT_DET {
            return Err(Error::SingularMatrix {
                det_abs,
                tol: MIN_SQPT_DET,
            });
        }
        Ok(SqptInputSet { states, a_in })
    }

    /// `{|0>, |1>, |+>, |+i>}`.
    pub fn canonical() -> Self {
        let dirs = [
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
        ];
        let states = dirs.map(|d| {
            BlochVector {
                x: d[0],
                y: d[1],
                z: d[2],
            }
            .density_matrix()
        });
        Self::new(states).expect("canonical probes are linearly independent")
    }

    pub fn states(&self) -> &[DensityMatrix; 4] {
        &self.states
    }

    pub fn a_in(&self) -> &RealMatrix {
        &self.a_in
    }
}

/// Outcome of one simulated tomography run.
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionResult {
    pub chi_tilde_hat: ChiTilde,
    #[serde(serialize_with = "serialize_chi")]
    pub chi_hat: ChiMatrix,
    pub tau_out_observed: RealMatrix,
    pub tau_out_exact: RealMatrix,
    pub delta_tau_out: RealMatrix,
    /// `||chi~_hat - chi~_true||_F`.
    pub error_vs_truth: f64,
    /// Condition number of the inverted input matrix.
    pub kappa_used: f64,
    /// `(||d chi~||_F / ||chi~||_F) / (||d tau_out||_F / ||tau_out||_F)`; absent without noise.
    pub error_ratio: Option<f64>,
}

fn serialize_chi<S: serde::Serializer>(
    chi: &ChiMatrix,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let m = chi.matrix();
    let rows: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    rows.serialize(s)
}

fn finish(
    truth: &ChiTilde,
    input: &RealMatrix,
    input_inverse: &RealMatrix,
    exact: RealMatrix,
    observed: RealMatrix,
    delta: RealMatrix,
) -> Result<ReconstructionResult> {
    let chi_tilde_hat = ChiTilde::new(&observed * input_inverse)?;
    let chi_hat = chi_from_chi_tilde(&chi_tilde_hat)?;
    let err = chi_tilde_hat.matrix() - truth.matrix();
    let error_vs_truth = frobenius_norm(&err);
    let delta_norm = frobenius_norm(&delta);
    let error_ratio = (delta_norm > 0.0).then(|| {
        (error_vs_truth / frobenius_norm(truth.matrix())) / (delta_norm / frobenius_norm(&exact))
    });
    let s = svd(input);
    Ok(ReconstructionResult {
        chi_tilde_hat,
        chi_hat,
        tau_out_observed: observed,
        tau_out_exact: exact,
        delta_tau_out: delta,
        error_vs_truth,
        kappa_used: s.max() / s.min(),
        error_ratio,
    })
}

/// Standard process tomography: `chi~ = a_out a_in^-1`.
pub fn sqpt(
    ch: &Channel,
    inputs: &SqptInputSet,
    noise: NoiseModel,
) -> Result<ReconstructionResult> {
    let outs: Vec<[f64; 4]> = inputs
        .states()
        .iter()
        .map(|s| ch.apply(s).map(|o| bloch4(&o)))
        .collect::<Result<_>>()?;
    let exact = RealMatrix::from_fn(4, 4, |i, l| outs[l][i]);
    let (observed, delta) = perturb(&exact, noise, |i, _| i == 0)?;
    let inv = invert(inputs.a_in(), MIN_SQPT_DET)?;
    finish(&ch.chi_tilde(), inputs.a_in(), &inv, exact, observed, delta)
}

/// Ancilla-assisted tomography: prepare the state of `tau_in`, apply
/// `E (x) I`, measure `tau_out`, and return `chi~ = tau_out tau_in^-1`.
///
/// Fails with `SingularMatrix` when `|det(tau_in)| <= tol`, i.e. when the
/// state is not faithful.
pub fn aapt(
    tau_in: &TauMatrix,
    ch: &Channel,
    noise: NoiseModel,
    tol: f64,
) -> Result<ReconstructionResult> {
    let inv = invert(tau_in.matrix(), tol)?;
    let rho = rho_from_tau(tau_in)?;
    let out = ch.apply(&rho)?;
    let exact = tau_from_rho(&out)?.matrix().clone();
    let (observed, delta) = perturb(&exact, noise, |i, j| i == 0 && j == 0)?;
    let mut res = finish(
        &ch.chi_tilde(),
        tau_in.matrix(),
        &inv,
        exact,
        observed,
        delta,
    )?;
    res.kappa_used = condition_number_with_tol(tau_in, 0.0);
    Ok(res)
}

/// Aggregate error over repeated runs against a known transfer matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorStats {
    pub runs: usize,
    /// Mean of `||chi~_hat - chi~||_F / 4`.
    pub mean_chi_error: f64,
    /// Mean of `||d tau_out||_F / 4`.
    pub mean_tau_error: f64,
    /// Mean relative-error ratio over runs with nonzero noise.
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

pub fn error_stats(truth: &ChiTilde, runs: &[ReconstructionResult]) -> Result<ErrorStats> {
    if runs.is_empty() {
        return Err(Error::EmptyInput("reconstruction runs"));
    }
    let n = runs.len() as f64;
    let mean_chi_error = runs
        .iter()
        .map(|r| frobenius_norm(&(r.chi_tilde_hat.matrix() - truth.matrix())) / 4.0)
        .sum::<f64>()
        / n;
    let mean_tau_error = runs
        .iter()
        .map(|r| frobenius_norm(&r.delta_tau_out) / 4.0)
        .sum::<f64>()
        / n;
    let ratios: Vec<f64> = runs.iter().filter_map(|r| r.error_ratio).collect();
    let (mean_ratio, max_ratio) = if ratios.is_empty() {
        (None, None)
    } else {
        (
            Some(ratios.iter().sum::<f64>() / ratios.len() as f64),
            Some(ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        )
    };
    Ok(ErrorStats {
        runs: runs.len(),
        mean_chi_error,
        mean_tau_error,
        mean_ratio,
        max_ratio,
    })
}
