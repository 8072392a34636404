//! Subcommand implementations. Each returns the text to emit and an exit code.

use std::fs;
use std::path::Path;

use aapt_core::channels::{chi_from_chi_tilde, Channel, ChiTilde};
use aapt_core::faithfulness::FaithfulnessReport;
use aapt_core::formats::{complex_to_rows, ChannelFile, StateFile, StateSpec};
use aapt_core::geometry::{appendix_a_scaling, tetra_optimal_spec};
use aapt_core::numeric::{determinant, RealMatrix};
use aapt_core::states::{tau_from_rho, BellKind, DensityMatrix};
use aapt_core::tomography::{aapt, error_stats, NoiseModel};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::sweep::{format_float, run_sweep, write_csv, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNFAITHFUL: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            code: EXIT_OK,
            output,
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_error(path: &Path, message: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

pub fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = read(path)?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
    file.build().map_err(|e| input_error(path, e))
}

pub fn load_channel(path: &Path) -> CliResult<Channel> {
    let text = read(path)?;
    let file: ChannelFile = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
    file.build().map_err(|e| input_error(path, e))
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Faithfulness report for a state file; exit 2 when the state is unfaithful.
pub fn analyze(state: &Path, tol: f64) -> CliResult<Outcome> {
    let rho = load_state(state)?;
    let tau = tau_from_rho(&rho)?;
    let report = FaithfulnessReport::analyze(&tau, tol)?;
    let code = if report.faithful {
        EXIT_OK
    } else {
        EXIT_UNFAITHFUL
    };
    Ok(Outcome {
        code,
        output: to_json(&report)?,
    })
}

#[derive(Debug, Clone, Serialize)]
struct RunSummary {
    run: u64,
    error_vs_truth: f64,
    tau_error: f64,
    error_ratio: Option<f64>,
}

/// Repeated noisy AAPT runs of `channel` driven by `state`.
pub fn tomography(
    state: &Path,
    channel: &Path,
    sigma: f64,
    seed: u64,
    runs: u64,
    tol: f64,
) -> CliResult<Outcome> {
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let rho = load_state(state)?;
    let ch = load_channel(channel)?;
    let tau = tau_from_rho(&rho)?;
    let det_abs = determinant(tau.matrix())?.abs();
    if det_abs <= tol {
        return Err(CliError::Unfaithful { det_abs, tol });
    }
    let report = FaithfulnessReport::analyze(&tau, tol)?;
    let noise = NoiseModel::gaussian(sigma, seed)?;
    let results = (0..runs)
        .into_par_iter()
        .map(|run| aapt(&tau, &ch, noise.for_run(run), tol))
        .collect::<Result<Vec<_>, _>>()?;
    let truth = ch.chi_tilde();
    let stats = error_stats(&truth, &results)?;

    let mut mean = RealMatrix::zeros(4, 4);
    for r in &results {
        mean = &mean + r.chi_tilde_hat.matrix();
    }
    let estimate = ChiTilde::new(mean.scale(1.0 / runs as f64))?;
    let chi_estimate = chi_from_chi_tilde(&estimate)?;
    let per_run: Vec<RunSummary> = results
        .iter()
        .enumerate()
        .map(|(k, r)| RunSummary {
            run: k as u64,
            error_vs_truth: r.error_vs_truth,
            tau_error: aapt_core::numeric::frobenius_norm(&r.delta_tau_out),
            error_ratio: r.error_ratio,
        })
        .collect();
    let body = json!({
        "sinisterness": report.sinisterness,
        "kappa": report.kappa,
        "sigma": sigma,
        "seed": seed,
        "runs": runs,
        "chi_tilde_true": truth,
        "chi_tilde_estimate": estimate,
        "chi_estimate": complex_to_rows(chi_estimate.matrix()),
        "summary": stats,
        "per_run": per_run,
    });
    Ok(Outcome::ok(to_json(&body)?))
}

pub fn load_sweep_config(path: &Path) -> CliResult<SweepConfig> {
    let text = read(path)?;
    let cfg: SweepConfig = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
    Ok(cfg)
}

/// Runs a sweep and returns its CSV.
pub fn sweep(cfg: &SweepConfig) -> CliResult<Outcome> {
    let rows = run_sweep(cfg)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    Ok(Outcome::ok(
        String::from_utf8(buf).expect("CSV output is UTF-8"),
    ))
}

/// CSV table `qubits,m,kappa,log10_det_abs` for `N = 1..=max_n`.
pub fn scaling(max_n: u32) -> CliResult<Outcome> {
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["qubits", "m", "kappa", "log10_det_abs"])?;
    for n in 1..=max_n {
        let r = appendix_a_scaling(n)?;
        w.write_record([
            r.qubits.to_string(),
            r.m.to_string(),
            format_float(r.kappa),
            format_float(r.log10_det_abs),
        ])?;
    }
    let buf = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(Outcome::ok(
        String::from_utf8(buf).expect("CSV output is UTF-8"),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConstructKind {
    /// Equal mixture over a regular tetrahedron and its mirror image.
    TetraOptimal,
    Werner,
    X,
    Bell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructParams {
    pub kind: ConstructKind,
    pub p: Option<f64>,
    pub s: Option<Vec<f64>>,
    pub which: BellKind,
    /// Same orientation on both sides (`det = +1/27`) instead of mirrored.
    pub same_orientation: bool,
}

pub fn construct_spec(params: &ConstructParams) -> CliResult<StateSpec> {
    let spec = match params.kind {
        ConstructKind::TetraOptimal => {
            let s = tetra_optimal_spec(!params.same_orientation);
            StateSpec::Separable {
                weights: s.weights,
                system: s.system_vertices,
                ancilla: s.ancilla_vertices,
            }
        }
        ConstructKind::Werner => StateSpec::Werner {
            p: params
                .p
                .ok_or_else(|| CliError::Usage("--p is required for werner".into()))?,
            which: params.which,
        },
        ConstructKind::X => {
            let s = params
                .s
                .as_ref()
                .ok_or_else(|| CliError::Usage("--s is required for x".into()))?;
            let s: [f64; 3] = s
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage(format!("--s takes 3 values, got {}", s.len())))?;
            StateSpec::X { s }
        }
        ConstructKind::Bell => StateSpec::Bell {
            which: params.which,
        },
    };
    spec.build()?;
    Ok(spec)
}

/// Emits a validated state file.
pub fn construct(params: &ConstructParams) -> CliResult<Outcome> {
    Ok(Outcome::ok(to_json(&construct_spec(params)?)?))
}
