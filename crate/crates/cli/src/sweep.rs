//! Monte Carlo sweeps over state families.
//!
//! Sample `i` draws everything it needs from its own counter-based stream
//! `(seed, i)`, so the output does not depend on thread scheduling.

use std::io::Write;

use aapt_core::channels::{random_channel, Channel, NamedChannel};
use aapt_core::faithfulness::FaithfulnessReport;
use aapt_core::numeric::{RealMatrix, DEFAULT_SINGULAR_TOL};
use aapt_core::rng::stream_rng;
use aapt_core::states::{
    concurrence_pure, random_mixed, random_pure, random_separable, rho_from_tau,
    separable_from_spec, tau_from_rho, werner_state, BellKind, DensityMatrix, TauMatrix,
};
use aapt_core::tomography::{aapt, NoiseModel};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 8] = [
    "sample",
    "family",
    "sinisterness",
    "concurrence",
    "kappa",
    "kappa_lower_bound",
    "error_ratio",
    "reconstruction_error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateFamily {
    Pure,
    Separable,
    Mixed,
    WernerGrid,
    XGrid,
}

impl StateFamily {
    pub fn name(self) -> &'static str {
        match self {
            StateFamily::Pure => "pure",
            StateFamily::Separable => "separable",
            StateFamily::Mixed => "mixed",
            StateFamily::WernerGrid => "werner-grid",
            StateFamily::XGrid => "x-grid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelSource {
    /// A fresh random channel per sample.
    Random,
    Named(NamedChannel),
}

fn default_channel() -> ChannelSource {
    ChannelSource::Named(NamedChannel::Depolarizing { p: 0.3 })
}

fn default_tol() -> f64 {
    DEFAULT_SINGULAR_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    pub state_family: StateFamily,
    pub sample_count: usize,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default = "default_channel")]
    pub channel: ChannelSource,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.sample_count == 0 {
            return Err(CliError::Usage("sample_count must be at least 1".into()));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(CliError::Usage(format!(
                "sigma {} must be >= 0",
                self.sigma
            )));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::Usage(format!("tol {} must be >= 0", self.tol)));
        }
        if let ChannelSource::Named(n) = &self.channel {
            n.build()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sample: usize,
    pub family: StateFamily,
    pub sinisterness: f64,
    pub concurrence: Option<f64>,
    pub kappa: f64,
    pub kappa_lower_bound: f64,
    pub error_ratio: Option<f64>,
    pub reconstruction_error: Option<f64>,
}

/// Shortest round-trip decimal; infinities as `inf`.
pub fn format_float(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

impl SweepRow {
    pub fn record(&self) -> [String; 8] {
        [
            self.sample.to_string(),
            self.family.name().to_string(),
            format_float(self.sinisterness),
            format_opt(self.concurrence),
            format_float(self.kappa),
            format_float(self.kappa_lower_bound),
            format_opt(self.error_ratio),
            format_opt(self.reconstruction_error),
        ]
    }
}

/// Correlation matrices of the four Bell states.
fn bell_taus() -> [[f64; 3]; 4] {
    [
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0],
    ]
}

/// All weight vectors `k / r` with `k` summing to `r`, in lexicographic order.
fn barycentric_lattice(r: usize) -> Vec<[usize; 4]> {
    let mut pts = Vec::new();
    for a in 0..=r {
        for b in 0..=r - a {
            for c in 0..=r - a - b {
                pts.push([a, b, c, r - a - b - c]);
            }
        }
    }
    pts
}

/// Diagonal `(s1, s2, s3)` of the `index`-th of `count` points spread
/// evenly over the smallest barycentric lattice on the Bell tetrahedron with
/// at least `count` points.
pub fn x_grid_point(index: usize, count: usize) -> [f64; 3] {
    let mut r = 0;
    while (r + 1) * (r + 2) * (r + 3) / 6 < count {
        r += 1;
    }
    let lattice = barycentric_lattice(r);
    let k = index * lattice.len() / count;
    let w = lattice[k];
    let taus = bell_taus();
    std::array::from_fn(|i| {
        if r == 0 {
            return taus[3][i];
        }
        (0..4).map(|n| w[n] as f64 * taus[n][i]).sum::<f64>() / r as f64
    })
}

/// `p` for the `index`-th of `count` evenly spaced Werner parameters in `[0, 1]`.
pub fn werner_grid_point(index: usize, count: usize) -> f64 {
    if count == 1 {
        1.0
    } else {
        index as f64 / (count - 1) as f64
    }
}

struct Sample {
    rho: DensityMatrix,
    pure: bool,
}

fn draw_state(cfg: &SweepConfig, index: usize, rng: &mut impl Rng) -> CliResult<Sample> {
    let sample = match cfg.state_family {
        StateFamily::Pure => Sample {
            rho: random_pure(rng),
            pure: true,
        },
        StateFamily::Mixed => Sample {
            rho: random_mixed(rng),
            pure: false,
        },
        StateFamily::Separable => Sample {
            rho: separable_from_spec(&random_separable(rng))?,
            pure: false,
        },
        StateFamily::WernerGrid => {
            let p = werner_grid_point(index, cfg.sample_count);
            Sample {
                rho: werner_state(p, BellKind::PhiPlus)?,
                pure: p == 1.0,
            }
        }
        StateFamily::XGrid => {
            let s = x_grid_point(index, cfg.sample_count);
            let tau = TauMatrix::new(RealMatrix::from_diag(&[1.0, s[0], s[1], s[2]]))?;
            Sample {
                rho: rho_from_tau(&tau)?,
                pure: false,
            }
        }
    };
    Ok(sample)
}

pub fn evaluate_sample(cfg: &SweepConfig, index: usize) -> CliResult<SweepRow> {
    let mut rng = stream_rng(cfg.seed, index as u64);
    let sample = draw_state(cfg, index, &mut rng)?;
    let tau = tau_from_rho(&sample.rho)?;
    let report = FaithfulnessReport::analyze(&tau, cfg.tol)?;
    let concurrence = if sample.pure {
        Some(concurrence_pure(&sample.rho)?)
    } else {
        None
    };
    let channel: Channel = match &cfg.channel {
        ChannelSource::Random => random_channel(&mut rng),
        ChannelSource::Named(n) => n.build()?,
    };
    let noise_seed: u64 = rng.random();
    let (error_ratio, reconstruction_error) = if report.faithful {
        let noise = NoiseModel::gaussian(cfg.sigma, noise_seed)?;
        let r = aapt(&tau, &channel, noise, cfg.tol)?;
        (r.error_ratio, Some(r.error_vs_truth))
    } else {
        (None, None)
    };
    Ok(SweepRow {
        sample: index,
        family: cfg.state_family,
        sinisterness: report.sinisterness,
        concurrence,
        kappa: report.kappa,
        kappa_lower_bound: report.kappa_lower_bound,
        error_ratio,
        reconstruction_error,
    })
}

/// Evaluates every sample in parallel; rows come back in sample order.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    (0..cfg.sample_count)
        .into_par_iter()
        .map(|i| evaluate_sample(cfg, i))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
