//! JSON file formats for states and channels.
//!
//! State files:
//!
//! ```json
//! {"kind": "bell", "which": "phi+"}
//! {"kind": "werner", "p": 0.3333333333333333, "which": "phi+"}
//! {"kind": "x", "s": [0.3333333333333333, 0.3333333333333333, 0.3333333333333333]}
//! {"kind": "separable", "weights": [...4], "system": [[x, y, z], ...4], "ancilla": [[x, y, z], ...4]}
//! {"kind": "tau", "tau": [[...4], ...4]}
//! {"kind": "raw", "matrix": [[[re, im], ...4], ...4]}
//! [[[re, im], ...4], ...4]
//! ```
//!
//! Channel files:
//!
//! ```json
//! {"kind": "depolarizing", "p": 0.3}
//! {"kraus": [[[[re, im], [re, im]], [[re, im], [re, im]]], ...]}
//! ```
//!
//! Every parser validates physicality: states must be density matrices and
//! Kraus sets must be complete.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{Channel, NamedChannel};
use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, RealMatrix};
use crate::states::{
    bell_state, rho_from_tau, separable_from_spec, werner_state, x_state, BellKind, BlochVector,
    DensityMatrix, SeparableSpec, TauMatrix,
};

/// Complex matrix as rows of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSpec {
    Bell {
        #[serde(default)]
        which: BellKind,
    },
    Werner {
        p: f64,
        #[serde(default)]
        which: BellKind,
    },
    X {
        s: [f64; 3],
    },
    Separable {
        weights: [f64; 4],
        system: [BlochVector; 4],
        ancilla: [BlochVector; 4],
    },
    Tau {
        tau: Vec<Vec<f64>>,
    },
    Raw {
        matrix: ComplexRows,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Spec(Box<StateSpec>),
    Bare(ComplexRows),
}

pub fn complex_from_rows(rows: &ComplexRows) -> Result<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse("ragged complex matrix".into()));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    ComplexMatrix::from_row_major(r, c, data)
}

pub fn complex_to_rows(m: &ComplexMatrix) -> ComplexRows {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl StateSpec {
    /// Builds and validates the two-qubit state.
    pub fn build(&self) -> Result<DensityMatrix> {
        let rho = match self {
            StateSpec::Bell { which } => bell_state(*which),
            StateSpec::Werner { p, which } => werner_state(*p, *which)?,
            StateSpec::X { s } => x_state(*s)?,
            StateSpec::Separable {
                weights,
                system,
                ancilla,
            } => separable_from_spec(&SeparableSpec::new(*weights, *system, *ancilla)?)?,
            StateSpec::Tau { tau } => {
                let t = TauMatrix::new(RealMatrix::from_rows(tau)?)
                    .map_err(|e| Error::NotAState(e.to_string()))?;
                rho_from_tau(&t)?
            }
            StateSpec::Raw { matrix } => DensityMatrix::new(complex_from_rows(matrix)?)?,
        };
        if rho.dim() != 4 {
            return Err(Error::dims("two-qubit state", rho.dim()));
        }
        Ok(rho)
    }
}

impl StateFile {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateFile::Spec(s) => s.build(),
            StateFile::Bare(rows) => StateSpec::Raw {
                matrix: rows.clone(),
            }
            .build(),
        }
    }
}

pub fn parse_state(json: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.build()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelFile {
    Named(NamedChannel),
    Kraus { kraus: Vec<ComplexRows> },
}

impl ChannelFile {
    pub fn build(&self) -> Result<Channel> {
        match self {
            ChannelFile::Named(n) => n.build(),
            ChannelFile::Kraus { kraus } => {
                let ops = kraus
                    .iter()
                    .map(complex_from_rows)
                    .collect::<Result<Vec<_>>>()?;
                Channel::new(ops)
            }
        }
    }
}

pub fn parse_channel(json: &str) -> Result<Channel> {
    let file: ChannelFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.build()
}
