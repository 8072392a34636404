//! Two-qubit states and their Pauli correlation matrices.
//!
//! A two-qubit density matrix `rho` (system first, ancilla second) is
//! represented by the real 4x4 matrix `tau[i][j] = Tr[rho (s_i (x) s_j)]`, with
//! inverse `rho = (1/4) sum_ij tau[i][j] s_i (x) s_j`. Row 0 holds the ancilla
//! Bloch vector, column 0 the system Bloch vector, and `tau[0][0] = 1`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{hermitian_eigenvalues, ComplexMatrix, RealMatrix};
use crate::pauli::{pauli, pauli_pair, trace_product};

/// Maximum deviation from Hermiticity accepted for a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;
/// Slack on Bloch-vector norms and correlation entries.
pub const NORM_TOL: f64 = 1e-10;
/// Purity slack for pure-state operations.
pub const PURITY_TOL: f64 = 1e-8;

/// Validated density matrix on `n` qubits.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.rows();
        if !matrix.is_square() || n == 0 || !n.is_power_of_two() {
            return Err(Error::dims(
                "square 2^n x 2^n matrix",
                format!("{}x{}", n, matrix.cols()),
            ));
        }
        let herm = matrix.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotAState(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotAState(format!(
                "trace {}{:+}i is not 1",
                tr.re, tr.im
            )));
        }
        let min_eig = hermitian_eigenvalues(&matrix)?[0];
        if min_eig < PSD_TOL {
            return Err(Error::NotAState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// `|psi><psi|` for a (not necessarily normalized) amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm = amplitudes
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "zero or non-finite state vector".into(),
            ));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&psi))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.matrix)
    }
}

/// Pauli correlation matrix of a bipartite state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealMatrix", into = "RealMatrix")]
pub struct TauMatrix(RealMatrix);

impl TauMatrix {
    /// Requires a square matrix with `tau[0][0] = 1` and every entry in `[-1, 1]`.
    pub fn new(m: RealMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() < 2 {
            return Err(Error::dims(
                "square correlation matrix",
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        if (m[(0, 0)] - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "tau[0][0] = {} must be 1",
                m[(0, 0)]
            )));
        }
        if let Some(x) = m.as_slice().iter().find(|x| x.abs() > 1.0 + NORM_TOL) {
            return Err(Error::InvalidParameter(format!(
                "correlation entry {x} outside [-1, 1]"
            )));
        }
        Ok(TauMatrix(m))
    }

    /// `diag(1, s...)`.
    pub fn diagonal(s: &[f64]) -> Result<Self> {
        let mut d = vec![1.0];
        d.extend_from_slice(s);
        Self::new(RealMatrix::from_diag(&d))
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// Column 0 below the corner: `Tr[rho (s_i (x) I)]`.
    pub fn system_bloch(&self) -> Vec<f64> {
        (1..self.dim()).map(|i| self.0[(i, 0)]).collect()
    }

    /// Row 0 right of the corner: `Tr[rho (I (x) s_j)]`.
    pub fn ancilla_bloch(&self) -> Vec<f64> {
        (1..self.dim()).map(|j| self.0[(0, j)]).collect()
    }

    /// Lower-right correlation block.
    pub fn correlations(&self) -> RealMatrix {
        let n = self.dim() - 1;
        self.0.block(1, 1, n, n)
    }
}

impl TryFrom<RealMatrix> for TauMatrix {
    type Error = Error;
    fn try_from(m: RealMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<TauMatrix> for RealMatrix {
    fn from(t: TauMatrix) -> Self {
        t.0
    }
}

/// Bloch vector of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite);
        }
        if v.norm() > 1.0 + NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "Bloch vector norm {} exceeds 1",
                v.norm()
            )));
        }
        Ok(v)
    }

    /// Normalizes a nonzero direction onto the sphere.
    pub fn unit(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter("zero direction".into()));
        }
        Ok(BlochVector {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// `(I + r . sigma) / 2`.
    pub fn density_matrix(&self) -> DensityMatrix {
        let r = self.to_array();
        let mut m = pauli(0).clone();
        for (k, c) in r.iter().enumerate() {
            m = &m + &pauli(k + 1).scale_real(*c);
        }
        DensityMatrix::from_trusted(m.scale_real(0.5))
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        v.to_array()
    }
}

/// Convex combination of four pure product states, `sum_n P_n |a_n><a_n| (x) |b_n><b_n|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableSpec {
    pub weights: [f64; 4],
    pub system_vertices: [BlochVector; 4],
    pub ancilla_vertices: [BlochVector; 4],
}

impl SeparableSpec {
    pub const WEIGHT_TOL: f64 = 1e-12;

    pub fn new(
        weights: [f64; 4],
        system_vertices: [BlochVector; 4],
        ancilla_vertices: [BlochVector; 4],
    ) -> Result<Self> {
        let spec = SeparableSpec {
            weights,
            system_vertices,
            ancilla_vertices,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weights must be nonnegative, got {:?}",
                self.weights
            )));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > Self::WEIGHT_TOL {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, not 1"
            )));
        }
        for v in self.system_vertices.iter().chain(&self.ancilla_vertices) {
            if (v.norm() - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "vertex {:?} is not on the unit sphere",
                    v.to_array()
                )));
            }
        }
        Ok(())
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BellKind {
    #[default]
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    fn amplitudes(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, c, d) = match self {
            BellKind::PhiPlus => (h, 0.0, 0.0, h),
            BellKind::PhiMinus => (h, 0.0, 0.0, -h),
            BellKind::PsiPlus => (0.0, h, h, 0.0),
            BellKind::PsiMinus => (0.0, h, -h, 0.0),
        };
        [a, b, c, d].map(|x| Complex64::new(x, 0.0))
    }
}

impl FromStr for BellKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi+" | "phi_plus" | "phiplus" => Ok(BellKind::PhiPlus),
            "phi-" | "phi_minus" | "phiminus" => Ok(BellKind::PhiMinus),
            "psi+" | "psi_plus" | "psiplus" => Ok(BellKind::PsiPlus),
            "psi-" | "psi_minus" | "psiminus" | "singlet" => Ok(BellKind::PsiMinus),
            other => Err(Error::InvalidParameter(format!(
                "unknown Bell state '{other}'"
            ))),
        }
    }
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::dims("two-qubit state (4x4)", rho.dim()));
    }
    Ok(())
}

pub fn tau_from_rho(rho: &DensityMatrix) -> Result<TauMatrix> {
    require_two_qubit(rho)?;
    let mut m = RealMatrix::from_fn(4, 4, |i, j| {
        trace_product(rho.matrix(), pauli_pair(i, j)).re
    });
    // Unit trace is already validated; pin it exactly.
    m[(0, 0)] = 1.0;
    TauMatrix::new(m)
}

/// Inverse of [`tau_from_rho`]; fails with `NotAState` when the result is not positive.
pub fn rho_from_tau(tau: &TauMatrix) -> Result<DensityMatrix> {
    if tau.dim() != 4 {
        return Err(Error::dims("4x4 correlation matrix", tau.dim()));
    }
    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let t = tau.matrix()[(i, j)];
            if t != 0.0 {
                m = &m + &pauli_pair(i, j).scale_real(0.25 * t);
            }
        }
    }
    DensityMatrix::new(m)
}

pub fn bell_state(kind: BellKind) -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::outer(&kind.amplitudes()))
}

/// `p |Bell><Bell| + (1 - p) I/4`.
pub fn werner_state(p: f64, kind: BellKind) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "Werner mixing parameter {p} outside [0, 1]"
        )));
    }
    let bell = bell_state(kind);
    let mixed = DensityMatrix::maximally_mixed(4);
    Ok(DensityMatrix::from_trusted(
        &bell.matrix().scale_real(p) + &mixed.matrix().scale_real(1.0 - p),
    ))
}

/// State with `tau = diag(1, s1, s2, s3)`.
pub fn x_state(s: [f64; 3]) -> Result<DensityMatrix> {
    let tau = TauMatrix::diagonal(&s).map_err(|e| Error::NotAState(e.to_string()))?;
    rho_from_tau(&tau)
}

/// `|a><a| (x) |b><b|` generalised to mixed Bloch vectors.
pub fn product_state(a: &BlochVector, b: &BlochVector) -> DensityMatrix {
    DensityMatrix::from_trusted(
        a.density_matrix()
            .matrix()
            .kron(b.density_matrix().matrix()),
    )
}

pub fn separable_from_spec(spec: &SeparableSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    let mut m = ComplexMatrix::zeros(4, 4);
    for n in 0..4 {
        let term = product_state(&spec.system_vertices[n], &spec.ancilla_vertices[n]);
        m = &m + &term.matrix().scale_real(spec.weights[n]);
    }
    Ok(DensityMatrix::from_trusted(m))
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random pure two-qubit state.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    loop {
        let psi: Vec<Complex64> = (0..4).map(|_| complex_gaussian(rng)).collect();
        let norm = psi.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 1e-8 {
            let psi: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
            return DensityMatrix::from_trusted(ComplexMatrix::outer(&psi));
        }
    }
}

/// Hilbert-Schmidt random mixed state `G G^dag / Tr[G G^dag]` with `G` a 4x4 Ginibre matrix.
pub fn random_mixed<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(4, 4, |_, _| complex_gaussian(rng));
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let mut m = w.scale_real(1.0 / tr);
    // Symmetrize away rounding so validation sees an exactly Hermitian matrix.
    m = (&m + &m.adjoint()).scale_real(0.5);
    DensityMatrix::from_trusted(m)
}

/// Uniformly distributed point on the Bloch sphere.
pub fn random_unit_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
        if let Ok(b) = BlochVector::unit(v[0], v[1], v[2]) {
            if b.norm() > 0.5 {
                return b;
            }
        }
    }
}

/// Flat-Dirichlet weights with four uniform sphere vertices on each side.
pub fn random_separable<R: Rng + ?Sized>(rng: &mut R) -> SeparableSpec {
    let raw: [f64; 4] = std::array::from_fn(|_| Exp1.sample(rng));
    let total: f64 = raw.iter().sum();
    let mut weights = raw.map(|w| w / total);
    // Put the rounding residue on the largest weight so the sum is 1 to the last bit possible.
    let residue = 1.0 - weights.iter().sum::<f64>();
    let imax = (0..4)
        .max_by(|&i, &j| weights[i].total_cmp(&weights[j]))
        .unwrap_or(0);
    weights[imax] += residue;
    SeparableSpec {
        weights,
        system_vertices: std::array::from_fn(|_| random_unit_bloch(rng)),
        ancilla_vertices: std::array::from_fn(|_| random_unit_bloch(rng)),
    }
}

/// `C = 2 |ad - bc|` for a pure two-qubit state.
pub fn concurrence_pure(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let purity = rho.purity();
    if (purity - 1.0).abs() > PURITY_TOL {
        return Err(Error::NotPure { purity });
    }
    let psi = pure_amplitudes(rho);
    Ok((2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm()).min(1.0))
}

/// Recovers the state vector of a rank-one density matrix, up to global phase.
fn pure_amplitudes(rho: &DensityMatrix) -> Vec<Complex64> {
    let m = rho.matrix();
    let n = m.rows();
    let k = (0..n)
        .max_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re))
        .unwrap_or(0);
    let scale = m[(k, k)].re.sqrt();
    (0..n).map(|i| m[(i, k)] / scale).collect()
}
