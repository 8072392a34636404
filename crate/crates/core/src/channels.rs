//! Single-qubit CPTP maps and their Pauli-basis representations.
//!
//! A channel is stored as Kraus operators `A_i`. Two derived objects are
//! compared everywhere else in the crate:
//!
//! * the process matrix `chi`, with `E(rho) = sum_jk chi[j][k] s_j rho s_k`;
//! * the Pauli transfer matrix `chi~`, with `chi~[m][i] = Tr[s_m E(s_i)] / 2`,
//!   so that Bloch 4-vectors `(1, r)` transform as `out = chi~ * in`.
//!
//! The two are linked by the four-Pauli trace tensor
//! `B[j][i][k][m] = Tr[s_j s_i s_k s_m]` through
//! `chi~[m][i] = (1/2) sum_jk chi[j][k] B[j][i][k][m]`.

use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{hermitian_eigenvalues, invert, svd, ComplexMatrix, RealMatrix};
use crate::pauli::{pauli, paulis, trace_product};
use crate::states::DensityMatrix;

/// Tolerance on `sum_i A_i^dag A_i = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Largest imaginary residue tolerated when contracting `chi` into `chi~`.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-8;
/// Largest condition number accepted for the `chi~ -> chi` linear system.
pub const MAX_EXTRACTION_KAPPA: f64 = 1e8;

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
}

impl Channel {
    /// Validates shapes and Kraus completeness.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::EmptyInput("Kraus operator list"));
        }
        if let Some(bad) = kraus.iter().find(|k| k.rows() != 2 || k.cols() != 2) {
            return Err(Error::dims(
                "2x2 Kraus operators",
                format!("{}x{}", bad.rows(), bad.cols()),
            ));
        }
        let ch = Channel { kraus };
        let residual = ch.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `max |(sum_i A_i^dag A_i - I)_{jk}|`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for a in &self.kraus {
            sum = &sum + &(&a.adjoint() * a);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }

    /// `sum_i A_i m A_i^dag` for an arbitrary 2x2 operator `m`.
    pub fn apply_to_operator(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2, 2);
        for a in &self.kraus {
            out = &out + &(&(a * m) * &a.adjoint());
        }
        out
    }

    /// Applies the channel to a single qubit, or to the system half of a
    /// two-qubit state as `E (x) I`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = match rho.dim() {
            2 => self.apply_to_operator(rho.matrix()),
            4 => {
                let id = ComplexMatrix::identity(2);
                let mut out = ComplexMatrix::zeros(4, 4);
                for a in &self.kraus {
                    let big = a.kron(&id);
                    out = &out + &(&(&big * rho.matrix()) * &big.adjoint());
                }
                out
            }
            d => return Err(Error::dims("2x2 or 4x4 density matrix", d)),
        };
        let out = (&out + &out.adjoint()).scale_real(0.5);
        DensityMatrix::new(out)
    }

    pub fn identity() -> Self {
        Channel {
            kraus: vec![ComplexMatrix::identity(2)],
        }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Process matrix in the Pauli basis.
    pub fn chi(&self) -> ChiMatrix {
        // A_i = sum_j e[i][j] s_j with e[i][j] = Tr[s_j A_i] / 2.
        let coeffs: Vec<[Complex64; 4]> = self
            .kraus
            .iter()
            .map(|a| std::array::from_fn(|j| trace_product(pauli(j), a) * 0.5))
            .collect();
        let m =
            ComplexMatrix::from_fn(4, 4, |j, k| coeffs.iter().map(|e| e[j] * e[k].conj()).sum());
        ChiMatrix(m)
    }

    /// Transfer matrix straight from the definition `Tr[s_m E(s_i)] / 2`.
    pub fn chi_tilde(&self) -> ChiTilde {
        let images: Vec<ComplexMatrix> =
            paulis().iter().map(|s| self.apply_to_operator(s)).collect();
        ChiTilde(RealMatrix::from_fn(4, 4, |m, i| {
            0.5 * trace_product(pauli(m), &images[i]).re
        }))
    }
}

/// Process matrix `chi` (4x4 complex, Pauli basis).
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix(ComplexMatrix);

impl ChiMatrix {
    /// Accepts any Hermitian 4x4 matrix; physicality is checked separately.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::dims("4x4", format!("{}x{}", m.rows(), m.cols())));
        }
        let r = m.hermiticity_residual();
        if r > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "chi must be Hermitian (residual {r:e})"
            )));
        }
        Ok(ChiMatrix(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.0).map_or(f64::NAN, |v| v[0])
    }

    /// `max |sum_jk chi[j][k] s_k s_j - I|`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for j in 0..4 {
            for k in 0..4 {
                let c = self.0[(j, k)];
                if c.norm() > 0.0 {
                    sum = &sum + &(pauli(k) * pauli(j)).scale(c);
                }
            }
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }

    /// Hermitian, PSD within `1e-9`, and trace preserving within `1e-9`.
    pub fn is_physical(&self) -> bool {
        self.0.hermiticity_residual() <= 1e-9
            && self.min_eigenvalue() >= -1e-9
            && self.trace_preservation_residual() <= 1e-9
    }
}

/// Pauli transfer matrix `chi~` (4x4 real).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealMatrix", into = "RealMatrix")]
pub struct ChiTilde(RealMatrix);

impl ChiTilde {
    pub fn new(m: RealMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::dims("4x4", format!("{}x{}", m.rows(), m.cols())));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(ChiTilde(m))
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.0
    }

    /// Deviation of the first row from `(1, 0, 0, 0)`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let r = self.0.row(0);
        (r[0] - 1.0)
            .abs()
            .max(r[1].abs())
            .max(r[2].abs())
            .max(r[3].abs())
    }
}

impl TryFrom<RealMatrix> for ChiTilde {
    type Error = Error;
    fn try_from(m: RealMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<ChiTilde> for RealMatrix {
    fn from(c: ChiTilde) -> Self {
        c.0
    }
}

/// `B[j][i][k][m] = Tr[s_j s_i s_k s_m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BTensor {
    entries: Vec<Complex64>,
}

impl BTensor {
    pub fn get(&self, j: usize, i: usize, k: usize, m: usize) -> Complex64 {
        self.entries[((j * 4 + i) * 4 + k) * 4 + m]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// The tensor is computed once by explicit 2x2 products and shared.
pub fn b_tensor() -> &'static BTensor {
    static B: OnceLock<BTensor> = OnceLock::new();
    B.get_or_init(|| {
        let mut entries = Vec::with_capacity(256);
        for j in 0..4 {
            for i in 0..4 {
                let ji = pauli(j) * pauli(i);
                for k in 0..4 {
                    let jik = &ji * pauli(k);
                    for m in 0..4 {
                        entries.push(trace_product(&jik, pauli(m)));
                    }
                }
            }
        }
        BTensor { entries }
    })
}

fn contract(chi: &ComplexMatrix) -> ComplexMatrix {
    let b = b_tensor();
    ComplexMatrix::from_fn(4, 4, |m, i| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..4 {
            for k in 0..4 {
                acc += chi[(j, k)] * b.get(j, i, k, m);
            }
        }
        acc * 0.5
    })
}

/// Transfer matrix from the process matrix through the `B` contraction.
pub fn chi_tilde_from_chi(chi: &ChiMatrix) -> Result<ChiTilde> {
    let c = contract(chi.matrix());
    let residue = c
        .imag_part()
        .as_slice()
        .iter()
        .fold(0.0f64, |a, x| a.max(x.abs()));
    if residue > IMAGINARY_RESIDUE_TOL {
        return Err(Error::InconsistentChi { residue });
    }
    ChiTilde::new(c.real_part())
}

/// Real Hermitian basis of 4x4 matrices: diagonal units, then for `j < k`
/// the symmetric `E_jk + E_kj` and antisymmetric `i(E_jk - E_kj)` pairs.
fn hermitian_basis() -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(16);
    for j in 0..4 {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(j, j)] = Complex64::new(1.0, 0.0);
        basis.push(m);
    }
    for j in 0..4 {
        for k in j + 1..4 {
            let mut re = ComplexMatrix::zeros(4, 4);
            re[(j, k)] = Complex64::new(1.0, 0.0);
            re[(k, j)] = Complex64::new(1.0, 0.0);
            basis.push(re);
            let mut im = ComplexMatrix::zeros(4, 4);
            im[(j, k)] = Complex64::new(0.0, 1.0);
            im[(k, j)] = Complex64::new(0.0, -1.0);
            basis.push(im);
        }
    }
    basis
}

struct Extraction {
    basis: Vec<ComplexMatrix>,
    inverse: RealMatrix,
}

fn extraction() -> Result<&'static Extraction> {
    static EX: OnceLock<std::result::Result<Extraction, Error>> = OnceLock::new();
    EX.get_or_init(|| {
        let basis = hermitian_basis();
        let mut forward = RealMatrix::zeros(16, 16);
        for (p, h) in basis.iter().enumerate() {
            let ct = contract(h).real_part();
            for (q, v) in ct.as_slice().iter().enumerate() {
                forward[(q, p)] = *v;
            }
        }
        let s = svd(&forward);
        let kappa = s.max() / s.min();
        if kappa.is_nan() || kappa >= MAX_EXTRACTION_KAPPA {
            return Err(Error::IllConditioned { kappa });
        }
        let inverse = invert(&forward, 0.0)?;
        Ok(Extraction { basis, inverse })
    })
    .as_ref()
    .map_err(Clone::clone)
}

/// Solves the linear contraction for the Hermitian `chi` reproducing `ct`.
pub fn chi_from_chi_tilde(ct: &ChiTilde) -> Result<ChiMatrix> {
    let ex = extraction()?;
    let coeffs = ex.inverse.mul_vec(ct.matrix().as_slice());
    let mut chi = ComplexMatrix::zeros(4, 4);
    for (c, h) in coeffs.iter().zip(&ex.basis) {
        chi = &chi + &h.scale_real(*c);
    }
    Ok(ChiMatrix(chi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::InvalidParameter(format!("unknown axis '{other}'"))),
        }
    }
}

/// Standard single-qubit channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NamedChannel {
    Identity,
    /// `exp(-i angle s_axis / 2)`.
    Rotation {
        axis: Axis,
        angle: f64,
    },
    BitFlip {
        p: f64,
    },
    PhaseFlip {
        p: f64,
    },
    /// `rho -> (1 - p) rho + p I/2`.
    Depolarizing {
        p: f64,
    },
    AmplitudeDamping {
        gamma: f64,
    },
    PhaseDamping {
        lambda: f64,
    },
}

fn unit_interval(name: &str, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {v} outside [0, 1]"
        )))
    }
}

fn real2(a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| Complex64::new([[a, b], [c, d]][i][j], 0.0))
}

impl NamedChannel {
    pub fn build(&self) -> Result<Channel> {
        let kraus = match *self {
            NamedChannel::Identity => vec![ComplexMatrix::identity(2)],
            NamedChannel::Rotation { axis, angle } => {
                if !angle.is_finite() {
                    return Err(Error::InvalidParameter(
                        "rotation angle must be finite".into(),
                    ));
                }
                let (s, c) = (0.5 * angle).sin_cos();
                let u = &ComplexMatrix::identity(2).scale_real(c)
                    + &pauli(axis.index()).scale(Complex64::new(0.0, -s));
                vec![u]
            }
            NamedChannel::BitFlip { p } => {
                let p = unit_interval("p", p)?;
                vec![
                    ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                    pauli(1).scale_real(p.sqrt()),
                ]
            }
            NamedChannel::PhaseFlip { p } => {
                let p = unit_interval("p", p)?;
                vec![
                    ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                    pauli(3).scale_real(p.sqrt()),
                ]
            }
            NamedChannel::Depolarizing { p } => {
                let p = unit_interval("p", p)?;
                let mut k = vec![ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * p).sqrt())];
                for i in 1..4 {
                    k.push(pauli(i).scale_real((0.25 * p).sqrt()));
                }
                k
            }
            NamedChannel::AmplitudeDamping { gamma } => {
                let g = unit_interval("gamma", gamma)?;
                vec![
                    real2(1.0, 0.0, 0.0, (1.0 - g).sqrt()),
                    real2(0.0, g.sqrt(), 0.0, 0.0),
                ]
            }
            NamedChannel::PhaseDamping { lambda } => {
                let l = unit_interval("lambda", lambda)?;
                vec![
                    real2(1.0, 0.0, 0.0, (1.0 - l).sqrt()),
                    real2(0.0, 0.0, 0.0, l.sqrt()),
                ]
            }
        };
        Channel::new(kraus)
    }
}

/// Random channel from a Stinespring isometry `C^2 -> C^2 (x) C^K` with
/// environment dimension `K` drawn uniformly from 1..=4.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R) -> Channel {
    let env = rng.random_range(1..=4usize);
    let rows = 2 * env;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(2);
    while cols.len() < 2 {
        let mut v: Vec<Complex64> = (0..rows)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        for _ in 0..2 {
            for c in &cols {
                let d: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= d * y);
            }
        }
        let n = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let kraus = (0..env)
        .map(|k| ComplexMatrix::from_fn(2, 2, |i, j| cols[j][2 * k + i]))
        .collect();
    Channel { kraus }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::states::{BlochVector, DensityMatrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn b_tensor_examples() {
        let b = b_tensor();
        assert_eq!(b.get(0, 0, 0, 0), c(2.0, 0.0));
        assert_eq!(b.get(1, 1, 2, 3), c(0.0, 0.0));
        assert!((b.get(1, 2, 3, 0) - c(0.0, 2.0)).norm() < 1e-15);
        let allowed = [
            c(0.0, 0.0),
            c(2.0, 0.0),
            c(-2.0, 0.0),
            c(0.0, 2.0),
            c(0.0, -2.0),
        ];
        for e in b.entries() {
            assert!(allowed.iter().any(|a| (a - e).norm() < 1e-15), "{e}");
        }
    }

    #[test]
    fn apply_examples() {
        let up = BlochVector::new(0.0, 0.3, 0.4).unwrap().density_matrix();
        let same = Channel::identity().apply(&up).unwrap();
        assert!(same.matrix().max_abs_diff(up.matrix()) < 1e-15);

        let depol = NamedChannel::Depolarizing { p: 1.0 }.build().unwrap();
        let out = depol.apply(&up).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-15
        );

        let g = 0.37;
        let one = BlochVector::new(0.0, 0.0, -1.0).unwrap().density_matrix();
        let out = NamedChannel::AmplitudeDamping { gamma: g }
            .build()
            .unwrap()
            .apply(&one)
            .unwrap();
        let expected = real2(g, 0.0, 0.0, 1.0 - g);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);

        let three = DensityMatrix::maximally_mixed(8);
        assert!(Channel::identity().apply(&three).is_err());
    }

    #[test]
    fn transfer_matrix_examples() {
        let id = Channel::identity();
        let chi = id.chi();
        assert!((chi.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        let ct = chi_tilde_from_chi(&chi).unwrap();
        assert!(ct.matrix().max_abs_diff(&RealMatrix::identity(4)) < 1e-15);

        let p = 0.3;
        let dep = NamedChannel::Depolarizing { p }.build().unwrap();
        let ct = chi_tilde_from_chi(&dep.chi()).unwrap();
        let expected = RealMatrix::from_diag(&[1.0, 1.0 - p, 1.0 - p, 1.0 - p]);
        assert!(ct.matrix().max_abs_diff(&expected) < 1e-15);

        let flip = Channel::unitary(pauli(1).clone()).unwrap();
        let ct = chi_tilde_from_chi(&flip.chi()).unwrap();
        assert!(
            ct.matrix()
                .max_abs_diff(&RealMatrix::from_diag(&[1.0, 1.0, -1.0, -1.0]))
                < 1e-15
        );

        let rz = NamedChannel::Rotation {
            axis: Axis::Z,
            angle: std::f64::consts::PI,
        }
        .build()
        .unwrap();
        assert!(
            rz.chi_tilde()
                .matrix()
                .max_abs_diff(&RealMatrix::from_diag(&[1.0, -1.0, -1.0, 1.0]))
                < 1e-15
        );
    }

    #[test]
    fn extraction_examples() {
        let chi = chi_from_chi_tilde(&ChiTilde::new(RealMatrix::identity(4)).unwrap()).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 0)] = c(1.0, 0.0);
        assert!(chi.matrix().max_abs_diff(&expected) < 1e-14);

        let p = 0.42;
        let ct = ChiTilde::new(RealMatrix::from_diag(&[1.0, 1.0 - p, 1.0 - p, 1.0 - p])).unwrap();
        let chi = chi_from_chi_tilde(&ct).unwrap();
        let expected = ComplexMatrix::from_real(&RealMatrix::from_diag(&[
            1.0 - 0.75 * p,
            0.25 * p,
            0.25 * p,
            0.25 * p,
        ]));
        assert!(chi.matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn named_channel_edges() {
        let dep0 = NamedChannel::Depolarizing { p: 0.0 }.build().unwrap();
        assert!(
            dep0.chi_tilde()
                .matrix()
                .max_abs_diff(&RealMatrix::identity(4))
                < 1e-15
        );

        let ad = NamedChannel::AmplitudeDamping { gamma: 1.0 }
            .build()
            .unwrap();
        let plus = BlochVector::new(1.0, 0.0, 0.0).unwrap().density_matrix();
        let out = ad.apply(&plus).unwrap();
        assert!(out.matrix().max_abs_diff(&real2(1.0, 0.0, 0.0, 0.0)) < 1e-15);

        assert!(NamedChannel::BitFlip { p: 1.2 }.build().is_err());
        assert!(NamedChannel::PhaseDamping { lambda: -0.1 }.build().is_err());
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let err = Channel::new(vec![ComplexMatrix::identity(2).scale_real(0.9)]).unwrap_err();
        assert!(matches!(err, Error::NotTracePreserving { .. }));
        assert!(matches!(Channel::new(vec![]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn random_channels_are_complete_and_physical() {
        for k in 0..50 {
            let ch = random_channel(&mut stream_rng(3, k));
            assert!(ch.completeness_residual() < 1e-12);
            assert!(ch.chi().is_physical());
        }
    }

    #[test]
    fn inconsistent_chi_detected() {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(1, 2)] = c(1.0, 0.0);
        m[(2, 1)] = c(-1.0, 0.0);
        // Anti-Hermitian input bypasses the constructor to exercise the residue check.
        let err = chi_tilde_from_chi(&ChiMatrix(m)).unwrap_err();
        assert!(matches!(err, Error::InconsistentChi { .. }));
    }
}
