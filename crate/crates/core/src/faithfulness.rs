//! Sinisterness, conditioning and the X-state reduction of a correlation matrix.
//!
//! The Sinisterness of a state is `det(tau)`. Eliminating the local Bloch
//! vectors with one row and one column operation leaves the core matrix
//! `C = T - a b^T` (with `T` the correlation block), and `det(tau) = det(C)`.
//! A state can drive ancilla-assisted tomography exactly when this number is
//! nonzero; how well it does so is measured by the condition number of `tau`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{
    adjugate, determinant, frobenius_norm, svd, RealMatrix, DEFAULT_SINGULAR_TOL,
};
use crate::states::TauMatrix;

/// `det(T - a b^T)`.
pub fn sinisterness(tau: &TauMatrix) -> Result<f64> {
    determinant(&core_matrix(tau))
}

/// `C[i][j] = tau[i][j] - a_i b_j` for `i, j >= 1`.
pub fn core_matrix(tau: &TauMatrix) -> RealMatrix {
    let a = tau.system_bloch();
    let b = tau.ancilla_bloch();
    let t = tau.correlations();
    RealMatrix::from_fn(a.len(), b.len(), |i, j| t[(i, j)] - a[i] * b[j])
}

pub fn is_faithful(tau: &TauMatrix, tol: f64) -> Result<bool> {
    Ok(sinisterness(tau)?.abs() > tol)
}

/// `lambda_max / lambda_min`, or infinity when `lambda_min <= tol`.
pub fn condition_number_with_tol(tau: &TauMatrix, tol: f64) -> f64 {
    let s = svd(tau.matrix());
    if s.min() <= tol {
        f64::INFINITY
    } else {
        s.max() / s.min()
    }
}

pub fn condition_number(tau: &TauMatrix) -> f64 {
    condition_number_with_tol(tau, DEFAULT_SINGULAR_TOL)
}

/// Condition number of the best X state of dimension `m` with `|det| = det_abs`:
/// `det_abs^(-1/(m-1))`.
pub fn optimal_x_kappa(det_abs: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension {m} must be at least 2"
        )));
    }
    if !(0.0..=1.0 + 1e-12).contains(&det_abs) {
        return Err(Error::InvalidParameter(format!(
            "|det| = {det_abs} outside [0, 1]"
        )));
    }
    if det_abs == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(det_abs.powf(-1.0 / (m as f64 - 1.0)))
}

/// `lambda_max^(m/(m-1)) / |det|^(1/(m-1))`; infinity for singular `tau`.
pub fn kappa_lower_bound(tau: &TauMatrix) -> Result<f64> {
    let m = tau.dim() as f64;
    let det_abs = determinant(tau.matrix())?.abs();
    if det_abs == 0.0 {
        return Ok(f64::INFINITY);
    }
    let lmax = svd(tau.matrix()).max();
    Ok(lmax.powf(m / (m - 1.0)) / det_abs.powf(1.0 / (m - 1.0)))
}

/// `sum_l lambda_l^2`, the squared Frobenius norm.
pub fn frobenius_measure(tau: &TauMatrix) -> f64 {
    svd(tau.matrix())
        .singular_values
        .iter()
        .map(|l| l * l)
        .sum()
}

/// `||Adj(tau)||_F / |det(tau)|`, equal to `||tau^-1||_F` but computed without
/// an inverse. Infinite when `|det| <= tol`.
pub fn adjugate_measure_with_tol(tau: &TauMatrix, tol: f64) -> Result<f64> {
    let det_abs = determinant(tau.matrix())?.abs();
    if det_abs <= tol {
        return Ok(f64::INFINITY);
    }
    Ok(frobenius_norm(&adjugate(tau.matrix())?) / det_abs)
}

pub fn adjugate_measure(tau: &TauMatrix) -> Result<f64> {
    adjugate_measure_with_tol(tau, DEFAULT_SINGULAR_TOL)
}

/// Minimum of `sum lambda_i^2` over four singular values with `lambda_1 = 1`
/// and product `det_abs`, attained at equal remaining values: `1 + 3 det_abs^(2/3)`.
pub fn min_frobenius_at_fixed_det(det_abs: f64) -> Result<f64> {
    if !(det_abs > 0.0 && det_abs <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|det| = {det_abs} outside (0, 1]"
        )));
    }
    Ok(1.0 + 3.0 * det_abs.powf(2.0 / 3.0))
}

/// Two-qubit reduction `diag(1, U^T) L tau R diag(1, V) = diag(1, s)`.
///
/// `L` subtracts `a_i` times row 0 from row `i`; `R` subtracts `b_j` times
/// column 0 from column `j`. `U`, `V` are proper rotations with
/// `core = U diag(s) V^T`; `s1, s2 >= 0` and `s3` carries `sign(det core)`.
#[derive(Debug, Clone)]
pub struct XReduction {
    pub s: [f64; 3],
    /// System Bloch vector in the rotated basis, `U^T a`.
    pub a: [f64; 3],
    /// Ancilla Bloch vector in the rotated basis, `V^T b`.
    pub b: [f64; 3],
    pub left_rotation: RealMatrix,
    pub right_rotation: RealMatrix,
    pub core: RealMatrix,
    system_bloch: [f64; 3],
    ancilla_bloch: [f64; 3],
}

impl XReduction {
    /// `diag(1, s)` as a correlation matrix.
    pub fn tau_x(&self) -> RealMatrix {
        RealMatrix::from_diag(&[1.0, self.s[0], self.s[1], self.s[2]])
    }

    /// Lower-triangular row elimination of the system Bloch vector.
    pub fn left_elimination(&self) -> RealMatrix {
        let mut l = RealMatrix::identity(4);
        for i in 0..3 {
            l[(i + 1, 0)] = -self.system_bloch[i];
        }
        l
    }

    /// Upper-triangular column elimination of the ancilla Bloch vector.
    pub fn right_elimination(&self) -> RealMatrix {
        let mut r = RealMatrix::identity(4);
        for j in 0..3 {
            r[(0, j + 1)] = -self.ancilla_bloch[j];
        }
        r
    }

    fn embed(rot: &RealMatrix) -> RealMatrix {
        RealMatrix::from_fn(4, 4, |i, j| match (i, j) {
            (0, 0) => 1.0,
            (0, _) | (_, 0) => 0.0,
            _ => rot[(i - 1, j - 1)],
        })
    }

    /// Applies the full reduction to `tau`; equals [`XReduction::tau_x`] up to rounding.
    pub fn apply(&self, tau: &TauMatrix) -> RealMatrix {
        let u = Self::embed(&self.left_rotation.transpose());
        let v = Self::embed(&self.right_rotation);
        let inner = &(&self.left_elimination() * tau.matrix()) * &self.right_elimination();
        &(&u * &inner) * &v
    }
}

pub fn x_reduce(tau: &TauMatrix) -> Result<XReduction> {
    if tau.dim() != 4 {
        return Err(Error::dims("4x4 correlation matrix", tau.dim()));
    }
    let core = core_matrix(tau);
    let dec = svd(&core);
    let mut u = dec.left_vectors.clone();
    let mut v = dec.right_vectors.clone();
    let mut s = [
        dec.singular_values[0],
        dec.singular_values[1],
        dec.singular_values[2],
    ];
    let du = determinant(&u)?;
    let dv = determinant(&v)?;
    // Make both rotations proper; the sign that cannot be absorbed goes to s3.
    if du < 0.0 {
        for i in 0..3 {
            u[(i, 2)] = -u[(i, 2)];
        }
        s[2] = -s[2];
    }
    if dv < 0.0 {
        for i in 0..3 {
            v[(i, 2)] = -v[(i, 2)];
        }
        s[2] = -s[2];
    }
    if s[2] == 0.0 {
        s[2] = 0.0;
    }

    let sys = tau.system_bloch();
    let anc = tau.ancilla_bloch();
    let system_bloch = [sys[0], sys[1], sys[2]];
    let ancilla_bloch = [anc[0], anc[1], anc[2]];
    let ar = u.transpose().mul_vec(&sys);
    let br = v.transpose().mul_vec(&anc);
    Ok(XReduction {
        s,
        a: [ar[0], ar[1], ar[2]],
        b: [br[0], br[1], br[2]],
        left_rotation: u,
        right_rotation: v,
        core,
        system_bloch,
        ancilla_bloch,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrobeniusIdentity {
    /// `||tau||_F^2`.
    pub lhs: f64,
    /// `||tau_x||_F^2 + |a|^2 + |b|^2 + |a|^2 |b|^2 + 2 sum a_i b_i s_i`.
    pub rhs: f64,
    pub residual: f64,
}

pub fn frobenius_identity_check(tau: &TauMatrix) -> Result<FrobeniusIdentity> {
    let red = x_reduce(tau)?;
    let lhs = frobenius_norm(tau.matrix()).powi(2);
    let a2: f64 = red.a.iter().map(|x| x * x).sum();
    let b2: f64 = red.b.iter().map(|x| x * x).sum();
    let cross: f64 = (0..3).map(|i| red.a[i] * red.b[i] * red.s[i]).sum();
    let tx2 = 1.0 + red.s.iter().map(|x| x * x).sum::<f64>();
    let rhs = tx2 + a2 + b2 + a2 * b2 + 2.0 * cross;
    Ok(FrobeniusIdentity {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Everything the faithfulness analysis says about one state.
///
/// Infinite values serialize as JSON `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaithfulnessReport {
    pub sinisterness: f64,
    pub singular_values: Vec<f64>,
    pub kappa: f64,
    pub kappa_lower_bound: f64,
    pub optimal_x_kappa: f64,
    pub frobenius_measure: f64,
    pub adjugate_measure: f64,
    pub faithful: bool,
}

impl FaithfulnessReport {
    pub fn analyze(tau: &TauMatrix, tol: f64) -> Result<Self> {
        let sin = sinisterness(tau)?;
        let faithful = sin.abs() > tol;
        let dec = svd(tau.matrix());
        let det_abs = determinant(tau.matrix())?.abs();
        let (kappa, kappa_lb, opt, adj) = if faithful {
            (
                condition_number_with_tol(tau, 0.0),
                kappa_lower_bound(tau)?,
                optimal_x_kappa(det_abs.min(1.0), tau.dim())?,
                adjugate_measure_with_tol(tau, 0.0)?,
            )
        } else {
            (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY)
        };
        Ok(FaithfulnessReport {
            sinisterness: sin,
            frobenius_measure: dec.singular_values.iter().map(|l| l * l).sum(),
            singular_values: dec.singular_values,
            kappa,
            kappa_lower_bound: kappa_lb,
            optimal_x_kappa: opt,
            adjugate_measure: adj,
            faithful,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::invert;
    use crate::states::{bell_state, tau_from_rho, werner_state, BellKind, DensityMatrix};

    fn tau_diag(s: [f64; 3]) -> TauMatrix {
        TauMatrix::diagonal(&s).unwrap()
    }

    #[test]
    fn sinisterness_examples() {
        let bell = tau_from_rho(&bell_state(BellKind::PhiPlus)).unwrap();
        assert!((sinisterness(&bell).unwrap() + 1.0).abs() < 1e-14);
        let mixed = tau_from_rho(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert_eq!(sinisterness(&mixed).unwrap(), 0.0);
        assert!(!is_faithful(&mixed, DEFAULT_SINGULAR_TOL).unwrap());
    }

    #[test]
    fn condition_number_examples() {
        let bell = tau_from_rho(&bell_state(BellKind::PsiMinus)).unwrap();
        assert!((condition_number(&bell) - 1.0).abs() < 1e-14);
        let w = tau_from_rho(&werner_state(1.0 / 3.0, BellKind::PhiPlus).unwrap()).unwrap();
        assert!((condition_number(&w) - 3.0).abs() < 1e-13);
        let mixed = tau_from_rho(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert_eq!(condition_number(&mixed), f64::INFINITY);
    }

    #[test]
    fn optimal_x_kappa_examples() {
        assert_eq!(optimal_x_kappa(1.0, 4).unwrap(), 1.0);
        assert!((optimal_x_kappa(1.0 / 27.0, 4).unwrap() - 3.0).abs() < 1e-14);
        assert!((optimal_x_kappa(15f64.powi(-15), 16).unwrap() - 15.0).abs() < 1e-12);
        assert_eq!(optimal_x_kappa(0.0, 4).unwrap(), f64::INFINITY);
        assert!(optimal_x_kappa(2.0, 4).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let bell = tau_from_rho(&bell_state(BellKind::PhiPlus)).unwrap();
        assert!((kappa_lower_bound(&bell).unwrap() - 1.0).abs() < 1e-14);
        for s in [[0.5, -0.2, 0.3], [0.9, 0.1, -0.05], [1.0 / 3.0; 3]] {
            let t = tau_diag(s);
            assert!(kappa_lower_bound(&t).unwrap() <= condition_number(&t) * (1.0 + 1e-12));
        }
        let mixed = tau_from_rho(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert_eq!(kappa_lower_bound(&mixed).unwrap(), f64::INFINITY);
    }

    #[test]
    fn x_reduce_examples() {
        let t = tau_diag([0.5, -0.2, 0.3]);
        let red = x_reduce(&t).unwrap();
        let mut got = red.s.map(f64::abs);
        got.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(got, [0.5, 0.3, 0.2]);
        assert!((red.s.iter().product::<f64>() - 0.5 * -0.2 * 0.3).abs() < 1e-15);
        assert!(red.s[0] >= 0.0 && red.s[1] >= 0.0);

        let bell = tau_from_rho(&bell_state(BellKind::PhiPlus)).unwrap();
        let red = x_reduce(&bell).unwrap();
        for v in red.s.iter().take(2) {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert!((red.s[2] + 1.0).abs() < 1e-14);
        assert!(red.apply(&bell).max_abs_diff(&red.tau_x()) < 1e-14);
    }

    #[test]
    fn frobenius_identity_examples() {
        let t = tau_diag([0.5, -0.2, 0.3]);
        let id = frobenius_identity_check(&t).unwrap();
        assert!((id.lhs - (1.0 + 0.25 + 0.04 + 0.09)).abs() < 1e-15);
        assert!(id.residual < 1e-15);

        // |00><00|: a = b = z, core = 0, lhs = 4, cross term vanishes through s.
        let mut m = RealMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = 1.0;
        }
        let id = frobenius_identity_check(&TauMatrix::new(m).unwrap()).unwrap();
        assert!((id.lhs - 4.0).abs() < 1e-15 && id.residual < 1e-14);
    }

    #[test]
    fn measure_examples() {
        let bell = tau_from_rho(&bell_state(BellKind::PhiPlus)).unwrap();
        assert!((frobenius_measure(&bell) - 4.0).abs() < 1e-14);
        let w = tau_from_rho(&werner_state(1.0 / 3.0, BellKind::PhiPlus).unwrap()).unwrap();
        assert!((frobenius_measure(&w) - 4.0 / 3.0).abs() < 1e-14);
        let inv = invert(w.matrix(), 1e-12).unwrap();
        assert!((adjugate_measure(&w).unwrap() - frobenius_norm(&inv)).abs() < 1e-12);
        let mixed = tau_from_rho(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert_eq!(adjugate_measure(&mixed).unwrap(), f64::INFINITY);
    }

    #[test]
    fn min_frobenius_examples() {
        assert_eq!(min_frobenius_at_fixed_det(1.0).unwrap(), 4.0);
        assert!((min_frobenius_at_fixed_det(1.0 / 27.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(min_frobenius_at_fixed_det(0.0).is_err());
    }

    #[test]
    fn report_for_unfaithful_state() {
        let mixed = tau_from_rho(&DensityMatrix::maximally_mixed(4)).unwrap();
        let r = FaithfulnessReport::analyze(&mixed, DEFAULT_SINGULAR_TOL).unwrap();
        assert!(!r.faithful);
        assert_eq!(r.kappa, f64::INFINITY);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"kappa\":null"));
    }
}
