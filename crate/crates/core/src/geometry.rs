//! Simplex geometry behind the separable-state determinant.
//!
//! For a separable two-qubit state `sum_n P_n rho_n^A (x) rho_n^B` with pure
//! components, `det(tau) = 36 P1 P2 P3 P4 V(a) V(b)`, where `V` is the signed
//! volume of the tetrahedron spanned by the Bloch vectors on each side. The
//! largest magnitude, `1/27`, is reached by equal weights on two regular
//! tetrahedra. The same construction with a regular `(M-1)`-simplex gives
//! `|det| = 1/(M-1)^(M-1)` for an `M x M` correlation matrix.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{determinant, RealMatrix, MAX_DIM};
use crate::rng::stream_rng;
use crate::states::{random_separable, BlochVector, SeparableSpec};

/// Largest `|det(tau)|` over separable two-qubit states.
pub const SEPARABLE_DET_BOUND: f64 = 1.0 / 27.0;

/// `det[v2 - v1, v3 - v1, v4 - v1] / 6`.
pub fn tetra_volume_signed(v: &[BlochVector; 4]) -> f64 {
    let e: Vec<[f64; 3]> = (1..4)
        .map(|k| [v[k].x - v[0].x, v[k].y - v[0].y, v[k].z - v[0].z])
        .collect();
    let det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
        - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    det / 6.0
}

/// Closed-form `det(tau)` of a separable spec from its two tetrahedra.
pub fn separable_sinisterness(spec: &SeparableSpec) -> f64 {
    let weights: f64 = spec.weights.iter().product();
    36.0 * weights
        * tetra_volume_signed(&spec.system_vertices)
        * tetra_volume_signed(&spec.ancilla_vertices)
}

/// `n + 1` points in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::InvalidParameter(
                "a simplex needs at least two vertices".into(),
            ));
        }
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::dims(
                format!("{} vertices in R^{n}", n + 1),
                "mismatched vertex dimension",
            ));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Simplex { vertices })
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }
}

/// Regular simplex inscribed in the unit sphere of `R^n`, centred at the origin.
///
/// The vertices are the centred standard basis of `R^(n+1)` expressed in the
/// Helmert basis of the hyperplane orthogonal to `(1, ..., 1)`.
pub fn regular_simplex(n: usize) -> Result<Simplex> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "simplex dimension must be >= 1".into(),
        ));
    }
    let radius = (n as f64 / (n as f64 + 1.0)).sqrt();
    let vertices = (0..=n)
        .map(|i| {
            (1..=n)
                .map(|k| {
                    let kf = k as f64;
                    let h = if i < k {
                        1.0
                    } else if i == k {
                        -kf
                    } else {
                        0.0
                    };
                    h / (kf * (kf + 1.0)).sqrt() / radius
                })
                .collect()
        })
        .collect();
    Simplex::new(vertices)
}

/// `sqrt(det G) / n!` with `G` the Gram matrix of the edge vectors from vertex 0.
pub fn simplex_volume(s: &Simplex) -> Result<f64> {
    let n = s.dimension();
    if n > MAX_DIM {
        return Err(Error::dims(format!("dimension <= {MAX_DIM}"), n));
    }
    let v = s.vertices();
    let edges: Vec<Vec<f64>> = (1..=n)
        .map(|k| v[k].iter().zip(&v[0]).map(|(a, b)| a - b).collect())
        .collect();
    let gram = RealMatrix::from_fn(n, n, |i, j| {
        edges[i].iter().zip(&edges[j]).map(|(a, b)| a * b).sum()
    });
    let det = determinant(&gram)?.max(0.0);
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    Ok(det.sqrt() / factorial)
}

/// Closed form for the regular `n`-simplex inscribed in the unit sphere:
/// `(n+1)^((n+1)/2) / (n! n^(n/2))`.
pub fn regular_simplex_volume_closed_form(n: usize) -> f64 {
    let nf = n as f64;
    (ln_factorial_ratio(n) + 0.5 * (nf + 1.0) * (nf + 1.0).ln() - 0.5 * nf * nf.ln()).exp()
}

/// `-ln(n!)`.
fn ln_factorial_ratio(n: usize) -> f64 {
    -(1..=n).map(|k| (k as f64).ln()).sum::<f64>()
}

/// Optimal isotropic scaling for `N` system qubits with `M = 4^N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub qubits: u32,
    pub m: u64,
    pub det_abs: f64,
    pub log10_det_abs: f64,
    pub kappa: f64,
    /// `(1, 1/(M-1), ...)`; left empty above [`SCALING_DIAGONAL_LIMIT`] entries.
    pub tau_diagonal: Vec<f64>,
}

/// Largest `M` for which the diagonal is materialised.
pub const SCALING_DIAGONAL_LIMIT: u64 = 1 << 16;

/// `|det| = [(M-1)!]^2 * M^-M * V_(M-1)^2` for equal weights on a regular
/// `(M-1)`-simplex, evaluated in log space; `kappa = M - 1`.
pub fn appendix_a_scaling(qubits: u32) -> Result<ScalingReport> {
    if qubits == 0 || qubits > 31 {
        return Err(Error::InvalidParameter(format!(
            "qubit count {qubits} outside 1..=31"
        )));
    }
    let m = 4u64.pow(qubits);
    let n = (m - 1) as f64;
    let ln_fact: f64 = log_factorial(m - 1);
    let ln_volume = -ln_fact + 0.5 * (n + 1.0) * (n + 1.0).ln() - 0.5 * n * n.ln();
    let ln_det = 2.0 * ln_fact - (m as f64) * (m as f64).ln() + 2.0 * ln_volume;
    let log10_det_abs = ln_det / std::f64::consts::LN_10;
    let tau_diagonal = if m <= SCALING_DIAGONAL_LIMIT {
        std::iter::once(1.0)
            .chain(std::iter::repeat_n(1.0 / n, (m - 1) as usize))
            .collect()
    } else {
        Vec::new()
    };
    Ok(ScalingReport {
        qubits,
        m,
        det_abs: ln_det.exp(),
        log10_det_abs,
        kappa: n,
        tau_diagonal,
    })
}

fn log_factorial(n: u64) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Options for the separable-determinant search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub restarts: usize,
    pub sweeps: usize,
    pub initial_step: f64,
    pub final_step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 10,
            sweeps: 400,
            initial_step: 0.5,
            final_step: 1e-9,
        }
    }
}

/// Free parameters: 8 vertex pairs of spherical angles plus 4 log-weights.
#[derive(Clone)]
struct Params([f64; 20]);

impl Params {
    fn from_spec(spec: &SeparableSpec) -> Self {
        let mut p = [0.0; 20];
        for (k, v) in spec
            .system_vertices
            .iter()
            .chain(&spec.ancilla_vertices)
            .enumerate()
        {
            p[2 * k] = v.z.clamp(-1.0, 1.0).acos();
            p[2 * k + 1] = v.y.atan2(v.x);
        }
        for (k, w) in spec.weights.iter().enumerate() {
            p[16 + k] = w.max(1e-300).ln();
        }
        Params(p)
    }

    fn to_spec(&self) -> SeparableSpec {
        let p = &self.0;
        let vertex = |k: usize| {
            let (st, ct) = p[2 * k].sin_cos();
            let (sp, cp) = p[2 * k + 1].sin_cos();
            BlochVector {
                x: st * cp,
                y: st * sp,
                z: ct,
            }
        };
        let mx = p[16..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: [f64; 4] = std::array::from_fn(|k| (p[16 + k] - mx).exp());
        let total: f64 = raw.iter().sum();
        SeparableSpec {
            weights: raw.map(|w| w / total),
            system_vertices: std::array::from_fn(vertex),
            ancilla_vertices: std::array::from_fn(|k| vertex(k + 4)),
        }
    }
}

/// Pattern search for the separable spec with the largest `|det(tau)|`.
///
/// Each restart draws a random spec and runs coordinate ascent over the
/// vertex angles and log-weights, halving the step when a sweep makes no
/// progress. Returns the best spec across restarts with its signed determinant.
pub fn maximize_separable_det(seed: u64, opts: SearchOptions) -> Result<(SeparableSpec, f64)> {
    if opts.restarts == 0 || opts.sweeps == 0 {
        return Err(Error::InvalidParameter(
            "restarts and sweeps must be >= 1".into(),
        ));
    }
    let mut best: Option<(SeparableSpec, f64)> = None;
    for restart in 0..opts.restarts {
        let mut rng = stream_rng(seed, restart as u64);
        let start = random_separable(&mut rng);
        let (spec, det) = ascend(&start, &opts, &mut rng);
        if best.as_ref().is_none_or(|(_, d)| det.abs() > d.abs()) {
            best = Some((spec, det));
        }
    }
    let (spec, det) = best.expect("at least one restart");
    Ok((spec, det))
}

fn ascend<R: Rng + ?Sized>(
    start: &SeparableSpec,
    opts: &SearchOptions,
    rng: &mut R,
) -> (SeparableSpec, f64) {
    let mut params = Params::from_spec(start);
    let objective = |p: &Params| separable_sinisterness(&p.to_spec()).abs();
    let mut value = objective(&params);
    let mut step = opts.initial_step;
    for _ in 0..opts.sweeps {
        let mut improved = false;
        // Random coordinate order per sweep avoids systematic drift.
        let mut order: Vec<usize> = (0..20).collect();
        for i in (1..order.len()).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        for &k in &order {
            for dir in [1.0, -1.0] {
                let mut trial = params.clone();
                trial.0[k] += dir * step;
                let v = objective(&trial);
                if v > value {
                    params = trial;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < opts.final_step {
                break;
            }
        }
    }
    let spec = params.to_spec();
    let det = separable_sinisterness(&spec);
    (spec, det)
}

/// Equal weights on a regular tetrahedron for the system and its mirror
/// image (`y -> -y`) for the ancilla. `det(tau) = -1/27`; with
/// `mirrored = false` the ancilla copies the system and `det(tau) = +1/27`.
pub fn tetra_optimal_spec(mirrored: bool) -> SeparableSpec {
    let s = 1.0 / 3f64.sqrt();
    let verts = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    let sys = verts.map(|v| BlochVector {
        x: v[0],
        y: v[1],
        z: v[2],
    });
    let anc = if mirrored {
        verts.map(|v| BlochVector {
            x: v[0],
            y: -v[1],
            z: v[2],
        })
    } else {
        sys
    };
    SeparableSpec {
        weights: [0.25; 4],
        system_vertices: sys,
        ancilla_vertices: anc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faithfulness::sinisterness;
    use crate::states::{separable_from_spec, tau_from_rho};

    fn bv(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector { x, y, z }
    }

    #[test]
    fn tetra_volume_examples() {
        let flat = [
            bv(1.0, 0.0, 0.0),
            bv(0.0, 1.0, 0.0),
            bv(-1.0, 0.0, 0.0),
            bv(0.0, -1.0, 0.0),
        ];
        assert_eq!(tetra_volume_signed(&flat), 0.0);

        let reg = tetra_optimal_spec(false).system_vertices;
        let v = tetra_volume_signed(&reg);
        assert!((v.abs() - 8.0 / (9.0 * 3f64.sqrt())).abs() < 1e-15);

        let mut swapped = reg;
        swapped.swap(0, 1);
        assert!((tetra_volume_signed(&swapped) + v).abs() < 1e-15);
    }

    #[test]
    fn optimal_specs_hit_the_bound() {
        for (mirrored, sign) in [(true, -1.0), (false, 1.0)] {
            let spec = tetra_optimal_spec(mirrored);
            spec.validate().unwrap();
            let closed = separable_sinisterness(&spec);
            assert!((closed - sign / 27.0).abs() < 1e-15, "{closed}");
            let tau = tau_from_rho(&separable_from_spec(&spec).unwrap()).unwrap();
            assert!((sinisterness(&tau).unwrap() - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_weight_gives_zero() {
        let mut spec = tetra_optimal_spec(true);
        spec.weights = [0.5, 0.25, 0.25, 0.0];
        assert_eq!(separable_sinisterness(&spec), 0.0);
    }

    #[test]
    fn regular_simplex_examples() {
        let s1 = regular_simplex(1).unwrap();
        assert!((s1.vertices()[0][0] - 1.0).abs() < 1e-15);
        assert!((s1.vertices()[1][0] + 1.0).abs() < 1e-15);

        let s3 = regular_simplex(3).unwrap();
        let v = s3.vertices();
        for i in 0..4 {
            for j in i + 1..4 {
                let d2: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| (a - b).powi(2)).sum();
                assert!((d2 - 8.0 / 3.0).abs() < 1e-14);
            }
        }

        let s15 = regular_simplex(15).unwrap();
        let v = s15.vertices();
        for i in 0..16 {
            let n2: f64 = v[i].iter().map(|x| x * x).sum();
            assert!((n2 - 1.0).abs() < 1e-12);
            for j in i + 1..16 {
                let d: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
                assert!((d + 1.0 / 15.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn simplex_volume_examples() {
        let right = Simplex::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!((simplex_volume(&right).unwrap() - 1.0 / 6.0).abs() < 1e-15);

        let reg = simplex_volume(&regular_simplex(3).unwrap()).unwrap();
        assert!((reg - 8.0 / (9.0 * 3f64.sqrt())).abs() < 1e-14);

        let degenerate = Simplex::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(simplex_volume(&degenerate).unwrap(), 0.0);
    }

    #[test]
    fn scaling_examples() {
        let r1 = appendix_a_scaling(1).unwrap();
        assert_eq!(r1.m, 4);
        assert!((r1.det_abs - 1.0 / 27.0).abs() < 1e-15);
        assert_eq!(r1.kappa, 3.0);
        assert_eq!(r1.tau_diagonal, vec![1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);

        let r2 = appendix_a_scaling(2).unwrap();
        assert_eq!(r2.kappa, 15.0);
        assert!((r2.log10_det_abs + 15.0 * 15f64.log10()).abs() < 1e-9);
        assert!((r2.det_abs / 15f64.powi(-15) - 1.0).abs() < 1e-9);

        let r3 = appendix_a_scaling(3).unwrap();
        assert_eq!(r3.kappa, 63.0);
        assert!((r3.log10_det_abs + 63.0 * 63f64.log10()).abs() < 1e-8);
        assert!(appendix_a_scaling(0).is_err());
    }

    #[test]
    fn search_reaches_bound() {
        let (spec, det) = maximize_separable_det(11, SearchOptions::default()).unwrap();
        assert!(det.abs() <= SEPARABLE_DET_BOUND + 1e-10);
        assert!(det.abs() >= SEPARABLE_DET_BOUND - 1e-4, "{det}");
        for w in spec.weights {
            assert!((w - 0.25).abs() < 1e-3);
        }
    }
}
