use aapt_core::faithfulness::{min_frobenius_at_fixed_det, sinisterness};
use aapt_core::geometry::{
    appendix_a_scaling, regular_simplex, regular_simplex_volume_closed_form,
    separable_sinisterness, simplex_volume, tetra_optimal_spec, SEPARABLE_DET_BOUND,
};
use aapt_core::rng::stream_rng;
use aapt_core::states::{random_separable, separable_from_spec, tau_from_rho};

/// Determinant by Gaussian elimination with partial pivoting, any size.
fn elimination_det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            let pivot = a[c].clone();
            for (x, y) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * y;
            }
        }
    }
    det
}

/// Volume from pairwise squared distances:
/// `V^2 = (-1)^(n+1) / (2^n (n!)^2) det(CM)`.
fn cayley_menger_volume(points: &[Vec<f64>]) -> f64 {
    let k = points.len();
    let n = k - 1;
    let mut cm = vec![vec![0.0; k + 1]; k + 1];
    for i in 1..=k {
        cm[0][i] = 1.0;
        cm[i][0] = 1.0;
        for j in 1..=k {
            cm[i][j] = points[i - 1]
                .iter()
                .zip(&points[j - 1])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
        }
    }
    let det = elimination_det(cm);
    let sign = if (n + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let fact: f64 = (1..=n).map(|x| x as f64).product();
    (sign * det / (2f64.powi(n as i32) * fact * fact)).sqrt()
}

#[test]
fn regular_simplex_volumes_match_cayley_menger() {
    for n in 1..=15 {
        let s = regular_simplex(n).unwrap();
        for v in s.vertices() {
            let r: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
        let oracle = cayley_menger_volume(s.vertices());
        let gram = simplex_volume(&s).unwrap();
        let closed = regular_simplex_volume_closed_form(n);
        assert!(
            ((gram - oracle) / oracle).abs() < 1e-10,
            "n={n}: {gram} vs {oracle}"
        );
        assert!(
            ((closed - oracle) / oracle).abs() < 1e-10,
            "n={n}: {closed} vs {oracle}"
        );
    }
}

#[test]
fn regular_simplex_edge_length() {
    for n in 1..=15 {
        let s = regular_simplex(n).unwrap();
        let expected = (2.0 + 2.0 / n as f64).sqrt();
        let v = s.vertices();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let d: f64 = v[i]
                    .iter()
                    .zip(&v[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                assert!((d - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn scaling_rows() {
    let one = appendix_a_scaling(1).unwrap();
    assert_eq!(one.m, 4);
    assert!((one.kappa - 3.0).abs() < 1e-12);
    assert!((one.det_abs - 1.0 / 27.0).abs() < 1e-14);
    let two = appendix_a_scaling(2).unwrap();
    assert!((two.kappa - 15.0).abs() < 1e-12);
    assert!((two.log10_det_abs + 15.0 * 15f64.log10()).abs() < 1e-9);
    // Independent route: the diagonal product.
    let prod: f64 = two.tau_diagonal.iter().map(|x| x.log10()).sum();
    assert!((prod - two.log10_det_abs).abs() < 1e-9);
}

#[test]
fn closed_form_matches_density_matrix_pipeline() {
    for k in 0..1000 {
        let mut rng = stream_rng(11, k);
        let spec = random_separable(&mut rng);
        let tau = tau_from_rho(&separable_from_spec(&spec).unwrap()).unwrap();
        let pipeline = sinisterness(&tau).unwrap();
        let closed = separable_sinisterness(&spec);
        assert!(
            (pipeline - closed).abs() < 1e-12,
            "sample {k}: {pipeline} vs {closed}"
        );
    }
}

#[test]
fn random_separable_states_respect_bound() {
    let mut max = 0.0f64;
    for k in 0..10_000 {
        let mut rng = stream_rng(12, k);
        let spec = random_separable(&mut rng);
        max = max.max(separable_sinisterness(&spec).abs());
    }
    assert!(max <= SEPARABLE_DET_BOUND + 1e-10, "max {max}");
}

#[test]
fn tetrahedral_optimum_signs() {
    for (mirrored, sign) in [(true, -1.0), (false, 1.0)] {
        let spec = tetra_optimal_spec(mirrored);
        let tau = tau_from_rho(&separable_from_spec(&spec).unwrap()).unwrap();
        assert!((sinisterness(&tau).unwrap() - sign / 27.0).abs() < 1e-14);
    }
}

#[test]
fn min_frobenius_matches_grid_search() {
    for det in [1.0 / 27.0, 0.01, 0.2, 0.5] {
        let n = 800;
        let mut best = f64::INFINITY;
        for i in 1..=n {
            for j in 1..=n {
                let x = i as f64 / n as f64;
                let y = j as f64 / n as f64;
                let z = det / (x * y);
                if z <= 1.0 {
                    best = best.min(1.0 + x * x + y * y + z * z);
                }
            }
        }
        let closed = min_frobenius_at_fixed_det(det).unwrap();
        assert!(closed <= best + 1e-12);
        assert!(
            best - closed < 1e-4,
            "det {det}: grid {best} closed {closed}"
        );
    }
}
