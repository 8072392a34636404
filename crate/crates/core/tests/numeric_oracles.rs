use aapt_core::numeric::{adjugate, determinant, invert, svd, symmetric_eigen, RealMatrix};
use proptest::prelude::*;
use rand::Rng;

/// Leibniz expansion over all permutations.
fn leibniz_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, m: &[Vec<f64>], total: &mut f64) {
    let n = perm.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        *total += sign * (0..n).map(|i| m[i][perm[i]]).product::<f64>();
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-1.0f64..1.0, n), n))
}

proptest! {
    #[test]
    fn determinant_matches_leibniz(rows in matrix_strategy(6)) {
        let m = RealMatrix::from_rows(&rows).unwrap();
        let d = determinant(&m).unwrap();
        prop_assert!((d - leibniz_det(&rows)).abs() < 1e-12);
    }

    #[test]
    fn adjugate_times_matrix_is_det_identity(rows in matrix_strategy(5)) {
        let m = RealMatrix::from_rows(&rows).unwrap();
        let n = m.rows();
        let d = determinant(&m).unwrap();
        let prod = &adjugate(&m).unwrap() * &m;
        prop_assert!(prod.max_abs_diff(&RealMatrix::identity(n).scale(d)) < 1e-12);
    }

    #[test]
    fn inverse_is_two_sided(rows in matrix_strategy(6)) {
        let m = RealMatrix::from_rows(&rows).unwrap();
        let n = m.rows();
        prop_assume!(determinant(&m).unwrap().abs() > 1e-3);
        let inv = invert(&m, 1e-12).unwrap();
        prop_assert!((&m * &inv).max_abs_diff(&RealMatrix::identity(n)) < 1e-8);
        prop_assert!((&inv * &m).max_abs_diff(&RealMatrix::identity(n)) < 1e-8);
    }
}

#[test]
fn svd_invariants_on_random_matrices() {
    let mut rng = aapt_core::rng::stream_rng(7, 0);
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let m = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let s = svd(&m);
        let u = &s.left_vectors;
        let v = &s.right_vectors;
        let id = RealMatrix::identity(n);
        assert!((&u.transpose() * u).max_abs_diff(&id) < 1e-10);
        assert!((&v.transpose() * v).max_abs_diff(&id) < 1e-10);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-10);
        let sv = &s.singular_values;
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        assert!(sv.iter().all(|&x| x >= 0.0));
        // Product of singular values is |det|; squares sum to the Frobenius norm squared.
        let det = determinant(&m).unwrap().abs();
        assert!((sv.iter().product::<f64>() - det).abs() < 1e-10);
        let fro2: f64 = m.as_slice().iter().map(|x| x * x).sum();
        assert!((sv.iter().map(|x| x * x).sum::<f64>() - fro2).abs() < 1e-10);
    }
}

#[test]
fn symmetric_eigen_reconstructs() {
    let mut rng = aapt_core::rng::stream_rng(8, 0);
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let a = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let s = &a + &a.transpose();
        let (vals, vecs) = symmetric_eigen(&s).unwrap();
        let back = &(&vecs * &RealMatrix::from_diag(&vals)) * &vecs.transpose();
        assert!(back.max_abs_diff(&s) < 1e-10);
    }
}
