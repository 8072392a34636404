use aapt_core::channels::{chi_from_chi_tilde, chi_tilde_from_chi, random_channel, NamedChannel};
use aapt_core::faithfulness::condition_number;
use aapt_core::numeric::{frobenius_norm, RealMatrix};
use aapt_core::rng::stream_rng;
use aapt_core::states::{bell_state, random_mixed, tau_from_rho, werner_state, BellKind};
use aapt_core::tomography::{aapt, simulate_measurement, sqpt, NoiseModel, SqptInputSet};

#[test]
fn contraction_matches_definition_and_round_trips() {
    for k in 0..1000 {
        let mut rng = stream_rng(31, k);
        let ch = random_channel(&mut rng);
        let chi = ch.chi();
        assert!(chi.is_physical());
        let via_b = chi_tilde_from_chi(&chi).unwrap();
        let direct = ch.chi_tilde();
        assert!(frobenius_norm(&(via_b.matrix() - direct.matrix())) < 1e-12);
        let back = chi_from_chi_tilde(&direct).unwrap();
        assert!(back.matrix().max_abs_diff(chi.matrix()) < 1e-8);
        assert!(direct.trace_preservation_residual() < 1e-12);
    }
}

#[test]
fn extended_channel_acts_as_transfer_matrix_on_tau() {
    for k in 0..500 {
        let mut rng = stream_rng(32, k);
        let ch = random_channel(&mut rng);
        let rho = random_mixed(&mut rng);
        let tau_in = tau_from_rho(&rho).unwrap();
        let tau_out = tau_from_rho(&ch.apply(&rho).unwrap()).unwrap();
        let predicted = ch.chi_tilde().matrix() * tau_in.matrix();
        assert!(tau_out.matrix().max_abs_diff(&predicted) < 1e-12);
    }
}

#[test]
fn standard_and_ancilla_assisted_agree() {
    let inputs = SqptInputSet::canonical();
    let states = [
        tau_from_rho(&bell_state(BellKind::PsiPlus)).unwrap(),
        tau_from_rho(&werner_state(1.0 / 3.0, BellKind::PhiPlus).unwrap()).unwrap(),
    ];
    for k in 0..300 {
        let mut rng = stream_rng(33, k);
        let ch = random_channel(&mut rng);
        let s = sqpt(&ch, &inputs, NoiseModel::None).unwrap();
        for tau in &states {
            let a = aapt(tau, &ch, NoiseModel::None, 1e-12).unwrap();
            assert!(frobenius_norm(&(a.chi_tilde_hat.matrix() - s.chi_tilde_hat.matrix())) < 1e-9);
        }
    }
}

#[test]
fn measurement_noise_has_the_requested_moments() {
    let rho = bell_state(BellKind::PhiPlus);
    let exact = tau_from_rho(&rho).unwrap().matrix().clone();
    let sigma = 0.01;
    let noise = NoiseModel::gaussian(sigma, 34).unwrap();
    let (mut sum, mut sum_sq, mut count) = (0.0, 0.0, 0.0);
    for run in 0..10_000 {
        let obs = simulate_measurement(&rho, noise.for_run(run)).unwrap();
        assert_eq!(obs[(0, 0)], 1.0);
        for (i, (o, e)) in obs.as_slice().iter().zip(exact.as_slice()).enumerate() {
            if i == 0 {
                continue;
            }
            let d = o - e;
            sum += d;
            sum_sq += d * d;
            count += 1.0;
        }
    }
    let mean = sum / count;
    let var = sum_sq / count - mean * mean;
    // Standard error of the mean is sigma / sqrt(1.5e5) ~ 2.6e-5.
    assert!(mean.abs() < 5.0 * sigma / count.sqrt(), "mean {mean}");
    assert!(
        (var.sqrt() / sigma - 1.0).abs() < 0.01,
        "std {}",
        var.sqrt()
    );
}

#[test]
fn per_run_ratio_is_bounded_by_kappa() {
    let dep = NamedChannel::Depolarizing { p: 0.3 }.build().unwrap();
    for k in 0..100 {
        let mut rng = stream_rng(35, k);
        let tau = tau_from_rho(&random_mixed(&mut rng)).unwrap();
        let kappa = condition_number(&tau);
        let ch = if k % 2 == 0 {
            dep.clone()
        } else {
            random_channel(&mut rng)
        };
        let noise = NoiseModel::gaussian(1e-3, 36).unwrap();
        for run in 0..20 {
            let r = aapt(&tau, &ch, noise.for_run(k * 100 + run), 1e-12).unwrap();
            let ratio = r.error_ratio.unwrap();
            assert!(
                ratio <= kappa * (1.0 + 1e-6),
                "ratio {ratio} > kappa {kappa}"
            );
        }
    }
}

#[test]
fn noiseless_depolarizing_is_diagonal() {
    let dep = NamedChannel::Depolarizing { p: 0.3 }.build().unwrap();
    let bell = tau_from_rho(&bell_state(BellKind::PhiPlus)).unwrap();
    let r = aapt(&bell, &dep, NoiseModel::None, 1e-12).unwrap();
    let expected = RealMatrix::from_diag(&[1.0, 0.7, 0.7, 0.7]);
    assert!(r.chi_tilde_hat.matrix().max_abs_diff(&expected) < 1e-12);
    assert_eq!(
        r.error_vs_truth,
        frobenius_norm(&(r.chi_tilde_hat.matrix() - dep.chi_tilde().matrix()))
    );
}
