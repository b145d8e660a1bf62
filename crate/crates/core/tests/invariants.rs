use dsql_core::bellstats::{chsh_s, n_sigma, required_counts, simulate_bell_counts};
use dsql_core::linkbudget::{
    link_efficiency, link_efficiency_far_field, LossFactors, OpticalTerminal,
};
use dsql_core::physcore::EARTH_RADIUS;
use dsql_core::relorbit::{epsilon_observatory, epsilon_satellite_circular, Body};
use dsql_core::teleportsim::{
    mle_reconstruct, state_fidelity, tomography_settings, trace_distance, werner_state,
    DensityMatrix4, TomographyRun,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn required_counts_is_minimal(p in 0.75f64..1.0, target in 1.0f64..8.0) {
        let n = required_counts(p, target).unwrap();
        prop_assert!(n_sigma(n as f64, p).unwrap() >= target);
        if n > 1 {
            prop_assert!(n_sigma((n - 1) as f64, p).unwrap() < target);
        }
    }

    #[test]
    fn link_efficiency_falls_with_range(r1 in 1e5f64..1e9, k in 1.01f64..10.0) {
        let tx = OpticalTerminal::new(0.3, 1.0).unwrap();
        let rx = OpticalTerminal::new(1.0, 1.0).unwrap();
        let l = LossFactors::lossless();
        let near = link_efficiency(&tx, &rx, r1, 810e-9, &l).unwrap();
        let far = link_efficiency(&tx, &rx, r1 * k, 810e-9, &l).unwrap();
        prop_assert!(far <= near);
        prop_assert!((0.0..=1.0).contains(&far));
        let ff = link_efficiency_far_field(&tx, &rx, r1 * k, 810e-9, &l).unwrap().efficiency;
        prop_assert!((0.0..=1.0).contains(&ff));
    }

    #[test]
    fn satellite_epsilon_is_small_and_positive(alt in 200e3f64..4e7) {
        let earth = Body::earth();
        let sat = epsilon_satellite_circular(EARTH_RADIUS + alt, &earth).unwrap();
        let ground = epsilon_observatory(&earth);
        prop_assert!(sat > 0.0 && ground > 0.0);
        prop_assert!(sat < 1e-8);
    }

    #[test]
    fn mle_is_physical_and_close_to_werner(p in 0.0f64..1.0) {
        let rho = werner_state(p).unwrap();
        let counts = dsql_core::teleportsim::expected_counts(&rho, 1e5).map(|row| row.map(|m| m.round() as u64));
        let fit = mle_reconstruct(&TomographyRun { settings: tomography_settings(), counts, n_total: 1e5 }).unwrap();
        prop_assert!(fit.state.eigenvalues()[3] >= -1e-10);
        prop_assert!(trace_distance(&fit.state, &rho) < 0.01);
        let f = state_fidelity(&fit.state, &DensityMatrix4::phi_plus()).unwrap();
        prop_assert!((f - (3.0 * p + 1.0) / 4.0).abs() < 0.01);
    }
}

#[test]
fn simulated_chsh_tracks_purity() {
    for (p, seed) in [(0.0, 1), (0.7, 2), (1.0, 3)] {
        let s = chsh_s(&simulate_bell_counts(p, 200_000, seed).unwrap()).unwrap();
        assert!(
            (s - 2.0 * std::f64::consts::SQRT_2 * p).abs() < 0.03,
            "p={p} S={s}"
        );
    }
}

#[test]
fn maximally_mixed_has_quarter_fidelity() {
    let f = state_fidelity(
        &DensityMatrix4::maximally_mixed(),
        &DensityMatrix4::phi_plus(),
    )
    .unwrap();
    assert!((f - 0.25).abs() < 1e-15);
}
