use wmhd::experiments::selfcheck::propagator_ode_check;
use wmhd::propagators::{apply_heat, apply_l1, apply_l2, dphi2, phi2};
use wmhd::spectral::random::random_field;
use wmhd::spectral::Lattice;

#[test]
fn ode_holds_up_to_the_largest_lattice_mode() {
    // m up to 3(2N+1)² for N = 4
    let ms: Vec<usize> = (0..=243).step_by(7).chain([243]).collect();
    let ts: Vec<f64> = (0..=40).map(|k| 0.05 * k as f64).collect();
    let (residual, initial) = propagator_ode_check(&ms, &ts, 1e-4);
    assert!(residual <= 1e-6, "{residual}");
    assert!(initial <= 1e-8, "{initial}");
}

#[test]
fn heat_is_a_semigroup() {
    let u = random_field(Lattice::new(4), 3, 5, 0.0);
    let nu = 0.3;
    for (s, t) in [(0.1, 0.2), (0.5, 1.5), (0.0, 0.7)] {
        let two = apply_heat(&apply_heat(&u, s, nu), t, nu);
        assert!((&two - &apply_heat(&u, s + t, nu)).max_abs() <= 1e-13);
    }
}

#[test]
fn wave_propagators_are_uniformly_bounded() {
    let u = random_field(Lattice::new(6), 3, 8, 0.0);
    let norm = u.xnorm(0.0);
    let mut worst: f64 = 0.0;
    for k in 0..=200 {
        let t = 0.01 * k as f64;
        worst = worst.max(apply_l1(&u, t).xnorm(0.0) / norm).max(apply_l2(&u, t).xnorm(0.0) / norm);
    }
    assert!(worst <= 3.0, "{worst}");
}

#[test]
fn dphi2_is_the_derivative_of_phi2() {
    let h = 1e-5;
    for m in [0usize, 1, 2, 5, 17, 48, 147] {
        for k in 0..=20 {
            let t = 0.1 * k as f64;
            let fd = (phi2(t + h, m) - phi2(t - h, m)) / (2.0 * h);
            assert!((fd - dphi2(t, m)).abs() <= 1e-8, "m={m} t={t}");
        }
    }
}
