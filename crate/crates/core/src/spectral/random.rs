//! Seeded random fields for tests, calibration and initial data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::SpectralField;
use super::lattice::{mode_sq, Lattice};

/// Real field with uniform random coefficients damped by `(1+|n|²)^{-decay/2}`.
pub fn random_field(lattice: Lattice, comps: usize, seed: u64, decay: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SpectralField::from_fn(lattice, comps, |n, _| {
        let damp = (1.0 + mode_sq(n) as f64).powf(-0.5 * decay);
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * damp
    });
    out.symmetrize();
    out
}

/// Real field supported on `max_i |n_i| ≤ kmax`, `n ≠ 0`, with coefficients
/// of modulus at most `amplitude`.
pub fn random_low_modes(lattice: Lattice, comps: usize, seed: u64, kmax: i64, amplitude: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SpectralField::from_fn(lattice, comps, |n, _| {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if n.iter().all(|x| x.abs() <= kmax) && n != [0, 0, 0] {
            z * (amplitude / std::f64::consts::SQRT_2)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    out.symmetrize();
    out
}
