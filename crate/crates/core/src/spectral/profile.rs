//! Power-law coefficient profiles `ρ_s(n) = C1 / (C2 + |n|^{3+s})` and the
//! fields seeded from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::lattice::{mode_norm, Lattice, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
}

impl DecayProfile {
    pub fn new(s: f64, c1: f64, c2: f64) -> Self {
        Self { s, c1, c2 }
    }

    /// `ρ_s(n)`; infinite at `n = 0` when `C2 = 0`.
    pub fn eval(&self, n: Mode) -> f64 {
        self.eval_radius(mode_norm(n))
    }

    pub fn eval_radius(&self, r: f64) -> f64 {
        self.c1 / (self.c2 + r.powf(3.0 + self.s))
    }
}

pub fn rho_eval(profile: &DecayProfile, n: Mode) -> f64 {
    profile.eval(n)
}

/// Smooth comparison profile `a·e^{−κ|n|}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticProfile {
    pub amplitude: f64,
    pub rate: f64,
}

impl AnalyticProfile {
    pub fn eval(&self, n: Mode) -> f64 {
        self.amplitude * (-self.rate * mode_norm(n)).exp()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPattern {
    #[default]
    Uniform,
    /// `(−1)^{n1+n2+n3}`
    Alternating,
}

impl SignPattern {
    pub fn sign(&self, n: Mode) -> f64 {
        match self {
            SignPattern::Uniform => 1.0,
            SignPattern::Alternating => {
                if (n[0] + n[1] + n[2]).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Vector field whose `component` has real coefficients `sign(n)·magnitude(n)`
/// and whose other components vanish. Both sign patterns are even in `n`, so
/// the field is real. Non-finite magnitudes (the `C2 = 0` mean mode) are
/// replaced by zero.
pub fn seed_component(lattice: Lattice, component: usize, pattern: SignPattern, magnitude: impl Fn(Mode) -> f64) -> SpectralField {
    assert!(component < 3);
    SpectralField::from_fn(lattice, 3, |n, c| {
        if c != component {
            return Complex64::default();
        }
        let m = magnitude(n);
        if m.is_finite() {
            Complex64::new(pattern.sign(n) * m, 0.0)
        } else {
            Complex64::default()
        }
    })
}

pub fn seed_field_from_profile(lattice: Lattice, profile: &DecayProfile, component: usize, pattern: SignPattern) -> SpectralField {
    seed_component(lattice, component, pattern, |n| profile.eval(n))
}
