//! Exact linear evolution on each Fourier mode.
//!
//! With `m = |n|²` and `ω = √(m − 1/4)`:
//!
//! * heat: `e^{−ν m t}`
//! * damped wave `ÿ + ẏ + m y = 0`: `Φ₁ = e^{−t/2} cos ωt`,
//!   `Φ₂ = e^{−t/2} sin(ωt)/ω`, so `y = Φ₁ a + Φ₂ (a/2 + b)` for
//!   `y(0) = a`, `ẏ(0) = b`. At `m = 0` the hyperbolic branch applies.
//! * relaxation: `e^{−t}`
//!
//! Duhamel integrals use forcing interpolated linearly in time on each
//! interval, integrated exactly against the kernel.

mod duhamel;

use std::io::Write;

use crate::error::Result;
use crate::spectral::{Lattice, SpectralField};

pub use duhamel::{duhamel, interval_weights, DuhamelGrid, Kernel};

#[inline]
fn omega(m: usize) -> f64 {
    (m as f64 - 0.25).sqrt()
}

pub fn phi1(t: f64, m: usize) -> f64 {
    if m == 0 {
        0.5 * (1.0 + (-t).exp())
    } else {
        (-0.5 * t).exp() * (omega(m) * t).cos()
    }
}

pub fn phi2(t: f64, m: usize) -> f64 {
    if m == 0 {
        -(-t).exp_m1()
    } else {
        let w = omega(m);
        (-0.5 * t).exp() * (w * t).sin() / w
    }
}

/// Time derivative of [`phi2`].
pub fn dphi2(t: f64, m: usize) -> f64 {
    if m == 0 {
        (-t).exp()
    } else {
        let w = omega(m);
        (-0.5 * t).exp() * ((w * t).cos() - (w * t).sin() / (2.0 * w))
    }
}

pub fn heat(t: f64, m: usize, nu: f64) -> f64 {
    (-nu * m as f64 * t).exp()
}

pub fn relax(t: f64) -> f64 {
    (-t).exp()
}

fn per_m(lattice: Lattice, f: impl Fn(usize) -> f64) -> Vec<f64> {
    (0..=lattice.max_mode_sq()).map(f).collect()
}

/// `e^{tνΔ} u`
pub fn apply_heat(u: &SpectralField, t: f64, nu: f64) -> SpectralField {
    let table = per_m(u.lattice(), |m| heat(t, m, nu));
    u.apply_radial(|m| table[m])
}

/// `ℒ₁(t) u`
pub fn apply_l1(u: &SpectralField, t: f64) -> SpectralField {
    let table = per_m(u.lattice(), |m| phi1(t, m));
    u.apply_radial(|m| table[m])
}

/// `ℒ₂(t) u`
pub fn apply_l2(u: &SpectralField, t: f64) -> SpectralField {
    let table = per_m(u.lattice(), |m| phi2(t, m));
    u.apply_radial(|m| table[m])
}

/// Multiplier values for one time increment, indexed by `m = |n|²`.
#[derive(Clone, Debug)]
pub struct PropagatorTable {
    lattice: Lattice,
    dt: f64,
    nu: f64,
    pub heat: Vec<f64>,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub dphi2: Vec<f64>,
    pub relax: f64,
}

impl PropagatorTable {
    pub fn new(lattice: Lattice, dt: f64, nu: f64) -> Self {
        Self {
            lattice,
            dt,
            nu,
            heat: per_m(lattice, |m| heat(dt, m, nu)),
            phi1: per_m(lattice, |m| phi1(dt, m)),
            phi2: per_m(lattice, |m| phi2(dt, m)),
            dphi2: per_m(lattice, |m| dphi2(dt, m)),
            relax: relax(dt),
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Fault injection for self-checks: flips the sign of the `Φ₂` multiplier.
    #[doc(hidden)]
    pub fn corrupt_phi2_sign(&mut self) {
        self.phi2.iter_mut().for_each(|x| *x = -*x);
    }

    /// CSV dump with columns `m,heat,phi1,phi2,dphi2`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "m,heat,phi1,phi2,dphi2")?;
        for m in 0..self.heat.len() {
            writeln!(w, "{m},{:e},{:e},{:e},{:e}", self.heat[m], self.phi1[m], self.phi2[m], self.dphi2[m])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_field;

    #[test]
    fn initial_values() {
        for m in 0..40 {
            assert_eq!(phi1(0.0, m), 1.0);
            assert_eq!(phi2(0.0, m), 0.0);
            assert_eq!(dphi2(0.0, m), 1.0);
        }
    }

    #[test]
    fn hyperbolic_branch() {
        assert!((phi1(1.0, 0) - 0.5 * (1.0 + (-1f64).exp())).abs() < 1e-15);
        assert!((phi1(1.0, 0) - 0.6839397).abs() < 1e-7);
        assert!((phi2(1.0, 0) - 0.6321206).abs() < 1e-7);
        assert!((dphi2(1.0, 0) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn half_period() {
        let w = 0.75f64.sqrt();
        let t = std::f64::consts::PI / w;
        assert!((phi1(t, 1) + (-std::f64::consts::PI / 3f64.sqrt()).exp()).abs() < 1e-14);
    }

    #[test]
    fn initial_slope_of_phi2_is_one() {
        let h = 1e-5;
        for m in [0, 1, 2, 5, 17, 300] {
            // one-sided at t = 0 is fine: phi2 is smooth through 0
            let slope = (phi2(h, m) - phi2(-h, m)) / (2.0 * h);
            assert!((slope - 1.0).abs() < 1e-8, "m={m} slope={slope}");
        }
    }

    #[test]
    fn dphi2_matches_finite_differences() {
        let h = 1e-5;
        let (t, m) = (0.7, 5);
        let fd = (phi2(t + h, m) - phi2(t - h, m)) / (2.0 * h);
        assert!((fd - dphi2(t, m)).abs() < 1e-8);
    }

    #[test]
    fn heat_cases() {
        let lat = Lattice::new(3);
        let u = random_field(lat, 3, 1, 0.0);
        assert_eq!(apply_heat(&u, 0.0, 0.3), u);

        let mut c = SpectralField::vector(lat);
        c.set([0, 0, 0], 1, num_complex::Complex64::new(2.0, 0.0));
        assert_eq!(apply_heat(&c, 5.0, 0.3), c);

        let mut s = SpectralField::scalar(lat);
        s.set_pair([2, 0, 0], 0, num_complex::Complex64::new(1.0, 0.0));
        let out = apply_heat(&s, 0.25, 1.0);
        assert!((out.get([2, 0, 0], 0).re - (-1f64).exp()).abs() < 1e-15);

        let a = apply_heat(&apply_heat(&u, 0.3, 0.7), 0.45, 0.7);
        let b = apply_heat(&u, 0.75, 0.7);
        assert!(a.max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn table_envelope() {
        let table = PropagatorTable::new(Lattice::new(6), 0.37, 0.2);
        for m in 1..table.phi1.len() {
            assert!(table.heat[m] > 0.0 && table.heat[m] <= 1.0);
            assert!(table.phi1[m].abs() <= 1.0);
            let scale = (m as f64 - 0.25).max(0.25).sqrt();
            assert!(table.phi2[m].abs() * scale <= 1.0);
        }
        let mut out = Vec::new();
        table.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("m,heat,phi1,phi2,dphi2\n0,1e0,"));
        assert_eq!(text.lines().count(), 1 + 3 * 36 + 1);
    }
}
