//! Exponential quadrature for `∫ K(t − s) f(s) ds`.
//!
//! Every kernel is a short sum `Re Σ c·e^{λτ}`, so with `f` linear on an
//! interval the integral reduces to `∫₀ʰ e^{λr} dr` and `∫₀ʰ r e^{λr} dr`,
//! both available in closed form.

use num_complex::Complex64;

use super::{dphi2, heat, omega, phi2, relax};
use crate::error::{Error, Result};
use crate::spectral::{Lattice, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `e^{−ν|n|²τ}`
    Heat,
    /// `Φ₂(τ, n)`
    Phi2,
    /// `∂_τ Φ₂(τ, n)`
    DPhi2,
    /// `e^{−τ}`
    Relax,
}

impl Kernel {
    pub const ALL: [Kernel; 4] = [Kernel::Heat, Kernel::Phi2, Kernel::DPhi2, Kernel::Relax];

    fn slot(self) -> usize {
        match self {
            Kernel::Heat => 0,
            Kernel::Phi2 => 1,
            Kernel::DPhi2 => 2,
            Kernel::Relax => 3,
        }
    }

    pub fn eval(self, tau: f64, m: usize, nu: f64) -> f64 {
        match self {
            Kernel::Heat => heat(tau, m, nu),
            Kernel::Phi2 => phi2(tau, m),
            Kernel::DPhi2 => dphi2(tau, m),
            Kernel::Relax => relax(tau),
        }
    }

    /// `(c, λ)` pairs with `K(τ) = Re Σ c e^{λτ}`.
    fn terms(self, m: usize, nu: f64) -> Vec<(Complex64, Complex64)> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match (self, m) {
            (Kernel::Heat, _) => vec![(c(1.0, 0.0), c(-nu * m as f64, 0.0))],
            (Kernel::Relax, _) => vec![(c(1.0, 0.0), c(-1.0, 0.0))],
            (Kernel::Phi2, 0) => vec![(c(1.0, 0.0), c(0.0, 0.0)), (c(-1.0, 0.0), c(-1.0, 0.0))],
            (Kernel::DPhi2, 0) => vec![(c(1.0, 0.0), c(-1.0, 0.0))],
            (Kernel::Phi2, _) => {
                let w = omega(m);
                vec![(c(0.0, -1.0 / w), c(-0.5, w))]
            }
            (Kernel::DPhi2, _) => {
                let w = omega(m);
                vec![(c(1.0, 0.5 / w), c(-0.5, w))]
            }
        }
    }
}

/// `(∫₀¹ e^{zu} du, ∫₀¹ u e^{zu} du)`.
fn exp_moments(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 0.5 {
        // Σ z^k/(k+1)!  and  Σ z^k/(k!(k+2))
        let mut p0 = Complex64::default();
        let mut p1 = Complex64::default();
        let mut zk_over_fact = Complex64::new(1.0, 0.0);
        for k in 0..24 {
            p0 += zk_over_fact / (k + 1) as f64;
            p1 += zk_over_fact / (k + 2) as f64;
            zk_over_fact *= z / (k + 1) as f64;
        }
        (p0, p1)
    } else {
        let ez = z.exp();
        ((ez - 1.0) / z, (ez * (z - 1.0) + 1.0) / (z * z))
    }
}

/// Weights `(w_start, w_end)` such that
/// `∫_{s₀}^{s₀+h} K(t−s) f(s) ds = w_start f(s₀) + w_end f(s₀+h)` for `f`
/// linear in `s`, where `lag = t − (s₀ + h) ≥ 0`.
pub fn interval_weights(kernel: Kernel, m: usize, nu: f64, lag: f64, h: f64) -> (f64, f64) {
    let mut ws = 0.0;
    let mut we = 0.0;
    for (c, lambda) in kernel.terms(m, nu) {
        let (p0, p1) = exp_moments(lambda * h);
        let shift = c * (lambda * lag).exp() * h;
        ws += (shift * p1).re;
        we += (shift * (p0 - p1)).re;
    }
    (ws, we)
}

/// Precomputed quadrature weights for a uniform time grid with `steps`
/// intervals of length `dt`, for all four kernels and every lag.
#[derive(Clone, Debug)]
pub struct DuhamelGrid {
    lattice: Lattice,
    dt: f64,
    nu: f64,
    steps: usize,
    msq: Vec<usize>,
    /// `weights[kernel][lag][m]`
    weights: [Vec<Vec<(f64, f64)>>; 4],
}

impl DuhamelGrid {
    pub fn new(lattice: Lattice, dt: f64, nu: f64, steps: usize) -> Self {
        assert!(dt > 0.0 && steps > 0);
        let max_m = lattice.max_mode_sq();
        let weights = Kernel::ALL.map(|k| {
            (0..steps)
                .map(|lag| (0..=max_m).map(|m| interval_weights(k, m, nu, lag as f64 * dt, dt)).collect())
                .collect()
        });
        Self {
            lattice,
            dt,
            nu,
            steps,
            msq: lattice.mode_sq_table(),
            weights,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Weights for the most recent interval (`lag = 0`), indexed by `m`.
    pub fn last_interval(&self, kernel: Kernel) -> &[(f64, f64)] {
        &self.weights[kernel.slot()][0]
    }

    /// `∫₀^{t_k} K(t_k − s) f(s) ds` at every node `t_k = k·dt` of the grid,
    /// from forcing samples at the nodes.
    pub fn integrate(&self, kernel: Kernel, samples: &[SpectralField]) -> Result<Vec<SpectralField>> {
        if samples.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: samples.len(),
            });
        }
        if samples.len() > self.steps + 1 {
            return Err(Error::InvalidConfig(format!(
                "{} samples exceed the {}-step quadrature grid",
                samples.len(),
                self.steps
            )));
        }
        let lat = self.lattice;
        let comps = samples[0].comps();
        for s in samples {
            lat.ensure_same(&s.lattice())?;
        }
        let table = &self.weights[kernel.slot()];
        let nodes = samples.len();
        let mut out = vec![SpectralField::zeros(lat, comps); nodes];
        let mut f = vec![Complex64::default(); nodes];
        for c in 0..comps {
            for idx in 0..lat.len() {
                let m = self.msq[idx];
                for (i, s) in samples.iter().enumerate() {
                    f[i] = s.at(idx, c);
                }
                if f.iter().all(|z| *z == Complex64::default()) {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate().skip(1) {
                    let mut acc = Complex64::default();
                    for i in 0..k {
                        let (ws, we) = table[k - 1 - i][m];
                        acc += ws * f[i] + we * f[i + 1];
                    }
                    *o.at_mut(idx, c) = acc;
                }
            }
        }
        Ok(out)
    }

    /// Value at the last sample time only.
    pub fn integrate_last(&self, kernel: Kernel, samples: &[SpectralField]) -> Result<SpectralField> {
        Ok(self.integrate(kernel, samples)?.pop().expect("at least two samples"))
    }
}

/// `∫_{t_low}^{t_high} K(t_high − s) f(s) ds` from samples of `f` at equally
/// spaced nodes spanning `[t_low, t_high]`.
pub fn duhamel(kernel: Kernel, samples: &[SpectralField], t_low: f64, t_high: f64, nu: f64) -> Result<SpectralField> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    if t_high <= t_low {
        return Err(Error::InvalidConfig(format!("empty interval [{t_low}, {t_high}]")));
    }
    let steps = samples.len() - 1;
    let grid = DuhamelGrid::new(samples[0].lattice(), (t_high - t_low) / steps as f64, nu, steps);
    grid.integrate_last(kernel, samples)
}
