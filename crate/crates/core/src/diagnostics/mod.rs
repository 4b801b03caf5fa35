//! Quantitative checks on computed states: the energy identity, residuals
//! of the original PDE system, constraint and mean-mode conservation, X^s
//! norm series and Fourier decay exponents.

mod fit;
mod lemma;
mod record;

pub use fit::{convergence_order, fit_power_law, slope_fit, wave_period, AxisEnvelope, SlopeFit};
pub use lemma::{lemma_check, LemmaResult};
pub use record::{DiagnosticsRecord, Recorder, CSV_FIXED_COLUMNS};

use crate::error::{Error, Result};
use crate::solver::{compute_j, recover_pressure, StateVector};
use crate::spectral::{cross, tensor_divergence, SpectralField};

/// `½ Σ_n (|v̂|² + |B̂|² + |Ê|²)` with `E = Ẽ + Ē`.
pub fn energy(s: &StateVector) -> f64 {
    0.5 * (s.v.l2_sq() + s.b.l2_sq() + s.e().l2_sq())
}

/// `‖j‖²/σ + ν‖∇v‖²` in the same normalization as [`energy`].
pub fn dissipation(s: &StateVector, nu: f64, sigma: f64) -> Result<f64> {
    let j = compute_j(&s.v, &s.b, &s.e_tilde, &s.e_bar, sigma)?;
    let grad = s
        .lattice()
        .mode_sq_table()
        .iter()
        .enumerate()
        .map(|(idx, &m)| m as f64 * s.v.magnitude_at(idx).powi(2))
        .sum::<f64>();
    Ok(j.l2_sq() / sigma + nu * grad)
}

/// `|(𝓔(s₁) − 𝓔(s₀))/dt + (D(s₀) + D(s₁))/2|`.
pub fn energy_budget(s0: &StateVector, s1: &StateVector, dt: f64, nu: f64, sigma: f64) -> Result<f64> {
    let d = 0.5 * (dissipation(s0, nu, sigma)? + dissipation(s1, nu, sigma)?);
    Ok(((energy(s1) - energy(s0)) / dt + d).abs())
}

/// `|B̂(0)|`
pub fn mean_mode_b(s: &StateVector) -> f64 {
    s.b.magnitude_at(s.lattice().zero_index())
}

/// X⁰ norms of the residuals of Faraday's law, Ampère's law and the
/// momentum equation (with recovered pressure).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SystemResiduals {
    pub faraday: f64,
    pub ampere: f64,
    pub momentum: f64,
}

impl SystemResiduals {
    pub fn max(self, other: Self) -> Self {
        Self {
            faraday: self.faraday.max(other.faraday),
            ampere: self.ampere.max(other.ampere),
            momentum: self.momentum.max(other.momentum),
        }
    }
}

/// Residuals at the middle of three consecutive states, using centered
/// differences for the time derivatives.
pub fn centered_residuals(prev: &StateVector, mid: &StateVector, next: &StateVector, nu: f64, sigma: f64) -> Result<SystemResiduals> {
    let two_dt = next.t - prev.t;
    if !(two_dt > 0.0) {
        return Err(Error::InvalidConfig(format!("states are not increasing in time: {} then {}", prev.t, next.t)));
    }
    let rate = |a: &SpectralField, b: &SpectralField| (b - a).scaled(1.0 / two_dt);
    let e = mid.e();
    let j = compute_j(&mid.v, &mid.b, &mid.e_tilde, &mid.e_bar, sigma)?;

    let mut faraday = rate(&prev.b, &next.b);
    faraday += &e.curl()?;

    let mut ampere = rate(&prev.e(), &next.e());
    ampere -= &mid.b.curl()?;
    ampere += &j;

    let p = recover_pressure(&mid.v, &j, &mid.b)?;
    let mut momentum = rate(&prev.v, &next.v);
    momentum -= &mid.v.laplacian().scaled(nu);
    momentum += &tensor_divergence(&mid.v, &mid.v)?;
    momentum += &p.gradient()?;
    momentum -= &cross(&j, &mid.b)?;

    Ok(SystemResiduals {
        faraday: faraday.xnorm(0.0),
        ampere: ampere.xnorm(0.0),
        momentum: momentum.xnorm(0.0),
    })
}

/// Largest residuals over the interior states of a window of ≥ 3 states.
pub fn system_residuals(window: &[StateVector], nu: f64, sigma: f64) -> Result<SystemResiduals> {
    if window.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: window.len() });
    }
    window.windows(3).try_fold(SystemResiduals::default(), |acc, w| {
        Ok(acc.max(centered_residuals(&w[0], &w[1], &w[2], nu, sigma)?))
    })
}

/// `‖u‖_{X^k}` for `u = v, B, Ẽ, Ē` at each state.
pub fn gradient_norm_series(trajectory: &[StateVector], k: f64) -> Vec<[f64; 4]> {
    trajectory
        .iter()
        .map(|s| {
            let f = s.fields();
            [f[0].xnorm(k), f[1].xnorm(k), f[2].xnorm(k), f[3].xnorm(k)]
        })
        .collect()
}
