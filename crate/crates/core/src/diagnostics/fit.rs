//! Power-law fits of Fourier coefficient magnitudes along a lattice axis.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{mode_norm, Mode, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub exponent: f64,
    pub r2: f64,
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateRange(format!("need matching samples, got {} and {}", xs.len(), ys.len())));
    }
    if let Some(bad) = xs.iter().zip(ys).find(|(x, y)| !(**x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::DegenerateRange(format!("non-positive sample ({}, {})", bad.0, bad.1)));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateRange("all abscissae coincide".into()));
    }
    let exponent = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(SlopeFit { exponent, r2 })
}

/// Observed order `p` in `err ≈ C·dt^p`.
pub fn convergence_order(dts: &[f64], errors: &[f64]) -> Result<f64> {
    Ok(fit_power_law(dts, errors)?.exponent)
}

fn check_range(field: &SpectralField, axis: Mode, range: (i64, i64)) -> Result<()> {
    let (lo, hi) = range;
    if axis == [0, 0, 0] {
        return Err(Error::DegenerateRange("zero axis".into()));
    }
    if lo < 1 || hi - lo < 4 {
        return Err(Error::DegenerateRange(format!("range [{lo}, {hi}] needs m_lo ≥ 1 and m_hi − m_lo ≥ 4")));
    }
    let far = [axis[0] * hi, axis[1] * hi, axis[2] * hi];
    if !field.lattice().contains(far) {
        return Err(Error::DegenerateRange(format!("mode {far:?} lies outside N = {}", field.lattice().cutoff())));
    }
    Ok(())
}

fn axis_magnitude(field: &SpectralField, n: Mode, component: Option<usize>) -> f64 {
    match component {
        Some(c) => field.get(n, c).norm(),
        None => field.magnitude(n),
    }
}

/// Decay exponent of `|û(m·axis)|` (one component, or the vector magnitude)
/// over `m_lo ≤ m ≤ m_hi`.
pub fn slope_fit(field: &SpectralField, axis: Mode, range: (i64, i64), component: Option<usize>) -> Result<SlopeFit> {
    check_range(field, axis, range)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = (range.0..=range.1)
        .map(|m| {
            let n = [axis[0] * m, axis[1] * m, axis[2] * m];
            (mode_norm(n), axis_magnitude(field, n, component))
        })
        .unzip();
    fit_power_law(&xs, &ys)
}

/// Period `2π/√(m − 1/4)` of the damped wave at `|n|² = m ≥ 1`.
pub fn wave_period(m: f64) -> f64 {
    2.0 * PI / (m - 0.25).sqrt()
}

/// Per-mode supremum of `|û(t, m·axis)|` over one wave period starting at
/// `t_start`, built from a stream of samples.
#[derive(Clone, Debug)]
pub struct AxisEnvelope {
    axis: Mode,
    component: Option<usize>,
    range: (i64, i64),
    t_start: f64,
    sup: Vec<f64>,
    samples: Vec<usize>,
}

impl AxisEnvelope {
    pub fn new(axis: Mode, component: Option<usize>, range: (i64, i64), t_start: f64) -> Self {
        let len = (range.1 - range.0 + 1).max(0) as usize;
        Self {
            axis,
            component,
            range,
            t_start,
            sup: vec![0.0; len],
            samples: vec![0; len],
        }
    }

    fn mode(&self, m: i64) -> Mode {
        [self.axis[0] * m, self.axis[1] * m, self.axis[2] * m]
    }

    /// End of the observation window; samples up to here are needed.
    pub fn t_end(&self) -> f64 {
        let m_lo = self.mode(self.range.0);
        self.t_start + wave_period((m_lo[0] * m_lo[0] + m_lo[1] * m_lo[1] + m_lo[2] * m_lo[2]) as f64)
    }

    pub fn observe(&mut self, field: &SpectralField, t: f64) -> Result<()> {
        check_range(field, self.axis, self.range)?;
        for (k, m) in (self.range.0..=self.range.1).enumerate() {
            let n = self.mode(m);
            let msq = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64;
            if t >= self.t_start - 1e-12 && t <= self.t_start + wave_period(msq) + 1e-12 {
                self.sup[k] = self.sup[k].max(axis_magnitude(field, n, self.component));
                self.samples[k] += 1;
            }
        }
        Ok(())
    }

    /// `(m, sup)` pairs.
    pub fn values(&self) -> Vec<(i64, f64)> {
        (self.range.0..=self.range.1).zip(self.sup.iter().copied()).collect()
    }

    /// Fit of the envelope; each mode must have seen at least
    /// `min_samples` samples inside its window.
    pub fn fit(&self, min_samples: usize) -> Result<SlopeFit> {
        if let Some(&got) = self.samples.iter().min() {
            if got < min_samples {
                return Err(Error::InsufficientSamples { needed: min_samples, got });
            }
        }
        let xs: Vec<f64> = (self.range.0..=self.range.1).map(|m| mode_norm(self.mode(m))).collect();
        fit_power_law(&xs, &self.sup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{seed_field_from_profile, DecayProfile, Lattice, SignPattern};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power_law() {
        let lat = Lattice::new(12);
        let f = seed_field_from_profile(lat, &DecayProfile::new(1.0, 1.0, 0.0), 0, SignPattern::Alternating);
        let fit = slope_fit(&f, [0, 0, 1], (2, 12), Some(0)).unwrap();
        assert!((fit.exponent + 4.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        let diag = slope_fit(&f, [1, 1, 0], (1, 12), None).unwrap();
        assert!((diag.exponent + 4.0).abs() < 1e-12);
    }

    #[test]
    fn offset_profile_approaches_exponent() {
        let lat = Lattice::new(16);
        let f = seed_field_from_profile(lat, &DecayProfile::new(1.0, 1.0, 1.0), 2, SignPattern::Uniform);
        let fit = slope_fit(&f, [0, 0, 1], (4, 16), Some(2)).unwrap();
        assert!((fit.exponent + 4.0).abs() < 0.1, "{fit:?}");
    }

    #[test]
    fn white_noise_has_no_trend() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (1..=2000).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|_| rng.gen_range(0.5..1.5)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!(fit.r2 < 0.05, "{fit:?}");
    }

    #[test]
    fn degenerate_ranges() {
        let lat = Lattice::new(8);
        let f = SpectralField::vector(lat);
        assert!(matches!(slope_fit(&f, [0, 0, 1], (4, 6), None), Err(Error::DegenerateRange(_))));
        assert!(matches!(slope_fit(&f, [0, 0, 1], (4, 9), None), Err(Error::DegenerateRange(_))));
        assert!(matches!(slope_fit(&f, [0, 0, 0], (1, 8), None), Err(Error::DegenerateRange(_))));
        // all-zero magnitudes cannot be fitted
        assert!(slope_fit(&f, [0, 0, 1], (2, 8), None).is_err());
        assert!(fit_power_law(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn envelope_of_oscillating_modes() {
        let lat = Lattice::new(8);
        let mut env = AxisEnvelope::new([0, 0, 1], Some(0), (2, 8), 0.5);
        let dt = 0.01;
        let mut t = 0.0;
        while t <= env.t_end() + dt {
            let f = SpectralField::from_fn(lat, 3, |n, c| {
                let m = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64;
                if c == 0 && m > 0.0 {
                    let w = (m - 0.25).sqrt();
                    num_complex::Complex64::new(m.powf(-2.5) * (w * t).sin(), 0.0)
                } else {
                    Default::default()
                }
            });
            env.observe(&f, t).unwrap();
            t += dt;
        }
        let fit = env.fit(16).unwrap();
        assert!((fit.exponent + 5.0).abs() < 0.01, "{fit:?}");
        assert!(env.fit(100_000).is_err());
    }

    #[test]
    fn order_of_quadratic_errors() {
        let p = convergence_order(&[0.01, 0.005, 0.0025], &[3e-4, 7.5e-5, 1.875e-5]).unwrap();
        assert!((p - 2.0).abs() < 1e-12);
    }
}
