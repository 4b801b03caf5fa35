//! Decay exponent of the magnetic field generated by a rough electric field.
//!
//! `E₀₁` has magnitudes `ρ_{1+δ/2}(n)`, so `∇×E₀` and hence `B(t)` only
//! decay like `|n|^{-(4+δ/2)}` along `n = (0, 0, m)`: B leaves `X^{1+δ/2}`
//! although it starts smooth. The claim concerns the resolved range
//! `m_lo ≤ m ≤ m_hi` only; at finite N nothing is literally outside X^s.

use std::fs::File;
use std::io::{BufWriter, Write};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{wave_period, AxisEnvelope, SlopeFit};
use crate::error::{Error, Result};
use crate::solver::{Stepper, StateVector};
use crate::spectral::random::random_low_modes;
use crate::spectral::{seed_component, AnalyticProfile, Mode, SignPattern, SpectralField};

use super::svg::loglog_svg;
use super::{prepare_out_dir, Check, Experiment, ProfileSeed, RunConfig, Summary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossSettings {
    pub axis: Mode,
    pub m_lo: i64,
    /// Defaults to N.
    pub m_hi: Option<i64>,
    /// Component of B whose envelope is fitted.
    pub component: usize,
    pub t_start: f64,
    pub min_samples: usize,
    /// Amplitude of the random low-mode `v₀`, `B₀`.
    pub perturbation: f64,
    /// Decay rate κ of the smooth control data `a·e^{−κ|n|}`.
    pub control_rate: f64,
    pub exponent_tol: f64,
    pub control_bound: f64,
    pub deviation_bound: f64,
}

impl Default for LossSettings {
    fn default() -> Self {
        Self {
            axis: [0, 0, 1],
            m_lo: 4,
            m_hi: None,
            component: 1,
            t_start: 0.0,
            min_samples: 16,
            perturbation: 1e-3,
            control_rate: 1.5,
            exponent_tol: 0.2,
            control_bound: -8.0,
            deviation_bound: 0.1,
        }
    }
}

struct Measured {
    fit: SlopeFit,
    values: Vec<(i64, f64)>,
    last: StateVector,
}

fn envelope_run(cfg: &RunConfig, s0: &StateVector, nonlinear: bool) -> Result<Measured> {
    let l = &cfg.loss;
    let range = (l.m_lo, l.m_hi.unwrap_or(cfg.n as i64));
    let solver = crate::solver::SolverConfig {
        nonlinear,
        ..cfg.solver_config()
    };
    let stepper = Stepper::new(cfg.lattice(), &solver)?;
    let mut env = AxisEnvelope::new(l.axis, Some(l.component), range, l.t_start);
    let steps = ((env.t_end() + 1e-12) / cfg.dt).ceil() as usize;
    let last = stepper.run_with(s0, steps, |s| env.observe(&s.b, s.t))?;
    Ok(Measured {
        fit: env.fit(l.min_samples)?,
        values: env.values(),
        last,
    })
}

/// Linear run, nonlinear run and smooth-data control run; writes
/// `spectrum.csv`, the final linear state and `summary.json`.
pub fn run_loss_of_smoothness(cfg: &RunConfig) -> Result<Summary> {
    cfg.validate()?;
    let l = &cfg.loss;
    let m_hi = l.m_hi.unwrap_or(cfg.n as i64);
    let axis_sq = (l.axis[0] * l.axis[0] + l.axis[1] * l.axis[1] + l.axis[2] * l.axis[2]) as f64;
    if m_hi > cfg.n as i64 || m_hi - l.m_lo < 4 || l.m_lo < 1 {
        return Err(Error::DegenerateRange(format!(
            "fit range [{}, {m_hi}] needs 1 ≤ m_lo, m_hi − m_lo ≥ 4 and m_hi ≤ N = {}; increase n",
            l.m_lo, cfg.n
        )));
    }
    let per_period = (wave_period(axis_sq * (m_hi * m_hi) as f64) / cfg.dt).floor() as usize;
    if per_period < l.min_samples {
        return Err(Error::InsufficientSamples {
            needed: l.min_samples,
            got: per_period,
        });
    }
    let dir = prepare_out_dir(cfg)?;
    let lat = cfg.lattice();

    let (mut v, mut b, mut e) = cfg.initial_fields_without_random()?;
    let base = cfg.seed.wrapping_mul(3);
    v += &random_low_modes(lat, 3, base, 1, l.perturbation);
    b += &random_low_modes(lat, 3, base + 1, 1, l.perturbation);
    let rough = match &cfg.initial.e_profile {
        Some(p) => cfg.seed_profile(p)?,
        None => cfg.seed_profile(&ProfileSeed {
            component: 0,
            s: None,
            c1: None,
            c2: None,
            pattern: SignPattern::Alternating,
        })?,
    };
    let smooth_part = e.clone();
    e += &rough;
    let s0 = StateVector::from_initial_data(&v, &b, &e)?;
    let linear = envelope_run(cfg, &s0, false)?;
    linear.last.save(&dir.join("state_linear_final.wmhd"))?;
    let nonlinear = envelope_run(cfg, &s0, true)?;

    let control_profile = AnalyticProfile {
        amplitude: cfg.c1,
        rate: l.control_rate,
    };
    let component = cfg.initial.e_profile.as_ref().map_or(0, |p| p.component);
    let mut e_control: SpectralField = seed_component(lat, component, SignPattern::Alternating, |n| control_profile.eval(n));
    e_control += &smooth_part;
    let control = envelope_run(cfg, &StateVector::from_initial_data(&v, &b, &e_control)?, false)?;

    let deviation = linear
        .values
        .iter()
        .zip(&nonlinear.values)
        .map(|(a, b)| ((b.1 - a.1) / a.1).abs())
        .fold(0.0, f64::max);

    let mut w = BufWriter::new(File::create(dir.join("spectrum.csv"))?);
    writeln!(w, "m,linear_envelope,nonlinear_envelope,control_envelope")?;
    for ((a, b), c) in linear.values.iter().zip(&nonlinear.values).zip(&control.values) {
        writeln!(w, "{},{:e},{:e},{:e}", a.0, a.1, b.1, c.1)?;
    }
    w.flush()?;
    if cfg.svg {
        let series = |m: &Measured| m.values.iter().map(|&(k, y)| (k as f64, y)).collect::<Vec<_>>();
        let plot = loglog_svg(
            "|B_c(t, m·axis)| envelope",
            &[("linear", series(&linear)), ("nonlinear", series(&nonlinear)), ("control", series(&control))],
        );
        std::fs::write(dir.join("spectrum.svg"), plot)?;
    }

    let expected = -(4.0 + 0.5 * cfg.delta);
    let mut summary = Summary::new(Experiment::LossOfSmoothness);
    summary.check(Check::new(
        "linear_exponent",
        (linear.fit.exponent - expected).abs() <= l.exponent_tol,
        linear.fit.exponent,
        expected,
        format!("{:.4} vs {expected:.4} ± {}", linear.fit.exponent, l.exponent_tol),
    ));
    summary.check(Check::new(
        "control_exponent",
        control.fit.exponent < l.control_bound,
        control.fit.exponent,
        l.control_bound,
        format!("{:.4} < {}", control.fit.exponent, l.control_bound),
    ));
    summary.check(Check::at_most("nonlinear_deviation", deviation, l.deviation_bound));
    summary.value("linear_exponent", linear.fit.exponent);
    summary.value("linear_r2", linear.fit.r2);
    summary.value("nonlinear_exponent", nonlinear.fit.exponent);
    summary.value("control_exponent", control.fit.exponent);
    summary.value("expected_exponent", expected);
    summary.value("nonlinear_deviation", deviation);
    summary.value("m_lo", l.m_lo as f64);
    summary.value("m_hi", m_hi as f64);
    summary.notes.push(format!(
        "exponents are fitted over the resolved range {}..={m_hi} at N = {}; a finite truncation lies in every X^s",
        l.m_lo, cfg.n
    ));
    summary.write(&dir)?;
    Ok(summary)
}
