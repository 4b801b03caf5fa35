//! Invariant suite: spectral identities, propagator ODE residuals, the
//! convolution oracle and a time-refinement study of the energy identity
//! and the PDE residuals.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{convergence_order, energy_budget, system_residuals};
use crate::error::Result;
use crate::propagators::{phi1, phi2};
use crate::solver::{steps_for, SolverConfig, StateVector, Stepper};
use crate::spectral::random::{random_field, random_low_modes};
use crate::spectral::{convolve_direct, convolve_fft, Lattice};

use super::{prepare_out_dir, Check, Experiment, RunConfig, Summary};

/// Deliberate faults for testing the checks themselves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Flip the sign of the `Φ₂` multiplier in the stepper.
    Phi2Sign,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelfcheckSettings {
    pub n: usize,
    pub oracle_pairs: usize,
    /// Steps of the coarsest run in the refinement study.
    pub coarse_steps: usize,
    pub min_order: f64,
    pub fault: Option<Fault>,
}

impl Default for SelfcheckSettings {
    fn default() -> Self {
        Self {
            n: 4,
            oracle_pairs: 20,
            coarse_steps: 10,
            min_order: 1.8,
            fault: None,
        }
    }
}

/// Largest `|ÿ + ẏ + m y|` for `y = Φ₁, Φ₂` over `m ∈ ms` and `t ∈ ts`,
/// with fourth-order central differences of step `h`, and the largest error
/// in `Φ₁(0) = 1`, `Φ₁'(0) = −½`, `Φ₂(0) = 0`, `Φ₂'(0) = 1`.
pub fn propagator_ode_check(ms: &[usize], ts: &[f64], h: f64) -> (f64, f64) {
    let d1 = |f: &dyn Fn(f64) -> f64, t: f64| (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h);
    let d2 = |f: &dyn Fn(f64) -> f64, t: f64| {
        (-f(t - 2.0 * h) + 16.0 * f(t - h) - 30.0 * f(t) + 16.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h * h)
    };
    let mut residual: f64 = 0.0;
    let mut initial: f64 = 0.0;
    for &m in ms {
        let p1 = move |t: f64| phi1(t, m);
        let p2 = move |t: f64| phi2(t, m);
        for f in [&p1 as &dyn Fn(f64) -> f64, &p2] {
            for &t in ts {
                residual = residual.max((d2(f, t) + d1(f, t) + m as f64 * f(t)).abs());
            }
        }
        initial = initial
            .max((p1(0.0) - 1.0).abs())
            .max((d1(&p1, 0.0) + 0.5).abs())
            .max(p2(0.0).abs())
            .max((d1(&p2, 0.0) - 1.0).abs());
    }
    (residual, initial)
}

/// Largest coefficient difference between FFT and direct convolution over
/// `pairs` random field pairs.
pub fn convolution_oracle(lattice: Lattice, pairs: usize, seed: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..pairs as u64 {
        let a = random_field(lattice, 1, seed.wrapping_add(2 * k), 1.0);
        let b = random_field(lattice, 1, seed.wrapping_add(2 * k + 1), 1.0);
        worst = worst.max(convolve_fft(&a, &b)?.max_abs_diff(&convolve_direct(&a, &b)?));
    }
    Ok(worst)
}

/// Errors and observed orders of a time-refinement study.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderStudy {
    pub dts: Vec<f64>,
    /// Per step size: max energy-budget residual, then the largest Faraday,
    /// Ampère and momentum residuals.
    pub errors: Vec<[f64; 4]>,
    pub orders: [f64; 4],
    /// Whether every step of every run had non-increasing energy.
    pub energy_monotone: bool,
}

pub const ORDER_NAMES: [&str; 4] = ["energy", "faraday", "ampere", "momentum"];

/// Runs `s0` to `horizon` with each step size and fits the orders.
pub fn order_study(s0: &StateVector, config: &SolverConfig, dts: &[f64], horizon: f64, fault: Option<Fault>) -> Result<OrderStudy> {
    let mut errors = Vec::new();
    let mut energy_monotone = true;
    for &dt in dts {
        let cfg = SolverConfig { dt, ..config.clone() };
        let mut stepper = Stepper::new(s0.lattice(), &cfg)?;
        if fault == Some(Fault::Phi2Sign) {
            stepper.table_mut().corrupt_phi2_sign();
        }
        let traj = stepper.run(s0, steps_for(horizon, dt))?;
        let mut budget: f64 = 0.0;
        for w in traj.windows(2) {
            budget = budget.max(energy_budget(&w[0], &w[1], dt, cfg.nu, cfg.sigma)?);
            energy_monotone &= crate::diagnostics::energy(&w[1]) <= crate::diagnostics::energy(&w[0]);
        }
        let r = system_residuals(&traj, cfg.nu, cfg.sigma)?;
        errors.push([budget, r.faraday, r.ampere, r.momentum]);
    }
    let mut orders = [0.0; 4];
    for (k, o) in orders.iter_mut().enumerate() {
        let e: Vec<f64> = errors.iter().map(|x| x[k]).collect();
        *o = convergence_order(dts, &e).unwrap_or(f64::NAN);
    }
    Ok(OrderStudy {
        dts: dts.to_vec(),
        errors,
        orders,
        energy_monotone,
    })
}

/// Runs the suite and prints nothing; the caller shows `Summary::table`.
pub fn run_selfcheck(cfg: &RunConfig) -> Result<Summary> {
    cfg.validate()?;
    let dir = prepare_out_dir(cfg)?;
    let sc = &cfg.selfcheck;
    let lat = Lattice::new(sc.n);
    let mut summary = Summary::new(Experiment::Selfcheck);

    let u = random_field(lat, 3, cfg.seed, 2.0);
    let p = random_field(lat, 1, cfg.seed + 1, 2.0);
    let identities = [
        u.curl()?.divergence()?.max_abs(),
        p.gradient()?.curl()?.max_abs(),
        u.leray_project()?.divergence()?.max_abs(),
        (&u.leray_project()?.leray_project()? - &u.leray_project()?).max_abs(),
        {
            let (a, b) = u.helmholtz_split()?;
            (&(&a + &b) - &u).max_abs()
        },
    ]
    .into_iter()
    .fold(0.0, f64::max);
    summary.check(Check::at_most("spectral_identities", identities, 1e-13));

    let ms: Vec<usize> = (0..50).collect();
    let ts: Vec<f64> = (0..=40).map(|k| 0.05 * k as f64).collect();
    let (ode, init) = propagator_ode_check(&ms, &ts, 1e-4);
    summary.check(Check::at_most("propagator_ode_residual", ode, 1e-6));
    summary.check(Check::at_most("propagator_initial_values", init, 1e-8));

    let oracle = convolution_oracle(lat, sc.oracle_pairs, cfg.seed)?;
    summary.check(Check::at_most("convolution_oracle", oracle, 1e-12));

    let v = random_low_modes(lat, 3, cfg.seed + 2, 2, 0.1);
    let b = random_low_modes(lat, 3, cfg.seed + 3, 2, 0.1);
    let e = random_low_modes(lat, 3, cfg.seed + 4, 2, 0.1);
    let s0 = StateVector::from_initial_data(&v, &b, &e)?;
    let dts = [cfg.dt, cfg.dt / 2.0, cfg.dt / 4.0];
    let horizon = sc.coarse_steps as f64 * cfg.dt;
    match order_study(&s0, &cfg.solver_config(), &dts, horizon, sc.fault) {
        Ok(study) => {
            for (name, &order) in ORDER_NAMES.iter().zip(&study.orders) {
                let passed = order >= sc.min_order;
                let message = if passed {
                    format!("order {order:.3} ≥ {}", sc.min_order)
                } else {
                    format!(
                        "order {order:.3} < {}: errors {:?} do not shrink quadratically; dt = {} may be too large for the asymptotic range",
                        sc.min_order,
                        study.errors.iter().map(|e| e[ORDER_NAMES.iter().position(|n| n == name).unwrap()]).collect::<Vec<_>>(),
                        cfg.dt
                    )
                };
                summary.check(Check::new(&format!("{name}_order"), passed, order, sc.min_order, message));
            }
            summary.check(Check::new(
                "energy_monotone",
                study.energy_monotone,
                f64::NAN,
                f64::NAN,
                format!("energy non-increasing in all {} runs: {}", dts.len(), study.energy_monotone),
            ));
        }
        Err(err) => summary.check(Check::new(
            "order_study",
            false,
            f64::NAN,
            sc.min_order,
            format!("refinement study failed: {err}; dt = {} is too large", cfg.dt),
        )),
    }
    summary.write(&dir)?;
    Ok(summary)
}
