//! Restarted mild formulation on `[t, t+dt]`.
//!
//! The linear part is propagated exactly. The nonlinear sources are
//! interpolated linearly between the step endpoints and integrated exactly
//! against each kernel; the endpoint value comes from a predictor that holds
//! the sources constant over the step. Both B and Ẽ restart from the
//! first-order Maxwell relations `∂_t B = −∇×Ẽ` and `∂_t Ẽ = ∇×B − Ẽ − 𝐏(v×B)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::propagators::{DuhamelGrid, Kernel, PropagatorTable};
use crate::spectral::{Lattice, SpectralField};

use super::operators::Forcing;
use super::state::{SolverConfig, StateVector};

/// Growth factor of the X⁰ norm over one step that trips the blow-up guard.
pub const BLOWUP_FACTOR: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct Stepper {
    config: SolverConfig,
    table: PropagatorTable,
    weights: DuhamelGrid,
    msq: Vec<usize>,
}

impl Stepper {
    pub fn new(lattice: Lattice, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config: config.clone(),
            table: PropagatorTable::new(lattice, config.dt, config.nu),
            weights: DuhamelGrid::new(lattice, config.dt, config.nu, 1),
            msq: lattice.mode_sq_table(),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn dt(&self) -> f64 {
        self.config.dt
    }

    pub fn table_mut(&mut self) -> &mut PropagatorTable {
        &mut self.table
    }

    /// Exact homogeneous evolution over one step.
    pub fn linear_part(&self, s: &StateVector) -> Result<StateVector> {
        let tb = &self.table;
        let curl_b = s.b.curl()?;
        let curl_et = s.e_tilde.curl()?;
        let lat = s.lattice();
        let mut out = StateVector::zeros(lat);
        out.t = s.t + self.config.dt;
        for c in 0..3 {
            for idx in 0..lat.len() {
                let m = self.msq[idx];
                let (p1, p2) = (tb.phi1[m], tb.phi2[m]);
                let b = s.b.at(idx, c);
                let et = s.e_tilde.at(idx, c);
                *out.v.at_mut(idx, c) = tb.heat[m] * s.v.at(idx, c);
                *out.b.at_mut(idx, c) = p1 * b + p2 * (0.5 * b - curl_et.at(idx, c));
                *out.e_tilde.at_mut(idx, c) = p1 * et + p2 * (curl_b.at(idx, c) - 0.5 * et);
                *out.e_bar.at_mut(idx, c) = tb.relax * s.e_bar.at(idx, c);
            }
        }
        Ok(out)
    }

    fn forcing(&self, s: &StateVector) -> Result<Forcing> {
        if self.config.nonlinear {
            Forcing::evaluate(s)
        } else {
            Ok(Forcing::zeros(s.lattice()))
        }
    }

    /// Adds `Σ (w_start f₀ + w_end f₁)` for every field, with `f₁ = f₀` when
    /// `end` is `None`.
    fn add_sources(&self, out: &mut StateVector, f0: &Forcing, end: Option<&Forcing>) -> Result<()> {
        let f1 = end.unwrap_or(f0);
        let curl0 = f0.vxb.curl()?;
        let curl1 = f1.vxb.curl()?;
        let p0 = f0.vxb.leray_project()?;
        let p1 = f1.vxb.leray_project()?;
        let q0 = f0.vxb.gradient_part()?;
        let q1 = f1.vxb.gradient_part()?;
        let apply = |target: &mut SpectralField, kernel: Kernel, sign: f64, a: &SpectralField, b: &SpectralField| {
            let w = self.weights.last_interval(kernel);
            let lat = target.lattice();
            for c in 0..3 {
                for idx in 0..lat.len() {
                    let (ws, we) = w[self.msq[idx]];
                    let src: Complex64 = ws * a.at(idx, c) + we * b.at(idx, c);
                    *target.at_mut(idx, c) += sign * src;
                }
            }
        };
        apply(&mut out.v, Kernel::Heat, 1.0, &f0.momentum, &f1.momentum);
        apply(&mut out.b, Kernel::Phi2, 1.0, &curl0, &curl1);
        apply(&mut out.e_tilde, Kernel::DPhi2, -1.0, &p0, &p1);
        apply(&mut out.e_bar, Kernel::Relax, -1.0, &q0, &q1);
        Ok(())
    }

    /// Advances one step of length `dt`. `index` is only used in the blow-up
    /// report.
    pub fn step(&self, s: &StateVector, index: usize) -> Result<StateVector> {
        let lin = self.linear_part(s)?;
        let mut next = lin.clone();
        if self.config.nonlinear {
            let f0 = self.forcing(s)?;
            let mut pred = lin;
            self.add_sources(&mut pred, &f0, None)?;
            let f1 = self.forcing(&pred)?;
            self.add_sources(&mut next, &f0, Some(&f1))?;
        }
        next.reproject()?;
        let (before, after) = (s.x0_norm(), next.x0_norm());
        if before > 0.0 && after > BLOWUP_FACTOR * before || !after.is_finite() {
            return Err(Error::BlowUp {
                step: index,
                t: next.t,
                before,
                after,
            });
        }
        Ok(next)
    }

    /// States at `t₀, t₀+dt, …` through `steps` steps.
    pub fn run(&self, s0: &StateVector, steps: usize) -> Result<Vec<StateVector>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(s0.clone());
        for k in 0..steps {
            let next = self.step(&out[k], k + 1)?;
            out.push(next);
        }
        Ok(out)
    }

    /// Like [`Stepper::run`] but only hands each state to `visit`.
    pub fn run_with(&self, s0: &StateVector, steps: usize, mut visit: impl FnMut(&StateVector) -> Result<()>) -> Result<StateVector> {
        let mut cur = s0.clone();
        visit(&cur)?;
        for k in 0..steps {
            cur = self.step(&cur, k + 1)?;
            visit(&cur)?;
        }
        Ok(cur)
    }
}

/// Number of steps of size `dt` to reach `t_final` (rounded to nearest).
pub fn steps_for(t_final: f64, dt: f64) -> usize {
    (t_final / dt).round().max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagators::{phi1, phi2};
    use crate::spectral::random::random_low_modes;

    fn cfg(dt: f64, nonlinear: bool) -> SolverConfig {
        SolverConfig {
            nu: 0.2,
            dt,
            nonlinear,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let lat = Lattice::new(3);
        let st = Stepper::new(lat, &cfg(0.01, true)).unwrap();
        let s = st.step(&StateVector::zeros(lat), 1).unwrap();
        assert!(s.fields().iter().all(|f| f.is_zero()));
        assert!((s.t - 0.01).abs() < 1e-15);
    }

    #[test]
    fn pure_heat_mode() {
        let lat = Lattice::new(3);
        let dt = 0.05;
        let st = Stepper::new(lat, &cfg(dt, true)).unwrap();
        let mut s = StateVector::zeros(lat);
        s.v.set_pair([1, 0, 0], 1, Complex64::new(0.5, 0.0));
        let next = st.step(&s, 1).unwrap();
        let expected = 0.5 * (-0.2 * dt).exp();
        assert!((next.v.get([1, 0, 0], 1).re - expected).abs() < 1e-15);
        assert!((&next.v - &crate::propagators::apply_heat(&s.v, dt, 0.2)).max_abs() < 1e-16);
    }

    #[test]
    fn linear_maxwell_matches_closed_form() {
        let lat = Lattice::new(4);
        let dt = 0.03;
        let st = Stepper::new(lat, &cfg(dt, false)).unwrap();
        let b0 = random_low_modes(lat, 3, 7, 3, 1.0);
        let e0 = random_low_modes(lat, 3, 8, 3, 1.0);
        let s0 = StateVector::from_initial_data(&SpectralField::vector(lat), &b0, &e0).unwrap();
        let steps = 40;
        let traj = st.run(&s0, steps).unwrap();
        let t = steps as f64 * dt;
        // B(t) = Φ₁B₀ + Φ₂(B₀/2 − ∇×E₀)
        let b1 = s0.e_tilde.curl().unwrap().scaled(-1.0);
        let msq = lat.mode_sq_table();
        let mut worst = 0.0_f64;
        for c in 0..3 {
            for idx in 0..lat.len() {
                let m = msq[idx];
                let b = s0.b.at(idx, c);
                let expect = phi1(t, m) * b + phi2(t, m) * (0.5 * b + b1.at(idx, c));
                worst = worst.max((traj[steps].b.at(idx, c) - expect).norm());
            }
        }
        assert!(worst < 1e-13, "{worst}");
        assert!(traj[steps].v.is_zero());
    }

    #[test]
    fn mean_of_b_is_conserved_in_linear_run() {
        let lat = Lattice::new(2);
        let st = Stepper::new(lat, &cfg(0.02, false)).unwrap();
        let mut s = StateVector::zeros(lat);
        s.b.set([0, 0, 0], 0, Complex64::new(0.4, 0.0));
        s.e_tilde = random_low_modes(lat, 3, 3, 2, 0.5).leray_project().unwrap();
        let traj = st.run(&s, 50).unwrap();
        for state in &traj {
            assert!((state.b.mean()[0] - Complex64::new(0.4, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn blow_up_guard() {
        let lat = Lattice::new(2);
        let mut config = cfg(0.5, true);
        config.nu = 0.01;
        let st = Stepper::new(lat, &config).unwrap();
        let v = random_low_modes(lat, 3, 1, 2, 200.0);
        let b = random_low_modes(lat, 3, 2, 2, 200.0);
        let s = StateVector::from_initial_data(&v, &b, &SpectralField::vector(lat)).unwrap();
        let res = st.run(&s, 20);
        assert!(matches!(res, Err(Error::BlowUp { .. })), "{res:?}");
    }

    #[test]
    fn rejects_non_unit_sigma() {
        let config = SolverConfig {
            sigma: 2.0,
            ..SolverConfig::default()
        };
        assert!(Stepper::new(Lattice::new(2), &config).is_err());
    }
}
