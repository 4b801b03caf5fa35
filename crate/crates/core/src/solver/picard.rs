//! Successive approximations for the mild formulation on a uniform time grid.
//!
//! `u₁` is the linear evolution of the data and `u_{j+1} = u₁ + M(u_j)`,
//! where `M` collects the six Duhamel operators. The driver tracks
//! `K_j = Σ_fields sup_t ‖·‖` and `L_{j+1} = sup_t ‖u_{j+1} − u_j‖` in X⁰.

use std::io::Write;

use crate::error::{Error, Result};
use crate::propagators::{heat, phi1, phi2, relax, DuhamelGrid, Kernel};
use crate::spectral::SpectralField;

use super::operators::Forcing;
use super::state::{SolverConfig, StateVector};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PicardDiagnostics {
    /// `K_j` for `j = 1, 2, …`
    pub k: Vec<f64>,
    /// `L_j` for `j = 1, 2, …`, with `L₁ = sup_t ‖u₁‖`.
    pub l: Vec<f64>,
    /// `L_{j+1}/L_j` for `j = 1, 2, …`
    pub ratio: Vec<f64>,
}

impl PicardDiagnostics {
    /// CSV with columns `j,K_j,L_j,ratio`; the ratio of the last row is NaN.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "j,K_j,L_j,ratio")?;
        for j in 0..self.k.len() {
            let ratio = self.ratio.get(j).copied().unwrap_or(f64::NAN);
            writeln!(w, "{},{:e},{:e},{:e}", j + 1, self.k[j], self.l[j], ratio)?;
        }
        Ok(())
    }
}

/// The Picard map for fixed initial data on a fixed grid.
#[derive(Clone, Debug)]
pub struct PicardMap {
    grid: DuhamelGrid,
    times: Vec<f64>,
    linear: Vec<StateVector>,
}

impl PicardMap {
    pub fn new(state0: &StateVector, t_final: f64, steps: usize, nu: f64) -> Result<Self> {
        if !(t_final > 0.0) || steps == 0 {
            return Err(Error::InvalidConfig(format!("Picard grid needs T > 0 and steps > 0, got T={t_final}")));
        }
        let lat = state0.lattice();
        let dt = t_final / steps as f64;
        let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
        let msq = lat.mode_sq_table();
        let b1 = state0.e_tilde.curl()?.scaled(-1.0);
        let curl_b0 = state0.b.curl()?;
        let linear = times
            .iter()
            .map(|&t| {
                let mut s = StateVector::zeros(lat);
                s.t = t;
                for c in 0..3 {
                    for idx in 0..lat.len() {
                        let m = msq[idx];
                        let (p1, p2) = (phi1(t, m), phi2(t, m));
                        let b = state0.b.at(idx, c);
                        let et = state0.e_tilde.at(idx, c);
                        *s.v.at_mut(idx, c) = heat(t, m, nu) * state0.v.at(idx, c);
                        *s.b.at_mut(idx, c) = p1 * b + p2 * (0.5 * b + b1.at(idx, c));
                        *s.e_tilde.at_mut(idx, c) = p1 * et + p2 * (curl_b0.at(idx, c) - 0.5 * et);
                        *s.e_bar.at_mut(idx, c) = relax(t) * state0.e_bar.at(idx, c);
                    }
                }
                s
            })
            .collect();
        Ok(Self {
            grid: DuhamelGrid::new(lat, dt, nu, steps),
            times,
            linear,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn linear(&self) -> &[StateVector] {
        &self.linear
    }

    /// `u₁ + M(u)` on the grid.
    pub fn apply(&self, traj: &[StateVector]) -> Result<Vec<StateVector>> {
        let forcing: Vec<Forcing> = traj.iter().map(Forcing::evaluate).collect::<Result<_>>()?;
        let momentum: Vec<SpectralField> = forcing.iter().map(|f| f.momentum.clone()).collect();
        let curl: Vec<SpectralField> = forcing.iter().map(|f| f.vxb.curl()).collect::<Result<_>>()?;
        let solenoidal: Vec<SpectralField> = forcing.iter().map(|f| f.vxb.leray_project()).collect::<Result<_>>()?;
        let gradient: Vec<SpectralField> = forcing.iter().map(|f| f.vxb.gradient_part()).collect::<Result<_>>()?;
        let mv = self.grid.integrate(Kernel::Heat, &momentum)?;
        let m4 = self.grid.integrate(Kernel::Phi2, &curl)?;
        let m5 = self.grid.integrate(Kernel::DPhi2, &solenoidal)?;
        let m6 = self.grid.integrate(Kernel::Relax, &gradient)?;
        Ok(self
            .linear
            .iter()
            .enumerate()
            .map(|(k, lin)| {
                let mut s = lin.clone();
                s.v += &mv[k];
                s.b += &m4[k];
                s.e_tilde -= &m5[k];
                s.e_bar -= &m6[k];
                s
            })
            .collect())
    }
}

fn sup_norms(traj: &[StateVector]) -> f64 {
    (0..4)
        .map(|f| traj.iter().map(|s| s.fields()[f].xnorm(0.0)).fold(0.0, f64::max))
        .sum()
}

fn sup_distance(a: &[StateVector], b: &[StateVector]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.x0_distance(y)).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    pub times: Vec<f64>,
    /// Last iterate on the grid.
    pub trajectory: Vec<StateVector>,
    /// Every iterate, when requested.
    pub iterates: Vec<Vec<StateVector>>,
    pub diagnostics: PicardDiagnostics,
    pub converged: bool,
    /// `sup_t ‖Φ(u) − u‖` for the returned iterate `u`.
    pub self_consistency: f64,
}

/// Runs up to `iters` Picard iterates on `[0, t_final]` with the grid step
/// from `config.dt`, stopping once `L_j ≤ config.tol`.
pub fn picard_run(state0: &StateVector, t_final: f64, iters: usize, config: &SolverConfig, keep_iterates: bool) -> Result<PicardOutcome> {
    config.validate()?;
    let steps = (t_final / config.dt).ceil().max(4.0) as usize;
    let map = PicardMap::new(state0, t_final, steps, config.nu)?;
    let mut diag = PicardDiagnostics::default();
    let mut iterates = Vec::new();

    let mut current = map.linear().to_vec();
    diag.k.push(sup_norms(&current));
    diag.l.push(current.iter().map(StateVector::x0_norm).fold(0.0, f64::max));
    let mut converged = diag.l[0] <= config.tol;
    let mut rising = 0;
    for _ in 1..iters.max(1) {
        if converged {
            break;
        }
        let next = map.apply(&current)?;
        let l = sup_distance(&next, &current);
        let prev = *diag.l.last().unwrap();
        diag.ratio.push(l / prev);
        diag.l.push(l);
        diag.k.push(sup_norms(&next));
        if keep_iterates {
            iterates.push(std::mem::replace(&mut current, next));
        } else {
            current = next;
        }
        rising = if l > prev { rising + 1 } else { 0 };
        if rising >= 3 || !l.is_finite() {
            return Err(Error::NonContraction { t_final });
        }
        converged = l <= config.tol;
    }
    let self_consistency = sup_distance(&map.apply(&current)?, &current);
    if keep_iterates {
        iterates.push(current.clone());
    }
    Ok(PicardOutcome {
        times: map.times().to_vec(),
        trajectory: current,
        iterates,
        diagnostics: diag,
        converged,
        self_consistency,
    })
}

/// Largest `T` with `2C̃₁T^{1/2}K₁ ≤ 1/6`, `2C̃₂TK₁ ≤ 1/6` and
/// `2C̃₃TK₁² ≤ 1/6`, capped at `config.t_max`.
pub fn admissible_t(k1: f64, config: &SolverConfig) -> f64 {
    if !(k1 > 0.0) {
        return config.t_max;
    }
    let a = (1.0 / (12.0 * config.ct1 * k1)).powi(2);
    let b = 1.0 / (12.0 * config.ct2 * k1);
    let c = 1.0 / (12.0 * config.ct3 * k1 * k1);
    a.min(b).min(c).min(config.t_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_low_modes;
    use crate::spectral::Lattice;

    #[test]
    fn admissible_time_examples() {
        let cfg = SolverConfig {
            t_max: 10.0,
            ..SolverConfig::default()
        };
        assert!((admissible_t(1.0, &cfg) - 1.0 / 144.0).abs() < 1e-15);
        assert_eq!(admissible_t(0.0, &cfg), 10.0);
        assert_eq!(admissible_t(1e-9, &cfg), 10.0);
        let mut prev = f64::INFINITY;
        for k in [0.1, 0.2, 0.4, 0.8, 1.6, 3.2] {
            let t = admissible_t(k, &cfg);
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn zero_data_gives_zero_iterates() {
        let lat = Lattice::new(2);
        let cfg = SolverConfig::default();
        let out = picard_run(&StateVector::zeros(lat), 0.1, 5, &cfg, true).unwrap();
        assert!(out.converged);
        assert!(out.iterates.iter().flatten().all(|s| s.fields().iter().all(|f| f.is_zero())));
        assert_eq!(out.self_consistency, 0.0);
    }

    #[test]
    fn small_data_contracts() {
        let lat = Lattice::new(3);
        let v = random_low_modes(lat, 3, 1, 1, 1e-2);
        let b = random_low_modes(lat, 3, 2, 1, 1e-2);
        let e = random_low_modes(lat, 3, 3, 1, 1e-2);
        let s0 = StateVector::from_initial_data(&v, &b, &e).unwrap();
        let cfg = SolverConfig {
            dt: 0.01,
            tol: 1e-16,
            ..SolverConfig::default()
        };
        let out = picard_run(&s0, 0.1, 8, &cfg, false).unwrap();
        let r = &out.diagnostics.ratio;
        assert!(r.len() >= 3);
        assert!(r.iter().skip(1).all(|&x| x <= 0.5), "{r:?}");
        assert!(out.self_consistency < 10.0 * out.diagnostics.l.last().unwrap().max(cfg.tol));
    }
}
