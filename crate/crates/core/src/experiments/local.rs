//! Time stepping of the full system with per-step diagnostics.

use std::fs::File;
use std::io::{BufWriter, Write};

use crate::diagnostics::{energy, DiagnosticsRecord, Recorder};
use crate::error::Result;
use crate::propagators::PropagatorTable;
use crate::solver::{steps_for, Stepper};

use super::{prepare_out_dir, Check, Experiment, RunConfig, Summary};

/// Divergence and curl constraints are held to this X⁰ tolerance.
pub const DIV_TOL: f64 = 1e-10;
/// Bound on `|B̂(0, t)|` for mean-zero `B₀`.
pub const MEAN_B_TOL: f64 = 1e-12;

#[derive(Default)]
struct Extremes {
    div: f64,
    mean_b: f64,
    energy_residual: f64,
    faraday: f64,
    ampere: f64,
    momentum: f64,
    /// Largest `E(t_{k+1}) − E(t_k) − 10·dt·residual_k`.
    energy_excess: f64,
    last_energy: Option<f64>,
}

impl Extremes {
    fn update(&mut self, r: &DiagnosticsRecord, dt: f64) {
        let fmax = |a: f64, b: f64| if b.is_nan() { a } else { a.max(b) };
        self.div = fmax(self.div, r.div_residual);
        self.mean_b = fmax(self.mean_b, r.mean_b_mode);
        self.energy_residual = fmax(self.energy_residual, r.energy_residual);
        self.faraday = fmax(self.faraday, r.faraday_residual);
        self.ampere = fmax(self.ampere, r.ampere_residual);
        self.momentum = fmax(self.momentum, r.momentum_residual);
        if let Some(prev) = self.last_energy {
            let slack = 10.0 * dt * r.energy_residual + 1e-14 * prev;
            self.energy_excess = fmax(self.energy_excess, r.energy - prev - slack);
        }
        self.last_energy = Some(r.energy);
    }
}

/// Steps the initial state to `t_final` and writes `diagnostics.csv`,
/// `propagators.csv`, `state_initial.wmhd`, `state_final.wmhd` and
/// `summary.json`. A blow-up is returned as an error naming the step.
pub fn run_local_existence(cfg: &RunConfig) -> Result<Summary> {
    cfg.validate()?;
    let dir = prepare_out_dir(cfg)?;
    let lat = cfg.lattice();
    let solver = cfg.solver_config();
    let s0 = cfg.initial_state()?;
    s0.save(&dir.join("state_initial.wmhd"))?;

    let table = PropagatorTable::new(lat, cfg.dt, cfg.nu);
    let mut w = BufWriter::new(File::create(dir.join("propagators.csv"))?);
    table.write_csv(&mut w)?;
    w.flush()?;

    let stepper = Stepper::new(lat, &solver)?;
    let steps = steps_for(cfg.t_final, cfg.dt);
    let mut recorder = Recorder::new(cfg.nu, cfg.sigma, &cfg.s_values);
    let mut csv = BufWriter::new(File::create(dir.join("diagnostics.csv"))?);
    DiagnosticsRecord::csv_header(&mut csv, &cfg.s_values)?;
    let mut ext = Extremes::default();
    let mut emit = |r: DiagnosticsRecord, csv: &mut BufWriter<File>| -> Result<()> {
        ext.update(&r, cfg.dt);
        r.write_csv_row(csv)
    };
    let last = stepper.run_with(&s0, steps, |s| match recorder.push(s)? {
        Some(r) => emit(r, &mut csv),
        None => Ok(()),
    })?;
    if let Some(r) = recorder.finish() {
        emit(r, &mut csv)?;
    }
    csv.flush()?;
    last.save(&dir.join("state_final.wmhd"))?;

    let mut summary = Summary::new(Experiment::LocalExistence);
    summary.check(Check::at_most("divergence_residual", ext.div, DIV_TOL));
    summary.check(Check::at_most("mean_B_mode", ext.mean_b, MEAN_B_TOL));
    summary.check(Check::at_most("energy_nonincreasing", ext.energy_excess.max(0.0), 0.0));
    summary.value("steps", steps as f64);
    summary.value("t_final", last.t);
    summary.value("energy_initial", energy(&s0));
    summary.value("energy_final", energy(&last));
    summary.value("max_energy_residual", ext.energy_residual);
    summary.value("max_faraday_residual", ext.faraday);
    summary.value("max_ampere_residual", ext.ampere);
    summary.value("max_momentum_residual", ext.momentum);
    summary.write(&dir)?;
    Ok(summary)
}
