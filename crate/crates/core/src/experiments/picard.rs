//! Picard iteration on the admissible interval `[0, T*]`.

use std::fs::File;
use std::io::{BufWriter, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::solver::{admissible_t, calibrate, picard_run, PicardMap, StateVector};

use super::{prepare_out_dir, Check, Experiment, RunConfig, Summary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PicardSettings {
    pub iterations: usize,
    /// Absolute X⁰ tolerance on `L_j`.
    pub tol: f64,
    /// Cap on the admissible time.
    pub t_max: f64,
    /// Every ratio from `j = 2` on stays below this.
    pub ratio_bound: f64,
    /// ... and below `late_bound` from `late_index` on.
    pub late_bound: f64,
    pub late_index: usize,
}

impl Default for PicardSettings {
    fn default() -> Self {
        Self {
            iterations: 30,
            tol: 1e-12,
            t_max: 1.0,
            ratio_bound: 0.9,
            late_bound: 0.6,
            late_index: 5,
        }
    }
}

/// `K₁ = Σ_fields sup_t ‖u₁‖_{X⁰}` over `[0, t_max]`.
pub(crate) fn linear_bound(s0: &StateVector, t_max: f64, dt: f64, nu: f64) -> Result<f64> {
    let steps = (t_max / dt).ceil().max(4.0) as usize;
    let map = PicardMap::new(s0, t_max, steps, nu)?;
    Ok((0..4)
        .map(|f| map.linear().iter().map(|s| s.fields()[f].xnorm(0.0)).fold(0.0, f64::max))
        .sum())
}

/// Calibrates the operator constants, picks `T* = admissible_T(K₁)` and
/// iterates there. Writes `picard.csv`, `operator_bounds.csv` and
/// `summary.json`.
pub fn run_picard_contraction(cfg: &RunConfig) -> Result<Summary> {
    cfg.validate()?;
    let dir = prepare_out_dir(cfg)?;
    let lat = cfg.lattice();
    let (solver, bounds) = calibrate(lat, &cfg.solver_config(), cfg.seed)?;
    let mut w = BufWriter::new(File::create(dir.join("operator_bounds.csv"))?);
    writeln!(w, "operator,constant")?;
    for (k, c) in bounds.constants.iter().enumerate() {
        writeln!(w, "M{},{c:e}", k + 1)?;
    }
    w.flush()?;

    let s0 = cfg.initial_state()?;
    let k1 = linear_bound(&s0, solver.t_max, cfg.dt, cfg.nu)?;
    let t_star = admissible_t(k1, &solver);
    let out = picard_run(&s0, t_star, cfg.picard.iterations, &solver, false)?;
    let mut w = BufWriter::new(File::create(dir.join("picard.csv"))?);
    out.diagnostics.write_csv(&mut w)?;
    w.flush()?;

    let p = &cfg.picard;
    let ratios = &out.diagnostics.ratio;
    // ratio[j-1] = L_{j+1}/L_j
    let worst = ratios.iter().skip(1).copied().fold(0.0, f64::max);
    let late = ratios.iter().skip(p.late_index.saturating_sub(1)).copied().fold(0.0, f64::max);
    let mut summary = Summary::new(Experiment::PicardContraction);
    summary.check(Check::at_most("ratio_from_j2", worst, p.ratio_bound));
    summary.check(Check::at_most("ratio_from_late_index", late, p.late_bound));
    summary.check(Check::new("converged", out.converged, out.diagnostics.l.last().copied().unwrap_or(0.0), p.tol, format!("L = {:.3e} after {} iterates", out.diagnostics.l.last().copied().unwrap_or(0.0), out.diagnostics.l.len())));
    summary.check(Check::at_most("self_consistency", out.self_consistency, 10.0 * p.tol));
    summary.value("K1", k1);
    summary.value("T_star", t_star);
    summary.value("iterates", out.diagnostics.l.len() as f64);
    for (k, c) in bounds.constants.iter().enumerate() {
        summary.value(&format!("c{}", k + 1), *c);
    }
    summary.value("ct1", solver.ct1);
    summary.value("ct2", solver.ct2);
    summary.value("ct3", solver.ct3);
    summary.notes.push("operator constants are empirical maxima over random smooth probes, not proven bounds".into());
    summary.write(&dir)?;
    Ok(summary)
}
