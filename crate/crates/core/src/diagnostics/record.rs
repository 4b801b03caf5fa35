//! Per-state diagnostics rows and their CSV form.

use std::collections::VecDeque;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::solver::StateVector;

use super::{centered_residuals, dissipation, energy, energy_budget, mean_mode_b};

/// Leading CSV columns; one `xnorm_<s>` column per configured `s` follows.
pub const CSV_FIXED_COLUMNS: [&str; 9] = [
    "t",
    "energy",
    "dissipation",
    "energy_residual",
    "faraday_residual",
    "ampere_residual",
    "momentum_residual",
    "div_residual",
    "mean_B_mode",
];

/// Diagnostics at one state. Residuals that need neighbouring states are NaN
/// where those are missing: `energy_residual` uses the previous state,
/// the three system residuals use both neighbours.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub dissipation: f64,
    pub energy_residual: f64,
    pub faraday_residual: f64,
    pub ampere_residual: f64,
    pub momentum_residual: f64,
    /// Largest of the X⁰ norms of `div v`, `div B`, `div Ẽ`, `curl Ē`.
    pub div_residual: f64,
    pub mean_b_mode: f64,
    /// `‖(v, B, Ẽ, Ē)‖_{X^s}` summed over fields, for each configured `s`.
    pub xnorms: Vec<(f64, f64)>,
}

impl DiagnosticsRecord {
    pub fn csv_header<W: Write>(w: &mut W, s_values: &[f64]) -> Result<()> {
        let mut cols: Vec<String> = CSV_FIXED_COLUMNS.iter().map(|c| c.to_string()).collect();
        cols.extend(s_values.iter().map(|s| format!("xnorm_{s}")));
        writeln!(w, "{}", cols.join(","))?;
        Ok(())
    }

    pub fn write_csv_row<W: Write>(&self, w: &mut W) -> Result<()> {
        let mut vals = vec![
            self.t,
            self.energy,
            self.dissipation,
            self.energy_residual,
            self.faraday_residual,
            self.ampere_residual,
            self.momentum_residual,
            self.div_residual,
            self.mean_b_mode,
        ];
        vals.extend(self.xnorms.iter().map(|(_, x)| *x));
        let row: Vec<String> = vals.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", row.join(","))?;
        Ok(())
    }
}

/// Streaming builder of records for a trajectory; keeps three states.
#[derive(Clone, Debug)]
pub struct Recorder {
    nu: f64,
    sigma: f64,
    s_values: Vec<f64>,
    window: VecDeque<StateVector>,
    pending: Option<DiagnosticsRecord>,
}

impl Recorder {
    pub fn new(nu: f64, sigma: f64, s_values: &[f64]) -> Self {
        Self {
            nu,
            sigma,
            s_values: s_values.to_vec(),
            window: VecDeque::with_capacity(3),
            pending: None,
        }
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s_values
    }

    fn base_record(&self, s: &StateVector) -> Result<DiagnosticsRecord> {
        let div = s.constraint_residuals()?.into_iter().fold(0.0, f64::max);
        Ok(DiagnosticsRecord {
            t: s.t,
            energy: energy(s),
            dissipation: dissipation(s, self.nu, self.sigma)?,
            energy_residual: f64::NAN,
            faraday_residual: f64::NAN,
            ampere_residual: f64::NAN,
            momentum_residual: f64::NAN,
            div_residual: div,
            mean_b_mode: mean_mode_b(s),
            xnorms: self
                .s_values
                .iter()
                .map(|&p| (p, s.fields().iter().map(|f| f.xnorm(p)).sum()))
                .collect(),
        })
    }

    /// Adds the next state; returns the completed record of the previous one.
    pub fn push(&mut self, s: &StateVector) -> Result<Option<DiagnosticsRecord>> {
        let mut rec = self.base_record(s)?;
        if let Some(prev) = self.window.back() {
            rec.energy_residual = energy_budget(prev, s, s.t - prev.t, self.nu, self.sigma)?;
        }
        let mut done = self.pending.take();
        if self.window.len() >= 2 {
            let (a, b) = (&self.window[self.window.len() - 2], &self.window[self.window.len() - 1]);
            let r = centered_residuals(a, b, s, self.nu, self.sigma)?;
            if let Some(d) = done.as_mut() {
                d.faraday_residual = r.faraday;
                d.ampere_residual = r.ampere;
                d.momentum_residual = r.momentum;
            }
        }
        if self.window.len() == 3 {
            self.window.pop_front();
        }
        self.window.push_back(s.clone());
        self.pending = Some(rec);
        Ok(done)
    }

    /// Record of the last state pushed.
    pub fn finish(self) -> Option<DiagnosticsRecord> {
        self.pending
    }
}
