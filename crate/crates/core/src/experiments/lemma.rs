//! Empirical constant of the convolution inequality for power-law profiles.

use std::fs::File;
use std::io::{BufWriter, Write};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{lemma_check, LemmaResult};
use crate::error::{Error, Result};

use super::{prepare_out_dir, Check, Experiment, RunConfig, Summary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaSettings {
    /// Every pair `(s, s')` from this list is evaluated.
    pub s_values: Vec<f64>,
    /// Truncations compared for stability; the first is the reference.
    pub n_max: Vec<i64>,
    pub c1: f64,
    pub c2: f64,
    /// Allowed relative change of the maximal ratio between truncations.
    pub stability_tol: f64,
}

impl Default for LemmaSettings {
    fn default() -> Self {
        Self {
            s_values: vec![0.5, 1.0, 2.0],
            n_max: vec![10, 15],
            c1: 1.0,
            c2: 1.0,
            stability_tol: 0.05,
        }
    }
}

/// Writes `lemma.csv` and `summary.json`. The maximal ratio is reported,
/// not compared with 1: the inequality holds up to an unspecified constant.
pub fn run_lemma_check(cfg: &RunConfig) -> Result<Summary> {
    let l = &cfg.lemma;
    if l.s_values.iter().any(|&s| !(s > 0.0)) || l.n_max.is_empty() || l.n_max.iter().any(|&n| n < 1) {
        return Err(Error::InvalidConfig("lemma check needs s > 0 and n_max ≥ 1".into()));
    }
    let dir = prepare_out_dir(cfg)?;
    let mut w = BufWriter::new(File::create(dir.join("lemma.csv"))?);
    writeln!(w, "s,s_prime,n_max,max_ratio,argmax_n1,argmax_n2,argmax_n3,ratio_at_zero")?;
    let mut summary = Summary::new(Experiment::LemmaCheck);
    for &s in &l.s_values {
        for &sp in &l.s_values {
            let runs: Vec<LemmaResult> = l.n_max.iter().map(|&n| lemma_check(s, sp, l.c1, l.c2, n)).collect();
            for r in &runs {
                writeln!(
                    w,
                    "{s},{sp},{},{:e},{},{},{},{:e}",
                    r.n_max, r.max_ratio, r.argmax[0], r.argmax[1], r.argmax[2], r.ratio_at_zero
                )?;
                summary.value(&format!("max_ratio_s{s}_s{sp}_n{}", r.n_max), r.max_ratio);
            }
            let reference = runs[0].max_ratio;
            let spread = runs.iter().map(|r| (r.max_ratio / reference - 1.0).abs()).fold(0.0, f64::max);
            let finite = runs.iter().all(|r| r.max_ratio.is_finite());
            summary.check(Check::new(
                &format!("finite_s{s}_s{sp}"),
                finite,
                runs.last().unwrap().max_ratio,
                f64::INFINITY,
                format!("max ratio {:.4}", runs.last().unwrap().max_ratio),
            ));
            if runs.len() > 1 {
                summary.check(Check::at_most(&format!("stable_s{s}_s{sp}"), spread, l.stability_tol));
            }
        }
    }
    w.flush()?;
    summary.notes.push("max_ratio estimates the implicit constant of the inequality; it is not expected to be ≤ 1".into());
    summary.write(&dir)?;
    Ok(summary)
}
