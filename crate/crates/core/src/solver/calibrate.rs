//! Empirical constants for the operator bounds
//!
//! ```text
//! ‖M₁(v,w)‖ ≤ c₁ t^{1/2} ‖v‖‖w‖      ‖M₃(v,B,B')‖ ≤ c₃ t ‖v‖‖B‖‖B'‖
//! ‖M_ℓ(a,b)‖ ≤ c_ℓ t ‖a‖‖b‖           (ℓ = 2, 4, 5, 6)
//! ```
//!
//! measured as the largest ratio over seeded random smooth inputs held
//! constant in time.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::propagators::DuhamelGrid;
use crate::spectral::random::random_field;
use crate::spectral::{Lattice, SpectralField};

use super::operators::{m1, m2, m3, m4, m5, m6};
use super::state::SolverConfig;

/// Spectral decay `(1+|n|²)^{-2}` of the random probe fields.
pub const PROBE_DECAY: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorBounds {
    /// `c₁ … c₆`
    pub constants: [f64; 6],
}

impl OperatorBounds {
    /// Lipschitz-type constants of the Picard map: bilinear terms pick up a
    /// factor 2, the trilinear term a factor 3.
    pub fn apply_to(&self, config: &mut SolverConfig) {
        let c = self.constants;
        let quadratic = c[1] + c[3] + c[4] + c[5];
        config.c1 = c[0];
        config.c2 = quadratic;
        config.c3 = c[2];
        config.ct1 = 2.0 * c[0];
        config.ct2 = 2.0 * quadratic;
        config.ct3 = 3.0 * c[2];
    }
}

fn last(out: Vec<SpectralField>) -> SpectralField {
    out.into_iter().last().unwrap()
}

pub fn measure_operator_bounds(lattice: Lattice, nu: f64, seed: u64, samples: usize, times: &[f64]) -> Result<OperatorBounds> {
    let mut best = [0.0_f64; 6];
    for k in 0..samples as u64 {
        let base = seed.wrapping_mul(1000).wrapping_add(10 * k);
        let v = random_field(lattice, 3, base, PROBE_DECAY).leray_project()?;
        let w = random_field(lattice, 3, base + 1, PROBE_DECAY).leray_project()?;
        let b = random_field(lattice, 3, base + 2, PROBE_DECAY).leray_project()?;
        let e = random_field(lattice, 3, base + 3, PROBE_DECAY);
        let (nv, nw, nb, ne) = (v.xnorm(0.0), w.xnorm(0.0), b.xnorm(0.0), e.xnorm(0.0));
        let (vs, ws, bs, es) = (vec![v; 2], vec![w; 2], vec![b; 2], vec![e; 2]);
        for &t in times {
            let grid = DuhamelGrid::new(lattice, t, nu, 1);
            let ratios = [
                last(m1(&grid, &vs, &ws)?).xnorm(0.0) / (t.sqrt() * nv * nw),
                last(m2(&grid, &es, &bs)?).xnorm(0.0) / (t * ne * nb),
                last(m3(&grid, &vs, &bs, &bs)?).xnorm(0.0) / (t * nv * nb * nb),
                last(m4(&grid, &vs, &bs)?).xnorm(0.0) / (t * nv * nb),
                last(m5(&grid, &vs, &bs)?).xnorm(0.0) / (t * nv * nb),
                last(m6(&grid, &vs, &bs)?).xnorm(0.0) / (t * nv * nb),
            ];
            for (b, r) in best.iter_mut().zip(ratios) {
                *b = b.max(r);
            }
        }
    }
    Ok(OperatorBounds { constants: best })
}

/// Probe times used by [`calibrate`].
pub const CALIBRATION_TIMES: [f64; 4] = [0.01, 0.05, 0.1, 0.2];

/// Returns `config` with `c_ℓ` and `C̃_ℓ` measured on the given lattice.
pub fn calibrate(lattice: Lattice, config: &SolverConfig, seed: u64) -> Result<(SolverConfig, OperatorBounds)> {
    let bounds = measure_operator_bounds(lattice, config.nu, seed, 4, &CALIBRATION_TIMES)?;
    let mut out = config.clone();
    bounds.apply_to(&mut out);
    Ok((out, bounds))
}
