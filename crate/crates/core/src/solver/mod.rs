//! Mild-solution solver: Duhamel operators, Picard iteration and stepping.

mod calibrate;
mod operators;
mod picard;
mod state;
mod stepper;

pub use calibrate::{calibrate, measure_operator_bounds, OperatorBounds, CALIBRATION_TIMES, PROBE_DECAY};
pub use operators::{compute_j, m1, m2, m3, m4, m5, m6, recover_pressure, Forcing};
pub use picard::{admissible_t, picard_run, PicardDiagnostics, PicardMap, PicardOutcome};
pub use state::{SolverConfig, StateVector};
pub use stepper::{steps_for, Stepper, BLOWUP_FACTOR};
