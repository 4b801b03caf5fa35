use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice mismatch: cutoff {left} vs {right}")]
    LatticeMismatch { left: usize, right: usize },

    #[error("expected a field with {expected} components, got {actual}")]
    ComponentMismatch { expected: usize, actual: usize },

    #[error("quadrature needs at least {needed} forcing samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("degenerate fit range: {0}")]
    DegenerateRange(String),

    #[error("step {step} rejected at t={t}: X0 norm grew from {before:e} to {after:e}")]
    BlowUp {
        step: usize,
        t: f64,
        before: f64,
        after: f64,
    },

    #[error("Picard iteration does not contract on T={t_final}: L grew for 3 consecutive iterates")]
    NonContraction { t_final: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error("invariant check failed: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
