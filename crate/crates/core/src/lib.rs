//! Truncated-Fourier simulator for the incompressible Navier-Stokes-Maxwell
//! system on the periodic box 𝕋³ = (ℝ/2πℤ)³, written in its mild
//! (Duhamel) form with heat and damped-wave propagators, together with the
//! diagnostics that check it: energy budget, residuals of the original
//! equations, Picard contraction and Fourier decay exponents.

pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod propagators;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
