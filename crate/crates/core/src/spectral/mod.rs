//! Truncated lattice Fourier representation of real fields on 𝕋³.

mod field;
mod lattice;
mod product;
mod profile;
pub mod random;
pub mod snapshot;
mod transform;

pub use field::{weight, xnorm, SpectralField};
pub use lattice::{mode_norm, mode_sq, Lattice, Mode};
pub use product::{convolve_direct, convolve_fft, cross, tensor_divergence};
pub use profile::{rho_eval, seed_component, seed_field_from_profile, AnalyticProfile, DecayProfile, SignPattern};
pub use transform::{from_physical, grid_size, to_physical, PhysicalField};

pub(crate) use product::tensor_divergence_physical;
pub(crate) use transform::transform_for;
