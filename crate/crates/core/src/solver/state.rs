use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::snapshot::{read_field, with_path, write_field};
use crate::spectral::{Lattice, SpectralField};

/// Snapshot `(t, v, B, Ẽ, Ē)` of the solution; `E = Ẽ + Ē`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub t: f64,
    pub v: SpectralField,
    pub b: SpectralField,
    pub e_tilde: SpectralField,
    pub e_bar: SpectralField,
}

impl StateVector {
    pub fn zeros(lattice: Lattice) -> Self {
        let z = SpectralField::vector(lattice);
        Self {
            t: 0.0,
            v: z.clone(),
            b: z.clone(),
            e_tilde: z.clone(),
            e_bar: z,
        }
    }

    /// Builds an admissible initial state: `v₀` and `B₀` are projected onto
    /// divergence-free fields, the mean of `B₀` is removed, and `E₀` is split
    /// into its solenoidal and gradient parts.
    pub fn from_initial_data(v0: &SpectralField, b0: &SpectralField, e0: &SpectralField) -> Result<Self> {
        let lat = v0.lattice();
        lat.ensure_same(&b0.lattice())?;
        lat.ensure_same(&e0.lattice())?;
        let mut b = b0.leray_project()?;
        let zero = b.lattice().zero_index();
        for c in 0..3 {
            *b.at_mut(zero, c) = Default::default();
        }
        let (e_tilde, e_bar) = e0.helmholtz_split()?;
        Ok(Self {
            t: 0.0,
            v: v0.leray_project()?,
            b,
            e_tilde,
            e_bar,
        })
    }

    /// Writes the four fields as consecutive snapshot records.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for f in self.fields() {
            write_field(&mut w, f, self.t)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut next = || read_field(&mut r).map_err(|e| with_path(e, path));
        let (v, t) = next()?;
        let (b, _) = next()?;
        let (e_tilde, _) = next()?;
        let (e_bar, _) = next()?;
        for f in [&b, &e_tilde, &e_bar] {
            v.lattice().ensure_same(&f.lattice())?;
        }
        Ok(Self { t, v, b, e_tilde, e_bar })
    }

    pub fn lattice(&self) -> Lattice {
        self.v.lattice()
    }

    pub fn e(&self) -> SpectralField {
        &self.e_tilde + &self.e_bar
    }

    pub fn fields(&self) -> [&SpectralField; 4] {
        [&self.v, &self.b, &self.e_tilde, &self.e_bar]
    }

    fn fields_mut(&mut self) -> [&mut SpectralField; 4] {
        [&mut self.v, &mut self.b, &mut self.e_tilde, &mut self.e_bar]
    }

    /// `‖v‖ + ‖B‖ + ‖Ẽ‖ + ‖Ē‖` in X⁰.
    pub fn x0_norm(&self) -> f64 {
        self.fields().iter().map(|f| f.xnorm(0.0)).sum()
    }

    /// X⁰ distance `Σ ‖a_i − b_i‖` over the four fields.
    pub fn x0_distance(&self, other: &StateVector) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields())
            .map(|(a, b)| (*a - b).xnorm(0.0))
            .sum()
    }

    pub fn axpy(&mut self, a: f64, x: &StateVector) {
        for (y, x) in self.fields_mut().into_iter().zip(x.fields()) {
            y.axpy(a, x);
        }
    }

    /// Re-imposes the constraints that hold for the exact flow: solenoidal
    /// `v`, `B`, `Ẽ` and irrotational `Ē` (whose mean is kept).
    pub fn reproject(&mut self) -> Result<()> {
        self.v = self.v.leray_project()?;
        self.b = self.b.leray_project()?;
        self.e_tilde = self.e_tilde.leray_project()?;
        let mean = self.e_bar.mean();
        self.e_bar = self.e_bar.gradient_part()?;
        let zero = self.lattice().zero_index();
        for (c, z) in mean.iter().enumerate() {
            *self.e_bar.at_mut(zero, c) = *z;
        }
        Ok(())
    }

    /// X⁰ norms of `div v`, `div B`, `div Ẽ` and `curl Ē`.
    pub fn constraint_residuals(&self) -> Result<[f64; 4]> {
        Ok([
            self.v.divergence()?.xnorm(0.0),
            self.b.divergence()?.xnorm(0.0),
            self.e_tilde.divergence()?.xnorm(0.0),
            self.e_bar.curl()?.xnorm(0.0),
        ])
    }

    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let names = ["div v", "div B", "div Ẽ", "curl Ē"];
        for (name, r) in names.iter().zip(self.constraint_residuals()?) {
            if r > tol {
                return Err(Error::Invariant(format!("{name} = {r:e} exceeds {tol:e} at t={}", self.t)));
            }
        }
        Ok(())
    }
}

/// Solver parameters.
///
/// `c1..c3` bound the growth of the iterates and `ct1..ct3` their
/// differences; both are empirical and set by [`super::calibrate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub nu: f64,
    pub sigma: f64,
    pub dt: f64,
    pub t_final: f64,
    pub picard_iters: usize,
    pub tol: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub ct1: f64,
    pub ct2: f64,
    pub ct3: f64,
    /// Cap for [`super::admissible_t`] when the data are tiny.
    pub t_max: f64,
    /// When false every nonlinear term is dropped (linear propagation only).
    pub nonlinear: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            nu: 0.1,
            sigma: 1.0,
            dt: 0.01,
            t_final: 0.5,
            picard_iters: 30,
            tol: 1e-12,
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            ct1: 1.0,
            ct2: 1.0,
            ct3: 1.0,
            t_max: 1.0,
            nonlinear: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("nu", self.nu),
            ("sigma", self.sigma),
            ("dt", self.dt),
            ("t_final", self.t_final),
            ("tol", self.tol),
            ("t_max", self.t_max),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {value}")));
            }
        }
        if self.sigma != 1.0 {
            return Err(Error::InvalidConfig(format!(
                "the damped-wave propagators assume unit conductivity, got sigma={}",
                self.sigma
            )));
        }
        Ok(())
    }
}
