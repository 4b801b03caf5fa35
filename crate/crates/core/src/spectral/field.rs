//! Truncated Fourier coefficients of real scalar and vector fields on 𝕋³,
//! with the exact mode-wise calculus (derivatives, projections, norms).

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::lattice::{mode_sq, Lattice, Mode};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Weight `(1 + |n|²)^{s/2}` of the X^s norm.
#[inline]
pub fn weight(n: Mode, s: f64) -> f64 {
    weight_sq(mode_sq(n) as f64, s)
}

#[inline]
pub(crate) fn weight_sq(m: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        (1.0 + m).powf(0.5 * s)
    }
}

/// `‖u‖_{X^s} = Σ_n (1+|n|²)^{s/2} |û(n)|`, with the Euclidean norm of the
/// complex coefficient vector at each mode.
pub fn xnorm(u: &SpectralField, s: f64) -> f64 {
    u.xnorm(s)
}

/// Fourier coefficients `û(n)` of a real field with `c ∈ {1, 3}` components.
///
/// Coefficients are stored component-major: component `c` occupies
/// `data[c * L .. (c + 1) * L]` in lattice storage order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    lattice: Lattice,
    comps: usize,
    data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(lattice: Lattice, comps: usize) -> Self {
        assert!(comps == 1 || comps == 3, "fields have 1 or 3 components");
        Self {
            lattice,
            comps,
            data: vec![ZERO; comps * lattice.len()],
        }
    }

    pub fn scalar(lattice: Lattice) -> Self {
        Self::zeros(lattice, 1)
    }

    pub fn vector(lattice: Lattice) -> Self {
        Self::zeros(lattice, 3)
    }

    /// Builds a field from a per-mode, per-component generator.
    pub fn from_fn(lattice: Lattice, comps: usize, mut f: impl FnMut(Mode, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(lattice, comps);
        let len = lattice.len();
        for c in 0..comps {
            for i in 0..len {
                out.data[c * len + i] = f(lattice.mode(i), c);
            }
        }
        out
    }

    pub(crate) fn from_raw(lattice: Lattice, comps: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), comps * lattice.len());
        Self { lattice, comps, data }
    }

    #[inline]
    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    #[inline]
    pub fn comps(&self) -> usize {
        self.comps
    }

    #[inline]
    pub fn raw(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn component(&self, c: usize) -> &[Complex64] {
        let len = self.lattice.len();
        &self.data[c * len..(c + 1) * len]
    }

    #[inline]
    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let len = self.lattice.len();
        &mut self.data[c * len..(c + 1) * len]
    }

    #[inline]
    pub fn at(&self, index: usize, c: usize) -> Complex64 {
        self.data[c * self.lattice.len() + index]
    }

    #[inline]
    pub fn at_mut(&mut self, index: usize, c: usize) -> &mut Complex64 {
        let len = self.lattice.len();
        &mut self.data[c * len + index]
    }

    /// Coefficient of component `c` at mode `n`; zero outside the lattice.
    pub fn get(&self, n: Mode, c: usize) -> Complex64 {
        self.lattice.try_index(n).map_or(ZERO, |i| self.at(i, c))
    }

    pub fn set(&mut self, n: Mode, c: usize, value: Complex64) {
        let i = self.lattice.index(n);
        *self.at_mut(i, c) = value;
    }

    /// Sets `û(n) = value` and `û(-n) = conj(value)`.
    pub fn set_pair(&mut self, n: Mode, c: usize, value: Complex64) {
        let i = self.lattice.index(n);
        let j = self.lattice.conjugate_index(i);
        *self.at_mut(i, c) = value;
        *self.at_mut(j, c) = value.conj();
        if i == j {
            *self.at_mut(i, c) = Complex64::new(value.re, 0.0);
        }
    }

    /// The complex coefficient vector at a storage index (padded with zeros
    /// for scalar fields).
    #[inline]
    pub fn vec_at(&self, index: usize) -> [Complex64; 3] {
        let len = self.lattice.len();
        let mut v = [ZERO; 3];
        for (c, slot) in v.iter_mut().enumerate().take(self.comps) {
            *slot = self.data[c * len + index];
        }
        v
    }

    #[inline]
    fn put_vec(&mut self, index: usize, v: [Complex64; 3]) {
        let len = self.lattice.len();
        for (c, val) in v.iter().enumerate().take(self.comps) {
            self.data[c * len + index] = *val;
        }
    }

    /// Euclidean magnitude of the coefficient vector at a storage index.
    #[inline]
    pub fn magnitude_at(&self, index: usize) -> f64 {
        let len = self.lattice.len();
        (0..self.comps)
            .map(|c| self.data[c * len + index].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn magnitude(&self, n: Mode) -> f64 {
        self.lattice.try_index(n).map_or(0.0, |i| self.magnitude_at(i))
    }

    /// The n = 0 coefficient vector.
    pub fn mean(&self) -> [Complex64; 3] {
        self.vec_at(self.lattice.zero_index())
    }

    pub fn xnorm(&self, s: f64) -> f64 {
        let lat = self.lattice;
        let mut acc = 0.0;
        for i in 0..lat.len() {
            let mag = self.magnitude_at(i);
            if mag != 0.0 {
                acc += weight(lat.mode(i), s) * mag;
            }
        }
        acc
    }

    /// X^s partial sum over modes with Euclidean `|n| ≤ radius`.
    pub fn xnorm_within(&self, s: f64, radius: f64) -> f64 {
        let lat = self.lattice;
        let r2 = radius * radius;
        let mut acc = 0.0;
        for i in 0..lat.len() {
            let n = lat.mode(i);
            if (mode_sq(n) as f64) <= r2 {
                acc += weight(n, s) * self.magnitude_at(i);
            }
        }
        acc
    }

    /// `Σ_n |û(n)|²`, the squared L² norm normalized by the torus volume.
    pub fn l2_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Real part of `Σ_n û(n)·conj(ŵ(n))`.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        self.assert_compatible(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.assert_compatible(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of `û(-n) = conj(û(n))`.
    pub fn hermitian_defect(&self) -> f64 {
        let len = self.lattice.len();
        let mut worst = 0.0_f64;
        for c in 0..self.comps {
            let comp = self.component(c);
            for i in 0..len {
                let j = len - 1 - i;
                worst = worst.max((comp[j] - comp[i].conj()).norm());
            }
        }
        worst
    }

    /// Projects onto real fields: `û(n) ← (û(n) + conj(û(-n))) / 2`.
    pub fn symmetrize(&mut self) {
        let len = self.lattice.len();
        for c in 0..self.comps {
            let comp = self.component_mut(c);
            for i in 0..=len / 2 {
                let j = len - 1 - i;
                let avg = 0.5 * (comp[i] + comp[j].conj());
                comp[i] = avg;
                comp[j] = avg.conj();
            }
        }
    }

    pub fn scale(&mut self, a: f64) {
        self.data.iter_mut().for_each(|z| *z *= a);
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `self += a · x`
    pub fn axpy(&mut self, a: f64, x: &SpectralField) {
        self.assert_compatible(x);
        for (y, x) in self.data.iter_mut().zip(&x.data) {
            *y += a * x;
        }
    }

    /// Mode-wise multiplication by a real symbol indexed by `|n|²`.
    pub fn apply_radial(&self, symbol: impl Fn(usize) -> f64) -> Self {
        let lat = self.lattice;
        let msq = lat.mode_sq_table();
        let mut out = self.clone();
        let len = lat.len();
        for c in 0..self.comps {
            let comp = &mut out.data[c * len..(c + 1) * len];
            for (z, &m) in comp.iter_mut().zip(&msq) {
                *z *= symbol(m);
            }
        }
        out
    }

    /// Mode-wise map of the coefficient vector.
    pub fn map_modes(&self, out_comps: usize, mut f: impl FnMut(Mode, [Complex64; 3]) -> [Complex64; 3]) -> Self {
        let lat = self.lattice;
        let mut out = Self::zeros(lat, out_comps);
        for i in 0..lat.len() {
            let v = f(lat.mode(i), self.vec_at(i));
            out.put_vec(i, v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    fn assert_compatible(&self, other: &SpectralField) {
        assert_eq!(self.lattice, other.lattice, "lattice mismatch");
        assert_eq!(self.comps, other.comps, "component count mismatch");
    }

    pub(crate) fn require_vector(&self) -> Result<()> {
        if self.comps == 3 {
            Ok(())
        } else {
            Err(Error::ComponentMismatch {
                expected: 3,
                actual: self.comps,
            })
        }
    }

    pub(crate) fn require_scalar(&self) -> Result<()> {
        if self.comps == 1 {
            Ok(())
        } else {
            Err(Error::ComponentMismatch {
                expected: 1,
                actual: self.comps,
            })
        }
    }

    // -- differential operators ------------------------------------------

    /// `i n · û(n)`
    pub fn divergence(&self) -> Result<Self> {
        self.require_vector()?;
        Ok(self.map_modes(1, |n, u| {
            let d = I * (n[0] as f64 * u[0] + n[1] as f64 * u[1] + n[2] as f64 * u[2]);
            [d, ZERO, ZERO]
        }))
    }

    /// `i n × û(n)`
    pub fn curl(&self) -> Result<Self> {
        self.require_vector()?;
        Ok(self.map_modes(3, |n, u| {
            let (a, b, c) = (n[0] as f64, n[1] as f64, n[2] as f64);
            [
                I * (b * u[2] - c * u[1]),
                I * (c * u[0] - a * u[2]),
                I * (a * u[1] - b * u[0]),
            ]
        }))
    }

    /// `i n p̂(n)`
    pub fn gradient(&self) -> Result<Self> {
        self.require_scalar()?;
        Ok(self.map_modes(3, |n, u| {
            [I * (n[0] as f64 * u[0]), I * (n[1] as f64 * u[0]), I * (n[2] as f64 * u[0])]
        }))
    }

    /// `−|n|² û(n)`
    pub fn laplacian(&self) -> Self {
        self.apply_radial(|m| -(m as f64))
    }

    /// Leray projector `(I − n nᵀ/|n|²) û(n)`; the mean mode passes through.
    pub fn leray_project(&self) -> Result<Self> {
        self.require_vector()?;
        Ok(self.map_modes(3, |n, u| match longitudinal(n, u) {
            Some(q) => [u[0] - q[0], u[1] - q[1], u[2] - q[2]],
            None => u,
        }))
    }

    /// Gradient part `(n nᵀ/|n|²) û(n)`, zero at n = 0.
    pub fn gradient_part(&self) -> Result<Self> {
        self.require_vector()?;
        Ok(self.map_modes(3, |n, u| longitudinal(n, u).unwrap_or([ZERO; 3])))
    }

    /// Splits `E` into its divergence-free part (which keeps the mean) and its
    /// gradient part.
    pub fn helmholtz_split(&self) -> Result<(Self, Self)> {
        Ok((self.leray_project()?, self.gradient_part()?))
    }
}

/// `(n nᵀ/|n|²) u`, or `None` at the zero mode.
#[inline]
fn longitudinal(n: Mode, u: [Complex64; 3]) -> Option<[Complex64; 3]> {
    let m = mode_sq(n);
    if m == 0 {
        return None;
    }
    let nf = [n[0] as f64, n[1] as f64, n[2] as f64];
    let dot = (nf[0] * u[0] + nf[1] * u[1] + nf[2] * u[2]) / m as f64;
    Some([nf[0] * dot, nf[1] * dot, nf[2] * dot])
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<&SpectralField> for f64 {
    type Output = SpectralField;
    fn mul(self, rhs: &SpectralField) -> SpectralField {
        rhs.scaled(self)
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        self.axpy(-1.0, rhs);
    }
}
