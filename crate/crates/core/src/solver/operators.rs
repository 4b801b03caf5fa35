//! Ohm's law, pressure recovery, the nonlinear forcings and the six Duhamel
//! operators of the mild formulation:
//!
//! ```text
//! v  = e^{tνΔ}v₀ + M₁(v,v) + M₂(E,B) + M₃(v,B,B)
//! B  = ℒ₁B₀ + ℒ₂(B₀/2 + B₁) + M₄(v,B)
//! Ẽ  = ℒ₁Ẽ₀ + ℒ₂(∇×B₀ − Ẽ₀/2) − M₅(v,B)
//! Ē  = e^{−t}Ē₀ − M₆(v,B)
//! ```
//!
//! with `B₁ = −∇×E₀`. `M₃` carries the Lorentz braking `(v×B)×B` with a plus
//! sign, matching `j×B = E×B + (v×B)×B`.

use num_complex::Complex64;

use crate::error::Result;
use crate::propagators::{DuhamelGrid, Kernel};
use crate::spectral::{cross, tensor_divergence, tensor_divergence_physical, transform_for, SpectralField};

use super::state::StateVector;

/// Ohm's law `j = σ(Ẽ + Ē + v×B)`.
pub fn compute_j(
    v: &SpectralField,
    b: &SpectralField,
    e_tilde: &SpectralField,
    e_bar: &SpectralField,
    sigma: f64,
) -> Result<SpectralField> {
    let mut j = cross(v, b)?;
    j += e_tilde;
    j += e_bar;
    j.scale(sigma);
    Ok(j)
}

/// Pressure from `Δp = −div F`, `F = ∇·(v⊗v) − j×B`: `p̂(n) = i n·F̂(n)/|n|²`
/// and `p̂(0) = 0`, so that `∇p = −(n nᵀ/|n|²) F̂`.
pub fn recover_pressure(v: &SpectralField, j: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    let mut f = tensor_divergence(v, v)?;
    f -= &cross(j, b)?;
    let i = Complex64::new(0.0, 1.0);
    Ok(f.map_modes(1, |n, u| {
        let m = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64;
        if m == 0.0 {
            return [Complex64::default(); 3];
        }
        let dot = n[0] as f64 * u[0] + n[1] as f64 * u[1] + n[2] as f64 * u[2];
        [i * dot / m, Complex64::default(), Complex64::default()]
    }))
}

/// Nonlinear source terms at one instant (unit conductivity).
#[derive(Clone, Debug)]
pub struct Forcing {
    /// `𝐏[−∇·(v⊗v) + j×B]` with `j = E + v×B`; integrand of `M₁ + M₂ + M₃`.
    pub momentum: SpectralField,
    /// `v×B` truncated to the lattice; drives `M₄`, `M₅`, `M₆`.
    pub vxb: SpectralField,
}

impl Forcing {
    pub fn zeros(lattice: crate::spectral::Lattice) -> Self {
        Self {
            momentum: SpectralField::vector(lattice),
            vxb: SpectralField::vector(lattice),
        }
    }

    pub fn evaluate(state: &StateVector) -> Result<Self> {
        let lat = state.lattice();
        let tr = transform_for(lat);
        let pv = tr.to_physical(&state.v);
        let pb = tr.to_physical(&state.b);
        let vxb = tr.from_physical(&pv.cross(&pb));
        let mut j = state.e();
        j += &vxb;
        let lorentz = tr.from_physical(&tr.to_physical(&j).cross(&pb));
        let mut momentum = lorentz;
        momentum -= &tensor_divergence_physical(lat, &pv, &pv);
        Ok(Self {
            momentum: momentum.leray_project()?,
            vxb,
        })
    }
}

fn pointwise(
    a: &[SpectralField],
    b: &[SpectralField],
    f: impl Fn(&SpectralField, &SpectralField) -> Result<SpectralField>,
) -> Result<Vec<SpectralField>> {
    assert_eq!(a.len(), b.len(), "sample sequences differ in length");
    a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// `M₁(v,w) = −∫₀ᵗ e^{(t−s)νΔ} 𝐏 ∇·(v⊗w) ds` at every grid node.
pub fn m1(grid: &DuhamelGrid, v: &[SpectralField], w: &[SpectralField]) -> Result<Vec<SpectralField>> {
    let f = pointwise(v, w, |a, b| Ok(tensor_divergence(a, b)?.leray_project()?.scaled(-1.0)))?;
    grid.integrate(Kernel::Heat, &f)
}

/// `M₂(E,B) = ∫₀ᵗ e^{(t−s)νΔ} 𝐏(E×B) ds`
pub fn m2(grid: &DuhamelGrid, e: &[SpectralField], b: &[SpectralField]) -> Result<Vec<SpectralField>> {
    let f = pointwise(e, b, |a, b| cross(a, b)?.leray_project())?;
    grid.integrate(Kernel::Heat, &f)
}

/// `M₃(v,B,B') = ∫₀ᵗ e^{(t−s)νΔ} 𝐏((v×B)×B') ds`, each product truncated.
pub fn m3(grid: &DuhamelGrid, v: &[SpectralField], b: &[SpectralField], b2: &[SpectralField]) -> Result<Vec<SpectralField>> {
    let vxb = pointwise(v, b, cross)?;
    let f = pointwise(&vxb, b2, |a, b| cross(a, b)?.leray_project())?;
    grid.integrate(Kernel::Heat, &f)
}

/// `M₄(v,B) = ∫₀ᵗ ℒ₂(t−s) ∇×(v×B) ds`
pub fn m4(grid: &DuhamelGrid, v: &[SpectralField], b: &[SpectralField]) -> Result<Vec<SpectralField>> {
    let f = pointwise(v, b, |a, b| cross(a, b)?.curl())?;
    grid.integrate(Kernel::Phi2, &f)
}

/// `M₅(v,B) = ∫₀ᵗ (∂ℒ₂)(t−s) 𝐏(v×B) ds`
pub fn m5(grid: &DuhamelGrid, v: &[SpectralField], b: &[SpectralField]) -> Result<Vec<SpectralField>> {
    let f = pointwise(v, b, |a, b| cross(a, b)?.leray_project())?;
    grid.integrate(Kernel::DPhi2, &f)
}

/// `M₆(v,B) = ∫₀ᵗ e^{−(t−s)} ∇Δ⁻¹div(v×B) ds`
pub fn m6(grid: &DuhamelGrid, v: &[SpectralField], b: &[SpectralField]) -> Result<Vec<SpectralField>> {
    let f = pointwise(v, b, |a, b| cross(a, b)?.gradient_part())?;
    grid.integrate(Kernel::Relax, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_low_modes;
    use crate::spectral::Lattice;

    fn constant(f: &SpectralField, nodes: usize) -> Vec<SpectralField> {
        vec![f.clone(); nodes]
    }

    #[test]
    fn ohms_law() {
        let lat = Lattice::new(3);
        let v = random_low_modes(lat, 3, 1, 2, 1.0);
        let b = random_low_modes(lat, 3, 2, 2, 1.0);
        let et = random_low_modes(lat, 3, 3, 2, 1.0);
        let eb = random_low_modes(lat, 3, 4, 2, 1.0);
        let z = SpectralField::vector(lat);
        assert!(compute_j(&z, &b, &z, &z, 1.0).unwrap().is_zero());
        let j = compute_j(&v, &z, &et, &eb, 2.0).unwrap();
        assert!(j.max_abs_diff(&(&et + &eb).scaled(2.0)) < 1e-15);
        let j1 = compute_j(&v, &b, &et, &eb, 1.0).unwrap();
        let j2 = compute_j(&v, &b, &et, &eb, 2.0).unwrap();
        assert!(j2.max_abs_diff(&j1.scaled(2.0)) < 1e-15);
    }

    #[test]
    fn vanishing_cases() {
        let lat = Lattice::new(3);
        let grid = DuhamelGrid::new(lat, 0.05, 0.1, 4);
        let v = random_low_modes(lat, 3, 5, 2, 1.0).leray_project().unwrap();
        let z = SpectralField::vector(lat);
        let (vs, zs) = (constant(&v, 5), constant(&z, 5));
        for out in [
            m1(&grid, &zs, &zs).unwrap(),
            m2(&grid, &zs, &vs).unwrap(),
            m3(&grid, &vs, &zs, &vs).unwrap(),
            m4(&grid, &vs, &zs).unwrap(),
            m5(&grid, &zs, &vs).unwrap(),
            m6(&grid, &vs, &zs).unwrap(),
        ] {
            assert!(out.iter().all(|f| f.max_abs() < 1e-16));
        }

        // constant and parallel fields
        let mut c = SpectralField::vector(lat);
        c.set([0, 0, 0], 0, Complex64::new(0.3, 0.0));
        c.set([0, 0, 0], 2, Complex64::new(-0.2, 0.0));
        let cs = constant(&c, 5);
        let c2 = constant(&c.scaled(1.7), 5);
        assert!(m1(&grid, &cs, &cs).unwrap().iter().all(|f| f.max_abs() < 1e-16));
        assert!(m2(&grid, &cs, &c2).unwrap().iter().all(|f| f.max_abs() < 1e-16));
        assert!(m3(&grid, &cs, &c2, &c2).unwrap().iter().all(|f| f.max_abs() < 1e-16));
    }

    #[test]
    fn outputs_have_the_right_structure() {
        let lat = Lattice::new(4);
        let grid = DuhamelGrid::new(lat, 0.05, 0.1, 3);
        let v: Vec<_> = (0..4).map(|k| random_low_modes(lat, 3, 10 + k, 2, 1.0).leray_project().unwrap()).collect();
        let b: Vec<_> = (0..4).map(|k| random_low_modes(lat, 3, 20 + k, 2, 1.0).leray_project().unwrap()).collect();
        let e: Vec<_> = (0..4).map(|k| random_low_modes(lat, 3, 30 + k, 2, 1.0)).collect();
        let div_free = |fs: Vec<SpectralField>| fs.iter().all(|f| f.divergence().unwrap().xnorm(0.0) < 1e-10);
        assert!(div_free(m1(&grid, &v, &v).unwrap()));
        assert!(div_free(m2(&grid, &e, &b).unwrap()));
        assert!(div_free(m3(&grid, &v, &b, &b).unwrap()));
        assert!(div_free(m4(&grid, &v, &b).unwrap()));
        assert!(div_free(m5(&grid, &v, &b).unwrap()));
        assert!(m6(&grid, &v, &b).unwrap().iter().all(|f| f.curl().unwrap().xnorm(0.0) < 1e-10));
    }

    #[test]
    fn fused_forcing_matches_operator_integrands() {
        let lat = Lattice::new(3);
        let v = random_low_modes(lat, 3, 41, 2, 0.5);
        let b = random_low_modes(lat, 3, 42, 2, 0.5);
        let e = random_low_modes(lat, 3, 43, 2, 0.5);
        let state = StateVector::from_initial_data(&v, &b, &e).unwrap();
        let f = Forcing::evaluate(&state).unwrap();

        let adv = tensor_divergence(&state.v, &state.v).unwrap().leray_project().unwrap();
        let exb = cross(&state.e(), &state.b).unwrap().leray_project().unwrap();
        let vxb = cross(&state.v, &state.b).unwrap();
        let brake = cross(&vxb, &state.b).unwrap().leray_project().unwrap();
        let mut expected = &exb + &brake;
        expected -= &adv;
        assert!(f.momentum.max_abs_diff(&expected) < 1e-14);
        assert!(f.vxb.max_abs_diff(&vxb) < 1e-15);
    }

    #[test]
    fn pressure_balances_gradient_part() {
        let lat = Lattice::new(3);
        let v = random_low_modes(lat, 3, 51, 2, 0.5).leray_project().unwrap();
        let b = random_low_modes(lat, 3, 52, 2, 0.5).leray_project().unwrap();
        let j = random_low_modes(lat, 3, 53, 2, 0.5);
        let p = recover_pressure(&v, &j, &b).unwrap();
        assert_eq!(p.mean()[0], Complex64::default());
        let mut f = tensor_divergence(&v, &v).unwrap();
        f -= &cross(&j, &b).unwrap();
        // ∇p cancels the gradient part of F
        let residual = &p.gradient().unwrap() + &f.gradient_part().unwrap();
        assert!(residual.max_abs() < 1e-15);
        let z = SpectralField::vector(lat);
        assert!(recover_pressure(&z, &z, &b).unwrap().is_zero());
    }
}
