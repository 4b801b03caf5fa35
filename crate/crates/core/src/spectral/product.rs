//! Products of lattice fields, truncated back to the lattice.

use num_complex::Complex64;

use super::field::SpectralField;
use super::lattice::Mode;
use super::transform::{transform_for, PhysicalField};
use crate::error::{Error, Result};

fn check_pair(f: &SpectralField, g: &SpectralField) -> Result<()> {
    f.lattice().ensure_same(&g.lattice())?;
    let (a, b) = (f.comps(), g.comps());
    if a == b || a == 1 || b == 1 {
        Ok(())
    } else {
        Err(Error::ComponentMismatch { expected: a, actual: b })
    }
}

/// Truncated convolution `Σ_k f̂(k) ĝ(n−k)` by explicit double loop.
///
/// Scalars broadcast against vectors; equal component counts multiply
/// componentwise.
pub fn convolve_direct(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    check_pair(f, g)?;
    let lat = f.lattice();
    let comps = f.comps().max(g.comps());
    let mut out = SpectralField::zeros(lat, comps);
    let len = lat.len();
    let modes: Vec<Mode> = lat.modes().collect();
    for c in 0..comps {
        let fc = f.component(if f.comps() == 1 { 0 } else { c });
        let gc = g.component(if g.comps() == 1 { 0 } else { c });
        let oc = out.component_mut(c);
        for (ik, k) in modes.iter().enumerate() {
            if fc[ik] == Complex64::default() {
                continue;
            }
            for (il, l) in modes.iter().enumerate() {
                let n = [k[0] + l[0], k[1] + l[1], k[2] + l[2]];
                if let Some(idx) = lat.try_index(n) {
                    oc[idx] += fc[ik] * gc[il];
                }
            }
        }
        debug_assert_eq!(oc.len(), len);
    }
    Ok(out)
}

/// Same contract as [`convolve_direct`], evaluated through the zero-padded
/// physical grid.
pub fn convolve_fft(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    check_pair(f, g)?;
    let tr = transform_for(f.lattice());
    let prod = tr.to_physical(f).product(&tr.to_physical(g));
    Ok(tr.from_physical(&prod))
}

/// Coefficients of the physical cross product `f × g`.
pub fn cross(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.lattice().ensure_same(&g.lattice())?;
    f.require_vector()?;
    g.require_vector()?;
    let tr = transform_for(f.lattice());
    Ok(tr.from_physical(&tr.to_physical(f).cross(&tr.to_physical(g))))
}

/// `∇·(v ⊗ w)`, componentwise `Σ_j ∂_j (v_j w_i)`; equals `(v·∇)w` when
/// `div v = 0`.
pub fn tensor_divergence(v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    v.lattice().ensure_same(&w.lattice())?;
    v.require_vector()?;
    w.require_vector()?;
    let tr = transform_for(v.lattice());
    let pv = tr.to_physical(v);
    let pw = if std::ptr::eq(v, w) { pv.clone() } else { tr.to_physical(w) };
    Ok(tensor_divergence_physical(v.lattice(), &pv, &pw))
}

pub(crate) fn tensor_divergence_physical(
    lattice: super::lattice::Lattice,
    pv: &PhysicalField,
    pw: &PhysicalField,
) -> SpectralField {
    let tr = transform_for(lattice);
    let outer = pv.outer(pw);
    let refs: Vec<&[f64]> = outer.iter().map(|c| c.as_slice()).collect();
    let t = tr.scalars_from_physical(&refs);
    let i = Complex64::new(0.0, 1.0);
    let mut out = SpectralField::vector(lattice);
    for idx in 0..lattice.len() {
        let n = lattice.mode(idx);
        for comp in 0..3 {
            let mut acc = Complex64::default();
            for (j, nj) in n.iter().enumerate() {
                acc += *nj as f64 * t[3 * j + comp][idx];
            }
            *out.at_mut(idx, comp) = i * acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lattice::Lattice;
    use crate::spectral::random::random_field;

    #[test]
    fn constant_one_is_identity() {
        let lat = Lattice::new(2);
        let g = random_field(lat, 3, 1, 0.0);
        let mut one = SpectralField::scalar(lat);
        one.set([0, 0, 0], 0, Complex64::new(1.0, 0.0));
        assert!(convolve_direct(&one, &g).unwrap().max_abs_diff(&g) < 1e-15);
        assert!(convolve_fft(&one, &g).unwrap().max_abs_diff(&g) < 1e-13);
    }

    #[test]
    fn cosine_squared() {
        let lat = Lattice::new(2);
        let mut f = SpectralField::scalar(lat);
        f.set_pair([1, 0, 0], 0, Complex64::new(0.5, 0.0));
        for out in [convolve_direct(&f, &f).unwrap(), convolve_fft(&f, &f).unwrap()] {
            assert!((out.get([0, 0, 0], 0) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
            assert!((out.get([2, 0, 0], 0) - Complex64::new(0.25, 0.0)).norm() < 1e-14);
            assert!((out.get([-2, 0, 0], 0) - Complex64::new(0.25, 0.0)).norm() < 1e-14);
            assert!(out.get([1, 0, 0], 0).norm() < 1e-14);
        }
    }

    #[test]
    fn direct_matches_brute_force_pairs() {
        // independent enumeration over all index pairs of the lattice
        let lat = Lattice::new(2);
        let f = random_field(lat, 1, 21, 0.0);
        let g = random_field(lat, 1, 22, 0.0);
        let conv = convolve_direct(&f, &g).unwrap();
        let fft = convolve_fft(&f, &g).unwrap();
        let n = 2i64;
        for a in -n..=n {
            for b in -n..=n {
                for c in -n..=n {
                    let mut acc = Complex64::default();
                    for k1 in -n..=n {
                        for k2 in -n..=n {
                            for k3 in -n..=n {
                                acc += f.get([k1, k2, k3], 0) * g.get([a - k1, b - k2, c - k3], 0);
                            }
                        }
                    }
                    assert!((conv.get([a, b, c], 0) - acc).norm() < 1e-13);
                    assert!((fft.get([a, b, c], 0) - acc).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cross_basics() {
        let lat = Lattice::new(2);
        let f = random_field(lat, 3, 2, 0.0);
        assert!(cross(&f, &f).unwrap().max_abs() < 1e-14);

        let mut e1 = SpectralField::vector(lat);
        e1.set([0, 0, 0], 0, Complex64::new(1.0, 0.0));
        let mut e2 = SpectralField::vector(lat);
        e2.set([0, 0, 0], 1, Complex64::new(1.0, 0.0));
        let e3 = cross(&e1, &e2).unwrap();
        assert!((e3.get([0, 0, 0], 2) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(e3.l2_sq() - 1.0 < 1e-14);
    }

    #[test]
    fn mismatched_lattices_rejected() {
        let a = SpectralField::vector(Lattice::new(2));
        let b = SpectralField::vector(Lattice::new(3));
        assert!(matches!(convolve_direct(&a, &b), Err(Error::LatticeMismatch { .. })));
        assert!(matches!(convolve_fft(&a, &b), Err(Error::LatticeMismatch { .. })));
        assert!(matches!(cross(&a, &b), Err(Error::LatticeMismatch { .. })));
    }
}
