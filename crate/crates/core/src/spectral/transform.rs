//! Zero-padded transforms between lattice coefficients and a physical grid.
//!
//! The grid has `P ≥ 2(2N+1)` points per axis, so the product of two
//! lattice-supported fields is resolved without aliasing and truncating the
//! product back to the lattice reproduces the exact convolution. Two real
//! fields are carried through each complex FFT, and axes whose input or
//! output is confined to the lattice box are pruned.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::SpectralField;
use super::lattice::Lattice;

/// Real samples of a field on the padded grid, one array per component.
#[derive(Clone, Debug)]
pub struct PhysicalField {
    size: usize,
    comps: Vec<Vec<f64>>,
}

impl PhysicalField {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn comps(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    fn from_components(size: usize, comps: Vec<Vec<f64>>) -> Self {
        Self { size, comps }
    }

    fn binary(&self, other: &PhysicalField, comps: usize, f: impl Fn(&[f64], &[f64]) -> [f64; 3]) -> Self {
        assert_eq!(self.size, other.size);
        let pts = self.comps[0].len();
        let mut out = vec![vec![0.0; pts]; comps];
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        for x in 0..pts {
            for (c, comp) in self.comps.iter().enumerate() {
                a[c] = comp[x];
            }
            for (c, comp) in other.comps.iter().enumerate() {
                b[c] = comp[x];
            }
            let r = f(&a[..self.comps.len()], &b[..other.comps.len()]);
            for (c, o) in out.iter_mut().enumerate() {
                o[x] = r[c];
            }
        }
        Self::from_components(self.size, out)
    }

    /// Pointwise `a × b`.
    pub fn cross(&self, other: &PhysicalField) -> Self {
        assert!(self.comps() == 3 && other.comps() == 3);
        self.binary(other, 3, |a, b| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        })
    }

    /// Pointwise product; scalars broadcast against vectors, equal component
    /// counts multiply componentwise.
    pub fn product(&self, other: &PhysicalField) -> Self {
        let (ca, cb) = (self.comps(), other.comps());
        let comps = ca.max(cb);
        self.binary(other, comps, |a, b| {
            let mut r = [0.0; 3];
            for (c, slot) in r.iter_mut().enumerate().take(comps) {
                *slot = a[if ca == 1 { 0 } else { c }] * b[if cb == 1 { 0 } else { c }];
            }
            r
        })
    }

    /// Components `v_j w_i` of the tensor `v ⊗ w` as scalar fields, row `j`.
    pub fn outer(&self, other: &PhysicalField) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(9);
        for j in 0..3 {
            for i in 0..3 {
                out.push(self.comps[j].iter().zip(&other.comps[i]).map(|(a, b)| a * b).collect());
            }
        }
        out
    }

    pub fn add(&self, other: &PhysicalField) -> Self {
        self.binary(other, self.comps(), |a, b| {
            let mut r = [0.0; 3];
            for c in 0..a.len() {
                r[c] = a[c] + b[c];
            }
            r
        })
    }

    /// Mean of `Σ_c |u_c(x)|²` over grid points (the normalized L² norm squared).
    pub fn mean_square(&self) -> f64 {
        let pts = self.comps[0].len() as f64;
        self.comps.iter().flat_map(|c| c.iter()).map(|x| x * x).sum::<f64>() / pts
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.comps
    }
}

/// Smallest `2^a 3^b 5^c ≥ n`.
fn smooth_size(n: usize) -> usize {
    let mut p = n;
    loop {
        let mut r = p;
        for f in [2, 3, 5] {
            while r % f == 0 {
                r /= f;
            }
        }
        if r == 1 {
            return p;
        }
        p += 1;
    }
}

pub(crate) struct PaddedTransform {
    lattice: Lattice,
    size: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Grid position of lattice offset `-N..=N` along one axis.
    kept: Vec<usize>,
}

impl PaddedTransform {
    fn new(lattice: Lattice) -> Self {
        let size = smooth_size(2 * lattice.side());
        let mut planner = FftPlanner::new();
        let n = lattice.cutoff() as i64;
        let kept = (-n..=n).map(|k| k.rem_euclid(size as i64) as usize).collect();
        Self {
            lattice,
            size,
            fwd: planner.plan_fft_forward(size),
            inv: planner.plan_fft_inverse(size),
            kept,
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    /// Runs `fft` on the lines along `axis` selected by `lines`, each given as
    /// the flat offset of its first element.
    fn transform_lines(&self, grid: &mut [Complex64], axis: usize, lines: &[usize], fft: &Arc<dyn Fft<f64>>) {
        let p = self.size;
        let stride = p.pow(2 - axis as u32);
        let mut buf = vec![Complex64::default(); lines.len() * p];
        for (l, &off) in lines.iter().enumerate() {
            for k in 0..p {
                buf[l * p + k] = grid[off + k * stride];
            }
        }
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (l, &off) in lines.iter().enumerate() {
            for k in 0..p {
                grid[off + k * stride] = buf[l * p + k];
            }
        }
    }

    /// Line start offsets along `axis` where the other two axes range over
    /// the given index sets.
    fn line_offsets(&self, axis: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
        let p = self.size;
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &i in a {
            for &j in b {
                out.push(match axis {
                    0 => i * p + j,
                    1 => i * p * p + j,
                    _ => (i * p + j) * p,
                });
            }
        }
        out
    }

    fn inverse_grid(&self, z: &dyn Fn(usize) -> Complex64) -> Vec<Complex64> {
        let p = self.size;
        let lat = self.lattice;
        let side = lat.side();
        let mut grid = vec![Complex64::default(); p * p * p];
        for i1 in 0..side {
            for i2 in 0..side {
                for i3 in 0..side {
                    let idx = (i1 * side + i2) * side + i3;
                    let g = (self.kept[i1] * p + self.kept[i2]) * p + self.kept[i3];
                    grid[g] = z(idx);
                }
            }
        }
        let all: Vec<usize> = (0..p).collect();
        let lines = self.line_offsets(2, &self.kept, &self.kept);
        self.transform_lines(&mut grid, 2, &lines, &self.inv);
        let lines = self.line_offsets(1, &self.kept, &all);
        self.transform_lines(&mut grid, 1, &lines, &self.inv);
        let lines = self.line_offsets(0, &all, &all);
        self.transform_lines(&mut grid, 0, &lines, &self.inv);
        grid
    }

    fn forward_grid(&self, mut grid: Vec<Complex64>) -> Vec<Complex64> {
        let p = self.size;
        let all: Vec<usize> = (0..p).collect();
        let lines = self.line_offsets(0, &all, &all);
        self.transform_lines(&mut grid, 0, &lines, &self.fwd);
        let lines = self.line_offsets(1, &self.kept, &all);
        self.transform_lines(&mut grid, 1, &lines, &self.fwd);
        let lines = self.line_offsets(2, &self.kept, &self.kept);
        self.transform_lines(&mut grid, 2, &lines, &self.fwd);

        let side = self.lattice.side();
        let norm = 1.0 / (p * p * p) as f64;
        let mut out = vec![Complex64::default(); self.lattice.len()];
        for i1 in 0..side {
            for i2 in 0..side {
                for i3 in 0..side {
                    let idx = (i1 * side + i2) * side + i3;
                    let g = (self.kept[i1] * p + self.kept[i2]) * p + self.kept[i3];
                    out[idx] = grid[g] * norm;
                }
            }
        }
        out
    }

    pub(crate) fn to_physical(&self, field: &SpectralField) -> PhysicalField {
        assert_eq!(field.lattice(), self.lattice);
        let comps = field.comps();
        let mut out = Vec::with_capacity(comps);
        let i = Complex64::new(0.0, 1.0);
        let mut c = 0;
        while c < comps {
            let a = field.component(c);
            let grid = if c + 1 < comps {
                let b = field.component(c + 1);
                self.inverse_grid(&|k| a[k] + i * b[k])
            } else {
                self.inverse_grid(&|k| a[k])
            };
            out.push(grid.iter().map(|z| z.re).collect());
            if c + 1 < comps {
                out.push(grid.iter().map(|z| z.im).collect());
            }
            c += 2;
        }
        PhysicalField::from_components(self.size, out)
    }

    /// Transforms real grid arrays back to lattice coefficients, truncating.
    pub(crate) fn scalars_from_physical(&self, comps: &[&[f64]]) -> Vec<Vec<Complex64>> {
        let len = self.lattice.len();
        let mut out = Vec::with_capacity(comps.len());
        let mut c = 0;
        while c < comps.len() {
            let grid: Vec<Complex64> = if c + 1 < comps.len() {
                comps[c].iter().zip(comps[c + 1]).map(|(&a, &b)| Complex64::new(a, b)).collect()
            } else {
                comps[c].iter().map(|&a| Complex64::new(a, 0.0)).collect()
            };
            let z = self.forward_grid(grid);
            if c + 1 < comps.len() {
                let mut a = vec![Complex64::default(); len];
                let mut b = vec![Complex64::default(); len];
                for k in 0..len {
                    let zc = z[len - 1 - k].conj();
                    a[k] = 0.5 * (z[k] + zc);
                    b[k] = Complex64::new(0.0, -0.5) * (z[k] - zc);
                }
                out.push(a);
                out.push(b);
            } else {
                out.push(z);
            }
            c += 2;
        }
        out
    }

    pub(crate) fn from_physical(&self, phys: &PhysicalField) -> SpectralField {
        let refs: Vec<&[f64]> = (0..phys.comps()).map(|c| phys.component(c)).collect();
        let comps = self.scalars_from_physical(&refs);
        SpectralField::from_raw(self.lattice, comps.len(), comps.concat())
    }
}

thread_local! {
    static TRANSFORMS: RefCell<HashMap<usize, Rc<PaddedTransform>>> = RefCell::new(HashMap::new());
}

/// The cached padded transform for a lattice.
pub(crate) fn transform_for(lattice: Lattice) -> Rc<PaddedTransform> {
    TRANSFORMS.with(|cache| {
        cache
            .borrow_mut()
            .entry(lattice.cutoff())
            .or_insert_with(|| Rc::new(PaddedTransform::new(lattice)))
            .clone()
    })
}

/// Samples a field on the padded physical grid.
pub fn to_physical(field: &SpectralField) -> PhysicalField {
    transform_for(field.lattice()).to_physical(field)
}

/// Coefficients of a physical field, truncated to the lattice.
pub fn from_physical(lattice: Lattice, phys: &PhysicalField) -> SpectralField {
    transform_for(lattice).from_physical(phys)
}

/// Points per axis of the padded grid used for a lattice.
pub fn grid_size(lattice: Lattice) -> usize {
    transform_for(lattice).size()
}
