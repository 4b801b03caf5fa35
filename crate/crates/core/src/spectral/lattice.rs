//! Cubic lattice of retained Fourier modes `n ∈ ℤ³` with `max_i |n_i| ≤ N`.

use crate::error::{Error, Result};

/// A lattice index `n = (n1, n2, n3)`.
pub type Mode = [i64; 3];

/// Squared Euclidean length of a mode.
#[inline]
pub fn mode_sq(n: Mode) -> i64 {
    n[0] * n[0] + n[1] * n[1] + n[2] * n[2]
}

#[inline]
pub fn mode_norm(n: Mode) -> f64 {
    (mode_sq(n) as f64).sqrt()
}

/// Truncation of ℤ³ to the cube `[-N, N]³`.
///
/// Storage order is row-major in `(n1, n2, n3)`, each running from `-N` to
/// `N`. With this layout the mode `-n` lives at `len() - 1 - index(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    cutoff: usize,
}

impl Lattice {
    pub fn new(cutoff: usize) -> Self {
        assert!(cutoff > 0, "lattice cutoff must be positive");
        Self { cutoff }
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Modes per axis, `2N + 1`.
    #[inline]
    pub fn side(&self) -> usize {
        2 * self.cutoff + 1
    }

    /// Total mode count `(2N + 1)³`.
    #[inline]
    pub fn len(&self) -> usize {
        let s = self.side();
        s * s * s
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest `|n|²` on the lattice, `3N²`.
    #[inline]
    pub fn max_mode_sq(&self) -> usize {
        3 * self.cutoff * self.cutoff
    }

    #[inline]
    pub fn contains(&self, n: Mode) -> bool {
        let c = self.cutoff as i64;
        n.iter().all(|&x| (-c..=c).contains(&x))
    }

    #[inline]
    pub fn index(&self, n: Mode) -> usize {
        debug_assert!(self.contains(n), "mode {n:?} outside lattice");
        let c = self.cutoff as i64;
        let s = self.side();
        ((n[0] + c) as usize * s + (n[1] + c) as usize) * s + (n[2] + c) as usize
    }

    pub fn try_index(&self, n: Mode) -> Option<usize> {
        self.contains(n).then(|| self.index(n))
    }

    #[inline]
    pub fn mode(&self, index: usize) -> Mode {
        let s = self.side();
        let c = self.cutoff as i64;
        let k3 = index % s;
        let k2 = (index / s) % s;
        let k1 = index / (s * s);
        [k1 as i64 - c, k2 as i64 - c, k3 as i64 - c]
    }

    /// Index of `-n` given the index of `n`.
    #[inline]
    pub fn conjugate_index(&self, index: usize) -> usize {
        self.len() - 1 - index
    }

    #[inline]
    pub fn zero_index(&self) -> usize {
        self.len() / 2
    }

    /// All modes in storage order.
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.len()).map(move |i| self.mode(i))
    }

    /// `|n|²` for every storage index.
    pub fn mode_sq_table(&self) -> Vec<usize> {
        self.modes().map(|n| mode_sq(n) as usize).collect()
    }

    pub fn ensure_same(&self, other: &Lattice) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                left: self.cutoff,
                right: other.cutoff,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_count_and_roundtrip() {
        for cutoff in 1..5 {
            let lat = Lattice::new(cutoff);
            assert_eq!(lat.len(), (2 * cutoff + 1).pow(3));
            for i in 0..lat.len() {
                let n = lat.mode(i);
                assert!(lat.contains(n));
                assert_eq!(lat.index(n), i);
                let neg = [-n[0], -n[1], -n[2]];
                assert_eq!(lat.conjugate_index(i), lat.index(neg));
            }
            assert_eq!(lat.mode(lat.zero_index()), [0, 0, 0]);
        }
    }

    #[test]
    fn out_of_range_modes() {
        let lat = Lattice::new(2);
        assert!(lat.try_index([3, 0, 0]).is_none());
        assert!(lat.try_index([0, -3, 0]).is_none());
        assert_eq!(lat.try_index([2, -2, 2]), Some(lat.len() - 1 - lat.index([-2, 2, -2])));
    }
}
