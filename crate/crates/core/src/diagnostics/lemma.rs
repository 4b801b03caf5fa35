//! Brute-force evaluation of the convolution bound
//! `Σ_k ρ_s(k) ρ_{s'}(n−k) ≲ ρ_{min(s,s')}(n)`.

use serde::Serialize;

use crate::spectral::{DecayProfile, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaResult {
    pub s: f64,
    pub s_prime: f64,
    pub n_max: i64,
    pub max_ratio: f64,
    /// Maximizer, in the fundamental domain `0 ≤ n1 ≤ n2 ≤ n3`.
    pub argmax: Mode,
    pub ratio_at_zero: f64,
}

fn table(profile: &DecayProfile, max_sq: i64) -> Vec<f64> {
    (0..=max_sq).map(|m| profile.eval_radius((m as f64).sqrt())).collect()
}

/// Largest ratio `Σ_{|k|∞ ≤ 2 n_max} ρ_s(k)ρ_{s'}(n−k) / ρ_{min(s,s')}(n)`
/// over `|n|∞ ≤ n_max`, both profiles sharing `C1`, `C2`.
///
/// The summand and the target only depend on `|n|`, `|k|` and `|n−k|`, so
/// `n` ranges over the fundamental domain of the cube's symmetry group.
/// With `C2 = 0` the `k = 0` and `k = n` terms are infinite.
pub fn lemma_check(s: f64, s_prime: f64, c1: f64, c2: f64, n_max: i64) -> LemmaResult {
    let kmax = 2 * n_max;
    let left = DecayProfile::new(s, c1, c2);
    let right = DecayProfile::new(s_prime, c1, c2);
    let target = DecayProfile::new(s.min(s_prime), c1, c2);
    let rho_left = table(&left, 3 * kmax * kmax);
    let reach = n_max + kmax;
    let rho_right = table(&right, 3 * reach * reach);

    let convolution = |n: Mode| -> f64 {
        let mut sum = 0.0;
        for k1 in -kmax..=kmax {
            let (a1, d1) = (k1 * k1, (n[0] - k1) * (n[0] - k1));
            for k2 in -kmax..=kmax {
                let (a2, d2) = (a1 + k2 * k2, d1 + (n[1] - k2) * (n[1] - k2));
                for k3 in -kmax..=kmax {
                    let a = a2 + k3 * k3;
                    let d = d2 + (n[2] - k3) * (n[2] - k3);
                    sum += rho_left[a as usize] * rho_right[d as usize];
                }
            }
        }
        sum
    };

    let ratio_at_zero = convolution([0, 0, 0]) / target.eval([0, 0, 0]);
    let mut best = (ratio_at_zero, [0, 0, 0]);
    for n3 in 0..=n_max {
        for n2 in 0..=n3 {
            for n1 in 0..=n2 {
                let n = [n1, n2, n3];
                if n == [0, 0, 0] {
                    continue;
                }
                let r = convolution(n) / target.eval(n);
                if r > best.0 || r.is_nan() {
                    best = (r, n);
                }
            }
        }
    }
    LemmaResult {
        s,
        s_prime,
        n_max,
        max_ratio: best.0,
        argmax: best.1,
        ratio_at_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mode_ratio_is_a_direct_sum() {
        let (c1, c2) = (1.0, 1.0);
        let p = DecayProfile::new(1.0, c1, c2);
        let q = DecayProfile::new(2.0, c1, c2);
        let mut direct = 0.0;
        for k1 in -4i64..=4 {
            for k2 in -4i64..=4 {
                for k3 in -4i64..=4 {
                    direct += p.eval([k1, k2, k3]) * q.eval([-k1, -k2, -k3]);
                }
            }
        }
        let r = lemma_check(1.0, 2.0, c1, c2, 2);
        assert!((r.ratio_at_zero - direct * c2 / c1).abs() < 1e-12 * direct);
        assert!(r.max_ratio >= r.ratio_at_zero);
        assert!(r.argmax[0] <= r.argmax[1] && r.argmax[1] <= r.argmax[2]);
    }

    #[test]
    fn ratio_is_linear_in_c1() {
        let a = lemma_check(1.0, 1.0, 1.0, 1.0, 3);
        let b = lemma_check(1.0, 1.0, 2.0, 1.0, 3);
        assert!((b.max_ratio - 2.0 * a.max_ratio).abs() < 1e-12 * b.max_ratio);
        assert_eq!(a.argmax, b.argmax);
    }

    #[test]
    fn brute_force_agrees_with_naive_sum_off_axis() {
        // n = (1, 2, 2) against an unsymmetrized triple loop.
        let p = DecayProfile::new(0.5, 1.0, 1.0);
        let n = [1i64, 2, 2];
        let mut direct = 0.0;
        for k1 in -4i64..=4 {
            for k2 in -4i64..=4 {
                for k3 in -4i64..=4 {
                    direct += p.eval([k1, k2, k3]) * p.eval([n[0] - k1, n[1] - k2, n[2] - k3]);
                }
            }
        }
        let r = lemma_check(0.5, 0.5, 1.0, 1.0, 2);
        assert!(r.max_ratio >= direct / p.eval(n) - 1e-12);
    }
}
