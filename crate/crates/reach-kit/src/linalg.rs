//! Dense complex linear algebra for the predictor-corrector core.
//!
//! Row-major square matrices, LU factorization with partial pivoting, and a
//! cheap condition estimate from the pivot magnitude ratio. Matrices here are
//! small (rarely beyond a few dozen rows), so simplicity beats blocking.

use crate::C64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is numerically singular (zero pivot at row {0})")]
    Singular(usize),
}

/// LU factorization rolled into one reusable buffer.
pub struct LuWorkspace {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    /// max |pivot| / min |pivot| from the last successful factorization.
    pub pivot_ratio: f64,
}

impl LuWorkspace {
    pub fn new(n: usize) -> Self {
        LuWorkspace {
            n,
            lu: vec![C64::new(0.0, 0.0); n * n],
            perm: vec![0; n],
            pivot_ratio: 0.0,
        }
    }

    /// Factorizes `a` (row-major n*n), leaving `a` untouched.
    pub fn factor(&mut self, a: &[C64]) -> Result<(), LinalgError> {
        let n = self.n;
        debug_assert_eq!(a.len(), n * n);
        self.lu.copy_from_slice(a);
        for (i, p) in self.perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut max_piv = 0.0f64;
        let mut min_piv = f64::INFINITY;
        for k in 0..n {
            // Partial pivot on the largest magnitude in column k.
            let mut best = k;
            let mut best_mag = self.lu[k * n + k].norm_sqr();
            for r in k + 1..n {
                let mag = self.lu[r * n + k].norm_sqr();
                if mag > best_mag {
                    best_mag = mag;
                    best = r;
                }
            }
            if best_mag == 0.0 {
                self.pivot_ratio = f64::INFINITY;
                return Err(LinalgError::Singular(k));
            }
            if best != k {
                self.perm.swap(k, best);
                for c in 0..n {
                    self.lu.swap(k * n + c, best * n + c);
                }
            }
            let piv = self.lu[k * n + k];
            let piv_mag = piv.norm();
            max_piv = max_piv.max(piv_mag);
            min_piv = min_piv.min(piv_mag);
            for r in k + 1..n {
                let factor = self.lu[r * n + k] / piv;
                self.lu[r * n + k] = factor;
                if factor.norm_sqr() != 0.0 {
                    for c in k + 1..n {
                        let sub = factor * self.lu[k * n + c];
                        self.lu[r * n + c] -= sub;
                    }
                }
            }
        }
        self.pivot_ratio = if min_piv > 0.0 { max_piv / min_piv } else { f64::INFINITY };
        Ok(())
    }

    /// Solves `A x = b` using the current factorization; writes x into `out`.
    pub fn solve(&self, b: &[C64], out: &mut [C64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        debug_assert_eq!(out.len(), n);
        for i in 0..n {
            out[i] = b[self.perm[i]];
        }
        for i in 1..n {
            let mut s = out[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * out[j];
            }
            out[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = out[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * out[j];
            }
            out[i] = s / self.lu[i * n + i];
        }
    }
}

/// One-shot solve for callers without a workspace to reuse.
pub fn solve_once(a: &[C64], b: &[C64]) -> Result<(Vec<C64>, f64), LinalgError> {
    let n = b.len();
    let mut ws = LuWorkspace::new(n);
    ws.factor(a)?;
    let mut x = vec![C64::new(0.0, 0.0); n];
    ws.solve(b, &mut x);
    Ok((x, ws.pivot_ratio))
}

pub fn inf_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn solves_small_real_system() {
        // [2 1; 1 3] x = [5; 10] -> x = [1; 3]
        let a = vec![c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)];
        let b = vec![c(5.0, 0.0), c(10.0, 0.0)];
        let (x, _) = solve_once(&a, &b).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((x[1] - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn solves_complex_system_and_reports_pivot_ratio() {
        let a = vec![c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)];
        let b = vec![c(1.0, 1.0), c(2.0, 0.0)];
        let (x, ratio) = solve_once(&a, &b).unwrap();
        // Check residual instead of hand-solving.
        let r0 = a[0] * x[0] + a[1] * x[1] - b[0];
        let r1 = a[2] * x[0] + a[3] * x[1] - b[1];
        assert!(r0.norm() < 1e-14 && r1.norm() < 1e-14);
        assert!(ratio >= 1.0 && ratio.is_finite());
    }

    #[test]
    fn singular_matrix_is_detected() {
        let a = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        let b = vec![c(1.0, 0.0), c(2.0, 0.0)];
        assert!(solve_once(&a, &b).is_err());
    }

    #[test]
    fn random_round_trip_solves() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut unit = || rng.next_u64() as f64 / u64::MAX as f64 - 0.5;
        for n in [1usize, 2, 3, 6, 17] {
            let a: Vec<C64> = (0..n * n).map(|_| c(unit(), unit())).collect();
            let x_true: Vec<C64> = (0..n).map(|_| c(unit(), unit())).collect();
            let mut b = vec![c(0.0, 0.0); n];
            for i in 0..n {
                for j in 0..n {
                    b[i] += a[i * n + j] * x_true[j];
                }
            }
            let (x, _) = solve_once(&a, &b).unwrap();
            let err: f64 = x
                .iter()
                .zip(&x_true)
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-9, "n={n}: error {err}");
        }
    }
}
