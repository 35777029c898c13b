//! Eigenvalues of dense complex matrices.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR sweeps (Givens rotations, Wilkinson shift, exceptional shifts
//! every ten stalled sweeps) with deflation on negligible subdiagonals. Only
//! the active diagonal block is updated since eigenvectors are not needed.

use num_complex::Complex64;

use super::gate::UnitaryGate;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 100;

/// Eigenvalues of a unitary gate. Each has modulus 1 up to the gate's unitarity defect.
pub fn eig_unitary(g: &UnitaryGate) -> Result<Vec<Complex64>> {
    eigenvalues(g.matrix())
}

/// Eigenvalues of an arbitrary square complex matrix, in deflation order.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    let mut h = Hess {
        n,
        a: m.as_slice().to_vec(),
    };
    if n == 1 {
        return Ok(vec![h.at(0, 0)]);
    }
    h.reduce();
    h.qr_iterate()?;
    Ok((0..n).map(|i| h.at(i, i)).collect())
}

struct Hess {
    n: usize,
    a: Vec<Complex64>,
}

impl Hess {
    #[inline]
    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.a[r * self.n + c]
    }

    #[inline]
    fn at_mut(&mut self, r: usize, c: usize) -> &mut Complex64 {
        &mut self.a[r * self.n + c]
    }

    fn reduce(&mut self) {
        let n = self.n;
        for k in 0..n.saturating_sub(2) {
            let mut v: Vec<Complex64> = (k + 1..n).map(|r| self.at(r, k)).collect();
            let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if alpha == 0.0 {
                continue;
            }
            let x0 = v[0];
            let phase = if x0.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            v[0] += phase * alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            let beta = 2.0 / vnorm2;
            // left: A <- (I - beta v v*) A on rows k+1..n
            for c in k..n {
                let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * self.at(k + 1 + i, c)).sum();
                let f = dot * beta;
                for (i, vi) in v.iter().enumerate() {
                    *self.at_mut(k + 1 + i, c) -= vi * f;
                }
            }
            // right: A <- A (I - beta v v*) on columns k+1..n
            for r in 0..n {
                let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| self.at(r, k + 1 + i) * vi).sum();
                let f = dot * beta;
                for (i, vi) in v.iter().enumerate() {
                    *self.at_mut(r, k + 1 + i) -= f * vi.conj();
                }
            }
            for r in k + 2..n {
                *self.at_mut(r, k) = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn qr_iterate(&mut self) -> Result<()> {
        let n = self.n;
        let norm = self.a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut hi = n - 1;
        let mut stalled = 0usize;
        let mut rotations = Vec::with_capacity(n);
        while hi > 0 {
            let mut lo = hi;
            while lo > 0 {
                let mut s = self.at(lo - 1, lo - 1).norm() + self.at(lo, lo).norm();
                if s == 0.0 {
                    s = norm;
                }
                if self.at(lo, lo - 1).norm() <= f64::EPSILON * s {
                    *self.at_mut(lo, lo - 1) = Complex64::new(0.0, 0.0);
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                hi -= 1;
                stalled = 0;
                continue;
            }
            stalled += 1;
            if stalled > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::NoConvergence {
                    what: "complex QR eigenvalue iteration",
                    residual: self.at(hi, hi - 1).norm(),
                });
            }
            let mu = if stalled % 10 == 0 {
                // exceptional shift
                self.at(hi, hi) + Complex64::new(self.at(hi, hi - 1).norm(), 0.0) * 0.75
            } else {
                self.wilkinson_shift(hi)
            };
            self.sweep(lo, hi, mu, &mut rotations);
        }
        Ok(())
    }

    fn wilkinson_shift(&self, hi: usize) -> Complex64 {
        let a = self.at(hi - 1, hi - 1);
        let b = self.at(hi - 1, hi);
        let c = self.at(hi, hi - 1);
        let d = self.at(hi, hi);
        let half = (a - d) * 0.5;
        let disc = (half * half + b * c).sqrt();
        let mid = (a + d) * 0.5;
        let (m1, m2) = (mid + disc, mid - disc);
        if (m1 - d).norm() <= (m2 - d).norm() {
            m1
        } else {
            m2
        }
    }

    /// One shifted QR step `H - μI = QR, H <- RQ + μI` on the block `lo..=hi`.
    fn sweep(&mut self, lo: usize, hi: usize, mu: Complex64, rotations: &mut Vec<(Complex64, Complex64)>) {
        rotations.clear();
        for k in lo..=hi {
            *self.at_mut(k, k) -= mu;
        }
        for k in lo..hi {
            let x = self.at(k, k);
            let y = self.at(k + 1, k);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for col in k..=hi {
                let p = self.at(k, col);
                let q = self.at(k + 1, col);
                *self.at_mut(k, col) = c.conj() * p + s.conj() * q;
                *self.at_mut(k + 1, col) = -s * p + c * q;
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            for row in lo..=(k + 1).min(hi) {
                let p = self.at(row, k);
                let q = self.at(row, k + 1);
                *self.at_mut(row, k) = p * c + q * s;
                *self.at_mut(row, k + 1) = -p * s.conj() + q * c.conj();
            }
        }
        for k in lo..=hi {
            *self.at_mut(k, k) += mu;
        }
    }
}
