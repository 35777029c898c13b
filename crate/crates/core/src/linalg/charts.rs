//! Parameter charts onto unitary groups.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::gate::UnitaryGate;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// `e^{iα} · diag(e^{-iβ}, e^{iβ}) · [[cos γ/2, -sin γ/2], [sin γ/2, cos γ/2]] · diag(e^{-iδ}, e^{iδ})`
///
/// Angles are reduced mod 2π before evaluation.
pub fn zyz_unitary(alpha: f64, beta: f64, gamma: f64, delta: f64) -> UnitaryGate {
    let [alpha, beta, gamma, delta] = [alpha, beta, gamma, delta].map(|a| a.rem_euclid(TAU));
    let (s, c) = (gamma / 2.0).sin_cos();
    let g = Complex64::from_polar(1.0, alpha);
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let m = ComplexMatrix::from_row_major(
        2,
        vec![
            g * e(-beta - delta) * c,
            -g * e(-beta + delta) * s,
            g * e(beta - delta) * s,
            g * e(beta + delta) * c,
        ],
    )
    .expect("2x2 chart is finite for finite angles");
    UnitaryGate::single(m).expect("zyz chart output is unitary")
}

/// Angles `[α, β, γ, δ]` with `zyz_unitary(α, β, γ, δ) = u` (up to rounding).
///
/// Fails if `u` is not a 2×2 gate.
pub fn zyz_params(u: &UnitaryGate) -> Result<[f64; 4]> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: u.dim(),
        });
    }
    let m = u.matrix();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let alpha = det.arg() / 2.0;
    let w = m.scale(Complex64::from_polar(1.0, -alpha));
    let (c, s) = (w[(0, 0)].norm(), w[(1, 0)].norm());
    let gamma = 2.0 * s.atan2(c);
    // sum = β + δ, diff = β − δ
    let sum = if c > 1e-12 { w[(1, 1)].arg() } else { 0.0 };
    let diff = if s > 1e-12 { w[(1, 0)].arg() } else { 0.0 };
    let (beta, delta) = if c <= 1e-12 {
        (diff, 0.0)
    } else if s <= 1e-12 {
        (sum, 0.0)
    } else {
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    Ok([alpha, beta, gamma, delta].map(|a| a.rem_euclid(TAU)))
}

/// Number of real parameters the chart for an `m`-dimensional factor takes.
pub fn chart_param_count(m: usize) -> usize {
    if m == 2 {
        4
    } else {
        m * m
    }
}

/// Hermitian matrix from `m²` reals: the first `m` fill the diagonal, then each
/// upper off-diagonal entry `(j, k)`, `j < k` in row order, takes two reals (re, im).
pub fn hermitian_from_params(params: &[f64], m: usize) -> Result<ComplexMatrix> {
    if params.len() != m * m {
        return Err(Error::DimensionMismatch {
            expected: m * m,
            actual: params.len(),
        });
    }
    let mut h = ComplexMatrix::zeros(m);
    for k in 0..m {
        h[(k, k)] = Complex64::new(params[k], 0.0);
    }
    let mut next = m;
    for j in 0..m {
        for k in j + 1..m {
            let z = Complex64::new(params[next], params[next + 1]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            next += 2;
        }
    }
    Ok(h)
}

/// `exp(iH)` with `H` built by [`hermitian_from_params`].
pub fn param_unitary(params: &[f64], m: usize) -> Result<UnitaryGate> {
    let h = hermitian_from_params(params, m)?;
    let u = expm(&h.scale(Complex64::i()));
    UnitaryGate::single(u)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=24 {
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        result = result.add(&term);
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}
