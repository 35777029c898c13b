//! Numerical-range geometry of unitaries and the minimum gate fidelity.
//!
//! The numerical range of a unitary is the convex polygon spanned by its
//! eigenvalues on the unit circle. Its distance to the origin is read off the
//! largest circular gap `G` between consecutive eigenvalue angles: the
//! polygon's nearest edge is the chord across that gap, at distance
//! `-cos(G/2)` when `G ≥ π`, and the origin lies inside the polygon otherwise.
//! The chord-length formula `sqrt(1 - (d_max/2)^2)` agrees with that exact value
//! only in the first case.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_unitary, haar_state, ComplexMatrix, StateVector, UnitaryGate};
use crate::rng::{domain, substream};

/// Tolerance for angle ties and the semicircle test.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    /// Eigenvalue arguments in `[0, 2π)`, ascending.
    pub angles: Vec<f64>,
    /// Largest chord between two eigenvalues.
    pub d_max: f64,
    /// Largest circular gap between consecutive angles, wrap-around included.
    pub max_gap: f64,
    pub fits_semicircle: bool,
    /// Distance from the origin to the convex hull of the eigenvalues.
    pub w_min_exact: f64,
    pub numerical_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub f_min: f64,
    pub d_max: f64,
    pub formula_valid: bool,
    pub epsilon_achieved: f64,
}

pub fn spectrum_summary(g: &UnitaryGate) -> Result<SpectrumSummary> {
    Ok(summary_from_eigenvalues(&eig_unitary(g)?))
}

/// Geometry of a set of (unit-modulus) eigenvalues.
pub fn summary_from_eigenvalues(eigs: &[Complex64]) -> SpectrumSummary {
    let mut angles: Vec<f64> = eigs
        .iter()
        .map(|z| {
            let a = z.arg().rem_euclid(TAU);
            if a >= TAU - ANGLE_TOL {
                0.0
            } else {
                a
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);

    let mut d_max = 0.0f64;
    for (i, a) in angles.iter().enumerate() {
        for b in &angles[i + 1..] {
            let delta = (b - a).abs();
            let delta = delta.min(TAU - delta);
            d_max = d_max.max(2.0 * (delta / 2.0).sin());
        }
    }

    let max_gap = match angles.as_slice() {
        [] => TAU,
        [first, .., last] => angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(TAU - (last - first), f64::max),
        [_] => TAU,
    };
    let fits_semicircle = max_gap >= PI - ANGLE_TOL;
    let w_min_exact = if fits_semicircle {
        (-(max_gap / 2.0).cos()).clamp(0.0, 1.0)
    } else {
        0.0
    };
    SpectrumSummary {
        angles,
        d_max: d_max.min(2.0),
        max_gap,
        fits_semicircle,
        w_min_exact,
        numerical_radius: eigs.iter().map(|z| z.norm()).fold(0.0, f64::max),
    }
}

/// `sqrt(1 - (d_max/2)^2)`, the chord formula. Only equal to the minimum gate
/// fidelity when the eigenvalues fit in a closed half-circle.
pub fn f_min_formula(d_max: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&d_max) {
        return Err(Error::OutOfRange {
            name: "d_max",
            value: d_max,
            range: "[0, 2]",
        });
    }
    Ok((1.0 - (d_max / 2.0).powi(2)).max(0.0).sqrt())
}

/// Minimum over unit states of `|<x|V†U|x>|`, computed exactly from the spectrum of `V†U`.
pub fn gate_fidelity_min(u: &UnitaryGate, v: &UnitaryGate) -> Result<FidelityReport> {
    let summary = spectrum_summary(&v.adjoint_mul(u)?)?;
    Ok(report_from_summary(&summary))
}

pub fn report_from_summary(s: &SpectrumSummary) -> FidelityReport {
    FidelityReport {
        f_min: s.w_min_exact,
        d_max: s.d_max,
        formula_valid: s.fits_semicircle,
        epsilon_achieved: 1.0 - s.w_min_exact,
    }
}

/// Largest eigenvalue chord admitted by an ε-approximate separation: `2 sqrt(2ε - ε²)`.
pub fn epsilon_to_dmax(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: eps,
            range: "[0, 1]",
        });
    }
    Ok(2.0 * (2.0 * eps - eps * eps).max(0.0).sqrt())
}

/// Inverse of [`epsilon_to_dmax`]: `1 - sqrt(1 - (d/2)^2)`.
pub fn dmax_to_epsilon(d: f64) -> Result<f64> {
    Ok(1.0 - f_min_formula(d)?)
}

/// `|<x|y>|`, the Uhlmann fidelity of two pure states.
pub fn pure_state_fidelity(x: &StateVector, y: &StateVector) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    Ok(x.inner(y).norm().min(1.0))
}

/// State-space search for `min |<x|V†U|x>|`, independent of any eigen-solver.
///
/// Draws `samples` Haar states (substream per sample index) and polishes the
/// best by pattern search over the real and imaginary part of each amplitude,
/// renormalizing after every step. The returned value is always attained by
/// some unit state, so it never undercuts the exact minimum.
pub fn f_min_bruteforce(u: &UnitaryGate, v: &UnitaryGate, samples: usize, seed: u64) -> Result<f64> {
    let a = v.adjoint_mul(u)?;
    Ok(min_range_modulus(a.matrix(), samples.max(1), seed).0)
}

/// Minimum of `|<x|A|x>|` over sampled-and-polished unit states, with its witness.
pub fn min_range_modulus(a: &ComplexMatrix, samples: usize, seed: u64) -> (f64, StateVector) {
    let dim = a.dim();
    let value = |x: &[Complex64]| -> f64 {
        let ax = a.apply(x);
        x.iter().zip(&ax).map(|(xi, yi)| xi.conj() * yi).sum::<Complex64>().norm()
    };
    let scored: Vec<(f64, StateVector)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = haar_state(dim, &mut substream(seed, domain::BRUTEFORCE, i));
            (value(s.amplitudes()), s)
        })
        .collect();
    let (mut best, start) = scored
        .into_iter()
        .reduce(|acc, cur| if cur.0 < acc.0 { cur } else { acc })
        .expect("at least one sample");

    let mut x = start.amplitudes().to_vec();
    let mut step = 0.25;
    let directions = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut passes = 0;
    while step > 1e-10 && passes < 20_000 && best > 0.0 {
        passes += 1;
        let mut improved = false;
        for k in 0..dim {
            for d in directions {
                let mut trial = x.clone();
                trial[k] += d * step;
                let norm = trial.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                trial.iter_mut().for_each(|z| *z /= norm);
                let f = value(&trial);
                if f < best {
                    best = f;
                    x = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let witness = StateVector::normalized(x).expect("polished state is nonzero");
    (value(witness.amplitudes()), witness)
}
