use num_complex::Complex64;

use super::gate::UnitaryGate;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Corrections larger than this (Frobenius) are flagged on the result.
pub const LARGE_CORRECTION: f64 = 1e-2;

/// Result of projecting a matrix onto the unitary group.
#[derive(Debug, Clone)]
pub struct UnitaryProjection {
    pub gate: UnitaryGate,
    /// Frobenius distance between the input and its unitary polar factor.
    pub distance: f64,
    /// `distance > LARGE_CORRECTION`
    pub flagged: bool,
}

/// Unitary polar factor of `m`, the unitary closest to `m` in Frobenius norm.
///
/// Scaled Newton iteration `X ← (ζX + ζ⁻¹X⁻†)/2`. Singular input is an error.
pub fn nearest_unitary(m: &ComplexMatrix) -> Result<UnitaryProjection> {
    let mut x = m.clone();
    let mut residual = f64::INFINITY;
    for _ in 0..100 {
        let inv = x.inverse()?;
        let zeta = (inv.frobenius_norm() / x.frobenius_norm()).sqrt();
        let next = x
            .scale(Complex64::new(0.5 * zeta, 0.0))
            .add(&inv.adjoint().scale(Complex64::new(0.5 / zeta, 0.0)));
        residual = next.sub(&x).frobenius_norm();
        x = next;
        if residual <= 1e-15 * (m.dim() as f64).sqrt() {
            break;
        }
    }
    if x.unitarity_defect() > 1e-12 {
        return Err(Error::NoConvergence {
            what: "polar decomposition",
            residual,
        });
    }
    let distance = x.sub(m).frobenius_norm();
    let gate = UnitaryGate::single(x)?;
    Ok(UnitaryProjection {
        gate,
        distance,
        flagged: distance > LARGE_CORRECTION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::charts::zyz_unitary;

    #[test]
    fn unitary_is_fixed_point() {
        let u = zyz_unitary(0.3, 1.1, 2.4, -0.8);
        let p = nearest_unitary(u.matrix()).unwrap();
        assert!(p.gate.matrix().sub(u.matrix()).max_abs() < 1e-12);
        assert!(!p.flagged);
    }

    #[test]
    fn scalar_multiple_of_identity() {
        let p = nearest_unitary(&ComplexMatrix::identity(2).scale(Complex64::new(2.0, 0.0))).unwrap();
        assert!(p.gate.matrix().sub(&ComplexMatrix::identity(2)).max_abs() < 1e-14);
        assert!((p.distance - 2f64.sqrt()).abs() < 1e-12);
        assert!(p.flagged);
    }

    #[test]
    fn singular_input_fails() {
        let m = ComplexMatrix::from_pairs(2, &[(1., 0.), (1., 0.), (1., 0.), (1., 0.)]).unwrap();
        assert!(matches!(nearest_unitary(&m), Err(Error::Singular)));
    }

    #[test]
    fn nonnormal_input_matches_svd_factor() {
        // [[2, 0], [0, -3]]: polar factor is diag(1, -1)
        let m = ComplexMatrix::from_pairs(2, &[(2., 0.), (0., 0.), (0., 0.), (-3., 0.)]).unwrap();
        let p = nearest_unitary(&m).unwrap();
        let expected = ComplexMatrix::from_pairs(2, &[(1., 0.), (0., 0.), (0., 0.), (-1., 0.)]).unwrap();
        assert!(p.gate.matrix().sub(&expected).max_abs() < 1e-14);
    }
}
