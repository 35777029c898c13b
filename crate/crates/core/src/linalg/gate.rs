use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// A matrix checked to be unitary, with the tensor-factor dimensions it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryGate {
    matrix: ComplexMatrix,
    partition: Vec<usize>,
    unitarity_defect: f64,
    tolerance: f64,
}

impl UnitaryGate {
    pub const DEFAULT_TOL: f64 = 1e-8;

    /// Validates `matrix` against [`Self::DEFAULT_TOL`].
    pub fn new(matrix: ComplexMatrix, partition: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(matrix, partition, Self::DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, partition: Vec<usize>, tolerance: f64) -> Result<Self> {
        check_partition(&partition, matrix.dim())?;
        let (ok, defect) = matrix.is_unitary(tolerance);
        if !ok {
            return Err(Error::NotUnitary { defect, tol: tolerance });
        }
        Ok(Self {
            matrix,
            partition,
            unitarity_defect: defect,
            tolerance,
        })
    }

    /// A gate on a single undivided factor.
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.dim();
        Self::new(matrix, vec![dim])
    }

    pub fn identity(partition: Vec<usize>) -> Result<Self> {
        let dim = partition.iter().product();
        Self::new(ComplexMatrix::identity(dim), partition)
    }

    /// Tensor product of local gates; the partition concatenates theirs.
    pub fn tensor_product(locals: &[UnitaryGate]) -> Result<Self> {
        let matrix = ComplexMatrix::tensor_all(locals.iter().map(|g| g.matrix()));
        let partition = locals.iter().flat_map(|g| g.partition.iter().copied()).collect();
        let tol = locals.iter().map(|g| g.tolerance).fold(Self::DEFAULT_TOL, f64::max);
        Self::with_tolerance(matrix, partition, tol)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.unitarity_defect
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Same matrix, different factorization of its dimension.
    pub fn with_partition(mut self, partition: Vec<usize>) -> Result<Self> {
        check_partition(&partition, self.dim())?;
        self.partition = partition;
        Ok(self)
    }

    /// `self† · other`, validated at the looser of the two tolerances.
    pub fn adjoint_mul(&self, other: &UnitaryGate) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        let m = self.matrix.adjoint_mul(&other.matrix);
        let tol = 2.0 * self.tolerance.max(other.tolerance);
        Self::with_tolerance(m, self.partition.clone(), tol)
    }
}

fn check_partition(partition: &[usize], dim: usize) -> Result<()> {
    if partition.is_empty() || partition.contains(&0) || partition.iter().product::<usize>() != dim {
        return Err(Error::InvalidPartition {
            dims: partition.to_vec(),
            dim,
        });
    }
    Ok(())
}
