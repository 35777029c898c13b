//! Dense complex linear algebra for gates and states.

pub mod charts;
pub mod eig;
pub mod gate;
pub mod haar;
pub mod matrix;
pub mod polar;

pub use charts::{param_unitary, zyz_params, zyz_unitary};
pub use eig::{eig_unitary, eigenvalues};
pub use gate::UnitaryGate;
pub use haar::{haar_state, haar_unitary};
pub use matrix::{ComplexMatrix, StateVector};
pub use polar::{nearest_unitary, UnitaryProjection};

