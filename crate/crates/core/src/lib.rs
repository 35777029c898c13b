//! Minimum gate fidelity between a multipartite unitary and products of local
//! unitaries, computed from the eigenvalue geometry of `V†U`, plus a particle
//! swarm search for the best approximate tensor-product separation of a gate.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod gate_io;
pub mod linalg;
pub mod pso;
pub mod rng;
pub mod separation;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, StateVector, UnitaryGate};
pub use pso::{pso_minimize, PsoConfig, PsoRun};
pub use separation::{approx_separate, is_epsilon_separable, ProductAnsatz, SeparationResult};
pub use spectral::{gate_fidelity_min, FidelityReport, SpectrumSummary};
