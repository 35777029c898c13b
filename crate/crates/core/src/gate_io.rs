//! Gate JSON format and built-in fixtures.
//!
//! ```json
//! {"dims": [2, 2], "matrix": [[{"re": 1.0, "im": 0.0}, ...], ...]}
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nearest_unitary, ComplexMatrix, UnitaryGate};

pub const FIXTURE_NAMES: [&str; 4] = ["cnot", "swap", "cz", "identity4"];

/// Inputs whose unitarity defect exceeds the gate tolerance but whose polar
/// correction stays below this are projected instead of rejected.
pub const MAX_LOAD_CORRECTION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateJson {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<ComplexJson>>,
}

impl GateJson {
    pub fn from_gate(g: &UnitaryGate) -> Self {
        Self {
            dims: g.partition().to_vec(),
            matrix: g.matrix().rows().map(|r| r.iter().map(|&z| z.into()).collect()).collect(),
        }
    }

    /// Raw matrix and partition, without any unitarity check.
    pub fn to_matrix(&self) -> Result<(ComplexMatrix, Vec<usize>)> {
        let rows: Vec<Vec<Complex64>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&z| z.into()).collect())
            .collect();
        let m = ComplexMatrix::from_rows(&rows).map_err(|e| Error::MalformedGate(e.to_string()))?;
        Ok((m, self.dims.clone()))
    }

    /// Strict conversion at the default gate tolerance.
    pub fn to_gate(&self) -> Result<UnitaryGate> {
        let (m, dims) = self.to_matrix()?;
        UnitaryGate::new(m, dims)
    }
}

/// Gate as loaded from user input, noting whether it had to be projected.
#[derive(Debug, Clone)]
pub struct LoadedGate {
    pub gate: UnitaryGate,
    pub projection_distance: Option<f64>,
}

/// Parses gate JSON. Slightly non-unitary matrices (e.g. printed with few
/// decimals) are replaced by their nearest unitary.
pub fn gate_from_json(text: &str) -> Result<LoadedGate> {
    let parsed: GateJson = serde_json::from_str(text).map_err(|e| Error::MalformedGate(e.to_string()))?;
    let (m, dims) = parsed.to_matrix()?;
    match UnitaryGate::new(m.clone(), dims.clone()) {
        Ok(gate) => Ok(LoadedGate {
            gate,
            projection_distance: None,
        }),
        Err(Error::NotUnitary { defect, tol }) => {
            let p = nearest_unitary(&m).map_err(|_| Error::NotUnitary { defect, tol })?;
            if p.flagged {
                return Err(Error::NotUnitary { defect, tol });
            }
            Ok(LoadedGate {
                gate: p.gate.with_partition(dims)?,
                projection_distance: Some(p.distance),
            })
        }
        Err(e) => Err(e),
    }
}

pub fn gate_to_json(g: &UnitaryGate) -> String {
    serde_json::to_string_pretty(&GateJson::from_gate(g)).expect("gate JSON is always serializable")
}

/// Resolves a fixture name or reads a JSON file.
pub fn load_gate(spec: &str) -> Result<LoadedGate> {
    if let Ok(gate) = fixture(spec) {
        return Ok(LoadedGate {
            gate,
            projection_distance: None,
        });
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::UnknownFixture(spec.to_string()));
    }
    gate_from_json(&std::fs::read_to_string(path)?)
}

/// Built-in two-qubit gates. Qubit 0 is the most significant index bit.
pub fn fixture(name: &str) -> Result<UnitaryGate> {
    let perm: [usize; 4] = match name {
        "cnot" => [0, 1, 3, 2],
        "swap" => [0, 2, 1, 3],
        "identity4" | "cz" => [0, 1, 2, 3],
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    let mut m = ComplexMatrix::zeros(4);
    for (r, &c) in perm.iter().enumerate() {
        m[(r, c)] = Complex64::new(1.0, 0.0);
    }
    if name == "cz" {
        m[(3, 3)] = Complex64::new(-1.0, 0.0);
    }
    UnitaryGate::new(m, vec![2, 2])
}
