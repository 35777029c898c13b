//! Search for a product of local gates that approximates a multipartite gate.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gate_io::GateJson;
use crate::linalg::charts::{chart_param_count, param_unitary};
use crate::linalg::{zyz_unitary, UnitaryGate};
use crate::pso::{pso_minimize_from, PsoConfig, PsoRun};
use crate::spectral::{epsilon_to_dmax, gate_fidelity_min, spectrum_summary};

/// How the parameters of one local factor map to a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// Four angles, see [`zyz_unitary`].
    Zyz,
    /// `m²` reals, `exp(iH)` for the Hermitian `H` they encode.
    HermitianExp { dim: usize },
}

impl Chart {
    pub fn for_dim(m: usize) -> Self {
        if m == 2 {
            Chart::Zyz
        } else {
            Chart::HermitianExp { dim: m }
        }
    }

    pub fn param_count(&self) -> usize {
        match *self {
            Chart::Zyz => 4,
            Chart::HermitianExp { dim } => chart_param_count(dim),
        }
    }

    pub fn periodic(&self) -> bool {
        matches!(self, Chart::Zyz)
    }

    pub fn build(&self, params: &[f64]) -> Result<UnitaryGate> {
        match *self {
            Chart::Zyz => match params {
                &[a, b, g, d] => Ok(zyz_unitary(a, b, g, d)),
                _ => Err(Error::DimensionMismatch {
                    expected: 4,
                    actual: params.len(),
                }),
            },
            Chart::HermitianExp { dim } => param_unitary(params, dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductAnsatz {
    pub partition: Vec<usize>,
    pub charts: Vec<Chart>,
    pub total_params: usize,
}

impl ProductAnsatz {
    pub fn new(partition: &[usize]) -> Result<Self> {
        if partition.is_empty() || partition.contains(&0) {
            return Err(Error::InvalidPartition {
                dims: partition.to_vec(),
                dim: partition.iter().product(),
            });
        }
        let charts: Vec<Chart> = partition.iter().map(|&m| Chart::for_dim(m)).collect();
        Ok(Self {
            partition: partition.to_vec(),
            total_params: charts.iter().map(Chart::param_count).sum(),
            charts,
        })
    }

    pub fn dim(&self) -> usize {
        self.partition.iter().product()
    }

    pub fn periodic_mask(&self) -> Vec<bool> {
        self.charts
            .iter()
            .flat_map(|c| std::iter::repeat(c.periodic()).take(c.param_count()))
            .collect()
    }

    pub fn locals(&self, params: &[f64]) -> Result<Vec<UnitaryGate>> {
        if params.len() != self.total_params {
            return Err(Error::DimensionMismatch {
                expected: self.total_params,
                actual: params.len(),
            });
        }
        let mut offset = 0;
        self.charts
            .iter()
            .map(|c| {
                let n = c.param_count();
                let g = c.build(&params[offset..offset + n]);
                offset += n;
                g
            })
            .collect()
    }

    pub fn product(&self, params: &[f64]) -> Result<UnitaryGate> {
        UnitaryGate::tensor_product(&self.locals(params)?)
    }

    fn check_target(&self, target: &UnitaryGate) -> Result<()> {
        if target.partition() != self.partition.as_slice() {
            return Err(Error::InvalidPartition {
                dims: self.partition.clone(),
                dim: target.dim(),
            });
        }
        Ok(())
    }
}

/// `params ↦ d_max((⊗ U_i)† · target)`. Numerical failures map to NaN.
pub fn build_objective<'a>(target: &'a UnitaryGate, ansatz: &'a ProductAnsatz) -> Result<impl Fn(&[f64]) -> f64 + Sync + 'a> {
    ansatz.check_target(target)?;
    Ok(move |params: &[f64]| objective_value(target, ansatz, params).unwrap_or(f64::NAN))
}

fn objective_value(target: &UnitaryGate, ansatz: &ProductAnsatz, params: &[f64]) -> Result<f64> {
    let product = ansatz.product(params)?;
    Ok(spectrum_summary(&product.adjoint_mul(target)?)?.d_max)
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationResult {
    pub target_name: String,
    pub params: Vec<f64>,
    #[serde(serialize_with = "ser_gates")]
    pub locals: Vec<UnitaryGate>,
    #[serde(serialize_with = "ser_gate")]
    pub product: UnitaryGate,
    pub d_max: f64,
    pub f_min: f64,
    pub formula_valid: bool,
    pub epsilon_achieved: f64,
    pub pso: PsoRun,
}

fn ser_gate<S: Serializer>(g: &UnitaryGate, s: S) -> std::result::Result<S::Ok, S::Error> {
    GateJson::from_gate(g).serialize(s)
}

fn ser_gates<S: Serializer>(gs: &[UnitaryGate], s: S) -> std::result::Result<S::Ok, S::Error> {
    gs.iter().map(GateJson::from_gate).collect::<Vec<_>>().serialize(s)
}

/// Runs the swarm on the `d_max` objective and assembles the best product found.
///
/// The swarm minimizes `d_max`, i.e. maximizes the minimum gate fidelity. One
/// particle per restart starts at the all-zero parameter point (identity locals).
/// The periodic mask of `cfg` is replaced by the ansatz's.
pub fn approx_separate(target: &UnitaryGate, target_name: &str, ansatz: &ProductAnsatz, cfg: &PsoConfig) -> Result<SeparationResult> {
    let objective = build_objective(target, ansatz)?;
    let cfg = PsoConfig {
        periodic: ansatz.periodic_mask(),
        ..cfg.clone()
    };
    let run = pso_minimize_from(objective, ansatz.total_params, &cfg, &[vec![0.0; ansatz.total_params]])?;
    let locals = ansatz.locals(&run.best_position)?;
    let product = UnitaryGate::tensor_product(&locals)?.with_partition(ansatz.partition.clone())?;
    let report = gate_fidelity_min(target, &product)?;

    let consistent = (1.0 - report.f_min - report.epsilon_achieved).abs() <= 1e-12
        && (!report.formula_valid || (report.f_min.powi(2) + (report.d_max / 2.0).powi(2) - 1.0).abs() <= 1e-9);
    if !consistent {
        return Err(Error::NoConvergence {
            what: "separation result consistency",
            residual: (report.f_min.powi(2) + (report.d_max / 2.0).powi(2) - 1.0).abs(),
        });
    }
    Ok(SeparationResult {
        target_name: target_name.to_string(),
        params: run.best_position.clone(),
        locals,
        product,
        d_max: report.d_max,
        f_min: report.f_min,
        formula_valid: report.formula_valid,
        epsilon_achieved: report.epsilon_achieved,
        pso: run,
    })
}

/// `d_max ≤ 2 sqrt(2ε - ε²)` with the chord formula applicable.
pub fn epsilon_verdict(d_max: f64, formula_valid: bool, eps: f64) -> bool {
    let threshold = epsilon_to_dmax(eps.clamp(0.0, 1.0)).expect("clamped into range");
    formula_valid && d_max <= threshold
}

pub fn is_epsilon_separable(result: &SeparationResult, eps: f64) -> bool {
    epsilon_verdict(result.d_max, result.formula_valid, eps)
}
