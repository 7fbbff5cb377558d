//! Problem instances and the end-to-end decompose run.

use serde::{Deserialize, Serialize};

use crate::algebra::{complement_project, validate_spec, TypeISubalgebraSpec};
use crate::decomp::{Budget, Decomposer, Decomposition};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::random::{gaussian_matrix, rng};
use crate::verify::{verify_decomposition, VerificationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub matrix: ComplexMatrix,
    pub spec: TypeISubalgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    /// Checks that the matrix and the subalgebra both live in dimension `n`.
    pub fn validate(&self) -> Result<()> {
        if self.matrix.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.matrix.dim(),
            });
        }
        validate_spec(&self.spec, self.n).map(|_| ())
    }
}

/// Gaussian matrix projected into the complement of a supported spec.
pub fn random_instance(spec: &TypeISubalgebraSpec, seed: u64) -> Result<InstanceFile> {
    let n = spec.dim();
    validate_spec(spec, n)?.require_supported()?;
    let x = gaussian_matrix(n, &mut rng(seed));
    Ok(InstanceFile {
        n,
        matrix: complement_project(spec, &x)?,
        spec: spec.clone(),
        seed: Some(seed),
    })
}

/// A decomposition together with its independent verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub decomposition: Decomposition,
    pub report: VerificationReport,
    pub budget: Budget,
    /// `‖x - P(x)‖₂` for the complement projection `P` applied to the input.
    pub projection_residual: f64,
    pub pass: bool,
}

/// Projects the instance matrix into the complement, decomposes and
/// verifies it.
pub fn run_decompose(instance: &InstanceFile, decomposer: &Decomposer) -> Result<DecompositionRecord> {
    instance.validate()?;
    let spec = &instance.spec;
    let projected = complement_project(spec, &instance.matrix)?;
    let projection_residual = instance.matrix.hs_distance(&projected);
    let decomposition = decomposer.type_one_decomp(spec, &projected)?;
    let report = verify_decomposition(spec, &projected, &decomposition)?;
    let budget = Budget::for_input(spec, &projected, &decomposer.tol)?;
    let pass = report.passes(&decomposer.tol)
        && budget.admits(report.term_count, report.coeff_sum, decomposer.tol.recon_tol);
    Ok(DecompositionRecord {
        decomposition,
        report,
        budget,
        projection_residual,
        pass,
    })
}
