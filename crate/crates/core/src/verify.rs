//! Independent checking of a decomposition: direct summation, unitarity and
//! complement membership through the conditional expectation.

use serde::{Deserialize, Serialize};

use crate::algebra::{conditional_expectation, TypeISubalgebraSpec};
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::linalg::unitarity_residual;
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub recon_residual: f64,
    pub max_unitarity_residual: f64,
    pub max_membership_residual: f64,
    pub term_count: usize,
    pub coeff_sum: f64,
}

impl VerificationReport {
    /// Reconstruction within `recon_tol`, every term within `term_tol`.
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.recon_residual <= tol.recon_tol
            && self.max_unitarity_residual <= tol.term_tol
            && self.max_membership_residual <= tol.term_tol
    }

    /// Worst residuals over several reports; counts and sums add up.
    pub fn aggregate<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> Self {
        let mut out = Self {
            recon_residual: 0.0,
            max_unitarity_residual: 0.0,
            max_membership_residual: 0.0,
            term_count: 0,
            coeff_sum: 0.0,
        };
        for r in reports {
            out.recon_residual = out.recon_residual.max(r.recon_residual);
            out.max_unitarity_residual = out.max_unitarity_residual.max(r.max_unitarity_residual);
            out.max_membership_residual = out.max_membership_residual.max(r.max_membership_residual);
            out.term_count += r.term_count;
            out.coeff_sum += r.coeff_sum;
        }
        out
    }
}

pub fn verify_decomposition(
    spec: &TypeISubalgebraSpec,
    x: &ComplexMatrix,
    d: &Decomposition,
) -> Result<VerificationReport> {
    let n = x.dim();
    if spec.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: spec.dim(),
        });
    }
    let mut sum = ComplexMatrix::zeros(n);
    let mut max_unitarity: f64 = 0.0;
    let mut max_membership: f64 = 0.0;
    let mut coeff_sum = 0.0;
    for term in &d.terms {
        let u = &term.unitary;
        x.check_same_dim(u)?;
        for i in 0..n {
            for j in 0..n {
                sum[(i, j)] += term.coeff * u[(i, j)];
            }
        }
        max_unitarity = max_unitarity.max(unitarity_residual(u));
        max_membership = max_membership.max(conditional_expectation(spec, u)?.hs_norm());
        coeff_sum += term.coeff.norm();
    }
    Ok(VerificationReport {
        recon_residual: sum.hs_distance(x),
        max_unitarity_residual: max_unitarity,
        max_membership_residual: max_membership,
        term_count: d.terms.len(),
        coeff_sum,
    })
}
