//! Finite span certificates: every complement basis element is decomposed and
//! the rank of the pooled unitaries is compared with `dim (N ⊖ A)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{complement_basis, validate_spec, TypeISubalgebraSpec};
use crate::decomp::Decomposer;
use crate::error::Result;
use crate::linalg::gram_rank;
use crate::matrix::ComplexMatrix;
use crate::verify::{verify_decomposition, VerificationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanCertificate {
    pub spec: TypeISubalgebraSpec,
    pub basis_size: usize,
    pub pooled_unitary_count: usize,
    pub gram_rank: usize,
    pub expected_rank: usize,
    pub pass: bool,
    /// Worst residuals over the basis; `term_count` and `coeff_sum` are totals.
    pub residual_summary: VerificationReport,
}

pub fn run_spancert(spec: &TypeISubalgebraSpec, decomposer: &Decomposer) -> Result<SpanCertificate> {
    let tol = &decomposer.tol;
    validate_spec(spec, spec.dim())?.require_supported()?;
    let basis = complement_basis(spec, tol)?;
    let mut pooled: Vec<ComplexMatrix> = Vec::new();
    let mut reports = Vec::with_capacity(basis.len());
    for b in &basis {
        let d = decomposer.type_one_decomp(spec, b)?;
        reports.push(verify_decomposition(spec, b, &d)?);
        pooled.extend(d.terms.into_iter().map(|t| t.unitary));
    }
    let expected_rank = spec.complement_dimension();
    let rank = if pooled.is_empty() {
        0
    } else {
        gram_rank(&pooled, tol.rank_tol, tol)?
    };
    let summary = VerificationReport::aggregate(&reports);
    let pass = rank == expected_rank && reports.iter().all(|r| r.passes(tol));
    Ok(SpanCertificate {
        spec: spec.clone(),
        basis_size: basis.len(),
        pooled_unitary_count: pooled.len(),
        gram_rank: rank,
        expected_rank,
        pass,
        residual_summary: summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_certificates() {
        let d = Decomposer::default();
        for (spec, rank) in [
            (TypeISubalgebraSpec::masa(3), 6),
            (TypeISubalgebraSpec::scalars(4), 15),
            (TypeISubalgebraSpec::factor(2, 2), 12),
        ] {
            let c = run_spancert(&spec, &d).unwrap();
            assert_eq!(c.expected_rank, rank);
            assert_eq!(c.gram_rank, rank);
            assert_eq!(c.basis_size, rank);
            assert!(c.pass);
        }
    }
}
