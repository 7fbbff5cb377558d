//! Explicit decompositions `x = Σ λ_t u_t` of elements of `N ⊖ A` into
//! unitaries lying in `N ⊖ A`.
//!
//! The constructions are layered:
//!
//! * [`Decomposer::four_unitary`] and [`Decomposer::two_unitary_selfadjoint`]:
//!   any matrix is a combination of at most four unitaries of `M_n`.
//! * [`Decomposer::zero_piece_diagonal_decomp`]: matrices with vanishing
//!   piece-diagonal blocks, via generalized permutation unitaries.
//! * [`Decomposer::scalar_case_decomp`]: trace-zero matrices of even size,
//!   via the 2 x 2 unitary dilation of a self-adjoint contraction.
//! * [`Decomposer::masa_quadrant_decomp`]: an alternative route for the
//!   diagonal masa through a 4 x 4 dilation.
//! * [`Decomposer::amplify_entry`]: lifting a corner decomposition into one
//!   entry of a `k x k` amplification.
//! * [`Decomposer::atomic_abelian_decomp`] and
//!   [`Decomposer::type_one_decomp`]: the dispatchers that assemble the above
//!   for a full subalgebra spec.

mod amplify;
mod atomic;
mod budget;
mod elementary;
mod masa;
mod pieces;
mod scalar;
mod typeone;
mod witness;

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::TypeISubalgebraSpec;
use crate::matrix::{ComplexMatrix, ZERO};
use crate::tolerance::Tolerances;

pub use budget::Budget;
pub use elementary::canonical_trace_zero_unitary;
pub use pieces::{fixed_point_free_permutation, EntryMode, PiecePartition};
pub use scalar::ScalarDilation;
pub use witness::witness_unitary;

/// Parts with HS norm below this fraction of their parent are dropped.
pub(crate) const NEGLIGIBLE: f64 = 1e-14;

/// The construction step that produced (or last transformed) a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    /// Self-adjoint split and `x ± i sqrt(1 - x^2)`.
    FourUnitary,
    /// Generalized permutation unitaries with zero piece-diagonal.
    ZeroDiag,
    /// Unitary dilations of self-adjoint contractions.
    Dilation,
    /// Padding into a `k x k` amplification.
    Amplify,
    /// Completion of a corner unitary across the other atoms.
    Atomic,
    /// Conjugation back from standard position.
    Master,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryTerm {
    #[serde(with = "crate::io::complex_scalar")]
    pub coeff: Complex64,
    pub unitary: ComplexMatrix,
    /// Last construction step applied to the unitary.
    pub provenance: Provenance,
    /// Construction step the unitary originated from.
    pub source: Provenance,
}

impl UnitaryTerm {
    pub fn new(coeff: Complex64, unitary: ComplexMatrix, provenance: Provenance) -> Self {
        Self {
            coeff,
            unitary,
            provenance,
            source: provenance,
        }
    }

    /// Replaces the unitary, recording `stage` as the latest step.
    pub(crate) fn transformed(&self, coeff: Complex64, unitary: ComplexMatrix, stage: Provenance) -> Self {
        Self {
            coeff,
            unitary,
            provenance: stage,
            source: self.source,
        }
    }
}

/// `target ≈ Σ coeff_t unitary_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `None` for constructions that are not tied to a subalgebra.
    pub spec: Option<TypeISubalgebraSpec>,
    pub target: ComplexMatrix,
    pub terms: Vec<UnitaryTerm>,
}

impl Decomposition {
    pub fn new(target: ComplexMatrix, terms: Vec<UnitaryTerm>) -> Self {
        Self {
            spec: None,
            target,
            terms,
        }
    }

    pub fn empty(target: ComplexMatrix) -> Self {
        Self::new(target, Vec::new())
    }

    pub fn with_spec(mut self, spec: TypeISubalgebraSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    /// `Σ λ_t u_t`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.target.dim());
        for t in &self.terms {
            sum.add_scaled(t.coeff, &t.unitary);
        }
        sum
    }

    /// `Σ |λ_t|`.
    pub fn coeff_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    pub fn unitaries(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.terms.iter().map(|t| &t.unitary)
    }

    /// Merges terms whose unitaries agree up to a unimodular phase, then drops
    /// coefficients that cancelled to rounding level.
    pub fn merged(mut self, merge_tol: f64) -> Self {
        self.terms = merge_terms(std::mem::take(&mut self.terms), merge_tol);
        self
    }
}

fn fingerprint(u: &ComplexMatrix) -> Vec<i64> {
    u.as_slice()
        .iter()
        .map(|z| (z.norm() * 1e8).round() as i64)
        .collect()
}

pub(crate) fn merge_terms(terms: Vec<UnitaryTerm>, merge_tol: f64) -> Vec<UnitaryTerm> {
    let mut out: Vec<UnitaryTerm> = Vec::with_capacity(terms.len());
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    'terms: for term in terms {
        if term.coeff == ZERO {
            continue;
        }
        let key = fingerprint(&term.unitary);
        let bucket = buckets.entry(key).or_default();
        for &idx in bucket.iter() {
            let existing = &out[idx];
            let overlap = term
                .unitary
                .hs_inner(&existing.unitary)
                .expect("terms share a dimension");
            let modulus = overlap.norm();
            if modulus < 0.5 {
                continue;
            }
            let phase = overlap / modulus;
            if term.unitary.hs_distance(&existing.unitary.scale(phase)) <= merge_tol {
                out[idx].coeff += term.coeff * phase;
                continue 'terms;
            }
        }
        bucket.push(out.len());
        out.push(term);
    }
    let max = out.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
    out.retain(|t| t.coeff.norm() > NEGLIGIBLE * max);
    out
}

/// Deliberate construction faults, used to show that the self-test suites
/// are not vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Flips the sign of the lower-left defect block of the second dilation
    /// unitary.
    FlipDilationSign,
}

/// Entry point for every construction. Holds tolerances and an optional
/// injected fault; otherwise stateless.
#[derive(Debug, Clone, Default)]
pub struct Decomposer {
    pub tol: Tolerances,
    pub mutation: Option<Mutation>,
}

impl Decomposer {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            tol,
            mutation: None,
        }
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = Some(mutation);
        self
    }
}

pub(crate) fn scaled_terms(
    d: &Decomposition,
    c: Complex64,
) -> impl Iterator<Item = UnitaryTerm> + '_ {
    d.terms.iter().map(move |t| UnitaryTerm {
        coeff: t.coeff * c,
        ..t.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;

    #[test]
    fn merging_combines_phase_multiples() {
        let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let terms = vec![
            UnitaryTerm::new(ONE, s.clone(), Provenance::ZeroDiag),
            UnitaryTerm::new(ONE, t.clone(), Provenance::ZeroDiag),
            UnitaryTerm::new(Complex64::new(1.5, 0.0), s.clone(), Provenance::ZeroDiag),
            UnitaryTerm::new(Complex64::new(1.5, 0.0), -&t, Provenance::ZeroDiag),
        ];
        let target = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[3.0, 0.0]]);
        let d = Decomposition::new(target.clone(), terms).merged(1e-12);
        assert_eq!(d.len(), 2);
        assert_eq!(d.terms[0].coeff, Complex64::new(2.5, 0.0));
        assert_eq!(d.terms[1].coeff, Complex64::new(-0.5, 0.0));
        assert!(d.reconstruct().hs_distance(&target) < 1e-15);
    }

    #[test]
    fn merging_drops_cancelled_terms() {
        let u = ComplexMatrix::identity(2);
        let terms = vec![
            UnitaryTerm::new(ONE, u.clone(), Provenance::Dilation),
            UnitaryTerm::new(-ONE, u.clone(), Provenance::Dilation),
        ];
        let d = Decomposition::new(ComplexMatrix::zeros(2), terms).merged(1e-12);
        assert!(d.is_empty());
    }
}
