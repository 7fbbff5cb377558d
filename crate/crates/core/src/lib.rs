//! Conditional expectations onto type I subalgebras
//! `A = ⊕_i M_{k_i} ⊗ (⊕_j C 1_{m_ij}) ⊂ M_n(C)` and explicit decompositions
//! of every `x` in the orthogonal complement `N ⊖ A` as a finite linear
//! combination of unitaries that themselves lie in `N ⊖ A`.
//!
//! All traces and Hilbert-Schmidt quantities use the normalized trace
//! `τ = Tr / n`, so `‖I‖₂ = 1`.
//!
//! ```
//! use unispan::{complement_project, Decomposer, TypeISubalgebraSpec, verify_decomposition};
//! use unispan::random::{gaussian_matrix, rng};
//!
//! let spec = TypeISubalgebraSpec::atomic(&[2, 4]);
//! let x = complement_project(&spec, &gaussian_matrix(6, &mut rng(1))).unwrap();
//! let d = Decomposer::default().type_one_decomp(&spec, &x).unwrap();
//! let report = verify_decomposition(&spec, &x, &d).unwrap();
//! assert!(report.recon_residual < 1e-9);
//! ```

pub mod algebra;
pub mod certificate;
pub mod decomp;
pub mod error;
pub mod instance;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod selftest;
pub mod tolerance;
pub mod verify;

pub use algebra::{
    complement_basis, complement_project, conditional_expectation, membership_residual,
    random_algebra_element, validate_spec, BlockSpec, Classification, SpecClass,
    TypeISubalgebraSpec, UnsupportedReason,
};
pub use certificate::{run_spancert, SpanCertificate};
pub use decomp::{Decomposer, Decomposition, Mutation, Provenance, UnitaryTerm};
pub use error::{Error, Result};
pub use instance::{random_instance, run_decompose, DecompositionRecord, InstanceFile};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use tolerance::Tolerances;
pub use verify::{verify_decomposition, VerificationReport};
