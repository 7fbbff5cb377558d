use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every construction and check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Jacobi convergence and eigendecomposition accuracy.
    pub eig_tol: f64,
    /// Negative eigenvalues of `I - x^2` down to `-clamp_tol` are clamped to zero.
    pub clamp_tol: f64,
    /// Relative eigenvalue cut-off for rank decisions.
    pub rank_tol: f64,
    /// Precondition checks on inputs (self-adjointness, trace, membership).
    pub input_tol: f64,
    /// Reconstruction residual accepted by verification.
    pub recon_tol: f64,
    /// Per-term unitarity and membership residual accepted by verification.
    pub term_tol: f64,
    /// Two unitaries closer than this (up to a phase) are merged into one term.
    pub merge_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig_tol: 1e-12,
            clamp_tol: 1e-10,
            rank_tol: 1e-9,
            input_tol: 1e-10,
            recon_tol: 1e-9,
            term_tol: 1e-10,
            merge_tol: 1e-12,
        }
    }
}
