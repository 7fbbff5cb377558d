use serde::{Deserialize, Serialize};

use crate::algebra::{validate_spec, SpecClass, TypeISubalgebraSpec};
use crate::error::Result;
use crate::linalg::operator_norm;
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

/// Upper bounds on the size of a `type_one_decomp` output, computed from the
/// construction before merging (merging only shrinks both quantities).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_terms: usize,
    pub max_coeff_sum: f64,
}

fn zero_diag_terms(pieces: usize) -> usize {
    8 * pieces * pieces.saturating_sub(1)
}

fn zero_diag_coeff(pieces: usize, norm: f64) -> f64 {
    2.0 * (pieces * pieces.saturating_sub(1)) as f64 * norm
}

const SCALAR_TERMS: usize = 2 * (2 + 16) + 4 + 16;

fn scalar_coeff(norm: f64) -> f64 {
    6.0 * (2.0 * norm).max(1.0) + 6.0 * norm
}

impl Budget {
    /// Bounds for decomposing any `x` with operator norm at most `norm`.
    pub fn for_spec(spec: &TypeISubalgebraSpec, norm: f64) -> Result<Self> {
        let class = validate_spec(spec, spec.dim())?;
        class.require_supported()?;
        let layout = &class.layout;
        let n = layout.n;
        let mut terms = 0usize;
        let mut coeff = 0.0;
        for (j, atom) in layout.atoms.iter().enumerate() {
            let (k, m) = (atom.k, atom.mult);
            if m < 2 {
                continue;
            }
            let lone_partner = layout.atoms.len() == 2 && layout.atoms[1 - j].mult == 1 && k == 1;
            if lone_partner {
                terms += 2 * 8 * m * (m - 1);
                coeff += 4.0 * (m * (m - 1)) as f64 * norm;
            } else if k == 1 {
                terms += 2 * SCALAR_TERMS;
                coeff += scalar_coeff(norm);
            } else {
                terms += 2 * 2 * k * k * SCALAR_TERMS;
                coeff += (k * k) as f64 * scalar_coeff(norm);
            }
        }
        if layout.atoms.len() >= 2 {
            let pieces = match class.class {
                SpecClass::C1Masa | SpecClass::C3AtomicAbelian => {
                    let g = layout.atoms.iter().fold(0, |g, a| gcd(g, a.dim()));
                    n / g
                }
                _ => layout.atoms.len(),
            };
            terms += zero_diag_terms(pieces);
            coeff += zero_diag_coeff(pieces, norm);
        }
        Ok(Self {
            max_terms: terms,
            max_coeff_sum: coeff,
        })
    }

    /// [`Budget::for_spec`] at the operator norm of `x`.
    pub fn for_input(spec: &TypeISubalgebraSpec, x: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        Self::for_spec(spec, operator_norm(x, tol))
    }

    pub fn admits(&self, term_count: usize, coeff_sum: f64, slack: f64) -> bool {
        term_count <= self.max_terms && coeff_sum <= self.max_coeff_sum + slack
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
