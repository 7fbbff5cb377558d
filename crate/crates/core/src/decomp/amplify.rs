use num_complex::Complex64;

use super::{Decomposer, Decomposition, Provenance};
use crate::error::{Error, Result};
use crate::linalg::unitarity_residual;
use crate::matrix::{ComplexMatrix, ONE};

/// The transposition `(0 s)` of `0..k`.
fn swap_with_zero(a: usize, s: usize) -> usize {
    if a == 0 {
        s
    } else if a == s {
        0
    } else {
        a
    }
}

impl Decomposer {
    /// Lifts a decomposition of a corner entry `y` to the `k x k`
    /// amplification carrying `y` at the 0-based position `(s, t)`.
    ///
    /// Each corner unitary `u` becomes `diag(u, ±v, ..., ±v)` moved to
    /// `(s, t)` by the left and right scalar permutations exchanging `0` with
    /// `s` and `0` with `t`; the `±` pair cancels the padding.
    pub fn amplify_entry(
        &self,
        entry: &Decomposition,
        k: usize,
        position: (usize, usize),
        pad: &ComplexMatrix,
    ) -> Result<Decomposition> {
        let (s, t) = position;
        if s >= k || t >= k {
            return Err(Error::BadPosition { s, t, k });
        }
        let c = entry.dim();
        pad.check_same_dim(&entry.target)?;
        let residual = unitarity_residual(pad);
        if residual > self.tol.term_tol {
            return Err(Error::PaddingNotUnitary { residual });
        }
        let target = ComplexMatrix::from_blocks(k, c, &[(s, t, entry.target.clone())]);
        if k == 1 {
            let terms = entry
                .terms
                .iter()
                .map(|term| term.transformed(term.coeff, term.unitary.clone(), Provenance::Amplify))
                .collect();
            return Ok(Decomposition::new(target, terms));
        }
        let half = Complex64::new(0.5, 0.0);
        let mut terms = Vec::with_capacity(2 * entry.len());
        for term in &entry.terms {
            for sign in [ONE, -ONE] {
                let padding = pad.scale(sign);
                let mut u = ComplexMatrix::zeros(k * c);
                // Block (a, a) of the padded diagonal lands at (π_s(a), π_t(a)).
                for a in 0..k {
                    let (i, j) = (swap_with_zero(a, s), swap_with_zero(a, t));
                    u.set_block(i, j, if a == 0 { &term.unitary } else { &padding });
                }
                terms.push(term.transformed(term.coeff * half, u, Provenance::Amplify));
            }
        }
        Ok(Decomposition::new(target, terms))
    }
}
