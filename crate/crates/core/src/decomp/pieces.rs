use num_complex::Complex64;

use super::{Decomposer, Decomposition, Provenance, NEGLIGIBLE};
use crate::decomp::elementary::canonical_trace_zero_unitary;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE};

/// `count` consecutive index ranges of equal length `size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiecePartition {
    pub count: usize,
    pub size: usize,
}

impl PiecePartition {
    pub fn new(count: usize, size: usize) -> Self {
        Self { count, size }
    }

    /// Pieces of size `size` covering dimension `n`.
    pub fn uniform(n: usize, size: usize) -> Result<Self> {
        if size == 0 || n % size != 0 {
            return Err(Error::BadPartition {
                n,
                size,
                count: if size == 0 { 0 } else { n / size },
            });
        }
        Ok(Self::new(n / size, size))
    }

    pub fn dim(&self) -> usize {
        self.count * self.size
    }

    fn piece_of(&self, i: usize) -> usize {
        i / self.size
    }
}

/// How an individual `g x g` piece-entry is decomposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryMode {
    /// Any unitaries of `M_g`; the fill-in blocks are `±I_g`.
    General,
    /// Trace-zero unitaries only (entries must be trace-zero, `g` even); the
    /// fill-in blocks are `±` the canonical trace-zero unitary.
    TraceZero,
}

/// Lexicographically smallest fixed-point-free permutation of `0..count`
/// sending `alpha` to `beta`.
pub fn fixed_point_free_permutation(count: usize, alpha: usize, beta: usize) -> Vec<usize> {
    assert!(count >= 2 && alpha != beta && alpha < count && beta < count);
    let mut sigma = vec![usize::MAX; count];
    let mut used = vec![false; count];
    sigma[alpha] = beta;
    used[beta] = true;
    let positions: Vec<usize> = (0..count).filter(|&i| i != alpha).collect();
    for (pos_idx, &i) in positions.iter().enumerate() {
        let remaining = &positions[pos_idx + 1..];
        let choice = (0..count)
            .filter(|&v| !used[v] && v != i)
            .find(|&v| {
                // With one slot left, the leftover value must differ from it.
                if remaining.len() != 1 {
                    return true;
                }
                let last = (0..count).find(|&w| !used[w] && w != v);
                last != Some(remaining[0])
            })
            .expect("a derangement extension exists for count >= 2");
        sigma[i] = choice;
        used[choice] = true;
    }
    sigma
}

impl Decomposer {
    /// Decomposes a matrix whose piece-diagonal blocks vanish into generalized
    /// permutation unitaries with zero piece-diagonal.
    ///
    /// Each nonzero entry `(α, β)` is written as `Σ λ w` (four-unitary or
    /// scalar-case). With `σ` fixed-point-free and `σ(α) = β`, the unitaries
    /// `u±` carry `w` at `(α, β)` and `±v` at `(γ, σ(γ))` for `γ ≠ α`, so
    /// `(u⁺ + u⁻) / 2` is the entry alone.
    pub fn zero_piece_diagonal_decomp(
        &self,
        x: &ComplexMatrix,
        pieces: &PiecePartition,
        mode: EntryMode,
    ) -> Result<Decomposition> {
        let n = x.dim();
        if pieces.dim() != n || pieces.size == 0 {
            return Err(Error::BadPartition {
                n,
                size: pieces.size,
                count: pieces.count,
            });
        }
        if pieces.count < 2 {
            return Err(Error::SinglePiece);
        }
        let g = pieces.size;
        let mut diag_sq = 0.0;
        for i in 0..n {
            for j in 0..n {
                if pieces.piece_of(i) == pieces.piece_of(j) {
                    diag_sq += x[(i, j)].norm_sqr();
                }
            }
        }
        let residual = (diag_sq / n as f64).sqrt();
        let reference = x.hs_norm();
        if residual > self.tol.input_tol * reference.max(1.0) {
            return Err(Error::PieceDiagonalNotZero { residual });
        }

        let fill = match mode {
            EntryMode::General => ComplexMatrix::identity(g),
            EntryMode::TraceZero => {
                canonical_trace_zero_unitary(g).ok_or(Error::OddDimension { dim: g })?
            }
        };
        let half = Complex64::new(0.5, 0.0);
        let mut terms = Vec::new();
        for alpha in 0..pieces.count {
            for beta in 0..pieces.count {
                if alpha == beta {
                    continue;
                }
                let entry = x.block(alpha, beta, g);
                if entry.hs_norm() <= NEGLIGIBLE * reference {
                    continue;
                }
                let entry_decomp = match mode {
                    EntryMode::General => self.four_unitary(&entry),
                    EntryMode::TraceZero => self.scalar_case_decomp(&entry)?,
                };
                let sigma = fixed_point_free_permutation(pieces.count, alpha, beta);
                for term in &entry_decomp.terms {
                    for sign in [ONE, -ONE] {
                        let mut u = ComplexMatrix::zeros(n);
                        for (gamma, &target) in sigma.iter().enumerate() {
                            if gamma == alpha {
                                u.set_block(alpha, beta, &term.unitary);
                            } else {
                                u.set_block(gamma, target, &fill.scale(sign));
                            }
                        }
                        terms.push(term.transformed(term.coeff * half, u, Provenance::ZeroDiag));
                    }
                }
            }
        }
        Ok(Decomposition::new(x.clone(), terms).merged(self.tol.merge_tol))
    }
}
