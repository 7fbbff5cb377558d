use num_complex::Complex64;

use super::elementary::scaled_unitary;
use super::{Decomposer, Decomposition, EntryMode, Mutation, PiecePartition, Provenance, UnitaryTerm, NEGLIGIBLE};
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, sqrt_defect};
use crate::matrix::{ComplexMatrix, I, ONE};

/// The three block matrices of the 2 x 2 dilation of a self-adjoint
/// contraction `y` with `r = sqrt(1 - y^2)`:
///
/// ```text
/// u1 = [[y, r], [-r, y]]    u2 = [[y, r], [r, -y]]    u3 = [[0, r], [0, 0]]
/// ```
///
/// so that `½u1 + ½u2 - u3 = diag(y, 0)`. `u1` and `u2` are unitary; `u3` is
/// not, and is re-expressed through the zero piece-diagonal construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarDilation {
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    pub u3: ComplexMatrix,
}

impl ScalarDilation {
    /// `½u1 + ½u2 - u3`.
    pub fn combination(&self) -> ComplexMatrix {
        let mut out = (&self.u1 + &self.u2).scale_real(0.5);
        out -= &self.u3;
        out
    }
}

impl Decomposer {
    /// Builds the dilation blocks of a self-adjoint contraction `y`.
    pub fn scalar_dilation(&self, y: &ComplexMatrix) -> Result<ScalarDilation> {
        let h = y.dim();
        let r = sqrt_defect(y, &self.tol)?;
        let y = y.real_part();
        let lower = match self.mutation {
            Some(Mutation::FlipDilationSign) => -&r,
            None => r.clone(),
        };
        let u1 = ComplexMatrix::from_blocks(
            2,
            h,
            &[(0, 0, y.clone()), (0, 1, r.clone()), (1, 0, -&r), (1, 1, y.clone())],
        );
        let u2 = ComplexMatrix::from_blocks(
            2,
            h,
            &[(0, 0, y.clone()), (0, 1, r.clone()), (1, 0, lower), (1, 1, -&y)],
        );
        let u3 = ComplexMatrix::from_blocks(2, h, &[(0, 1, r)]);
        Ok(ScalarDilation { u1, u2, u3 })
    }

    /// Decomposes a trace-zero `x ∈ M_m`, `m` even, into trace-zero unitaries.
    ///
    /// With the halves `p + q = 1`, `x = diag(x11 + x22, 0) + diag(-x22, x22)
    /// + offdiag(x)`. The first part is dilated, the second is a lifted
    /// four-unitary decomposition, the third goes through the zero
    /// piece-diagonal construction with two pieces.
    pub fn scalar_case_decomp(&self, x: &ComplexMatrix) -> Result<Decomposition> {
        let m = x.dim();
        if m % 2 != 0 || m == 0 {
            return Err(Error::OddDimension { dim: m });
        }
        let reference = x.hs_norm();
        let trace = x.normalized_trace();
        if trace.norm() > self.tol.input_tol * reference.max(1.0) {
            return Err(Error::NotTraceZero { trace: trace.norm() });
        }
        if x.is_zero() {
            return Ok(Decomposition::empty(x.clone()));
        }
        if let Some((rho, u)) = scaled_unitary(x, self.tol.merge_tol) {
            let term = UnitaryTerm::new(Complex64::new(rho, 0.0), u, Provenance::Dilation);
            return Ok(Decomposition::new(x.clone(), vec![term]));
        }

        let h = m / 2;
        let halves = PiecePartition::new(2, h);
        let x11 = x.block(0, 0, h);
        let x22 = x.block(1, 1, h);
        let z = &x11 + &x22;
        let mut terms = Vec::new();

        for (part, phase) in [(z.real_part(), ONE), (z.imag_part(), I)] {
            if part.hs_norm() <= NEGLIGIBLE * reference {
                continue;
            }
            let scale = operator_norm(&part, &self.tol).max(1.0);
            let dil = self.scalar_dilation(&part.scale_real(1.0 / scale))?;
            let c = phase * scale;
            terms.push(UnitaryTerm::new(c * 0.5, dil.u1, Provenance::Dilation));
            terms.push(UnitaryTerm::new(c * 0.5, dil.u2, Provenance::Dilation));
            let u3 = self.zero_piece_diagonal_decomp(&dil.u3, &halves, EntryMode::General)?;
            terms.extend(super::scaled_terms(&u3, -c));
        }

        if x22.hs_norm() > NEGLIGIBLE * reference {
            for t in self.four_unitary(&x22).terms {
                let lifted =
                    ComplexMatrix::from_blocks(2, h, &[(0, 0, -&t.unitary), (1, 1, t.unitary.clone())]);
                terms.push(t.transformed(t.coeff, lifted, Provenance::Dilation));
            }
        }

        let x12 = x.block(0, 1, h);
        let x21 = x.block(1, 0, h);
        let off = ComplexMatrix::from_blocks(2, h, &[(0, 1, x12), (1, 0, x21)]);
        if off.hs_norm() > NEGLIGIBLE * reference {
            let d = self.zero_piece_diagonal_decomp(&off, &halves, EntryMode::General)?;
            terms.extend(d.terms);
        }

        Ok(Decomposition::new(x.clone(), terms).merged(self.tol.merge_tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual;
    use crate::random::{gaussian_matrix, hermitian_matrix, rng};
    use crate::tolerance::Tolerances;

    fn dec() -> Decomposer {
        Decomposer::default()
    }

    fn trace_zero(x: &ComplexMatrix) -> ComplexMatrix {
        let t = x.normalized_trace();
        x - &ComplexMatrix::identity(x.dim()).scale(t)
    }

    #[test]
    fn trace_zero_unitary_fast_path() {
        let x = ComplexMatrix::real_diag(&[1.0, -1.0]);
        let d = dec().scalar_case_decomp(&x).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.terms[0].coeff, ONE);
        assert_eq!(d.terms[0].unitary, x);
    }

    #[test]
    fn two_by_two_worked_example() {
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, -1.0]]);
        let d = dec().scalar_case_decomp(&x).unwrap();
        let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let z = ComplexMatrix::real_diag(&[1.0, -1.0]);
        let expected = [(1.0, &z), (2.5, &s), (-0.5, &t)];
        assert_eq!(d.len(), 3);
        for (c, u) in expected {
            let hit = d
                .terms
                .iter()
                .find(|term| term.unitary.hs_distance(u) < 1e-12)
                .expect("expected unitary present");
            assert!((hit.coeff - Complex64::new(c, 0.0)).norm() < 1e-12);
        }
        assert!(d.reconstruct().hs_distance(&x) < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let odd = ComplexMatrix::zeros(3);
        assert!(matches!(dec().scalar_case_decomp(&odd), Err(Error::OddDimension { dim: 3 })));
        let traced = ComplexMatrix::identity(2);
        assert!(matches!(dec().scalar_case_decomp(&traced), Err(Error::NotTraceZero { .. })));
    }

    #[test]
    fn dilation_identity() {
        let mut r = rng(11);
        for m in [1, 2, 3, 5] {
            let y = hermitian_matrix(m, &mut r);
            let y = y.scale_real(0.9 / operator_norm(&y, &Tolerances::default()));
            let dil = dec().scalar_dilation(&y).unwrap();
            assert!(unitarity_residual(&dil.u1) < 1e-12);
            assert!(unitarity_residual(&dil.u2) < 1e-12);
            let target = ComplexMatrix::from_blocks(2, m, &[(0, 0, y.clone())]);
            assert!(dil.combination().hs_distance(&target) < 1e-12);
        }
    }

    #[test]
    fn mutation_breaks_the_identity() {
        let y = ComplexMatrix::real_diag(&[0.5, -0.5]);
        let d = dec().with_mutation(Mutation::FlipDilationSign);
        let dil = d.scalar_dilation(&y).unwrap();
        let target = ComplexMatrix::from_blocks(2, 2, &[(0, 0, y.clone())]);
        assert!(dil.combination().hs_distance(&target) > 0.1);
    }

    #[test]
    fn random_trace_zero_inputs() {
        let mut r = rng(5);
        for m in [2, 4, 6, 8] {
            for _ in 0..5 {
                let x = trace_zero(&gaussian_matrix(m, &mut r));
                let d = dec().scalar_case_decomp(&x).unwrap();
                assert!(d.reconstruct().hs_distance(&x) < 1e-10);
                for u in d.unitaries() {
                    assert!(unitarity_residual(u) < 1e-10);
                    assert!(u.trace().norm() < 1e-10);
                }
            }
        }
    }
}
