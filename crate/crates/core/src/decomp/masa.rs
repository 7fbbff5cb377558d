use super::{Decomposer, Decomposition, EntryMode, Mutation, PiecePartition, Provenance, UnitaryTerm, NEGLIGIBLE};
use crate::algebra::TypeISubalgebraSpec;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, sqrt_defect};
use crate::matrix::{ComplexMatrix, I, ONE};

/// Slot order `(p, q, p', q')` for the two passes over the diagonal 4-blocks.
const PASSES: [[usize; 4]; 2] = [[0, 1, 2, 3], [2, 3, 0, 1]];

impl Decomposer {
    /// Alternative route for the diagonal masa when `4 | n`.
    ///
    /// `M_n = M_4(M_g)` with `g = n/4`. The diagonal blocks at slots `p, q` are
    /// dilated jointly through the 4 x 4 pattern
    ///
    /// ```text
    /// u1 = [[x1, 0, r1, 0], [0, x2, 0, r2], [0, -r2, 0, x2], [-r1, 0, x1, 0]]
    /// u2 = [[x1, 0, r1, 0], [0, x2, 0, r2], [0, r2, 0, -x2], [r1, 0, -x1, 0]]
    /// ```
    ///
    /// whose diagonal blocks are `x1, x2, 0, 0`, so both have zero diagonal.
    /// The remainder `u3` and all off-block parts go through the zero
    /// piece-diagonal construction with four pieces.
    pub fn masa_quadrant_decomp(&self, x: &ComplexMatrix) -> Result<Decomposition> {
        let n = x.dim();
        if n % 4 != 0 || n == 0 {
            return Err(Error::NotDivisibleBy4 { n });
        }
        let reference = x.hs_norm();
        let diag_sq: f64 = (0..n).map(|i| x[(i, i)].norm_sqr()).sum();
        let residual = (diag_sq / n as f64).sqrt();
        if residual > self.tol.input_tol * reference.max(1.0) {
            return Err(Error::DiagonalNotZero { residual });
        }
        let g = n / 4;
        let quarters = PiecePartition::new(4, g);
        let mut terms = Vec::new();

        for slots in PASSES {
            let [p, q, _, _] = slots;
            let mut x1 = x.block(p, p, g);
            let mut x2 = x.block(q, q, g);
            for i in 0..g {
                x1[(i, i)] = crate::matrix::ZERO;
                x2[(i, i)] = crate::matrix::ZERO;
            }
            for (h1, h2, phase) in [
                (x1.real_part(), x2.real_part(), ONE),
                (x1.imag_part(), x2.imag_part(), I),
            ] {
                if h1.hs_norm().max(h2.hs_norm()) <= NEGLIGIBLE * reference {
                    continue;
                }
                let scale = operator_norm(&h1, &self.tol)
                    .max(operator_norm(&h2, &self.tol))
                    .max(1.0);
                let (u1, u2, u3) =
                    self.quadrant_dilation(&h1.scale_real(1.0 / scale), &h2.scale_real(1.0 / scale), slots)?;
                let c = phase * scale;
                terms.push(UnitaryTerm::new(c * 0.5, u1, Provenance::Dilation));
                terms.push(UnitaryTerm::new(c * 0.5, u2, Provenance::Dilation));
                let d3 = self.zero_piece_diagonal_decomp(&u3, &quarters, EntryMode::General)?;
                terms.extend(super::scaled_terms(&d3, -c));
            }
        }

        let mut off = x.clone();
        for a in 0..4 {
            off.set_block(a, a, &ComplexMatrix::zeros(g));
        }
        if off.hs_norm() > NEGLIGIBLE * reference {
            let d = self.zero_piece_diagonal_decomp(&off, &quarters, EntryMode::General)?;
            terms.extend(d.terms);
        }

        Ok(Decomposition::new(x.clone(), terms)
            .merged(self.tol.merge_tol)
            .with_spec(TypeISubalgebraSpec::masa(n)))
    }

    /// `(u1, u2, u3)` of the 4 x 4 pattern placed at `slots = (p, q, p', q')`.
    fn quadrant_dilation(
        &self,
        y1: &ComplexMatrix,
        y2: &ComplexMatrix,
        slots: [usize; 4],
    ) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
        let [p, q, pp, qq] = slots;
        let g = y1.dim();
        let r1 = sqrt_defect(y1, &self.tol)?;
        let r2 = sqrt_defect(y2, &self.tol)?;
        let (y1, y2) = (y1.real_part(), y2.real_part());
        let flipped = matches!(self.mutation, Some(Mutation::FlipDilationSign));
        let low1 = if flipped { -&r1 } else { r1.clone() };

        let shared = [
            (p, p, y1.clone()),
            (p, pp, r1.clone()),
            (q, q, y2.clone()),
            (q, qq, r2.clone()),
        ];
        let mut u1 = ComplexMatrix::from_blocks(4, g, &shared);
        u1.set_block(pp, q, &-&r2);
        u1.set_block(pp, qq, &y2);
        u1.set_block(qq, p, &-&r1);
        u1.set_block(qq, pp, &y1);

        let mut u2 = ComplexMatrix::from_blocks(4, g, &shared);
        u2.set_block(pp, q, &r2);
        u2.set_block(pp, qq, &-&y2);
        u2.set_block(qq, p, &low1);
        u2.set_block(qq, pp, &-&y1);

        let u3 = ComplexMatrix::from_blocks(4, g, &[(p, pp, r1), (q, qq, r2)]);
        Ok((u1, u2, u3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual;
    use crate::random::{gaussian_matrix, rng};

    fn zero_diagonal(mut x: ComplexMatrix) -> ComplexMatrix {
        for i in 0..x.dim() {
            x[(i, i)] = crate::matrix::ZERO;
        }
        x
    }

    #[test]
    fn rejects_bad_input() {
        let d = Decomposer::default();
        assert!(matches!(
            d.masa_quadrant_decomp(&ComplexMatrix::zeros(6)),
            Err(Error::NotDivisibleBy4 { n: 6 })
        ));
        assert!(matches!(
            d.masa_quadrant_decomp(&ComplexMatrix::identity(4)),
            Err(Error::DiagonalNotZero { .. })
        ));
    }

    #[test]
    fn dilation_blocks_are_unitary_with_zero_diagonal() {
        let x1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let r1 = sqrt_defect(&x1, &Default::default()).unwrap();
        let expected = ComplexMatrix::identity(2).scale_real(3f64.sqrt() / 2.0);
        assert!(r1.hs_distance(&expected) < 1e-14);
        let zero = ComplexMatrix::zeros(2);
        let (u1, u2, u3) = Decomposer::default()
            .quadrant_dilation(&x1, &zero, [0, 1, 2, 3])
            .unwrap();
        for u in [&u1, &u2] {
            assert!(unitarity_residual(u) < 1e-12);
            assert!((0..8).all(|i| u[(i, i)].norm() < 1e-15));
        }
        let combo = &(&u1 + &u2).scale_real(0.5) - &u3;
        let target = ComplexMatrix::from_blocks(4, 2, &[(0, 0, x1)]);
        assert!(combo.hs_distance(&target) < 1e-14);
    }

    #[test]
    fn size_four_is_purely_off_block() {
        let x = zero_diagonal(gaussian_matrix(4, &mut rng(2)));
        let d = Decomposer::default().masa_quadrant_decomp(&x).unwrap();
        assert!(d.terms.iter().all(|t| t.source == Provenance::FourUnitary));
        assert!(d.reconstruct().hs_distance(&x) < 1e-10);
    }

    #[test]
    fn random_inputs_reconstruct_with_zero_diagonal_unitaries() {
        let mut r = rng(9);
        for n in [8, 12, 16] {
            let x = zero_diagonal(gaussian_matrix(n, &mut r));
            let d = Decomposer::default().masa_quadrant_decomp(&x).unwrap();
            assert!(d.reconstruct().hs_distance(&x) < 1e-10);
            for u in d.unitaries() {
                assert!(unitarity_residual(u) < 1e-10);
                assert!((0..n).all(|i| u[(i, i)].norm() < 1e-10));
            }
        }
    }
}
