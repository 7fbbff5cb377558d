use num_complex::Complex64;

use super::witness::witness_on;
use super::{
    canonical_trace_zero_unitary, Decomposer, Decomposition, EntryMode, PiecePartition, Provenance,
    UnitaryTerm, NEGLIGIBLE,
};
use crate::algebra::{
    expectation_standard, validate_spec, AtomLayout, Classification, Layout, SpecClass,
    TypeISubalgebraSpec, UnsupportedReason,
};
use crate::error::{Error, Result};
use crate::linalg::{fourier, hermitian_eig};
use crate::matrix::{ComplexMatrix, I, ONE, ZERO};

fn embed(n: usize, indices: &[usize], block: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n);
    out.add_block(indices, indices, block);
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Decomposer {
    /// Validates `spec`, moves `x` to standard position and checks that it
    /// lies in the complement. Returns the classification and `W* x W` with
    /// its rounding-level expectation removed.
    pub(crate) fn standard_input(
        &self,
        spec: &TypeISubalgebraSpec,
        x: &ComplexMatrix,
    ) -> Result<(Classification, ComplexMatrix)> {
        let class = validate_spec(spec, x.dim())?;
        class.require_supported()?;
        let xs = match &spec.conjugation {
            Some(w) => x.sandwich(&w.adjoint(), w),
            None => x.clone(),
        };
        let e = expectation_standard(&class.layout, &xs);
        let residual = e.hs_norm();
        if residual > self.tol.input_tol * x.hs_norm().max(1.0) {
            return Err(Error::NotInComplement { residual });
        }
        Ok((class, &xs - &e))
    }

    /// Conjugates standard-position terms back by `W` and merges.
    pub(crate) fn finish(
        &self,
        spec: &TypeISubalgebraSpec,
        x: &ComplexMatrix,
        terms: Vec<UnitaryTerm>,
    ) -> Decomposition {
        let terms = match &spec.conjugation {
            None => terms,
            Some(w) => terms
                .into_iter()
                .map(|t| {
                    let u = t.unitary.conjugate_by(w);
                    t.transformed(t.coeff, u, Provenance::Master)
                })
                .collect(),
        };
        Decomposition::new(x.clone(), terms)
            .merged(self.tol.merge_tol)
            .with_spec(spec.clone())
    }

    /// Decomposes `x ∈ N ⊖ A` for any supported spec.
    ///
    /// Abelian specs go through [`atomic_abelian_decomp`](Self::atomic_abelian_decomp).
    /// Otherwise every atom corner `M_k ⊗ M_m` is split into factor entries,
    /// each entry is decomposed by the scalar case and amplified with
    /// trace-zero padding, and the corner unitaries are completed across the
    /// remaining atoms with a `±` witness. The parts between atoms are handled
    /// at atom granularity by the zero piece-diagonal construction.
    pub fn type_one_decomp(&self, spec: &TypeISubalgebraSpec, x: &ComplexMatrix) -> Result<Decomposition> {
        let (class, xs) = self.standard_input(spec, x)?;
        let terms = self.assemble(&class, &xs)?;
        Ok(self.finish(spec, x, terms))
    }

    pub(crate) fn assemble(&self, class: &Classification, xs: &ComplexMatrix) -> Result<Vec<UnitaryTerm>> {
        let layout = &class.layout;
        let n = layout.n;
        let reference = xs.hs_norm();
        let mut terms = Vec::new();
        if reference == 0.0 {
            return Ok(terms);
        }

        for (j, atom) in layout.atoms.iter().enumerate() {
            if atom.mult < 2 {
                continue;
            }
            let y = xs.compress(&atom.indices, &atom.indices);
            if y.hs_norm() <= NEGLIGIBLE * reference {
                continue;
            }
            let rest: Vec<usize> = (0..layout.atoms.len()).filter(|&i| i != j).collect();
            if rest.is_empty() {
                let corner = self.atom_corner_decomp(atom, &y)?;
                for t in corner.terms {
                    let u = embed(n, &atom.indices, &t.unitary);
                    terms.push(t.transformed(t.coeff, u, t.provenance));
                }
                continue;
            }
            match witness_on(layout, &rest) {
                Some(v) => {
                    let half = Complex64::new(0.5, 0.0);
                    let corner = self.atom_corner_decomp(atom, &y)?;
                    for t in &corner.terms {
                        let placed = embed(n, &atom.indices, &t.unitary);
                        for sign in [ONE, -ONE] {
                            let mut u = placed.clone();
                            u.add_scaled(sign, &v);
                            terms.push(t.transformed(t.coeff * half, u, Provenance::Atomic));
                        }
                    }
                }
                None if atom.k == 1 => terms.extend(self.rotated_corner_terms(layout, atom, &y)?),
                None => {
                    return Err(Error::Unsupported(UnsupportedReason::UnpairedMultiplicityOneAtom))
                }
            }
        }

        let mut cross = xs.clone();
        for atom in &layout.atoms {
            for &i in &atom.indices {
                for &jj in &atom.indices {
                    cross[(i, jj)] = ZERO;
                }
            }
        }
        if cross.hs_norm() <= NEGLIGIBLE * reference {
            return Ok(terms);
        }
        match class.class {
            SpecClass::C1Masa | SpecClass::C3AtomicAbelian => {
                let g = layout.atoms.iter().fold(0, |g, a| gcd(g, a.dim()));
                let pieces = PiecePartition::uniform(n, g)?;
                let d = self.zero_piece_diagonal_decomp(&cross, &pieces, EntryMode::General)?;
                terms.extend(d.terms);
            }
            _ => {
                let perm = layout.atom_major_permutation();
                let size = layout.atoms[0].dim();
                let pieces = PiecePartition::new(layout.atoms.len(), size);
                let d = self.zero_piece_diagonal_decomp(&cross.permuted(&perm), &pieces, EntryMode::General)?;
                for t in d.terms {
                    let u = t.unitary.unpermuted(&perm);
                    terms.push(t.transformed(t.coeff, u, t.provenance));
                }
            }
        }
        Ok(terms)
    }

    /// Decomposes an atom corner `y ∈ M_k ⊗ M_m` (in `(a, t)` order) with
    /// `(id ⊗ Tr)(y) = 0` into unitaries with the same property.
    fn atom_corner_decomp(&self, atom: &AtomLayout, y: &ComplexMatrix) -> Result<Decomposition> {
        let (k, m) = (atom.k, atom.mult);
        if k == 1 {
            return self.scalar_case_decomp(y);
        }
        let pad = canonical_trace_zero_unitary(m).ok_or(Error::OddDimension { dim: m })?;
        let reference = y.hs_norm();
        let mut terms = Vec::new();
        for a in 0..k {
            for b in 0..k {
                let entry = y.block(a, b, m);
                if entry.hs_norm() <= NEGLIGIBLE * reference {
                    continue;
                }
                let d = self.scalar_case_decomp(&entry)?;
                terms.extend(self.amplify_entry(&d, k, (a, b), &pad)?.terms);
            }
        }
        Ok(Decomposition::new(y.clone(), terms))
    }

    /// Within-atom part for a multiplicity-`m` atom (`k = 1`) whose only
    /// companion is a single rank-one atom, where no completing witness
    /// exists. Each self-adjoint part `h` is rotated by `Q = V F` (eigenvectors
    /// times Fourier) so that `Q* h Q` has zero diagonal; that matrix is
    /// decomposed over the full masa and the unitaries are rotated back by
    /// `Q ⊕ 1`, which fixes `A` pointwise and so preserves the complement.
    fn rotated_corner_terms(
        &self,
        layout: &Layout,
        atom: &AtomLayout,
        y: &ComplexMatrix,
    ) -> Result<Vec<UnitaryTerm>> {
        let n = layout.n;
        let m = atom.mult;
        let reference = y.hs_norm();
        let mut terms = Vec::new();
        let singles = PiecePartition::new(n, 1);
        for (part, phase) in [(y.real_part(), ONE), (y.imag_part(), I)] {
            if part.hs_norm() <= NEGLIGIBLE * reference {
                continue;
            }
            let eig = hermitian_eig(&part, &self.tol)?;
            let q = eig.eigenvectors.matmul(&fourier(m));
            let mut rotated = part.sandwich(&q.adjoint(), &q);
            for i in 0..m {
                rotated[(i, i)] = ZERO;
            }
            let mut q_full = ComplexMatrix::identity(n);
            for &i in &atom.indices {
                q_full[(i, i)] = ZERO;
            }
            q_full.add_block(&atom.indices, &atom.indices, &q);
            let d = self.zero_piece_diagonal_decomp(
                &embed(n, &atom.indices, &rotated),
                &singles,
                EntryMode::General,
            )?;
            for t in d.terms {
                let u = t.unitary.conjugate_by(&q_full);
                terms.push(t.transformed(t.coeff * phase, u, Provenance::Atomic));
            }
        }
        Ok(terms)
    }
}
