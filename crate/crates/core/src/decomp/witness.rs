use num_complex::Complex64;

use crate::algebra::{validate_spec, Layout, SpecClass, TypeISubalgebraSpec, UnsupportedReason};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE};

/// A unitary supported on the given atoms whose conditional expectation
/// vanishes, or `None` when those atoms admit none.
///
/// * one atom of multiplicity `m >= 2`: `1_k ⊗ diag(ω^t)`, `ω = exp(2πi/m)`;
/// * several atoms, all of multiplicity `>= 2`: the same pattern per atom;
/// * otherwise, when every selected atom has `k = 1`: a cyclic shift through
///   all their indices (zero diagonal);
/// * otherwise, with equal atom dimensions: a cyclic shift of the atoms.
pub(crate) fn witness_on(layout: &Layout, atoms: &[usize]) -> Option<ComplexMatrix> {
    let n = layout.n;
    let selected: Vec<_> = atoms.iter().map(|&j| &layout.atoms[j]).collect();
    if selected.is_empty() {
        return None;
    }
    let mut v = ComplexMatrix::zeros(n);
    if selected.iter().all(|a| a.mult >= 2) {
        for atom in &selected {
            let m = atom.mult;
            for a in 0..atom.k {
                for t in 0..m {
                    let i = atom.index(a, t);
                    let angle = 2.0 * std::f64::consts::PI * t as f64 / m as f64;
                    v[(i, i)] = Complex64::from_polar(1.0, angle);
                }
            }
        }
        return Some(v);
    }
    if selected.len() < 2 {
        return None;
    }
    if selected.iter().all(|a| a.k == 1) {
        let order: Vec<usize> = selected.iter().flat_map(|a| a.indices.iter().copied()).collect();
        let len = order.len();
        for p in 0..len {
            v[(order[(p + 1) % len], order[p])] = ONE;
        }
        return Some(v);
    }
    let d = selected[0].dim();
    if selected.iter().any(|a| a.dim() != d) {
        return None;
    }
    let q = selected.len();
    for j in 0..q {
        let (from, to) = (&selected[j].indices, &selected[(j + 1) % q].indices);
        for p in 0..d {
            v[(to[p], from[p])] = ONE;
        }
    }
    Some(v)
}

/// One unitary in `N ⊖ A`.
pub fn witness_unitary(spec: &TypeISubalgebraSpec) -> Result<ComplexMatrix> {
    let class = validate_spec(spec, spec.dim())?;
    let all: Vec<usize> = (0..class.layout.atoms.len()).collect();
    match witness_on(&class.layout, &all) {
        Some(v) => Ok(match &spec.conjugation {
            Some(w) => v.conjugate_by(w),
            None => v,
        }),
        None => Err(Error::Unsupported(match class.class {
            SpecClass::Unsupported(reason) => reason,
            _ => UnsupportedReason::SingleAtomMultiplicityOne { k: class.layout.atoms[0].k },
        })),
    }
}
