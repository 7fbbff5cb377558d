//! Type I subalgebras `A = ⊕_i M_{k_i} ⊗ (⊕_j C 1_{m_ij})` of `M_n(C)` in
//! standard position, their classification into supported construction
//! classes, and the trace-preserving conditional expectation onto them.
//!
//! # Index layout
//!
//! Blocks are laid out consecutively. Inside block `i` (with `s_i = Σ_j m_ij`)
//! the basis index of factor index `a ∈ [0, k_i)`, atom `j` and multiplicity
//! index `t ∈ [0, m_ij)` is
//!
//! ```text
//! offset_i + a * s_i + (m_i0 + ... + m_i(j-1)) + t
//! ```
//!
//! (factor-major). This layout is part of the file-format contract.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::unitarity_residual;
use crate::matrix::{ComplexMatrix, ZERO};
use crate::random::{gaussian_matrix, rng};
use crate::tolerance::Tolerances;

/// One central summand `M_k ⊗ (⊕_j C 1_{m_j})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub k: usize,
    pub atom_mults: Vec<usize>,
}

impl BlockSpec {
    pub fn new(k: usize, atom_mults: Vec<usize>) -> Self {
        Self { k, atom_mults }
    }

    /// `Σ_j m_j`.
    pub fn stride(&self) -> usize {
        self.atom_mults.iter().sum()
    }

    pub fn subspace_dim(&self) -> usize {
        self.k * self.stride()
    }
}

/// Structural description of a type I subalgebra, optionally placed in
/// general position by a unitary `W` (`A = W A_std W*`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeISubalgebraSpec {
    pub blocks: Vec<BlockSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<ComplexMatrix>,
}

impl TypeISubalgebraSpec {
    pub fn new(blocks: Vec<BlockSpec>) -> Result<Self> {
        let spec = Self {
            blocks,
            conjugation: None,
        };
        spec.check_structure()?;
        Ok(spec)
    }

    /// The diagonal masa of `M_n`.
    pub fn masa(n: usize) -> Self {
        Self::new(vec![BlockSpec::new(1, vec![1; n])]).expect("n >= 1")
    }

    /// `C 1_m`.
    pub fn scalars(m: usize) -> Self {
        Self::new(vec![BlockSpec::new(1, vec![m])]).expect("m >= 1")
    }

    /// `M_k ⊗ 1_m`.
    pub fn factor(k: usize, m: usize) -> Self {
        Self::new(vec![BlockSpec::new(k, vec![m])]).expect("k, m >= 1")
    }

    /// Abelian algebra with one atom per listed rank.
    pub fn atomic(ranks: &[usize]) -> Self {
        Self::new(vec![BlockSpec::new(1, ranks.to_vec())]).expect("ranks >= 1")
    }

    pub fn with_conjugation(mut self, w: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if w.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: w.dim(),
            });
        }
        let residual = unitarity_residual(&w);
        if residual > tol.eig_tol.max(tol.input_tol) {
            return Err(Error::InvalidSpec(format!(
                "conjugation is not unitary (residual {residual:e})"
            )));
        }
        self.conjugation = Some(w);
        Ok(self)
    }

    pub fn check_structure(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidSpec("no blocks".into()));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if b.k == 0 {
                return Err(Error::InvalidSpec(format!("block {i} has k = 0")));
            }
            if b.atom_mults.is_empty() {
                return Err(Error::InvalidSpec(format!("block {i} has no atoms")));
            }
            if let Some(j) = b.atom_mults.iter().position(|&m| m == 0) {
                return Err(Error::InvalidSpec(format!(
                    "block {i} atom {j} has multiplicity 0"
                )));
            }
        }
        if let Some(w) = &self.conjugation {
            if w.dim() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: w.dim(),
                });
            }
        }
        Ok(())
    }

    /// Ambient dimension `Σ_i k_i s_i`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(BlockSpec::subspace_dim).sum()
    }

    /// `dim A = Σ_i k_i^2 d_i`.
    pub fn algebra_dimension(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.k * b.k * b.atom_mults.len())
            .sum()
    }

    pub fn complement_dimension(&self) -> usize {
        let n = self.dim();
        n * n - self.algebra_dimension()
    }

    pub fn atom_count(&self) -> usize {
        self.blocks.iter().map(|b| b.atom_mults.len()).sum()
    }

    /// The same structure without the conjugating unitary.
    pub fn standard(&self) -> Self {
        Self {
            blocks: self.blocks.clone(),
            conjugation: None,
        }
    }

    pub fn layout(&self) -> Layout {
        let mut atoms = Vec::new();
        let mut offset = 0;
        for (bi, b) in self.blocks.iter().enumerate() {
            let stride = b.stride();
            let mut atom_offset = 0;
            for (aj, &m) in b.atom_mults.iter().enumerate() {
                let mut indices = Vec::with_capacity(b.k * m);
                for a in 0..b.k {
                    for t in 0..m {
                        indices.push(offset + a * stride + atom_offset + t);
                    }
                }
                atoms.push(AtomLayout {
                    block: bi,
                    atom: aj,
                    k: b.k,
                    mult: m,
                    indices,
                });
                atom_offset += m;
            }
            offset += b.subspace_dim();
        }
        Layout { n: offset, atoms }
    }
}

/// Basis positions of one atom `C^k ⊗ C^m`, listed in `(a, t)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomLayout {
    pub block: usize,
    pub atom: usize,
    pub k: usize,
    pub mult: usize,
    pub indices: Vec<usize>,
}

impl AtomLayout {
    pub fn dim(&self) -> usize {
        self.k * self.mult
    }

    pub fn index(&self, a: usize, t: usize) -> usize {
        self.indices[a * self.mult + t]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub atoms: Vec<AtomLayout>,
}

impl Layout {
    /// Concatenation of all atoms' index lists; reorders the basis so every
    /// atom occupies a contiguous range.
    pub fn atom_major_permutation(&self) -> Vec<usize> {
        self.atoms
            .iter()
            .flat_map(|a| a.indices.iter().copied())
            .collect()
    }

    pub fn all_atom_dims_equal(&self) -> bool {
        self.atoms.windows(2).all(|w| w[0].dim() == w[1].dim())
    }
}

/// Why a spec falls outside every supported construction class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum UnsupportedReason {
    /// Some atom multiplicity is odd and at least 3.
    OddAtomRank { block: usize, atom: usize, mult: usize },
    /// A single atom of multiplicity one with `k >= 2`.
    SingleAtomMultiplicityOne { k: usize },
    /// Some `k_i > 1` and the atom dimensions `k_i m_ij` differ.
    HeterogeneousAtomDimensions,
    /// Exactly two equal-dimension atoms, one of multiplicity one: every
    /// unitary in the complement is then block off-diagonal, so the
    /// within-atom complement of the other atom is not spanned.
    UnpairedMultiplicityOneAtom,
}

impl UnsupportedReason {
    /// Stable machine-readable rule name.
    pub fn rule(&self) -> &'static str {
        match self {
            Self::OddAtomRank { .. } => "odd atom rank",
            Self::SingleAtomMultiplicityOne { .. } => "single atom of multiplicity one",
            Self::HeterogeneousAtomDimensions => "heterogeneous atom dimensions",
            Self::UnpairedMultiplicityOneAtom => "unpaired multiplicity-one atom",
        }
    }
}

impl fmt::Display for UnsupportedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OddAtomRank { block, atom, mult } => write!(
                f,
                "odd atom rank {mult} (block {block}, atom {atom})"
            ),
            Self::SingleAtomMultiplicityOne { k } => {
                write!(f, "single atom of multiplicity one (k = {k})")
            }
            other => f.write_str(other.rule()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecClass {
    #[serde(rename = "C1_MASA")]
    C1Masa,
    #[serde(rename = "C2_SINGLE_ATOM")]
    C2SingleAtom,
    #[serde(rename = "C3_ATOMIC_ABELIAN")]
    C3AtomicAbelian,
    #[serde(rename = "C4_HOMOGENEOUS_TYPE1")]
    C4HomogeneousTypeI,
    #[serde(rename = "UNSUPPORTED")]
    Unsupported(UnsupportedReason),
}

impl SpecClass {
    pub fn is_supported(&self) -> bool {
        !matches!(self, Self::Unsupported(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::C1Masa => "C1_MASA",
            Self::C2SingleAtom => "C2_SINGLE_ATOM",
            Self::C3AtomicAbelian => "C3_ATOMIC_ABELIAN",
            Self::C4HomogeneousTypeI => "C4_HOMOGENEOUS_TYPE1",
            Self::Unsupported(_) => "UNSUPPORTED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: SpecClass,
    pub layout: Layout,
}

impl Classification {
    pub fn require_supported(&self) -> Result<()> {
        match self.class {
            SpecClass::Unsupported(reason) => Err(Error::Unsupported(reason)),
            _ => Ok(()),
        }
    }
}

/// Checks `spec` against dimension `n` and classifies it.
pub fn validate_spec(spec: &TypeISubalgebraSpec, n: usize) -> Result<Classification> {
    spec.check_structure()?;
    let dim = spec.dim();
    if dim != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: dim,
        });
    }
    let layout = spec.layout();
    let class = classify(spec, &layout);
    Ok(Classification { class, layout })
}

fn classify(spec: &TypeISubalgebraSpec, layout: &Layout) -> SpecClass {
    let atoms = &layout.atoms;
    let all_k1 = spec.blocks.iter().all(|b| b.k == 1);
    if all_k1 && atoms.iter().all(|a| a.mult == 1) {
        return SpecClass::C1Masa;
    }
    if let Some(a) = atoms.iter().find(|a| a.mult >= 3 && a.mult % 2 == 1) {
        return SpecClass::Unsupported(UnsupportedReason::OddAtomRank {
            block: a.block,
            atom: a.atom,
            mult: a.mult,
        });
    }
    if atoms.len() == 1 {
        let a = &atoms[0];
        return if a.mult % 2 == 0 {
            SpecClass::C2SingleAtom
        } else {
            SpecClass::Unsupported(UnsupportedReason::SingleAtomMultiplicityOne { k: a.k })
        };
    }
    if all_k1 {
        return SpecClass::C3AtomicAbelian;
    }
    if !layout.all_atom_dims_equal() {
        return SpecClass::Unsupported(UnsupportedReason::HeterogeneousAtomDimensions);
    }
    if atoms.len() == 2 && atoms.iter().any(|a| a.mult == 1) && atoms.iter().any(|a| a.mult > 1)
    {
        return SpecClass::Unsupported(UnsupportedReason::UnpairedMultiplicityOneAtom);
    }
    SpecClass::C4HomogeneousTypeI
}

/// `E_std`: per atom, replace the compression `y ∈ M_k ⊗ M_m` by
/// `((id ⊗ Tr)(y) / m) ⊗ 1_m`; everything off the atoms goes to zero.
pub(crate) fn expectation_standard(layout: &Layout, x: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(x.dim());
    for atom in &layout.atoms {
        let m = atom.mult;
        for a in 0..atom.k {
            for b in 0..atom.k {
                let mut c = ZERO;
                for t in 0..m {
                    c += x[(atom.index(a, t), atom.index(b, t))];
                }
                c /= m as f64;
                for t in 0..m {
                    out[(atom.index(a, t), atom.index(b, t))] = c;
                }
            }
        }
    }
    out
}

/// Trace-preserving conditional expectation `E_A`; with a conjugation `W`,
/// `E(x) = W E_std(W* x W) W*`.
pub fn conditional_expectation(
    spec: &TypeISubalgebraSpec,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let class = validate_spec(spec, x.dim())?;
    Ok(expectation_with(spec, &class.layout, x))
}

pub(crate) fn expectation_with(
    spec: &TypeISubalgebraSpec,
    layout: &Layout,
    x: &ComplexMatrix,
) -> ComplexMatrix {
    match &spec.conjugation {
        None => expectation_standard(layout, x),
        Some(w) => {
            let std = x.sandwich(&w.adjoint(), w);
            expectation_standard(layout, &std).conjugate_by(w)
        }
    }
}

/// `x - E_A(x)`.
pub fn complement_project(spec: &TypeISubalgebraSpec, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = conditional_expectation(spec, x)?;
    Ok(x - &e)
}

/// `‖E_A(x)‖₂`; zero certifies `x ∈ N ⊖ A`.
pub fn membership_residual(spec: &TypeISubalgebraSpec, x: &ComplexMatrix) -> Result<f64> {
    Ok(conditional_expectation(spec, x)?.hs_norm())
}

/// HS-orthonormal basis of `N ⊖ A`: matrix units projected into the
/// complement, then modified Gram-Schmidt (two passes) dropping vectors whose
/// residual falls below `rank_tol` relative to their projected norm.
pub fn complement_basis(
    spec: &TypeISubalgebraSpec,
    tol: &Tolerances,
) -> Result<Vec<ComplexMatrix>> {
    let n = spec.dim();
    let class = validate_spec(spec, n)?;
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let unit = ComplexMatrix::unit(n, i, j);
            let mut v = &unit - &expectation_with(spec, &class.layout, &unit);
            let start = v.hs_norm();
            if start <= tol.rank_tol {
                continue;
            }
            for _ in 0..2 {
                for b in &basis {
                    let c = v.hs_inner(b)?;
                    v.add_scaled(-c, b);
                }
            }
            let norm = v.hs_norm();
            if norm > tol.rank_tol * start {
                basis.push(v.scale_real(1.0 / norm));
            }
        }
    }
    Ok(basis)
}

/// Pseudorandom element of `A` (Gaussian factor matrices per atom), built in
/// standard position and then conjugated. Deterministic per seed.
pub fn random_algebra_element(spec: &TypeISubalgebraSpec, seed: u64) -> Result<ComplexMatrix> {
    let n = spec.dim();
    let class = validate_spec(spec, n)?;
    let mut r = rng(seed);
    let mut out = ComplexMatrix::zeros(n);
    for atom in &class.layout.atoms {
        let y = gaussian_matrix(atom.k, &mut r);
        for a in 0..atom.k {
            for b in 0..atom.k {
                for t in 0..atom.mult {
                    out[(atom.index(a, t), atom.index(b, t))] = y[(a, b)];
                }
            }
        }
    }
    Ok(match &spec.conjugation {
        None => out,
        Some(w) => out.conjugate_by(w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;
    use num_complex::Complex64;

    fn class_of(spec: &TypeISubalgebraSpec) -> SpecClass {
        validate_spec(spec, spec.dim()).unwrap().class
    }

    #[test]
    fn classification_examples() {
        assert_eq!(class_of(&TypeISubalgebraSpec::masa(3)), SpecClass::C1Masa);
        assert_eq!(class_of(&TypeISubalgebraSpec::scalars(4)), SpecClass::C2SingleAtom);
        assert!(matches!(
            class_of(&TypeISubalgebraSpec::factor(2, 3)),
            SpecClass::Unsupported(UnsupportedReason::OddAtomRank { mult: 3, .. })
        ));
    }

    #[test]
    fn classification_envelope_rules() {
        assert_eq!(class_of(&TypeISubalgebraSpec::factor(2, 2)), SpecClass::C2SingleAtom);
        assert_eq!(class_of(&TypeISubalgebraSpec::atomic(&[2, 4])), SpecClass::C3AtomicAbelian);
        assert_eq!(class_of(&TypeISubalgebraSpec::atomic(&[1, 1, 2])), SpecClass::C3AtomicAbelian);
        assert!(matches!(
            class_of(&TypeISubalgebraSpec::atomic(&[2, 3])),
            SpecClass::Unsupported(UnsupportedReason::OddAtomRank { mult: 3, .. })
        ));
        let two_blocks = TypeISubalgebraSpec::new(vec![
            BlockSpec::new(2, vec![2]),
            BlockSpec::new(2, vec![2]),
        ])
        .unwrap();
        assert_eq!(class_of(&two_blocks), SpecClass::C4HomogeneousTypeI);
        let mixed = TypeISubalgebraSpec::new(vec![
            BlockSpec::new(1, vec![4]),
            BlockSpec::new(2, vec![2]),
        ])
        .unwrap();
        assert_eq!(class_of(&mixed), SpecClass::C4HomogeneousTypeI);
        let hetero = TypeISubalgebraSpec::new(vec![
            BlockSpec::new(2, vec![2]),
            BlockSpec::new(1, vec![2]),
        ])
        .unwrap();
        assert_eq!(
            class_of(&hetero),
            SpecClass::Unsupported(UnsupportedReason::HeterogeneousAtomDimensions)
        );
        let unpaired = TypeISubalgebraSpec::new(vec![
            BlockSpec::new(1, vec![2]),
            BlockSpec::new(2, vec![1]),
        ])
        .unwrap();
        assert_eq!(
            class_of(&unpaired),
            SpecClass::Unsupported(UnsupportedReason::UnpairedMultiplicityOneAtom)
        );
        let paired = TypeISubalgebraSpec::new(vec![
            BlockSpec::new(1, vec![2]),
            BlockSpec::new(2, vec![1, 1]),
        ])
        .unwrap();
        assert_eq!(class_of(&paired), SpecClass::C4HomogeneousTypeI);
    }

    #[test]
    fn validate_rejects_wrong_dimension_and_malformed_specs() {
        let spec = TypeISubalgebraSpec::masa(3);
        assert!(matches!(
            validate_spec(&spec, 4),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
        assert!(TypeISubalgebraSpec::new(vec![]).is_err());
        assert!(TypeISubalgebraSpec::new(vec![BlockSpec::new(0, vec![1])]).is_err());
        assert!(TypeISubalgebraSpec::new(vec![BlockSpec::new(1, vec![])]).is_err());
        assert!(TypeISubalgebraSpec::new(vec![BlockSpec::new(1, vec![0])]).is_err());
    }

    #[test]
    fn layout_is_factor_major() {
        let spec = TypeISubalgebraSpec::new(vec![
            BlockSpec::new(1, vec![1]),
            BlockSpec::new(2, vec![1, 2]),
        ])
        .unwrap();
        let layout = spec.layout();
        assert_eq!(layout.n, 7);
        assert_eq!(layout.atoms[0].indices, vec![0]);
        // block 1: offset 1, stride 3; atom 0 (m = 1) then atom 1 (m = 2)
        assert_eq!(layout.atoms[1].indices, vec![1, 4]);
        assert_eq!(layout.atoms[2].indices, vec![2, 3, 5, 6]);
        assert_eq!(spec.algebra_dimension(), 1 + 4 * 2);
    }

    #[test]
    fn expectation_examples() {
        let c2 = TypeISubalgebraSpec::scalars(2);
        let e = conditional_expectation(&c2, &ComplexMatrix::real_diag(&[1.0, -1.0])).unwrap();
        assert!(e.is_zero());

        let masa = TypeISubalgebraSpec::masa(2);
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let e = conditional_expectation(&masa, &x).unwrap();
        assert_eq!(e, ComplexMatrix::real_diag(&[1.0, 4.0]));

        let f = TypeISubalgebraSpec::factor(2, 2);
        let e = conditional_expectation(&f, &ComplexMatrix::unit(4, 0, 0)).unwrap();
        assert_eq!(e, ComplexMatrix::real_diag(&[0.5, 0.5, 0.0, 0.0]));
    }

    #[test]
    fn complement_projection_examples() {
        let masa = TypeISubalgebraSpec::masa(2);
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(
            complement_project(&masa, &x).unwrap(),
            ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[3.0, 0.0]])
        );
        let c2 = TypeISubalgebraSpec::scalars(2);
        let x = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(
            complement_project(&c2, &x).unwrap(),
            ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]])
        );
        let a = random_algebra_element(&masa, 3).unwrap();
        assert!(complement_project(&masa, &a).unwrap().hs_norm() < 1e-15);
    }

    #[test]
    fn membership_examples() {
        let c2 = TypeISubalgebraSpec::scalars(2);
        assert!((membership_residual(&c2, &ComplexMatrix::identity(2)).unwrap() - 1.0).abs() < 1e-15);
        let masa = TypeISubalgebraSpec::masa(2);
        assert_eq!(membership_residual(&masa, &ComplexMatrix::unit(2, 0, 1)).unwrap(), 0.0);
    }

    #[test]
    fn complement_basis_sizes() {
        let tol = Tolerances::default();
        let b = complement_basis(&TypeISubalgebraSpec::masa(2), &tol).unwrap();
        assert_eq!(b.len(), 2);
        assert!((b[0].hs_distance(&ComplexMatrix::unit(2, 0, 1).scale_real(2f64.sqrt()))) < 1e-15);
        assert_eq!(complement_basis(&TypeISubalgebraSpec::scalars(2), &tol).unwrap().len(), 3);
        let f = TypeISubalgebraSpec::factor(2, 2);
        let b = complement_basis(&f, &tol).unwrap();
        assert_eq!(b.len(), 12);
        for (s, u) in b.iter().enumerate() {
            for (t, v) in b.iter().enumerate() {
                let expected = if s == t { ONE } else { ZERO };
                assert!((u.hs_inner(v).unwrap() - expected).norm() < 1e-13);
            }
            assert!(membership_residual(&f, u).unwrap() < 1e-14);
        }
    }

    #[test]
    fn random_elements_have_the_forced_structure() {
        let s = TypeISubalgebraSpec::scalars(4);
        let a = random_algebra_element(&s, 11).unwrap();
        assert!(a.hs_distance(&ComplexMatrix::identity(4).scale(a[(0, 0)])) < 1e-15);

        let masa = TypeISubalgebraSpec::masa(3);
        let d = random_algebra_element(&masa, 5).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(d[(i, j)], ZERO);
                }
            }
        }

        let f = TypeISubalgebraSpec::factor(2, 2);
        let a = random_algebra_element(&f, 9).unwrap();
        let y = ComplexMatrix::from_fn(2, |i, j| a[(2 * i, 2 * j)]);
        assert!(a.hs_distance(&y.kron(&ComplexMatrix::identity(2))) < 1e-15);
        assert_eq!(a, random_algebra_element(&f, 9).unwrap());
        assert_ne!(a, random_algebra_element(&f, 10).unwrap());
    }

    #[test]
    fn conjugation_must_be_unitary() {
        let tol = Tolerances::default();
        let w = ComplexMatrix::identity(2).scale(Complex64::new(2.0, 0.0));
        assert!(TypeISubalgebraSpec::masa(2).with_conjugation(w, &tol).is_err());
        let w = ComplexMatrix::identity(3);
        assert!(TypeISubalgebraSpec::masa(2).with_conjugation(w, &tol).is_err());
    }
}
