use super::{Decomposer, Decomposition};
use crate::algebra::{SpecClass, TypeISubalgebraSpec};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

impl Decomposer {
    /// Decomposition for an abelian spec (every `k_i = 1`).
    ///
    /// Each atom of even rank contributes its compression, decomposed by the
    /// scalar case and completed across the other atoms with a `±` witness.
    /// The parts between atoms are refined into pieces of rank `gcd` of the
    /// atom ranks and handled by the zero piece-diagonal construction.
    pub fn atomic_abelian_decomp(
        &self,
        spec: &TypeISubalgebraSpec,
        x: &ComplexMatrix,
    ) -> Result<Decomposition> {
        if spec.blocks.iter().any(|b| b.k != 1) {
            return Err(Error::InvalidSpec("every block must have k = 1".into()));
        }
        let (class, xs) = self.standard_input(spec, x)?;
        debug_assert!(matches!(
            class.class,
            SpecClass::C1Masa | SpecClass::C2SingleAtom | SpecClass::C3AtomicAbelian
        ));
        let terms = self.assemble(&class, &xs)?;
        Ok(self.finish(spec, x, terms))
    }

    /// Abelian stage of the dispatcher; multiplicity-one atoms play the role
    /// of a diffuse part.
    pub fn abelian_decomp(&self, spec: &TypeISubalgebraSpec, x: &ComplexMatrix) -> Result<Decomposition> {
        self.atomic_abelian_decomp(spec, x)
    }
}
