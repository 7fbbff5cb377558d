use num_complex::Complex64;

use super::{Decomposer, Decomposition, Provenance, UnitaryTerm, NEGLIGIBLE};
use crate::error::Result;
use crate::linalg::{operator_norm, sqrt_defect, unitarity_residual};
use crate::matrix::{ComplexMatrix, I, ONE};

/// `Some((ρ, x / ρ))` when `x` is `ρ > 0` times a unitary.
pub(crate) fn scaled_unitary(x: &ComplexMatrix, tol: f64) -> Option<(f64, ComplexMatrix)> {
    let rho = x.hs_norm();
    if rho == 0.0 || !rho.is_finite() {
        return None;
    }
    let u = x.scale_real(1.0 / rho);
    (unitarity_residual(&u) <= tol).then_some((rho, u))
}

/// Deterministic trace-zero unitary of size `g`: `diag(1, -1, 1, ...)` for
/// even `g`, `diag(ω^j)` with `ω = exp(2πi/g)` for odd `g >= 3`. `M_1` has no
/// trace-zero unitary.
pub fn canonical_trace_zero_unitary(g: usize) -> Option<ComplexMatrix> {
    match g {
        0 | 1 => None,
        g if g % 2 == 0 => {
            let d: Vec<f64> = (0..g).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
            Some(ComplexMatrix::real_diag(&d))
        }
        g => Some(roots_of_unity_diag(g)),
    }
}

/// `diag(1, ω, ..., ω^(g-1))`, `ω = exp(2πi/g)`.
pub(crate) fn roots_of_unity_diag(g: usize) -> ComplexMatrix {
    let d: Vec<Complex64> = (0..g)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / g as f64))
        .collect();
    ComplexMatrix::diag(&d)
}

impl Decomposer {
    /// `x = ½u + ½u*` with `u = x + i sqrt(1 - x^2)`, for a self-adjoint
    /// contraction `x`.
    pub fn two_unitary_selfadjoint(&self, x: &ComplexMatrix) -> Result<Decomposition> {
        let r = sqrt_defect(x, &self.tol)?;
        let u = x.real_part() + r.scale(I);
        let half = Complex64::new(0.5, 0.0);
        let terms = vec![
            UnitaryTerm::new(half, u.clone(), Provenance::FourUnitary),
            UnitaryTerm::new(half, u.adjoint(), Provenance::FourUnitary),
        ];
        Ok(Decomposition::new(x.clone(), terms))
    }

    /// At most four unitaries of `M_n` with `Σ|λ| <= ‖h‖ + ‖k‖ <= 2‖x‖`, where
    /// `x = h + ik` is the self-adjoint split.
    pub fn four_unitary(&self, x: &ComplexMatrix) -> Decomposition {
        if x.is_zero() {
            return Decomposition::empty(x.clone());
        }
        if let Some((rho, u)) = scaled_unitary(x, self.tol.merge_tol) {
            let terms = vec![UnitaryTerm::new(
                Complex64::new(rho, 0.0),
                u,
                Provenance::FourUnitary,
            )];
            return Decomposition::new(x.clone(), terms);
        }
        let reference = x.hs_norm();
        let mut terms = Vec::with_capacity(4);
        for (part, phase) in [(x.real_part(), ONE), (x.imag_part(), I)] {
            let a = operator_norm(&part, &self.tol);
            if a == 0.0 || part.hs_norm() <= NEGLIGIBLE * reference {
                continue;
            }
            let d = self
                .two_unitary_selfadjoint(&part.scale_real(1.0 / a))
                .expect("normalized self-adjoint part");
            terms.extend(super::scaled_terms(&d, phase * a));
        }
        Decomposition::new(x.clone(), terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ZERO;

    fn dec() -> Decomposer {
        Decomposer::default()
    }

    #[test]
    fn two_unitary_of_zero() {
        let d = dec().two_unitary_selfadjoint(&ComplexMatrix::zeros(2)).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.terms[0].unitary.hs_distance(&ComplexMatrix::identity(2).scale(I)) < 1e-15);
        assert!(d.terms[1].unitary.hs_distance(&ComplexMatrix::identity(2).scale(-I)) < 1e-15);
    }

    #[test]
    fn two_unitary_of_half_diagonal() {
        let x = ComplexMatrix::real_diag(&[0.5, -0.5]);
        let d = dec().two_unitary_selfadjoint(&x).unwrap();
        let pi = std::f64::consts::PI;
        let u = ComplexMatrix::diag(&[
            Complex64::from_polar(1.0, pi / 3.0),
            Complex64::from_polar(1.0, 2.0 * pi / 3.0),
        ]);
        assert!(d.terms[0].unitary.hs_distance(&u) < 1e-15);
        assert!(d.terms[1].unitary.hs_distance(&u.adjoint()) < 1e-15);
        assert_eq!(d.terms[0].coeff, Complex64::new(0.5, 0.0));
    }

    #[test]
    fn two_unitary_of_selfadjoint_unitary() {
        let x = ComplexMatrix::real_diag(&[1.0, -1.0]);
        let d = dec().two_unitary_selfadjoint(&x).unwrap();
        assert!(d.terms.iter().all(|t| t.unitary.hs_distance(&x) < 1e-15));
    }

    #[test]
    fn four_unitary_fast_paths() {
        assert!(dec().four_unitary(&ComplexMatrix::zeros(3)).is_empty());
        let u = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let d = dec().four_unitary(&u);
        assert_eq!(d.len(), 1);
        assert_eq!(d.terms[0].coeff, ONE);
        assert_eq!(d.terms[0].unitary, u);
    }

    #[test]
    fn four_unitary_of_nilpotent() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let d = dec().four_unitary(&x);
        assert_eq!(d.len(), 4);
        assert!((d.coeff_sum() - 2.0).abs() < 1e-14);
        assert!(d.reconstruct().hs_distance(&x) < 1e-15);
        for u in d.unitaries() {
            assert!(unitarity_residual(u) < 1e-14);
        }
    }

    #[test]
    fn canonical_padding_is_trace_zero() {
        assert!(canonical_trace_zero_unitary(1).is_none());
        for g in 2..9 {
            let v = canonical_trace_zero_unitary(g).unwrap();
            assert!(v.trace().norm() < 1e-14);
            assert!(unitarity_residual(&v) < 1e-15);
        }
        assert_eq!(canonical_trace_zero_unitary(2).unwrap()[(1, 1)], -ONE);
        assert_eq!(canonical_trace_zero_unitary(2).unwrap()[(0, 1)], ZERO);
    }
}
