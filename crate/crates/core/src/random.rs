//! Seeded pseudorandom matrices. ChaCha is counter-based, so a `(seed, stream)`
//! pair always yields the same sequence regardless of thread or call order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::hermitian_eig;
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian(rng: &mut Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn gaussian_matrix(n: usize, rng: &mut Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| gaussian(rng))
}

pub fn hermitian_matrix(n: usize, rng: &mut Rng) -> ComplexMatrix {
    gaussian_matrix(n, rng).real_part()
}

/// Eigenvector matrix of a random Hermitian matrix.
pub fn unitary_matrix(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let h = hermitian_matrix(n, rng);
    hermitian_eig(&h, &Tolerances::default())
        .expect("random Hermitian input")
        .eigenvectors
}
