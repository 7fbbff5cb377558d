//! Numerical kernels: Hermitian eigendecomposition by cyclic complex Jacobi
//! sweeps, operator norm, the defect square root `sqrt(I - x^2)`, unitarity
//! residuals and Gram-rank estimation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::tolerance::Tolerances;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `h = V diag(eigenvalues) V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `j` is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    /// Rebuilds `V f(diag) V*` for a real spectral function `f`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let fvals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fvals[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| l)
    }
}

fn check_selfadjoint(h: &ComplexMatrix, tol: f64) -> Result<()> {
    let residual = h.selfadjoint_residual();
    if residual > tol * h.hs_norm().max(1.0) {
        return Err(Error::NotSelfAdjoint { residual });
    }
    Ok(())
}

/// Hermitian eigendecomposition by cyclic Jacobi sweeps in row-major pivot
/// order. Deterministic for a fixed input.
pub fn hermitian_eig(h: &ComplexMatrix, tol: &Tolerances) -> Result<HermEig> {
    check_selfadjoint(h, tol.input_tol)?;
    let n = h.dim();
    let mut a = h.real_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        let threshold = 1e-3 * tol.eig_tol * scale;
        let mut prev_off = f64::INFINITY;
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&a);
            if off <= threshold || off >= prev_off {
                break;
            }
            prev_off = off;
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p][q]`: `a <- J* a J`, `v <- v J`
/// with `J = diag(1, conj(phase)) * [[c, s], [-s, c]]` on coordinates `(p, q)`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    let tau = (beta - alpha) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    let n = a.dim();
    let rotate_cols = |m: &mut ComplexMatrix| {
        for k in 0..n {
            let (mp, mq) = (m[(k, p)], m[(k, q)]);
            m[(k, p)] = mp * jpp + mq * jqp;
            m[(k, q)] = mp * jpq + mq * jqq;
        }
    };
    rotate_cols(a);
    rotate_cols(v);
    for k in 0..n {
        let (mp, mq) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * mp + jqp.conj() * mq;
        a[(q, k)] = jpq.conj() * mp + jqq.conj() * mq;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Largest singular value, as the square root of the top eigenvalue of `x* x`.
pub fn operator_norm(x: &ComplexMatrix, tol: &Tolerances) -> f64 {
    let gram = x.adjoint_mul(x);
    let eig = hermitian_eig(&gram, tol).expect("x* x is Hermitian by construction");
    eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Positive square root of `I - x^2` for a self-adjoint contraction `x`.
pub fn sqrt_defect(x: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(x, tol)?;
    let norm = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, l| m.max(l.abs()));
    if norm > 1.0 + tol.clamp_tol {
        return Err(Error::NormExceedsOne { norm });
    }
    let r = eig.apply(|l| {
        let d = 1.0 - l * l;
        if d < 0.0 {
            0.0
        } else {
            d.sqrt()
        }
    });
    Ok(r.real_part())
}

/// `‖x* x - I‖₂`.
pub fn unitarity_residual(x: &ComplexMatrix) -> f64 {
    let mut g = x.adjoint_mul(x);
    for i in 0..x.dim() {
        g[(i, i)] -= ONE;
    }
    g.hs_norm()
}

/// Rank of the Hilbert-Schmidt Gram matrix of `mats`, counting eigenvalues
/// above `rank_tol * max_eigenvalue`.
///
/// When the list is longer than `n^2` the (isospectral up to zeros) frame
/// operator `sum_s vec(m_s) vec(m_s)*` is diagonalized instead.
pub fn gram_rank(mats: &[ComplexMatrix], rank_tol: f64, tol: &Tolerances) -> Result<usize> {
    let first = mats.first().ok_or(Error::EmptyList)?;
    let n = first.dim();
    for m in mats {
        first.check_same_dim(m)?;
    }
    let count = mats.len();
    let n2 = n * n;
    let scale = 1.0 / n as f64;
    let gram = if count <= n2 {
        let mut g = ComplexMatrix::zeros(count);
        for s in 0..count {
            for t in s..count {
                let v = mats[s].hs_inner(&mats[t])?;
                g[(s, t)] = v;
                g[(t, s)] = v.conj();
            }
        }
        g
    } else {
        let mut f = ComplexMatrix::zeros(n2);
        for m in mats {
            let v = m.as_slice();
            for a in 0..n2 {
                if v[a] == ZERO {
                    continue;
                }
                for b in 0..n2 {
                    f[(a, b)] += v[a] * v[b].conj() * scale;
                }
            }
        }
        f
    };
    let eig = hermitian_eig(&gram, tol)?;
    let max = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return Ok(0);
    }
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > rank_tol * max)
        .count())
}

/// Unitary discrete Fourier matrix `F_ab = exp(2 pi i ab / m) / sqrt(m)`.
pub fn fourier(m: usize) -> ComplexMatrix {
    let norm = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, |a, b| {
        let angle = 2.0 * std::f64::consts::PI * ((a * b) % m) as f64 / m as f64;
        Complex64::from_polar(norm, angle)
    })
}
