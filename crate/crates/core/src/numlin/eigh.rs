//! Cyclic complex Jacobi eigensolver for small Hermitian matrices.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{vec_norm, CMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector for `eigenvalues[i]`.
    pub eigenvectors: CMatrix,
    /// `max_i ‖A v_i − μ_i v_i‖`.
    pub residual: f64,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, i: usize) -> Vec<C64> {
        self.eigenvectors.col(i)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Largest eigenvalue magnitude, the spectral norm of the input.
    pub fn spectral_norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

pub fn eig_hermitian(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with(a, DEFAULT_MAX_SWEEPS)
}

pub fn eig_hermitian_with(a: &HermitianMatrix, max_sweeps: usize) -> Result<EigenDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::Domain("eigendecomposition of an empty matrix"));
    }
    let mut w = a.as_matrix().clone();
    let mut v = CMatrix::identity(n);
    let norm = w.frobenius_norm();
    let target = 1e-15 * norm;

    let mut converged = false;
    let mut off = off_diagonal_norm(&w);
    for _ in 0..max_sweeps {
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&w);
    }
    if !converged && off > target {
        return Err(Error::NoConvergence { what: "hermitian jacobi", iterations: max_sweeps, residual: off });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.total_cmp(&w[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| w[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let mut residual = 0.0f64;
    for (j, &mu) in eigenvalues.iter().enumerate() {
        let x = eigenvectors.col(j);
        let ax = a.as_matrix().mul_vec(&x);
        let r: Vec<C64> = ax.iter().zip(&x).map(|(y, z)| y - z * mu).collect();
        residual = residual.max(vec_norm(&r));
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors, residual })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
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

/// One two-sided rotation `A ← U* A U`, `V ← V U` annihilating `A[p,q]`.
///
/// `U = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` on the `(p, q)` plane, where
/// `A[p,q] = |A[p,q]| e^{iφ}`; the phase makes the pivot real and the real
/// rotation is the classical one.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if mag <= 1e-300 || mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    let n = a.rows();
    // A U (columns p, q)
    for i in 0..n {
        let xp = a[(i, p)];
        let xq = a[(i, q)];
        a[(i, p)] = xp * c - xq * ph_conj * s;
        a[(i, q)] = xp * s + xq * ph_conj * c;
    }
    // U* (A U) (rows p, q)
    for j in 0..n {
        let xp = a[(p, j)];
        let xq = a[(q, j)];
        a[(p, j)] = xp * c - xq * phase * s;
        a[(q, j)] = xp * s + xq * phase * c;
    }
    a[(p, p)] = C64::new(app - t * mag, 0.0);
    a[(q, q)] = C64::new(aqq + t * mag, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    for i in 0..n {
        let xp = v[(i, p)];
        let xq = v[(i, q)];
        v[(i, p)] = xp * c - xq * ph_conj * s;
        v[(i, q)] = xp * s + xq * ph_conj * c;
    }
}
