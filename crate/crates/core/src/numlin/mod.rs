//! Dense complex linear algebra sized for the small matrices of a Levi form
//! (`m ≤ 8`, `k ≤ m²`).

mod eigh;
mod eigvals;
mod matrix;
mod rank;
mod solve;

#[allow(unused_imports)]
use num_traits::Float;

pub use eigh::{eig_hermitian, eig_hermitian_with, EigenDecomposition, DEFAULT_MAX_SWEEPS};
pub use eigvals::{characteristic_polynomial, eigvals_general, polynomial_roots, spectral_radius, MAX_CHARPOLY_DIM};
pub use matrix::{inner, real_norm, vec_norm, vec_sub, CMatrix, HermitianMatrix, C64};
pub use rank::{real_rank, RankResult};
pub use solve::{det, inverse, solve_complex, solve_linear_real, ComplexLu, LinearSolution, RealMatrix};

use crate::error::{Error, Result};

/// Default relative zero tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// `Q^{-1/2}` for Hermitian positive definite `Q`.
///
/// Fails with [`Error::NotPositiveDefinite`] when the smallest eigenvalue is
/// at most `1e-14 · ‖Q‖`.
pub fn inv_sqrt_hpd(q: &HermitianMatrix) -> Result<HermitianMatrix> {
    let d = eig_hermitian(q)?;
    let lmin = d.min();
    if lmin <= 1e-14 * d.spectral_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lmin });
    }
    let n = q.dim();
    let v = &d.eigenvectors;
    let scaled = CMatrix::from_fn(n, n, |i, j| v[(i, j)] / d.eigenvalues[j].sqrt());
    Ok(HermitianMatrix::symmetrize(&(&scaled * &v.adjoint())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_hpd, seeded};

    #[test]
    fn inv_sqrt_identity_and_diagonal() {
        let r = inv_sqrt_hpd(&HermitianMatrix::identity(3)).unwrap();
        assert!((r.as_matrix() - &CMatrix::identity(3)).max_abs() < 1e-15);
        let r = inv_sqrt_hpd(&HermitianMatrix::from_real_diagonal(&[4.0, 9.0])).unwrap();
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r[(1, 1)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!(r[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn inv_sqrt_random_hpd() {
        let mut rng = seeded(21);
        for _ in 0..10 {
            let q = random_hpd(&mut rng, 4, 0.2, 5.0);
            let r = inv_sqrt_hpd(&q).unwrap();
            let rqr = &(r.as_matrix() * q.as_matrix()) * r.as_matrix();
            assert!((&rqr - &CMatrix::identity(4)).max_abs() <= 1e-10);
            // applying the congruence twice: R R Q = I, i.e. R² acts as Q⁻¹
            let rrq = &(r.as_matrix() * r.as_matrix()) * q.as_matrix();
            assert!((&rrq - &CMatrix::identity(4)).max_abs() <= 1e-8);
        }
    }

    #[test]
    fn inv_sqrt_rejects_indefinite() {
        let e = inv_sqrt_hpd(&HermitianMatrix::from_real_diagonal(&[1.0, -2.0])).unwrap_err();
        assert_eq!(e, Error::NotPositiveDefinite { min_eigenvalue: -2.0 });
    }
}
