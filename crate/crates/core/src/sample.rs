//! Seeded random generators for matrices, vectors and Levi-form fixtures.
//!
//! Every routine takes the RNG explicitly; nothing here keeps global state.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::levi::LeviForm;
use crate::numlin::{real_norm, CMatrix, HermitianMatrix, C64};

/// The generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(normal(rng), normal(rng))
}

pub fn random_complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// Uniform point on the unit sphere of `ℝⁿ`.
pub fn random_unit_real<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        let nrm = real_norm(&v);
        if nrm > 1e-8 {
            return v.into_iter().map(|x| x / nrm).collect();
        }
    }
}

/// Hermitian matrix with i.i.d. Gaussian entries (GUE-like scaling).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, m: usize) -> HermitianMatrix {
    let g = CMatrix::from_fn(m, m, |_, _| random_complex(rng));
    HermitianMatrix::symmetrize(&(&g + &g.adjoint()).scale_real(0.5))
}

/// Hermitian positive definite matrix with eigenvalues in `[lo, hi]`.
pub fn random_hpd<R: Rng + ?Sized>(rng: &mut R, m: usize, lo: f64, hi: f64) -> HermitianMatrix {
    let u = random_unitary(rng, m);
    let d: Vec<f64> = (0..m).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    let ud = CMatrix::from_fn(m, m, |i, j| u[(i, j)] * d[j]);
    HermitianMatrix::symmetrize(&(&ud * &u.adjoint()))
}

/// Unitary matrix from Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, m: usize) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    while cols.len() < m {
        let mut x = random_complex_vector(rng, m);
        for _ in 0..2 {
            for q in &cols {
                let proj = crate::numlin::inner(q, &x);
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= proj * qi;
                }
            }
        }
        let nrm = crate::numlin::vec_norm(&x);
        if nrm > 1e-6 {
            cols.push(x.into_iter().map(|z| z / nrm).collect());
        }
    }
    CMatrix::from_columns(m, &cols)
}

/// A random strongly pseudoconvex Levi form: `A_1` is positive definite and the
/// remaining matrices are Gaussian Hermitian. Generating with probability one
/// whenever `k ≤ m²`. `(1, 0, …, 0)` is a pseudoconvexity witness.
pub fn random_pseudoconvex_form<R: Rng + ?Sized>(rng: &mut R, m: usize, k: usize) -> LeviForm {
    let mut mats = Vec::with_capacity(k);
    mats.push(random_hpd(rng, m, 0.5, 2.0));
    for _ in 1..k {
        mats.push(random_hermitian(rng, m));
    }
    LeviForm::new(mats).expect("generated matrices share a dimension")
}

/// A random Levi form with Gaussian Hermitian matrices.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, m: usize, k: usize) -> LeviForm {
    LeviForm::new((0..k).map(|_| random_hermitian(rng, m)).collect()).expect("shared dimension")
}
