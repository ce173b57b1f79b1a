//! Eigenvalues of small general complex matrices from the characteristic
//! polynomial (Faddeev–LeVerrier) and simultaneous Aberth root iteration.
//!
//! The characteristic-polynomial route loses accuracy as the dimension grows,
//! so it is restricted to `dim ≤ 12`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use super::matrix::{CMatrix, C64};
use super::solve::det;
use crate::error::{Error, Result};

pub const MAX_CHARPOLY_DIM: usize = 12;
const MAX_ABERTH_ITERS: usize = 500;

/// Coefficients `c_0, …, c_n` (ascending, `c_n = 1`) of `det(zI − X)`.
pub fn characteristic_polynomial(x: &CMatrix) -> Result<Vec<C64>> {
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    let n = x.rows();
    let mut c = vec![C64::zero(); n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = X M_{k-1} + c_{n-k+1} I
        let mut next = x * &m;
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        c[n - k] = -(x * &m).trace() / (k as f64);
    }
    Ok(c)
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::zero();
    let mut dp = C64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of the monic polynomial with ascending coefficients `c`.
pub fn polynomial_roots(c: &[C64]) -> Result<Vec<C64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let c: Vec<C64> = c.iter().map(|&a| a / lead).collect();
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let center = -c[n - 1] / (n as f64);
    let r0 = (c[0].norm().powf(1.0 / n as f64)).clamp(1e-3, radius);
    let mut z: Vec<C64> =
        (0..n).map(|j| center + C64::from_polar(r0, 2.0 * PI * (j as f64) / (n as f64) + 0.4)).collect();

    let mut last = f64::INFINITY;
    for _ in 0..MAX_ABERTH_ITERS {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&c, z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let mut s = C64::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        s += C64::new(1.0, 0.0) / d;
                    }
                }
            }
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            worst = worst.max(w.norm() / (1.0 + z[i].norm()));
        }
        last = worst;
        if worst <= 4.0 * f64::EPSILON {
            return Ok(z);
        }
    }
    // accept if every root has a small backward error
    let ok = z.iter().all(|&zi| {
        let (p, _) = horner(&c, zi);
        let bound: f64 = c.iter().enumerate().map(|(k, a)| a.norm() * zi.norm().powi(k as i32)).sum();
        p.norm() <= 1e-10 * bound
    });
    if ok {
        Ok(z)
    } else {
        Err(Error::NoConvergence { what: "aberth root iteration", iterations: MAX_ABERTH_ITERS, residual: last })
    }
}

/// All eigenvalues of `x` with multiplicity, sorted by (real, imaginary) part.
///
/// Each root is checked against `|det(X − μI)| ≤ 1e-6 · max(1, ‖X‖_F)^n`.
pub fn eigvals_general(x: &CMatrix) -> Result<Vec<C64>> {
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    let n = x.rows();
    if n > MAX_CHARPOLY_DIM {
        return Err(Error::Domain("characteristic-polynomial eigenvalues limited to dim <= 12"));
    }
    let c = characteristic_polynomial(x)?;
    let mut roots = polynomial_roots(&c)?;
    let scale = x.frobenius_norm().max(1.0).powi(n as i32);
    for &mu in &roots {
        let mut shifted = x.clone();
        for i in 0..n {
            shifted[(i, i)] -= mu;
        }
        let d = det(&shifted)?.norm();
        if d > 1e-6 * scale {
            return Err(Error::NoConvergence { what: "eigenvalue verification", iterations: 0, residual: d / scale });
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

pub fn spectral_radius(x: &CMatrix) -> Result<f64> {
    Ok(eigvals_general(x)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
