//! Sampled functions on the unit circle and their discrete Fourier
//! coefficients.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numlin::C64;

/// In-place iterative radix-2 FFT, `X_n = Σ_k x_k e^{-2πi nk/N}`.
/// `inverse` flips the sign of the exponent; no normalization either way.
pub fn fft(data: &mut [C64], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = C64::from_polar(1.0, sign * 2.0 * PI * (k as f64) / (len as f64));
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len *= 2;
    }
}

/// Values of a (vector-valued) function at `ζ_k = e^{i(θ₀ + 2πk/N)}`.
///
/// Matrix-valued functions are stored with their entries flattened into components.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFunction {
    offset: f64,
    /// `values[c][k]`: component `c` at grid point `k`.
    values: Vec<Vec<C64>>,
}

/// `2πk/N + offset` for `k = 0..N`.
pub fn grid_angles(n: usize, offset: f64) -> Vec<f64> {
    (0..n).map(|k| offset + 2.0 * PI * (k as f64) / (n as f64)).collect()
}

pub(crate) fn check_grid(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::Domain("grid size must be a power of two, at least 8"));
    }
    Ok(())
}

impl BoundaryFunction {
    /// `f` receives `ζ = e^{iθ}` and returns all components.
    pub fn sample(n: usize, offset: f64, mut f: impl FnMut(C64) -> Vec<C64>) -> Result<Self> {
        check_grid(n)?;
        let mut values: Vec<Vec<C64>> = Vec::new();
        for (k, theta) in grid_angles(n, offset).into_iter().enumerate() {
            let row = f(C64::from_polar(1.0, theta));
            if k == 0 {
                values = vec![Vec::with_capacity(n); row.len()];
            } else if row.len() != values.len() {
                return Err(Error::DimensionMismatch { expected: values.len(), found: row.len() });
            }
            for (c, z) in row.into_iter().enumerate() {
                values[c].push(z);
            }
        }
        Ok(Self { offset, values })
    }

    /// Builds from per-component sample series on the unrotated grid.
    pub fn from_components(values: Vec<Vec<C64>>) -> Result<Self> {
        let n = values.first().map_or(0, Vec::len);
        check_grid(n)?;
        if let Some(bad) = values.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(Self { offset: 0.0, values })
    }

    pub fn n(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn components(&self) -> usize {
        self.values.len()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn component(&self, c: usize) -> &[C64] {
        &self.values[c]
    }

    /// Fourier coefficients `f̂(n)` of every component, index `n mod N`,
    /// referred to the grid origin `θ₀` (so a rotated grid gives the same
    /// coefficients up to a phase `e^{inθ₀}`).
    pub fn coefficients(&self) -> Vec<Vec<C64>> {
        let n = self.n();
        self.values
            .iter()
            .map(|v| {
                let mut data = v.clone();
                fft(&mut data, false);
                for (idx, z) in data.iter_mut().enumerate() {
                    let freq = signed_frequency(idx, n) as f64;
                    *z *= C64::from_polar(1.0 / (n as f64), -freq * self.offset);
                }
                data
            })
            .collect()
    }

    /// `max_{n ∈ [−N/2, −1]} |f̂(n)|` over all components divided by the
    /// largest coefficient sum `Σ_n |f̂(n)|` of a component, zero for the
    /// zero function. Zero means `f` extends holomorphically to the disc, up
    /// to aliasing. The ratio lies in `[0, 1]` and depends only on coefficient
    /// moduli, so it does not change when the grid is rotated.
    pub fn holomorphic_extension_defect(&self) -> f64 {
        holomorphic_extension_defect(self)
    }
}

/// Frequency represented by FFT index `idx`: `0..N/2−1` nonnegative,
/// `N/2..N−1` negative (Nyquist counted as `−N/2`).
pub fn signed_frequency(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

pub fn holomorphic_extension_defect(f: &BoundaryFunction) -> f64 {
    let n = f.n();
    let coeffs = f.coefficients();
    let total = coeffs.iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    if total == 0.0 {
        return 0.0;
    }
    let neg = coeffs.iter().flat_map(|c| c[n / 2..].iter()).map(|z| z.norm()).fold(0.0, f64::max);
    neg / total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn fft_matches_direct_sum() {
        let n = 16;
        let x: Vec<C64> = (0..n).map(|k| c((k as f64).sin() + 0.3, (k * k) as f64 * 0.01)).collect();
        let mut y = x.clone();
        fft(&mut y, false);
        for (m, ym) in y.iter().enumerate() {
            let direct: C64 = x
                .iter()
                .enumerate()
                .map(|(k, xk)| xk * C64::from_polar(1.0, -2.0 * PI * (m * k) as f64 / n as f64))
                .sum();
            assert!((ym - direct).norm() < 1e-12);
        }
        fft(&mut y, true);
        for (a, b) in y.iter().zip(&x) {
            assert!((a / (n as f64) - b).norm() < 1e-14);
        }
    }

    #[test]
    fn defect_examples() {
        let square = BoundaryFunction::sample(64, 0.0, |z| vec![z * z]).unwrap();
        assert!(square.holomorphic_extension_defect() < 1e-15);
        let coeffs = square.coefficients();
        assert!((coeffs[0][2] - c(1.0, 0.0)).norm() < 1e-14);

        let bar = BoundaryFunction::sample(64, 0.0, |z| vec![z.conj()]).unwrap();
        assert!((bar.holomorphic_extension_defect() - 1.0).abs() < 1e-14);

        // cos θ: ½ at n = ±1
        let re = BoundaryFunction::sample(64, 0.0, |z| vec![c(z.re, 0.0)]).unwrap();
        assert!((re.holomorphic_extension_defect() - 0.5).abs() < 1e-14);
        let coeffs = re.coefficients();
        assert!((coeffs[0][1].re - 0.5).abs() < 1e-14 && (coeffs[0][63].re - 0.5).abs() < 1e-14);

        let zero = BoundaryFunction::sample(16, 0.0, |_| vec![c(0.0, 0.0); 3]).unwrap();
        assert_eq!(zero.holomorphic_extension_defect(), 0.0);
    }

    #[test]
    fn rotated_grid_gives_same_coefficients() {
        let f = |z: C64| vec![z * z * 0.5 + z.conj() * c(0.0, 0.2) + c(1.0, 0.0), (z * 3.0).exp()];
        let a = BoundaryFunction::sample(128, 0.0, f).unwrap();
        let b = BoundaryFunction::sample(128, 0.7, f).unwrap();
        for (ca, cb) in a.coefficients().iter().zip(&b.coefficients()) {
            for (x, y) in ca.iter().zip(cb) {
                assert!((x - y).norm() < 1e-12);
            }
        }
        assert!((a.holomorphic_extension_defect() - b.holomorphic_extension_defect()).abs() < 1e-12);
    }

    #[test]
    fn bad_grids() {
        assert!(BoundaryFunction::sample(12, 0.0, |z| vec![z]).is_err());
        assert!(BoundaryFunction::sample(4, 0.0, |z| vec![z]).is_err());
        assert!(BoundaryFunction::from_components(vec![vec![c(0.0, 0.0); 8], vec![c(0.0, 0.0); 16]]).is_err());
    }
}
