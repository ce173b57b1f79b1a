//! Dense linear solves: complex LU with partial pivoting and a real
//! column-pivoted QR least-squares solver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// Packed LU factors of a square complex matrix.
#[derive(Clone, Debug)]
pub struct ComplexLu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl ComplexLu {
    /// Factorizes `a`; a zero pivot gives [`Error::Singular`].
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let (piv, best) =
                (col..n)
                    .map(|r| (r, lu[(r, col)].norm()))
                    .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                return Err(Error::Singular);
            }
            if piv != col {
                for j in 0..n {
                    let t = lu[(col, j)];
                    lu[(col, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
                perm.swap(col, piv);
                sign = -sign;
            }
            let d = lu[(col, col)];
            for r in col + 1..n {
                let f = lu[(r, col)] / d;
                lu[(r, col)] = f;
                if !f.is_zero() {
                    for j in col + 1..n {
                        let u = lu[(col, j)];
                        lu[(r, j)] -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.rows();
        (0..n).fold(C64::new(self.sign, 0.0), |acc, i| acc * self.lu[(i, i)])
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_matrix(&self, b: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            out.set_col(j, &self.solve(&b.col(j)));
        }
        out
    }

    pub fn inverse(&self) -> CMatrix {
        self.solve_matrix(&CMatrix::identity(self.lu.rows()))
    }
}

pub fn det(a: &CMatrix) -> Result<C64> {
    match ComplexLu::new(a) {
        Ok(lu) => Ok(lu.det()),
        Err(Error::Singular) => Ok(C64::zero()),
        Err(e) => Err(e),
    }
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    Ok(ComplexLu::new(a)?.inverse())
}

pub fn solve_complex(a: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    Ok(ComplexLu::new(a)?.solve(b))
}

/// Row-major dense real matrix, used for the real-linear systems.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub x: Vec<f64>,
    /// `‖A x − b‖₂`.
    pub residual: f64,
    pub rank: usize,
}

/// Least-squares solve of `A x = b` by Householder QR with column pivoting.
///
/// Full column rank returns the least-squares minimizer, consistent or not.
/// A rank-deficient system returns a basic solution if it is consistent to
/// `1e-9 · (‖A‖·‖x‖ + ‖b‖)` and [`Error::NoSolution`] otherwise.
pub fn solve_linear_real(a: &RealMatrix, b: &[f64]) -> Result<LinearSolution> {
    let (rows, cols) = (a.rows(), a.cols());
    if b.len() != rows {
        return Err(Error::DimensionMismatch { expected: rows, found: b.len() });
    }
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut col_norms: Vec<f64> = (0..cols).map(|j| (0..rows).map(|i| r[(i, j)].powi(2)).sum::<f64>()).collect();
    let a_norm = col_norms.iter().sum::<f64>().sqrt();
    let steps = rows.min(cols);
    let mut rank = 0;
    let rank_tol = 1e-12 * a_norm.max(f64::MIN_POSITIVE);

    for k in 0..steps {
        // pivot: largest remaining column norm
        let (p, _) = (k..cols).map(|j| (j, col_norms[j])).fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if p != k {
            for i in 0..rows {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, p)];
                r[(i, p)] = t;
            }
            perm.swap(k, p);
            col_norms.swap(k, p);
        }
        let alpha_sq: f64 = (k..rows).map(|i| r[(i, k)].powi(2)).sum();
        let alpha = alpha_sq.sqrt();
        if alpha <= rank_tol {
            break;
        }
        rank += 1;
        let beta = if r[(k, k)] >= 0.0 { -alpha } else { alpha };
        let mut hv: Vec<f64> = (k..rows).map(|i| r[(i, k)]).collect();
        hv[0] -= beta;
        let hv_sq: f64 = hv.iter().map(|x| x * x).sum();
        if hv_sq > 0.0 {
            for j in k..cols {
                let dot: f64 = (k..rows).map(|i| hv[i - k] * r[(i, j)]).sum();
                let f = 2.0 * dot / hv_sq;
                for i in k..rows {
                    r[(i, j)] -= f * hv[i - k];
                }
            }
            let dot: f64 = (k..rows).map(|i| hv[i - k] * qtb[i]).sum();
            let f = 2.0 * dot / hv_sq;
            for i in k..rows {
                qtb[i] -= f * hv[i - k];
            }
        }
        for j in k + 1..cols {
            col_norms[j] = (k + 1..rows).map(|i| r[(i, j)].powi(2)).sum();
        }
    }

    let mut y = vec![0.0; cols];
    for i in (0..rank).rev() {
        let mut s = qtb[i];
        for j in i + 1..rank {
            s -= r[(i, j)] * y[j];
        }
        y[i] = s / r[(i, i)];
    }
    let mut x = vec![0.0; cols];
    for (j, &p) in perm.iter().enumerate() {
        x[p] = y[j];
    }
    let ax = a.mul_vec(&x);
    let residual = ax.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
    if rank < cols {
        let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if residual > 1e-9 * (a_norm * x_norm + b_norm) {
            return Err(Error::NoSolution { residual });
        }
    }
    Ok(LinearSolution { x, residual, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{normal, random_complex, seeded};

    #[test]
    fn identity_system() {
        let b = [1.0, -2.0, 3.5];
        let s = solve_linear_real(&RealMatrix::identity(3), &b).unwrap();
        assert_eq!(s.x, b);
        assert_eq!(s.residual, 0.0);
    }

    #[test]
    fn scalar_system() {
        let a = RealMatrix::from_fn(1, 1, |_, _| 2.0);
        let s = solve_linear_real(&a, &[6.0]).unwrap();
        assert!((s.x[0] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn random_well_conditioned() {
        let mut rng = seeded(11);
        for _ in 0..10 {
            let a = RealMatrix::from_fn(8, 8, |i, j| if i == j { 6.0 } else { 0.0 } + normal(&mut rng));
            let b: Vec<f64> = (0..8).map(|_| normal(&mut rng)).collect();
            let s = solve_linear_real(&a, &b).unwrap();
            assert!(s.residual <= 1e-10, "residual {}", s.residual);
            assert_eq!(s.rank, 8);
        }
    }

    #[test]
    fn overdetermined_least_squares() {
        // inconsistent line fit; oracle from the normal equations
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 8.0];
        let a = RealMatrix::from_fn(4, 2, |i, j| if j == 0 { xs[i] } else { 1.0 });
        let s = solve_linear_real(&a, &ys).unwrap();
        // normal equations: [14 6; 6 4] [m; c] = [37; 17]
        let (m, c) = ((4.0 * 37.0 - 6.0 * 17.0) / 20.0, (14.0 * 17.0 - 6.0 * 37.0) / 20.0);
        assert!((s.x[0] - m).abs() < 1e-12 && (s.x[1] - c).abs() < 1e-12);
        assert!(s.residual > 0.0);
    }

    #[test]
    fn inconsistent_rank_deficient() {
        let a = RealMatrix::from_fn(2, 2, |_, j| if j == 0 { 1.0 } else { 2.0 });
        match solve_linear_real(&a, &[1.0, 2.0]) {
            Err(Error::NoSolution { residual }) => assert!(residual > 0.1),
            other => panic!("{other:?}"),
        }
        let ok = solve_linear_real(&a, &[3.0, 3.0]).unwrap();
        assert_eq!(ok.rank, 1);
        assert!(ok.residual < 1e-12);
    }

    #[test]
    fn lu_roundtrip() {
        let mut rng = seeded(3);
        let a = CMatrix::from_fn(5, 5, |_, _| random_complex(&mut rng));
        let b: Vec<C64> = (0..5).map(|_| random_complex(&mut rng)).collect();
        let x = solve_complex(&a, &b).unwrap();
        let r = a.mul_vec(&x);
        for (u, v) in r.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
        let d = det(&CMatrix::from_real_diagonal(&[2.0, 3.0, -1.0])).unwrap();
        assert!((d - C64::new(-6.0, 0.0)).norm() < 1e-15);
        assert_eq!(det(&CMatrix::zeros(2, 2)).unwrap(), C64::zero());
    }
}
