//! Numerical rank of a list of real vectors with a kernel witness.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::real_norm;

/// Outcome of [`real_rank`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    /// Unit vector `μ` with `‖Σ μ_j V_j‖ ≤ tol · scale`, present iff `rank < count`.
    pub witness: Option<Vec<f64>>,
    /// Residual norms of the accepted pivots, in pivot order, divided by `scale`.
    pub pivots: Vec<f64>,
    /// Largest input vector norm.
    pub scale: f64,
}

impl RankResult {
    /// Smallest accepted relative pivot; how far the accepted vectors are
    /// from dependence. Zero for rank 0.
    pub fn margin(&self) -> f64 {
        self.pivots.iter().copied().reduce(f64::min).unwrap_or(0.0)
    }
}

/// Rank of `vectors` by column-pivoted modified Gram–Schmidt.
///
/// A pivot whose residual norm is at most `tol · scale` counts as zero, where
/// `scale` is the largest input norm. All vectors must have equal length.
pub fn real_rank(vectors: &[Vec<f64>], tol: f64) -> RankResult {
    assert!(!vectors.is_empty(), "real_rank needs at least one vector");
    assert!(tol > 0.0, "tolerance must be positive");
    let len = vectors[0].len();
    assert!(vectors.iter().all(|v| v.len() == len), "vectors must have equal lengths");
    let count = vectors.len();

    let scale = vectors.iter().map(|v| real_norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        let mut w = vec![0.0; count];
        w[0] = 1.0;
        return RankResult { rank: 0, witness: Some(w), pivots: Vec::new(), scale };
    }

    let mut work: Vec<Vec<f64>> = vectors.to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut pivots = Vec::new();
    let mut remaining: Vec<usize> = (0..count).collect();
    let threshold = tol * scale;

    while !remaining.is_empty() {
        let (pos, best) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &j)| (pos, real_norm(&work[j])))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= threshold {
            break;
        }
        let j = remaining.remove(pos);
        let q: Vec<f64> = work[j].iter().map(|x| x / best).collect();
        for &l in &remaining {
            // two passes keep the residuals orthogonal to working precision
            for _ in 0..2 {
                let d: f64 = q.iter().zip(&work[l]).map(|(a, b)| a * b).sum();
                for (x, qi) in work[l].iter_mut().zip(&q) {
                    *x -= d * qi;
                }
            }
        }
        basis.push(q);
        pivot_cols.push(j);
        pivots.push(best / scale);
    }

    let rank = basis.len();
    let witness = if rank < count {
        // the dependent vector with the smallest residual
        let j = *remaining
            .iter()
            .min_by(|&&a, &&b| real_norm(&work[a]).total_cmp(&real_norm(&work[b])).then(a.cmp(&b)))
            .unwrap();
        // solve R x = Qᵀ V_j with R[a][b] = q_a · V_{pivot b}
        let y: Vec<f64> = basis.iter().map(|q| q.iter().zip(&vectors[j]).map(|(a, b)| a * b).sum()).collect();
        let mut x = vec![0.0; rank];
        for a in (0..rank).rev() {
            let mut s = y[a];
            for b in a + 1..rank {
                let rab: f64 = basis[a].iter().zip(&vectors[pivot_cols[b]]).map(|(u, v)| u * v).sum();
                s -= rab * x[b];
            }
            let raa: f64 = basis[a].iter().zip(&vectors[pivot_cols[a]]).map(|(u, v)| u * v).sum();
            x[a] = s / raa;
        }
        let mut mu = vec![0.0; count];
        for (b, &col) in pivot_cols.iter().enumerate() {
            mu[col] = x[b];
        }
        mu[j] = -1.0;
        Some(normalize_witness(mu))
    } else {
        None
    };
    RankResult { rank, witness, pivots, scale }
}

/// Unit norm, sign fixed so the largest-magnitude entry is positive.
pub(crate) fn normalize_witness(mut mu: Vec<f64>) -> Vec<f64> {
    let n = real_norm(&mu);
    let lead = mu.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    let s = if lead < 0.0 { -1.0 / n } else { 1.0 / n };
    for x in &mut mu {
        *x *= s;
    }
    mu
}
