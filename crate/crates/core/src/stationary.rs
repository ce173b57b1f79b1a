//! Lift parameters, the pencil `P = Σ λ_j A_j`, `Q = Σ c_j A_j`, the stable
//! solvent of `P* X² + 2 Q X + P = 0`, Krylov spans `S(X, v)`, the rank test
//! for defective discs and the search for non-defective stationary pairs.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::levi::{is_levi_generating, LeviForm};
use crate::numlin::{
    eig_hermitian, inner, inverse, real_norm, real_rank, spectral_radius, vec_norm, CMatrix, ComplexLu,
    EigenDecomposition, HermitianMatrix, C64, DEFAULT_RANK_TOL,
};
use crate::sample::{random_unit_real, seeded};

/// `(λ, c)`: the lift boundary density is `Re(λ ζ + c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftParams {
    pub lambda: Vec<C64>,
    pub c: Vec<f64>,
}

impl LiftParams {
    pub fn new(lambda: Vec<C64>, c: Vec<f64>) -> Self {
        assert_eq!(lambda.len(), c.len(), "lambda and c must both have length k");
        Self { lambda, c }
    }

    /// Real `λ`.
    pub fn real(lambda: &[f64], c: Vec<f64>) -> Self {
        Self::new(lambda.iter().map(|&x| C64::new(x, 0.0)).collect(), c)
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    /// `|λ| + |c|` (Euclidean norms).
    pub fn size(&self) -> f64 {
        vec_norm(&self.lambda) + real_norm(&self.c)
    }

    /// `Re(λ_j ζ + c_j)` at `ζ = e^{iθ}`.
    pub fn density(&self, theta: f64) -> Vec<f64> {
        let z = C64::from_polar(1.0, theta);
        self.lambda.iter().zip(&self.c).map(|(l, c)| (l * z).re + c).collect()
    }
}

/// `P = Σ λ_j A_j` and `Q = Σ c_j A_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticPencil {
    p: CMatrix,
    q: HermitianMatrix,
}

impl QuadraticPencil {
    pub fn new(p: CMatrix, q: HermitianMatrix) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::NotSquare { rows: p.rows(), cols: p.cols() });
        }
        if p.rows() != q.dim() {
            return Err(Error::DimensionMismatch { expected: q.dim(), found: p.rows() });
        }
        Ok(Self { p, q })
    }

    pub fn from_levi(l: &LeviForm, params: &LiftParams) -> Self {
        let p = l.complex_combination(&params.lambda);
        let q = l.combination(&params.c);
        debug_assert!({
            let conj: Vec<C64> = params.lambda.iter().map(|z| z.conj()).collect();
            (&l.complex_combination(&conj) - &p.adjoint()).max_abs() <= 1e-12 * (1.0 + p.max_abs())
        });
        Self { p, q }
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    pub fn q(&self) -> &HermitianMatrix {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// `‖P‖_F + ‖Q‖_F`.
    pub fn scale(&self) -> f64 {
        self.p.frobenius_norm() + self.q.as_matrix().frobenius_norm()
    }

    /// `B(θ) = Q + ½(e^{iθ} P + e^{-iθ} P*) = Σ_j Re(λ_j e^{iθ} + c_j) A_j`.
    pub fn circle_matrix(&self, theta: f64) -> HermitianMatrix {
        let z = C64::from_polar(0.5, theta);
        let mut b = self.q.as_matrix().clone();
        b.axpy(z, &self.p);
        b.axpy(z.conj(), &self.p.adjoint());
        HermitianMatrix::symmetrize(&b)
    }

    /// `P* X² + 2 Q X + P`.
    pub fn residual(&self, x: &CMatrix) -> CMatrix {
        let x2 = x * x;
        let mut r = &self.p.adjoint() * &x2;
        r.axpy(C64::new(2.0, 0.0), &(self.q.as_matrix() * x));
        &r + &self.p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Positivity {
    /// `min_eig − margin > eps · (|λ| + |c|)`.
    pub ok: bool,
    /// Smallest eigenvalue of `B(θ)` over the grid.
    pub min_eig: f64,
    /// Lipschitz allowance `‖P‖_F · π / grid_n` between grid points.
    pub margin: f64,
    pub threshold: f64,
}

pub const DEFAULT_GRID_N: usize = 256;
pub const DEFAULT_POSITIVITY_EPS: f64 = 1e-6;

/// Checks `Σ Re(λ_j ζ + c_j) A_j > eps (|λ| + |c|) I` on the whole unit circle.
///
/// `θ ↦ B(θ)` is `‖P‖`-Lipschitz, so subtracting `‖P‖ π / grid_n` from the
/// grid minimum bounds the minimum over the circle.
pub fn circle_positivity(l: &LeviForm, params: &LiftParams, grid_n: usize, eps: f64) -> Result<Positivity> {
    if grid_n < 16 {
        return Err(Error::Domain("circle positivity needs at least 16 grid points"));
    }
    let pencil = QuadraticPencil::from_levi(l, params);
    let mut min_eig = f64::INFINITY;
    for i in 0..grid_n {
        let theta = 2.0 * PI * (i as f64) / (grid_n as f64);
        min_eig = min_eig.min(eig_hermitian(&pencil.circle_matrix(theta))?.min());
    }
    let margin = pencil.p.frobenius_norm() * PI / (grid_n as f64);
    let threshold = eps * params.size();
    Ok(Positivity { ok: min_eig - margin > threshold, min_eig, margin, threshold })
}

/// The solvent with spectrum in the open unit disc.
#[derive(Clone, Debug, PartialEq)]
pub struct StableSolution {
    pub x: CMatrix,
    /// `‖P* X² + 2 Q X + P‖_F`.
    pub residual: f64,
    pub spectral_radius: f64,
    pub iterations: usize,
    pub newton_steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    /// Stop once the residual is at most `tol · (‖P‖_F + ‖Q‖_F)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 500 }
    }
}

/// Solves `P* X² + 2 Q X + P = 0` for the solvent with `ρ(X) < 1`.
///
/// Fixed-point iteration `X ← −½ Q⁻¹ (P + P* X²)` from `X₀ = −½ Q⁻¹ P`; if it
/// stalls, Newton steps on the residual map finish the job. The spectral
/// radius is checked afterwards.
pub fn solve_quadratic(pencil: &QuadraticPencil, settings: &SolverSettings) -> Result<StableSolution> {
    const STALL_WINDOW: usize = 25;
    const MAX_NEWTON: usize = 60;
    let m = pencil.dim();
    let target = settings.tol * pencil.scale();
    let q_inv = inverse(pencil.q.as_matrix())?;
    let p_adj = pencil.p.adjoint();
    let minus_half_qinv = q_inv.scale_real(-0.5);

    let mut x = &minus_half_qinv * &pencil.p;
    let mut res = pencil.residual(&x).frobenius_norm();
    let mut iterations = 0;
    let mut best = res;
    let mut since_best = 0;
    while res > target && iterations < settings.max_iter {
        let mut rhs = &p_adj * &(&x * &x);
        rhs = &rhs + &pencil.p;
        let next = &minus_half_qinv * &rhs;
        iterations += 1;
        if !next.is_finite() {
            break;
        }
        x = next;
        res = pencil.residual(&x).frobenius_norm();
        if res < 0.5 * best {
            best = res;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW {
                break;
            }
        }
    }

    let mut newton_steps = 0;
    while res > target && newton_steps < MAX_NEWTON {
        // dF[H] = P*(X H + H X) + 2 Q H, vectorized column-major over H
        let n2 = m * m;
        let basis_response = |a: usize, b: usize| {
            let mut h = CMatrix::zeros(m, m);
            h[(a, b)] = C64::new(1.0, 0.0);
            let mut d = &p_adj * &(&(&x * &h) + &(&h * &x));
            d.axpy(C64::new(2.0, 0.0), &(pencil.q.as_matrix() * &h));
            d
        };
        let mut jac = CMatrix::zeros(n2, n2);
        for b in 0..m {
            for a in 0..m {
                let d = basis_response(a, b);
                let col = b * m + a;
                for jb in 0..m {
                    for ja in 0..m {
                        jac[(jb * m + ja, col)] = d[(ja, jb)];
                    }
                }
            }
        }
        let f = pencil.residual(&x);
        let rhs: Vec<C64> = (0..n2).map(|i| -f[(i % m, i / m)]).collect();
        let step = match ComplexLu::new(&jac) {
            Ok(lu) => lu.solve(&rhs),
            Err(_) => break,
        };
        for (i, s) in step.iter().enumerate() {
            x[(i % m, i / m)] += s;
        }
        newton_steps += 1;
        let new_res = pencil.residual(&x).frobenius_norm();
        if !new_res.is_finite() {
            break;
        }
        res = new_res;
    }

    if res.is_nan() || res > target {
        return Err(Error::NoConvergence {
            what: "quadratic matrix equation",
            iterations: iterations + newton_steps,
            residual: res,
        });
    }
    let rho = spectral_radius(&x)?;
    if rho >= 1.0 {
        return Err(Error::StabilityViolation { spectral_radius: rho });
    }
    Ok(StableSolution { x, residual: res, spectral_radius: rho, iterations, newton_steps })
}

/// Orthonormal basis of `S(X, v) = span_ℂ{X^ℓ v : ℓ ≥ 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrylovSpan {
    /// `m × d`, orthonormal columns.
    pub basis: CMatrix,
    pub dim: usize,
}

impl KrylovSpan {
    pub fn vectors(&self) -> Vec<Vec<C64>> {
        (0..self.dim).map(|i| self.basis.col(i)).collect()
    }
}

pub const DEFAULT_KRYLOV_TOL: f64 = 1e-9;

/// Arnoldi with two passes of modified Gram–Schmidt. The next direction is
/// `X q_last`; the span is declared saturated once its component orthogonal to
/// the current basis is at most `tol · ‖X‖_F`.
pub fn krylov_span(x: &CMatrix, v: &[C64], tol: f64) -> Result<KrylovSpan> {
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    let m = x.rows();
    if v.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: v.len() });
    }
    let vn = vec_norm(v);
    if vn == 0.0 {
        return Err(Error::Domain("Krylov span of the zero vector"));
    }
    let xn = x.frobenius_norm();
    let mut basis: Vec<Vec<C64>> = vec![v.iter().map(|z| z / vn).collect()];
    while basis.len() < m {
        let mut w = x.mul_vec(basis.last().unwrap());
        for _ in 0..2 {
            for q in &basis {
                let d = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= d * qi;
                }
            }
        }
        let wn = vec_norm(&w);
        if wn <= tol * xn || wn == 0.0 {
            break;
        }
        basis.push(w.into_iter().map(|z| z / wn).collect());
    }
    let dim = basis.len();
    Ok(KrylovSpan { basis: CMatrix::from_columns(m, &basis), dim })
}

/// Verdict of a defectiveness test with its evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectReport {
    pub defective: bool,
    pub rank: usize,
    pub k: usize,
    /// Unit `μ ∈ ℝᵏ` with `Σ μ_j A_j` vanishing on `S`, present iff defective.
    pub witness: Option<Vec<f64>>,
    /// Smallest accepted relative pivot of the rank test.
    pub margin: f64,
    pub tol: f64,
    /// Every operator vanished (rank 0), so any `μ` is a witness.
    pub degenerate: bool,
}

impl DefectReport {
    pub(crate) fn from_vectors(vectors: &[Vec<f64>], tol: f64) -> Self {
        let r = real_rank(vectors, tol);
        let k = vectors.len();
        DefectReport {
            defective: r.rank < k,
            rank: r.rank,
            k,
            margin: r.margin(),
            witness: r.witness,
            tol,
            degenerate: r.rank == 0,
        }
    }
}

/// Are `A_1|_S, …, A_k|_S : S → ℂᵐ` linearly dependent over `ℝ`?
///
/// Operator `j` becomes the real vector `(Re A_j s_1, Im A_j s_1, …, Re A_j s_d, Im A_j s_d)`
/// over the orthonormal basis `s_i` of `S`.
pub fn defect_test(l: &LeviForm, span: &KrylovSpan, tol: f64) -> DefectReport {
    assert!(span.dim >= 1, "empty span");
    let basis = span.vectors();
    let vectors: Vec<Vec<f64>> = l
        .matrices()
        .iter()
        .map(|a| {
            let mut out = Vec::with_capacity(2 * l.m() * span.dim);
            for s in &basis {
                for z in a.as_matrix().mul_vec(s) {
                    out.push(z.re);
                    out.push(z.im);
                }
            }
            out
        })
        .collect();
    DefectReport::from_vectors(&vectors, tol)
}

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct DistinctEigenvalues {
    /// Number of clusters `s(t)`.
    pub count: usize,
    /// Index of the first (lowest) eigenvalue of each cluster.
    pub cluster_starts: Vec<usize>,
    pub decomposition: EigenDecomposition,
}

/// Number of distinct eigenvalues of `A(t) = Σ t_j A_j`: ascending
/// eigenvalues separated by more than `cluster_tol · ‖A(t)‖₂` start a new cluster.
pub fn count_distinct_eigs(l: &LeviForm, t: &[f64], cluster_tol: f64) -> Result<DistinctEigenvalues> {
    let d = eig_hermitian(&l.combination(t))?;
    let gap = cluster_tol * d.spectral_norm();
    let mut starts = vec![0];
    for i in 1..d.eigenvalues.len() {
        if d.eigenvalues[i] - d.eigenvalues[i - 1] > gap {
            starts.push(i);
        }
    }
    Ok(DistinctEigenvalues { count: starts.len(), cluster_starts: starts, decomposition: d })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchSettings {
    pub samples: usize,
    pub seed: u64,
    pub restarts: usize,
    pub rank_tol: f64,
    pub cluster_tol: f64,
    pub krylov_tol: f64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            samples: 200,
            seed: 0,
            restarts: 5,
            rank_tol: DEFAULT_RANK_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            krylov_tol: DEFAULT_KRYLOV_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NondefectiveSearch {
    /// Unit real direction `λ`; `X = Σ λ_j A_j`.
    pub lambda_dir: Vec<f64>,
    /// Sum of one unit eigenvector per distinct eigenvalue of `X`.
    pub v: Vec<C64>,
    /// Maximal number of distinct eigenvalues found.
    pub r: usize,
    pub span_dim: usize,
    pub report: DefectReport,
    pub restarts_used: usize,
}

/// Constructive search for a non-defective pair.
///
/// Picks `λ` maximizing the number `r` of distinct eigenvalues of `A(λ)` over
/// random unit directions, and `v = v_1 + … + v_r` with one eigenvector per
/// distinct eigenvalue, so `S(A(λ), v)` is spanned by those eigenvectors. For
/// a Levi-generating form the `A_j` stay independent on that span. Clustering
/// artifacts are caught by the span-dimension check and the rank test, and
/// trigger a retry with fresh samples.
pub fn find_nondefective(l: &LeviForm, settings: &SearchSettings) -> Result<NondefectiveSearch> {
    if !is_levi_generating(l, settings.rank_tol) {
        return Err(Error::NotLeviGenerating);
    }
    let mut rng = seeded(settings.seed);
    let (mut best_r, mut best_rank) = (0, 0);
    for attempt in 0..=settings.restarts {
        let mut winner: Option<(usize, Vec<f64>)> = None;
        for _ in 0..settings.samples.max(1) {
            let t = random_unit_real(&mut rng, l.k());
            let s = count_distinct_eigs(l, &t, settings.cluster_tol)?.count;
            if winner.as_ref().is_none_or(|w| s > w.0) {
                winner = Some((s, t));
            }
        }
        let (r, lambda_dir) = winner.expect("at least one sample");
        let distinct = count_distinct_eigs(l, &lambda_dir, settings.cluster_tol)?;
        let mut v = vec![C64::new(0.0, 0.0); l.m()];
        for &i in &distinct.cluster_starts {
            for (vi, ei) in v.iter_mut().zip(distinct.decomposition.eigenvector(i)) {
                *vi += ei;
            }
        }
        let x = l.combination(&lambda_dir).into_matrix();
        let span = krylov_span(&x, &v, settings.krylov_tol)?;
        best_r = best_r.max(r);
        if span.dim != r {
            continue;
        }
        let report = defect_test(l, &span, settings.rank_tol);
        best_rank = best_rank.max(report.rank);
        if !report.defective {
            return Ok(NondefectiveSearch { lambda_dir, v, r, span_dim: span.dim, report, restarts_used: attempt });
        }
    }
    Err(Error::SearchFailed { best_r, best_rank, k: l.k() })
}

/// Everything a disc constructor needs: `(λ, c, w₀, y₀, v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryPairData {
    pub lambda: Vec<C64>,
    pub c: Vec<f64>,
    pub w0: Vec<C64>,
    pub y0: Vec<f64>,
    pub v: Vec<C64>,
}

impl StationaryPairData {
    pub fn lift(&self) -> LiftParams {
        LiftParams::new(self.lambda.clone(), self.c.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssembledPair {
    pub data: StationaryPairData,
    /// Dyadic factor applied to `lambda_dir`.
    pub scale: f64,
    pub positivity: Positivity,
}

const MAX_HALVINGS: usize = 40;

/// Largest dyadic `t ∈ {1, ½, ¼, …}` (down to `2⁻⁴⁰`) for which `(t λ, c)` is
/// circle-positive, with the parameters and the positivity record.
pub fn shrink_to_positive(
    l: &LeviForm,
    lambda: &[C64],
    c: &[f64],
    grid_n: usize,
    eps: f64,
) -> Result<(f64, LiftParams, Positivity)> {
    let mut t = 1.0;
    let mut last_min = f64::NEG_INFINITY;
    for _ in 0..=MAX_HALVINGS {
        let params = LiftParams::new(lambda.iter().map(|z| z * t).collect(), c.to_vec());
        let pos = circle_positivity(l, &params, grid_n, eps)?;
        if pos.ok {
            return Ok((t, params, pos));
        }
        last_min = pos.min_eig;
        t *= 0.5;
    }
    Err(Error::InconsistentWitness { min_eigenvalue: last_min })
}

/// Largest dyadic `t ∈ {1, ½, ¼, …}` such that `(t · lambda_dir, c)` is
/// circle-positive, with `w₀ = 0`, `y₀ = 0` and `v` scaled to norm at most `shrink`.
pub fn assemble_pair_params(
    l: &LeviForm,
    lambda_dir: &[f64],
    v: &[C64],
    c: &[f64],
    shrink: f64,
    grid_n: usize,
    eps: f64,
) -> Result<AssembledPair> {
    let vn = vec_norm(v);
    let v: Vec<C64> = if vn > shrink { v.iter().map(|z| z * (shrink / vn)).collect() } else { v.to_vec() };
    let dir: Vec<C64> = lambda_dir.iter().map(|&x| C64::new(x, 0.0)).collect();
    let (scale, params, positivity) = shrink_to_positive(l, &dir, c, grid_n, eps)?;
    let data = StationaryPairData {
        lambda: params.lambda,
        c: c.to_vec(),
        w0: vec![C64::new(0.0, 0.0); l.m()],
        y0: vec![0.0; l.k()],
        v,
    };
    Ok(AssembledPair { data, scale, positivity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_complex_vector, random_pseudoconvex_form, random_unitary};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scalar_form() -> LeviForm {
        LeviForm::new(vec![HermitianMatrix::identity(1)]).unwrap()
    }

    fn sigma_x() -> HermitianMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(1.0, 0.0);
        HermitianMatrix::new(m, 0.0).unwrap()
    }

    fn identity_sigma_x() -> LeviForm {
        LeviForm::new(vec![HermitianMatrix::identity(2), sigma_x()]).unwrap()
    }

    #[test]
    fn positivity_examples() {
        let l = identity_sigma_x();
        let pos = circle_positivity(&l, &LiftParams::real(&[0.0, 0.0], vec![1.0, 0.0]), 256, 1e-6).unwrap();
        assert!(pos.ok);
        assert!((pos.min_eig - 1.0).abs() < 1e-14);

        // B(θ) = 1 + 0.6 cos θ, minimum 0.4 at θ = π
        let pos = circle_positivity(&scalar_form(), &LiftParams::real(&[0.6], vec![1.0]), 256, 1e-6).unwrap();
        assert!(pos.ok);
        assert!((pos.min_eig - 0.4).abs() < 1e-14);

        // |λ| > c: 1 + 1.2 cos θ < 0 at θ = π
        let pos = circle_positivity(&scalar_form(), &LiftParams::real(&[1.2], vec![1.0]), 256, 1e-6).unwrap();
        assert!(!pos.ok);
        assert!((pos.min_eig + 0.2).abs() < 1e-14);

        assert!(circle_positivity(&scalar_form(), &LiftParams::real(&[0.0], vec![1.0]), 8, 1e-6).is_err());
    }

    #[test]
    fn scalar_quadratic_closed_form() {
        // 0.6 X² + 2 X + 0.6 = 0: X = (-2 ± √(4 - 1.44)) / 1.2 = -1/3 or -3
        let disc = (4.0f64 - 4.0 * 0.36).sqrt();
        let roots = [(-2.0 + disc) / 1.2, (-2.0 - disc) / 1.2];
        assert!((roots[0] + 1.0 / 3.0).abs() < 1e-15 && (roots[1] + 3.0).abs() < 1e-14);
        let pencil = QuadraticPencil::from_levi(&scalar_form(), &LiftParams::real(&[0.6], vec![1.0]));
        let sol = solve_quadratic(&pencil, &SolverSettings::default()).unwrap();
        assert!((sol.x[(0, 0)] - c(roots[0], 0.0)).norm() < 1e-12);
        assert!(sol.spectral_radius < 1.0);
    }

    #[test]
    fn zero_lambda_gives_zero_solvent() {
        let l = identity_sigma_x();
        let pencil = QuadraticPencil::from_levi(&l, &LiftParams::real(&[0.0, 0.0], vec![1.0, 0.3]));
        let sol = solve_quadratic(&pencil, &SolverSettings::default()).unwrap();
        assert_eq!(sol.x, CMatrix::zeros(2, 2));
        assert_eq!(sol.residual, 0.0);
    }

    #[test]
    fn unstable_root_is_rejected() {
        // seeded near the wrong root: P* X² + 2QX + P with Q negative picks ρ > 1 branch
        let pencil =
            QuadraticPencil::new(CMatrix::from_real_diagonal(&[1.0]), HermitianMatrix::from_real_diagonal(&[-0.2]))
                .unwrap();
        match solve_quadratic(&pencil, &SolverSettings::default()) {
            Err(Error::StabilityViolation { .. }) | Err(Error::NoConvergence { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn newton_handles_slow_fixed_point() {
        // near the positivity boundary the fixed-point contraction factor tends to one
        let lambda = 0.99999;
        let pencil = QuadraticPencil::from_levi(&scalar_form(), &LiftParams::real(&[lambda], vec![1.0]));
        let sol = solve_quadratic(&pencil, &SolverSettings::default()).unwrap();
        let disc = (4.0f64 - 4.0 * lambda * lambda).sqrt();
        let want = (-2.0 + disc) / (2.0 * lambda);
        assert!((sol.x[(0, 0)].re - want).abs() < 1e-9, "{} vs {want}", sol.x[(0, 0)].re);
        assert!(sol.newton_steps > 0);
    }

    #[test]
    fn random_pencils_solve() {
        let mut rng = seeded(61);
        for _ in 0..20 {
            let l = random_pseudoconvex_form(&mut rng, 4, 6);
            let lambda: Vec<C64> = random_complex_vector(&mut rng, 6).into_iter().map(|z| z * 0.05).collect();
            let mut cc = vec![0.0; 6];
            cc[0] = 1.0;
            let params = LiftParams::new(lambda, cc);
            if !circle_positivity(&l, &params, 256, 1e-6).unwrap().ok {
                continue;
            }
            let pencil = QuadraticPencil::from_levi(&l, &params);
            let sol = solve_quadratic(&pencil, &SolverSettings::default()).unwrap();
            assert!(sol.residual <= 1e-10 * pencil.scale().powi(2).max(pencil.scale()));
            assert!(sol.spectral_radius < 1.0);
        }
    }

    #[test]
    fn krylov_examples() {
        let v = [c(0.3, -0.2), c(1.0, 0.5)];
        let s = krylov_span(&CMatrix::zeros(2, 2), &v, 1e-9).unwrap();
        assert_eq!(s.dim, 1);
        let x = CMatrix::from_real_diagonal(&[1.0, 2.0]);
        assert_eq!(krylov_span(&x, &[c(1.0, 0.0), c(1.0, 0.0)], 1e-9).unwrap().dim, 2);
        assert_eq!(krylov_span(&x, &[c(1.0, 0.0), c(0.0, 0.0)], 1e-9).unwrap().dim, 1);
        assert!(matches!(krylov_span(&x, &[c(0.0, 0.0); 2], 1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn krylov_invariances() {
        let mut rng = seeded(71);
        for _ in 0..10 {
            let x = CMatrix::from_fn(4, 4, |_, _| crate::sample::random_complex(&mut rng));
            let v = random_complex_vector(&mut rng, 4);
            let base = krylov_span(&x, &v, 1e-9).unwrap();
            let scaled: Vec<C64> = v.iter().map(|z| z * c(-3.0, 2.0)).collect();
            assert_eq!(krylov_span(&x, &scaled, 1e-9).unwrap().dim, base.dim);
            let u = random_unitary(&mut rng, 4);
            let xu = &(&u.adjoint() * &x) * &u;
            let vu = u.adjoint().mul_vec(&v);
            assert_eq!(krylov_span(&xu, &vu, 1e-9).unwrap().dim, base.dim);
            // orthonormal basis, X-invariant span
            let g = &base.basis.adjoint() * &base.basis;
            assert!((&g - &CMatrix::identity(base.dim)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn defect_examples() {
        let l = identity_sigma_x();
        let full = KrylovSpan { basis: CMatrix::identity(2), dim: 2 };
        let rep = defect_test(&l, &full, 1e-9);
        assert!(!rep.defective && rep.rank == 2 && rep.witness.is_none());

        let s = 1.0 / 2.0f64.sqrt();
        let line = KrylovSpan { basis: CMatrix::from_columns(2, &[vec![c(s, 0.0), c(s, 0.0)]]), dim: 1 };
        let rep = defect_test(&l, &line, 1e-9);
        assert!(rep.defective && rep.rank == 1);
        let w = rep.witness.unwrap();
        assert!((w[0].abs() - s).abs() < 1e-12 && (w[0] + w[1]).abs() < 1e-12);
    }

    #[test]
    fn k_above_2m_is_always_defective_on_a_line() {
        let mut rng = seeded(81);
        let l = crate::sample::random_form(&mut rng, 2, 5);
        for _ in 0..10 {
            let v = random_complex_vector(&mut rng, 2);
            let span = krylov_span(&CMatrix::zeros(2, 2), &v, 1e-9).unwrap();
            let rep = defect_test(&l, &span, 1e-9);
            assert!(rep.defective && rep.rank <= 4);
        }
    }

    #[test]
    fn distinct_eigenvalue_counts() {
        let l = identity_sigma_x();
        assert_eq!(count_distinct_eigs(&l, &[1.0, 0.0], 1e-6).unwrap().count, 1);
        assert_eq!(count_distinct_eigs(&l, &[0.0, 1.0], 1e-6).unwrap().count, 2);
        let mut rng = seeded(3);
        for _ in 0..10 {
            let t = random_unit_real(&mut rng, 2);
            let d = count_distinct_eigs(&l, &t, 1e-6).unwrap();
            assert_eq!(d.count, 2);
            // eigenvalues t1 ± |t2|
            assert!((d.decomposition.eigenvalues[0] - (t[0] - t[1].abs())).abs() < 1e-14);
            assert!((d.decomposition.eigenvalues[1] - (t[0] + t[1].abs())).abs() < 1e-14);
        }
    }

    #[test]
    fn search_examples() {
        let s = find_nondefective(&identity_sigma_x(), &SearchSettings::default()).unwrap();
        assert_eq!(s.r, 2);
        assert!(!s.report.defective);
        // v = e₊ + e₋ for the eigenvectors (1, ±1)/√2 up to phase: both components present
        let x = identity_sigma_x().combination(&s.lambda_dir).into_matrix();
        assert_eq!(krylov_span(&x, &s.v, 1e-9).unwrap().dim, 2);

        let s = find_nondefective(&scalar_form(), &SearchSettings::default()).unwrap();
        assert_eq!((s.r, s.report.rank), (1, 1));

        let bad = LeviForm::new(vec![HermitianMatrix::identity(1), HermitianMatrix::identity(1)]).unwrap();
        assert_eq!(find_nondefective(&bad, &SearchSettings::default()), Err(Error::NotLeviGenerating));
    }

    #[test]
    fn assemble_examples() {
        // Q = I: positivity iff t ‖P_dir‖ < 1 (up to the grid margin)
        let l = identity_sigma_x();
        let a =
            assemble_pair_params(&l, &[0.0, 1.0], &[c(1.0, 0.0), c(0.0, 0.0)], &[1.0, 0.0], 0.5, 256, 1e-6).unwrap();
        assert!(a.scale < 1.0 && a.scale >= 0.25, "{}", a.scale);
        assert!(a.positivity.ok);

        let s = assemble_pair_params(&scalar_form(), &[0.6], &[c(0.1, 0.0)], &[1.0], 0.5, 256, 1e-6).unwrap();
        assert_eq!(s.scale, 1.0);
        assert_eq!(s.data.lambda, vec![c(0.6, 0.0)]);
        let pencil = QuadraticPencil::from_levi(&scalar_form(), &s.data.lift());
        let sol = solve_quadratic(&pencil, &SolverSettings::default()).unwrap();
        assert!((sol.x[(0, 0)].re + 1.0 / 3.0).abs() < 1e-12);

        let neg = LeviForm::new(vec![HermitianMatrix::from_real_diagonal(&[1.0, -1.0])]).unwrap();
        assert!(matches!(
            assemble_pair_params(&neg, &[0.0], &[c(1.0, 0.0), c(0.0, 0.0)], &[1.0], 0.5, 256, 1e-6),
            Err(Error::InconsistentWitness { .. })
        ));
    }
}
