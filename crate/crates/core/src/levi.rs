//! The vector-valued Levi form `A_1, …, A_k` of a quadric and the four
//! nondegeneracy conditions on it.
//!
//! Conventions:
//! * the quadric is `x_j = ⟨A_j w, w̄⟩ = w* A_j w` with the bilinear pairing
//!   `⟨a, b⟩ = Σ a_l b_l`;
//! * a Hermitian `m × m` matrix is flattened to `ℝ^{m²}` as its `m` real
//!   diagonal entries followed by the strict upper triangle in row-major
//!   order, each entry contributing `(re, im)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numlin::{
    det, eig_hermitian, inv_sqrt_hpd, real_norm, real_rank, CMatrix, HermitianMatrix, RealMatrix, C64, DEFAULT_RANK_TOL,
};
use crate::sample::{random_unit_real, seeded};
#[allow(unused_imports)]
use num_traits::Float;

/// Ordered family of `k ≥ 1` Hermitian `m × m` matrices.
///
/// `k ≤ m²` is not enforced; degenerate families are classified, not rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviForm {
    m: usize,
    matrices: Vec<HermitianMatrix>,
}

impl LeviForm {
    pub fn new(matrices: Vec<HermitianMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::Domain("a Levi form needs at least one matrix"));
        };
        let m = first.dim();
        if m == 0 {
            return Err(Error::Domain("CR dimension must be positive"));
        }
        if let Some(bad) = matrices.iter().find(|a| a.dim() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad.dim() });
        }
        Ok(Self { m, matrices })
    }

    /// CR dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Codimension.
    pub fn k(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, j: usize) -> &HermitianMatrix {
        &self.matrices[j]
    }

    /// `A(t) = Σ t_j A_j` for real `t`.
    pub fn combination(&self, t: &[f64]) -> HermitianMatrix {
        HermitianMatrix::real_combination(t, &self.matrices)
    }

    /// `Σ λ_j A_j` for complex `λ`; not Hermitian in general.
    pub fn complex_combination(&self, lambda: &[C64]) -> CMatrix {
        assert_eq!(lambda.len(), self.k(), "one coefficient per matrix");
        let mut acc = CMatrix::zeros(self.m, self.m);
        for (l, a) in lambda.iter().zip(&self.matrices) {
            acc.axpy(*l, a.as_matrix());
        }
        acc
    }

    /// Largest Frobenius norm among the `A_j`.
    pub fn scale(&self) -> f64 {
        self.matrices.iter().map(|a| a.as_matrix().frobenius_norm()).fold(0.0, f64::max)
    }

    /// `A_j ↦ R* A_j R`.
    pub fn congruence(&self, r: &CMatrix) -> Self {
        Self { m: r.cols(), matrices: self.matrices.iter().map(|a| a.congruence(r)).collect() }
    }

    /// `A_j ↦ Σ_l T[j][l] A_l` for a real `k × k` matrix `T`.
    pub fn recombine(&self, t: &RealMatrix) -> Self {
        let k = self.k();
        let matrices = (0..k)
            .map(|j| {
                let row: Vec<f64> = (0..k).map(|l| t[(j, l)]).collect();
                self.combination(&row)
            })
            .collect();
        Self { m: self.m, matrices }
    }

    /// `h_j(w) = w* A_j w` for every `j`.
    pub fn quadric(&self, w: &[C64]) -> Vec<f64> {
        self.matrices.iter().map(|a| a.quadratic_form(w)).collect()
    }
}

/// Flattening of a Hermitian matrix to `ℝ^{m²}` (see the module docs).
pub fn flatten_hermitian(a: &HermitianMatrix) -> Vec<f64> {
    let m = a.dim();
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        out.push(a[(i, i)].re);
    }
    for i in 0..m {
        for j in i + 1..m {
            out.push(a[(i, j)].re);
            out.push(a[(i, j)].im);
        }
    }
    out
}

/// The `A_j` are linearly independent over `ℝ`.
pub fn is_levi_generating(l: &LeviForm, tol: f64) -> bool {
    let flat: Vec<Vec<f64>> = l.matrices().iter().map(flatten_hermitian).collect();
    real_rank(&flat, tol).rank == l.k()
}

/// `∩_j ker A_j = {0}`: the stacked `(km) × m` matrix has full column rank.
pub fn is_levi_nondegenerate(l: &LeviForm, tol: f64) -> bool {
    let m = l.m();
    // complex column rank m  <=>  real rank 2m of the columns and their i-multiples
    let mut cols = Vec::with_capacity(2 * m);
    for c in 0..m {
        let mut re_im = Vec::with_capacity(2 * m * l.k());
        let mut i_times = Vec::with_capacity(2 * m * l.k());
        for a in l.matrices() {
            for r in 0..m {
                let z = a[(r, c)];
                re_im.push(z.re);
                re_im.push(z.im);
                i_times.push(-z.im);
                i_times.push(z.re);
            }
        }
        cols.push(re_im);
        cols.push(i_times);
    }
    real_rank(&cols, tol).rank == 2 * m
}

/// One-sided verdict: a witness certifies "yes", failure to find one is only
/// "probably no".
#[derive(Clone, Debug, PartialEq)]
pub enum NondegeneracyVerdict {
    Yes { c: Vec<f64>, det: f64 },
    ProbablyNo { samples: usize },
}

impl NondegeneracyVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Yes { .. })
    }
}

pub const DEFAULT_DET_SAMPLES: usize = 32;

/// Random search for `c` with `det(Σ c_j A_j) ≠ 0`.
///
/// `det` is a polynomial in `c`, so it is either identically zero or nonzero
/// at a random `c` with probability one. A sample counts when
/// `|det A(c)| > tol · ‖A(c)‖_F^m`.
pub fn is_strongly_nondegenerate(l: &LeviForm, samples: usize, seed: u64, tol: f64) -> NondegeneracyVerdict {
    let mut rng = seeded(seed);
    for _ in 0..samples {
        let c = random_unit_real(&mut rng, l.k());
        if let Some(d) = nondegenerate_at(l, &c, tol) {
            return NondegeneracyVerdict::Yes { c, det: d };
        }
    }
    NondegeneracyVerdict::ProbablyNo { samples }
}

fn nondegenerate_at(l: &LeviForm, c: &[f64], tol: f64) -> Option<f64> {
    let a = l.combination(c);
    let scale = a.as_matrix().frobenius_norm();
    if scale == 0.0 {
        return None;
    }
    let d = det(a.as_matrix()).ok()?.re;
    (d.abs() > tol * scale.powi(l.m() as i32)).then_some(d)
}

/// Outcome of the pseudoconvexity search. `Yes` carries a unit `c` with
/// `λ_min(Σ c_j A_j) > tol`.
#[derive(Clone, Debug, PartialEq)]
pub enum PseudoconvexVerdict {
    Yes { c: Vec<f64>, min_eigenvalue: f64 },
    NotFound { best_c: Vec<f64>, best_min_eigenvalue: f64 },
}

impl PseudoconvexVerdict {
    pub fn witness(&self) -> Option<&[f64]> {
        match self {
            Self::Yes { c, .. } => Some(c),
            Self::NotFound { .. } => None,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.witness().is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoconvexSearch {
    pub verdict: PseudoconvexVerdict,
    /// Best value found so far after each iteration of the winning start.
    pub history: Vec<f64>,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AscentSettings {
    pub iters: usize,
    pub starts: usize,
    /// Relative to [`LeviForm::scale`].
    pub tol: f64,
    pub seed: u64,
}

impl Default for AscentSettings {
    fn default() -> Self {
        Self { iters: 2000, starts: 8, tol: 1e-8, seed: 0 }
    }
}

fn min_eig_and_supergradient(l: &LeviForm, c: &[f64]) -> Result<(f64, Vec<f64>)> {
    let d = eig_hermitian(&l.combination(c))?;
    let u = d.eigenvector(0);
    let g = l.matrices().iter().map(|a| a.quadratic_form(&u)).collect();
    Ok((d.min(), g))
}

fn project_to_ball(c: &mut [f64]) {
    let n = real_norm(c);
    if n > 1.0 {
        c.iter_mut().for_each(|x| *x /= n);
    }
}

/// Maximizes the concave `f(c) = λ_min(Σ c_j A_j)` over the unit ball by
/// projected supergradient ascent with diminishing steps, from several starts.
///
/// The first start is the direction of `(tr A_j)_j`, the rest are random.
/// A supergradient at `c` is `(u* A_j u)_j` for a unit eigenvector `u` of the
/// smallest eigenvalue.
pub fn find_pseudoconvex_direction(l: &LeviForm, settings: &AscentSettings) -> Result<PseudoconvexSearch> {
    const PATIENCE: usize = 150;
    let k = l.k();
    let threshold = settings.tol * l.scale();
    let mut rng = seeded(settings.seed);

    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut total_iters = 0;
    for start in 0..settings.starts.max(1) {
        let traces: Vec<f64> = l.matrices().iter().map(|a| a.as_matrix().trace().re).collect();
        let tn = real_norm(&traces);
        let mut c = if start == 0 && tn > 0.0 {
            traces.iter().map(|t| t / tn).collect()
        } else {
            random_unit_real(&mut rng, k)
        };
        let (mut fc, mut g) = min_eig_and_supergradient(l, &c)?;
        let mut start_best = (fc, c.clone());
        let mut history = Vec::with_capacity(settings.iters);
        let mut stale = 0;
        for it in 0..settings.iters {
            total_iters += 1;
            let gn = real_norm(&g);
            if gn == 0.0 {
                history.push(start_best.0);
                break;
            }
            let step = 0.5 / ((it + 1) as f64).sqrt();
            for (ci, gi) in c.iter_mut().zip(&g) {
                *ci += step * gi / gn;
            }
            project_to_ball(&mut c);
            (fc, g) = min_eig_and_supergradient(l, &c)?;
            if fc > start_best.0 {
                start_best = (fc, c.clone());
                stale = 0;
            } else {
                stale += 1;
            }
            history.push(start_best.0);
            if stale > PATIENCE {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| start_best.0 > b.0) {
            best = Some((start_best.0, start_best.1, history));
        }
    }

    let (mut value, mut c, history) = best.expect("at least one start");
    let n = real_norm(&c);
    if value > 0.0 && n > 0.0 {
        c.iter_mut().for_each(|x| *x /= n);
        value = eig_hermitian(&l.combination(&c))?.min();
    }
    let verdict = if value > threshold {
        PseudoconvexVerdict::Yes { c, min_eigenvalue: value }
    } else {
        PseudoconvexVerdict::NotFound { best_c: c, best_min_eigenvalue: value }
    };
    Ok(PseudoconvexSearch { verdict, history, iterations: total_iters })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifySettings {
    pub rank_tol: f64,
    pub det_tol: f64,
    pub det_samples: usize,
    pub ascent: AscentSettings,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            det_tol: DEFAULT_RANK_TOL,
            det_samples: DEFAULT_DET_SAMPLES,
            ascent: AscentSettings::default(),
        }
    }
}

impl ClassifySettings {
    pub fn with_seed(seed: u64) -> Self {
        let mut s = Self::default();
        s.ascent.seed = seed;
        s
    }
}

/// All four verdicts together with the settings they were judged under.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub levi_generating: bool,
    pub levi_nondegenerate: bool,
    pub strongly_nondegenerate: NondegeneracyVerdict,
    pub strongly_pseudoconvex: PseudoconvexVerdict,
    pub settings: ClassifySettings,
}

/// Runs all four tests.
///
/// A pseudoconvexity witness `c` is reused as the strong-nondegeneracy
/// witness, and a strong-nondegeneracy witness forces `levi_nondegenerate`
/// (an invertible `Σ c_j A_j` has trivial kernel, so the common kernel is trivial).
pub fn classify(l: &LeviForm, settings: &ClassifySettings) -> Result<Classification> {
    let levi_generating = is_levi_generating(l, settings.rank_tol);
    let mut levi_nondegenerate = is_levi_nondegenerate(l, settings.rank_tol);
    let search = find_pseudoconvex_direction(l, &settings.ascent)?;
    let strongly_nondegenerate = match &search.verdict {
        PseudoconvexVerdict::Yes { c, .. } => {
            let d = det(l.combination(c).as_matrix())?.re;
            NondegeneracyVerdict::Yes { c: c.clone(), det: d }
        }
        PseudoconvexVerdict::NotFound { .. } => {
            is_strongly_nondegenerate(l, settings.det_samples, settings.ascent.seed, settings.det_tol)
        }
    };
    if strongly_nondegenerate.is_yes() {
        levi_nondegenerate = true;
    }
    Ok(Classification {
        levi_generating,
        levi_nondegenerate,
        strongly_nondegenerate,
        strongly_pseudoconvex: search.verdict,
        settings: *settings,
    })
}

/// Coordinates in which `Σ c_j A_j = I`: returns `Ã_j = R A_j R` with
/// `R = (Σ c_j A_j)^{-1/2}`, and `R`. A disc `w̃` for the new form maps to
/// `w = R w̃` for the old one.
pub fn normalize_q(l: &LeviForm, c: &[f64]) -> Result<(LeviForm, CMatrix)> {
    let q = l.combination(c);
    let r = inv_sqrt_hpd(&q)?;
    let r = r.into_matrix();
    Ok((l.congruence(&r), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_pseudoconvex_form, random_unitary};
    use alloc::vec;
    use rand::Rng;

    fn h(rows: &[&[(f64, f64)]]) -> HermitianMatrix {
        let n = rows.len();
        HermitianMatrix::new(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j].0, rows[i][j].1)), 1e-12).unwrap()
    }

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(d)
    }

    fn sigma_x() -> HermitianMatrix {
        h(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]])
    }

    fn sigma_y() -> HermitianMatrix {
        h(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]])
    }

    fn form(ms: Vec<HermitianMatrix>) -> LeviForm {
        LeviForm::new(ms).unwrap()
    }

    #[test]
    fn generating_examples() {
        assert!(is_levi_generating(&form(vec![HermitianMatrix::identity(2)]), 1e-9));
        assert!(!is_levi_generating(&form(vec![diag(&[1.0]), diag(&[-1.0])]), 1e-9));
        let pauli = form(vec![HermitianMatrix::identity(2), sigma_x(), sigma_y(), diag(&[1.0, -1.0])]);
        assert!(is_levi_generating(&pauli, 1e-9));
    }

    #[test]
    fn flattening_layout() {
        let a = h(&[&[(1.0, 0.0), (2.0, 3.0)], &[(2.0, -3.0), (4.0, 0.0)]]);
        assert_eq!(flatten_hermitian(&a), vec![1.0, 4.0, 2.0, 3.0]);
    }

    #[test]
    fn nondegenerate_examples() {
        assert!(is_levi_nondegenerate(&form(vec![HermitianMatrix::identity(2)]), 1e-9));
        assert!(!is_levi_nondegenerate(&form(vec![diag(&[1.0, 0.0])]), 1e-9));
        assert!(is_levi_nondegenerate(&form(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])]), 1e-9));
    }

    #[test]
    fn strongly_nondegenerate_examples() {
        match is_strongly_nondegenerate(&form(vec![HermitianMatrix::identity(2)]), 32, 1, 1e-9) {
            NondegeneracyVerdict::Yes { c, .. } => assert!((c[0].abs() - 1.0).abs() < 1e-15),
            v => panic!("{v:?}"),
        }
        // det = -c1 c2
        let l = form(vec![diag(&[1.0, 0.0]), diag(&[0.0, -1.0])]);
        match is_strongly_nondegenerate(&l, 32, 2, 1e-9) {
            NondegeneracyVerdict::Yes { c, det } => assert!((det + c[0] * c[1]).abs() < 1e-14),
            v => panic!("{v:?}"),
        }
        // det = -c2^2 / 4
        let half_x = h(&[&[(0.0, 0.0), (0.5, 0.0)], &[(0.5, 0.0), (0.0, 0.0)]]);
        let l = form(vec![diag(&[1.0, 0.0]), half_x]);
        match is_strongly_nondegenerate(&l, 32, 3, 1e-9) {
            NondegeneracyVerdict::Yes { c, det } => assert!((det + c[1] * c[1] / 4.0).abs() < 1e-14),
            v => panic!("{v:?}"),
        }
        let degenerate = form(vec![diag(&[1.0, 0.0]), diag(&[2.0, 0.0])]);
        assert_eq!(
            is_strongly_nondegenerate(&degenerate, 32, 4, 1e-9),
            NondegeneracyVerdict::ProbablyNo { samples: 32 }
        );
    }

    #[test]
    fn pseudoconvex_examples() {
        let s =
            find_pseudoconvex_direction(&form(vec![HermitianMatrix::identity(2)]), &AscentSettings::default()).unwrap();
        match s.verdict {
            PseudoconvexVerdict::Yes { c, min_eigenvalue } => {
                assert!((c[0] - 1.0).abs() < 1e-12);
                assert!((min_eigenvalue - 1.0).abs() < 1e-12);
            }
            v => panic!("{v:?}"),
        }
        let s = find_pseudoconvex_direction(&form(vec![diag(&[1.0, -1.0])]), &AscentSettings::default()).unwrap();
        assert!(!s.verdict.is_yes());

        // f(c) = c1 - |c2|, maximized at (1, 0) with value 1
        let l = form(vec![diag(&[1.0, 1.0]), diag(&[1.0, -1.0])]);
        let s = find_pseudoconvex_direction(&l, &AscentSettings::default()).unwrap();
        match s.verdict {
            PseudoconvexVerdict::Yes { c, min_eigenvalue } => {
                assert!(c[0] > 0.99 && c[1].abs() < 0.05, "{c:?}");
                assert!(min_eigenvalue > 0.95);
            }
            v => panic!("{v:?}"),
        }
        assert!(s.history.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn ascent_history_monotone_on_random_forms() {
        let mut rng = seeded(31);
        for _ in 0..5 {
            let l = random_form_pc(&mut rng);
            let s = find_pseudoconvex_direction(&l, &AscentSettings { seed: 5, ..Default::default() }).unwrap();
            assert!(s.history.windows(2).all(|w| w[0] <= w[1]));
            assert!(s.verdict.is_yes());
        }
    }

    fn random_form_pc<R: Rng>(rng: &mut R) -> LeviForm {
        random_pseudoconvex_form(rng, 3, 4)
    }

    #[test]
    fn classification_of_sphere_and_degenerate() {
        let sphere = form(vec![HermitianMatrix::identity(2)]);
        let c = classify(&sphere, &ClassifySettings::default()).unwrap();
        assert!(c.levi_generating && c.levi_nondegenerate);
        assert!(c.strongly_nondegenerate.is_yes() && c.strongly_pseudoconvex.is_yes());

        let over = form(vec![diag(&[1.0]), diag(&[2.0])]);
        let c = classify(&over, &ClassifySettings::default()).unwrap();
        assert!(!c.levi_generating);
    }

    #[test]
    fn normalization() {
        let l = form(vec![HermitianMatrix::identity(2), sigma_x()]);
        let (n, r) = normalize_q(&l, &[1.0, 0.0]).unwrap();
        assert!((&r - &CMatrix::identity(2)).max_abs() < 1e-15);
        assert!((n.matrix(1).as_matrix() - sigma_x().as_matrix()).max_abs() < 1e-15);

        let (n, r) = normalize_q(&form(vec![diag(&[4.0, 9.0])]), &[1.0]).unwrap();
        assert!((n.matrix(0).as_matrix() - &CMatrix::identity(2)).max_abs() < 1e-14);
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-15 && (r[(1, 1)].re - 1.0 / 3.0).abs() < 1e-15);

        assert!(matches!(normalize_q(&form(vec![diag(&[1.0, -1.0])]), &[1.0]), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn unitary_congruence_keeps_verdicts() {
        let mut rng = seeded(41);
        for _ in 0..5 {
            let l = random_pseudoconvex_form(&mut rng, 3, 5);
            let u = random_unitary(&mut rng, 3);
            let lu = l.congruence(&u);
            assert_eq!(is_levi_generating(&l, 1e-9), is_levi_generating(&lu, 1e-9));
            assert_eq!(is_levi_nondegenerate(&l, 1e-9), is_levi_nondegenerate(&lu, 1e-9));
            assert_eq!(
                is_strongly_nondegenerate(&l, 32, 1, 1e-9).is_yes(),
                is_strongly_nondegenerate(&lu, 32, 1, 1e-9).is_yes()
            );
            let a = find_pseudoconvex_direction(&l, &AscentSettings::default()).unwrap();
            let b = find_pseudoconvex_direction(&lu, &AscentSettings::default()).unwrap();
            assert_eq!(a.verdict.is_yes(), b.verdict.is_yes());
        }
    }
}
