//! classify → normalize → search → assemble → solve → construct → verify,
//! and the random sweep over admissible parameters.

use levi_disc_core::discs::{
    check_defective_fourier, check_stationary, construct_disc_from, evaluate_jet, lift_boundary, DiscSettings, JetData,
    RationalDisc, StationarityCheck, DEFAULT_VARIANTS,
};
use levi_disc_core::levi::{
    classify, find_pseudoconvex_direction, normalize_q, AscentSettings, Classification, ClassifySettings, LeviForm,
    PseudoconvexVerdict,
};
use levi_disc_core::numlin::{eig_hermitian, real_norm, vec_norm, CMatrix, C64, DEFAULT_RANK_TOL};
use levi_disc_core::sample::{random_complex_vector, random_unit_real, seeded};
use levi_disc_core::stationary::{
    assemble_pair_params, defect_test, find_nondefective, krylov_span, shrink_to_positive, solve_quadratic,
    AssembledPair, DefectReport, NondefectiveSearch, QuadraticPencil, SearchSettings, SolverSettings, StableSolution,
    StationaryPairData, DEFAULT_CLUSTER_TOL, DEFAULT_GRID_N, DEFAULT_KRYLOV_TOL, DEFAULT_POSITIVITY_EPS,
};
use levi_disc_core::{Error, Result};

use crate::fixture::Fixture;

/// Boundary data `w(1)`, `w'(1)`, `Im z(1)` must match the prescribed values to this.
pub const BOUNDARY_DATA_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineSettings {
    pub seed: u64,
    pub rank_tol: f64,
    pub cluster_tol: f64,
    pub krylov_tol: f64,
    pub samples: usize,
    pub restarts: usize,
    pub grid_n: usize,
    pub positivity_eps: f64,
    /// Bound on `‖v‖` in assembled pairs.
    pub shrink: f64,
    pub solver: SolverSettings,
    pub disc: DiscSettings,
    pub ascent: AscentSettings,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        Self {
            seed: 0,
            rank_tol: DEFAULT_RANK_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            krylov_tol: DEFAULT_KRYLOV_TOL,
            samples: 200,
            restarts: 5,
            grid_n: DEFAULT_GRID_N,
            positivity_eps: DEFAULT_POSITIVITY_EPS,
            shrink: 0.5,
            solver: SolverSettings::default(),
            disc: DiscSettings::default(),
            ascent: AscentSettings::default(),
        }
    }
}

/// Command-line values that take precedence over the fixture.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub fourier_n: Option<usize>,
}

impl PipelineSettings {
    /// Defaults, then fixture values, then overrides.
    pub fn resolve(fixture: &Fixture, o: &Overrides) -> Self {
        let mut s = Self::default();
        let t = fixture.tolerances();
        s.seed = o.seed.or(fixture.seed).unwrap_or(0);
        s.rank_tol = o.tol.or(t.rank).unwrap_or(s.rank_tol);
        s.cluster_tol = t.cluster.unwrap_or(s.cluster_tol);
        s.krylov_tol = t.krylov.unwrap_or(s.krylov_tol);
        s.samples = o.samples.unwrap_or(s.samples);
        s.positivity_eps = t.positivity_eps.unwrap_or(s.positivity_eps);
        s.solver.tol = t.solver.unwrap_or(s.solver.tol);
        s.disc.solver = s.solver;
        s.disc.fourier_n = o.fourier_n.or(fixture.fourier_n).unwrap_or(s.disc.fourier_n);
        s.disc.stationarity_tol = t.stationarity.unwrap_or(s.disc.stationarity_tol);
        s.disc.attachment_tol = t.attachment.unwrap_or(s.disc.attachment_tol);
        s.ascent.seed = s.seed;
        s
    }

    pub fn classify_settings(&self) -> ClassifySettings {
        ClassifySettings {
            rank_tol: self.rank_tol,
            det_tol: self.rank_tol,
            ascent: self.ascent,
            ..ClassifySettings::default()
        }
    }

    pub fn search_settings(&self) -> SearchSettings {
        SearchSettings {
            samples: self.samples,
            seed: self.seed,
            restarts: self.restarts,
            rank_tol: self.rank_tol,
            cluster_tol: self.cluster_tol,
            krylov_tol: self.krylov_tol,
        }
    }
}

/// Everything checked about one constructed disc.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscVerification {
    pub solution: StableSolution,
    pub pencil_scale: f64,
    pub disc: RationalDisc,
    pub krylov_dim: usize,
    /// Rank test on `S(X, v)`.
    pub krylov_report: DefectReport,
    /// Rank test on negative Fourier coefficients of `h_w`.
    pub fourier_report: DefectReport,
    pub stationarity: StationarityCheck,
    pub pole_defect: f64,
    pub boundary_error: f64,
    pub jet: JetData,
}

impl DiscVerification {
    pub fn oracles_agree(&self) -> bool {
        self.krylov_report.defective == self.fourier_report.defective
    }
}

/// Solves for `X`, builds the disc for `pair` and runs every check on it.
pub fn verify_pair(l: &LeviForm, pair: &StationaryPairData, s: &PipelineSettings) -> Result<DiscVerification> {
    let lift = pair.lift();
    let pencil = QuadraticPencil::from_levi(l, &lift);
    let solution = solve_quadratic(&pencil, &s.solver)?;
    let disc = construct_disc_from(l, pair, &solution.x, &s.disc, &DEFAULT_VARIANTS)?;
    let n = s.disc.fourier_n;
    let (krylov_dim, krylov_report) = if vec_norm(&pair.v) == 0.0 {
        // w is constant: S(X, 0) = {0} and every operator vanishes on it
        (
            0,
            DefectReport {
                defective: true,
                rank: 0,
                k: l.k(),
                witness: None,
                margin: 0.0,
                tol: s.rank_tol,
                degenerate: true,
            },
        )
    } else {
        let span = krylov_span(&solution.x, &pair.v, s.krylov_tol)?;
        (span.dim, defect_test(l, &span, s.rank_tol))
    };
    let fourier_report = check_defective_fourier(l, &disc, n, s.rank_tol)?;
    let stationarity = check_stationary(l, &disc, &lift, n, s.disc.stationarity_tol)?;
    let lb = lift_boundary(l, &disc, &lift, n, s.disc.stationarity_tol)?;
    let jet = evaluate_jet(l, &disc, &lb, &lift)?;
    Ok(DiscVerification {
        pencil_scale: pencil.scale(),
        boundary_error: disc.boundary_data_error(pair),
        solution,
        disc,
        krylov_dim,
        krylov_report,
        fourier_report,
        stationarity,
        pole_defect: lb.pole_defect,
        jet,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairOutcome {
    pub classification: Classification,
    pub witness: Vec<f64>,
    /// `R` with `Σ c_j R A_j R = I`; normalized coordinates map back by `w = R w̃`.
    pub transform: CMatrix,
    pub normalized: LeviForm,
    pub search: NondefectiveSearch,
    /// In normalized coordinates.
    pub assembled: AssembledPair,
    /// In the fixture's coordinates.
    pub pair: StationaryPairData,
    /// In normalized coordinates.
    pub verification: DiscVerification,
    /// In the fixture's coordinates.
    pub disc: RationalDisc,
}

fn pseudoconvex_witness(c: &Classification) -> Result<Vec<f64>> {
    match &c.strongly_pseudoconvex {
        PseudoconvexVerdict::Yes { c, .. } => Ok(c.clone()),
        PseudoconvexVerdict::NotFound { .. } => Err(Error::Domain("no strongly pseudoconvex direction found")),
    }
}

/// The constructive search for a non-defective stationary pair, with the
/// resulting disc built and verified.
pub fn find_pair(l: &LeviForm, s: &PipelineSettings) -> Result<PairOutcome> {
    let classification = classify(l, &s.classify_settings())?;
    if !classification.levi_generating {
        return Err(Error::NotLeviGenerating);
    }
    let witness = pseudoconvex_witness(&classification)?;
    let (normalized, transform) = normalize_q(l, &witness)?;
    let search = find_nondefective(&normalized, &s.search_settings())?;
    let assembled = assemble_pair_params(
        &normalized,
        &search.lambda_dir,
        &search.v,
        &witness,
        s.shrink,
        s.grid_n,
        s.positivity_eps,
    )?;
    let verification = verify_pair(&normalized, &assembled.data, s)?;
    let disc = verification.disc.change_coordinates(&transform)?;
    let mut pair = assembled.data.clone();
    pair.w0 = transform.mul_vec(&pair.w0);
    pair.v = transform.mul_vec(&pair.v);
    Ok(PairOutcome { classification, witness, transform, normalized, search, assembled, pair, verification, disc })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSettings {
    pub trials: usize,
    /// Restrict to `λ = 0`.
    pub lambda_zero: bool,
    /// Relative size of the random perturbation of the witness `c`.
    pub c_jitter: f64,
    /// Margins below this count as near-degenerate.
    pub margin_floor: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self { trials: 1000, lambda_zero: false, c_jitter: 0.05, margin_floor: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub witness: Vec<f64>,
    pub trials: usize,
    pub defective: usize,
    pub solver_failures: usize,
    /// Rank-test margin of every trial that reached the test.
    pub margins: Vec<f64>,
    pub below_floor: usize,
    pub settings: SweepSettings,
}

impl SweepOutcome {
    pub fn defective_fraction(&self) -> f64 {
        let done = self.trials - self.solver_failures;
        if done == 0 {
            0.0
        } else {
            self.defective as f64 / done as f64
        }
    }
}

/// Random admissible `(λ, c, v)`: `c` near the pseudoconvexity witness,
/// random complex `λ` shrunk dyadically to circle positivity, random `v`;
/// each trial is judged by the rank test on `S(X, v)`.
pub fn sweep(l: &LeviForm, s: &PipelineSettings, sw: &SweepSettings) -> Result<SweepOutcome> {
    if !levi_disc_core::levi::is_levi_generating(l, s.rank_tol) {
        return Err(Error::NotLeviGenerating);
    }
    let search = find_pseudoconvex_direction(l, &s.ascent)?;
    let witness = match search.verdict {
        PseudoconvexVerdict::Yes { c, .. } => c,
        PseudoconvexVerdict::NotFound { .. } => return Err(Error::Domain("no strongly pseudoconvex direction found")),
    };
    let base_min = eig_hermitian(&l.combination(&witness))?.min();
    let (m, k) = (l.m(), l.k());
    let mut rng = seeded(s.seed);
    let mut out = SweepOutcome {
        witness: witness.clone(),
        trials: sw.trials,
        defective: 0,
        solver_failures: 0,
        margins: Vec::with_capacity(sw.trials),
        below_floor: 0,
        settings: *sw,
    };
    for _ in 0..sw.trials {
        let jitter = random_unit_real(&mut rng, k);
        let mut c: Vec<f64> =
            witness.iter().zip(&jitter).map(|(w, j)| w + sw.c_jitter * real_norm(&witness) * j).collect();
        if eig_hermitian(&l.combination(&c))?.min() <= 0.5 * base_min {
            c = witness.clone();
        }
        let lambda: Vec<C64> = if sw.lambda_zero {
            vec![C64::new(0.0, 0.0); k]
        } else {
            let z = random_complex_vector(&mut rng, k);
            let n = vec_norm(&z);
            z.into_iter().map(|x| x / n).collect()
        };
        let v = random_complex_vector(&mut rng, m);
        let solved = shrink_to_positive(l, &lambda, &c, s.grid_n, s.positivity_eps)
            .and_then(|(_, params, _)| solve_quadratic(&QuadraticPencil::from_levi(l, &params), &s.solver));
        let Ok(sol) = solved else {
            out.solver_failures += 1;
            continue;
        };
        let span = krylov_span(&sol.x, &v, s.krylov_tol)?;
        let report = defect_test(l, &span, s.rank_tol);
        if report.defective {
            out.defective += 1;
        }
        if report.margin < sw.margin_floor {
            out.below_floor += 1;
        }
        out.margins.push(report.margin);
    }
    Ok(out)
}
