//! The four subcommands as pure functions from input text to a report.

use std::io::Write;

use levi_disc_core::discs::{
    attachment_residual, check_defective_fourier, check_stationary, construct_disc, evaluate_jet, lift_boundary,
    RationalDisc, StationaryPairData,
};
use levi_disc_core::levi::{classify, LeviForm};
use levi_disc_core::numlin::{vec_norm, C64};
use levi_disc_core::stationary::{defect_test, krylov_span, LiftParams};
use levi_disc_core::Error;

use crate::discfile::DiscFile;
use crate::fixture::{from_c64_vec, matrix_to_json, Fixture, FixtureError};
use crate::pipeline::{find_pair, sweep, Overrides, PipelineSettings, SweepSettings, BOUNDARY_DATA_TOL};
use crate::report::{
    sha256_hex, Check, ClassificationReport, CommandEcho, DefectJson, DiscReport, ErrorReport, JetReport, PairReport,
    Report, SearchReport, SolverReport, SweepReport,
};

pub const EXIT_OK: i32 = 0;
/// Bad input or a numerical failure; the report carries `error`.
pub const EXIT_ERROR: i32 = 1;
/// The run completed but at least one check failed.
pub const EXIT_CHECKS_FAILED: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Classify,
    FindPair,
    /// `disc` is the text of a disc file; without it the fixture's `params` are used.
    CheckDisc {
        disc: Option<String>,
    },
    Sweep {
        trials: usize,
        lambda_zero: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::FindPair => "find-pair",
            Command::CheckDisc { .. } => "check-disc",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// Sampled boundary values `(θ, (z, w))` with component names.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryTable {
    pub labels: Vec<String>,
    pub rows: Vec<(f64, Vec<C64>)>,
}

impl BoundaryTable {
    pub fn new(disc: &RationalDisc, n: usize) -> Result<Self, Error> {
        let labels = (1..=disc.k()).map(|j| format!("z{j}")).chain((1..=disc.m()).map(|j| format!("w{j}"))).collect();
        Ok(BoundaryTable { labels, rows: disc.boundary_samples(n)? })
    }

    /// `theta,component,re,im`, one row per sample and component.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "component", "re", "im"])?;
        for (theta, values) in &self.rows {
            for (label, z) in self.labels.iter().zip(values) {
                w.write_record([format!("{theta:?}"), label.clone(), format!("{:?}", z.re), format!("{:?}", z.im)])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
    pub disc_file: Option<DiscFile>,
    pub boundary: Option<BoundaryTable>,
}

enum Failure {
    Input(FixtureError),
    Core(Error),
}

impl From<FixtureError> for Failure {
    fn from(e: FixtureError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn report(&self) -> ErrorReport {
        let kind = match self {
            Failure::Input(FixtureError::Parse { .. }) => "parse_error",
            Failure::Input(FixtureError::Invalid { .. }) => "invalid_input",
            Failure::Core(e) if e.is_numerical_failure() => "numerical_failure",
            Failure::Core(Error::NotLeviGenerating | Error::Domain(_)) => "domain_error",
            Failure::Core(_) => "invalid_input",
        };
        let message = match self {
            Failure::Input(e) => e.to_string(),
            Failure::Core(e) => e.to_string(),
        };
        ErrorReport { kind: kind.to_string(), message }
    }
}

#[derive(Default)]
struct Extras {
    disc_file: Option<DiscFile>,
    boundary: Option<BoundaryTable>,
}

/// Runs `command` on the fixture text. Never panics on bad input; failures
/// end up in `report.error` with exit code [`EXIT_ERROR`].
pub fn run(command: &Command, fixture_text: &str, overrides: &Overrides) -> Outcome {
    let echo = CommandEcho {
        name: command.name().to_string(),
        tol: overrides.tol,
        seed: overrides.seed,
        samples: overrides.samples,
        fourier_n: overrides.fourier_n,
        trials: match command {
            Command::Sweep { trials, .. } => Some(*trials),
            _ => None,
        },
        lambda_zero: match command {
            Command::Sweep { lambda_zero, .. } => Some(*lambda_zero),
            _ => None,
        },
        disc_digest: match command {
            Command::CheckDisc { disc: Some(text) } => Some(sha256_hex(text.as_bytes())),
            _ => None,
        },
    };
    let mut report = Report::new(echo, fixture_text.as_bytes(), overrides.seed.unwrap_or(0));
    let mut extras = Extras::default();
    let result = Fixture::parse(fixture_text).map_err(Failure::from).and_then(|fixture| {
        let settings = PipelineSettings::resolve(&fixture, overrides);
        report.seed = settings.seed;
        let l = fixture.levi_form()?;
        match command {
            Command::Classify => run_classify(&l, &settings, &mut report),
            Command::FindPair => run_find_pair(&l, &settings, &mut report, &mut extras),
            Command::CheckDisc { disc } => {
                run_check_disc(&l, &fixture, disc.as_deref(), overrides, &settings, &mut report, &mut extras)
            }
            Command::Sweep { trials, lambda_zero } => {
                let sw = SweepSettings { trials: *trials, lambda_zero: *lambda_zero, ..SweepSettings::default() };
                run_sweep(&l, &settings, &sw, &mut report)
            }
        }
    });
    let exit_code = match result {
        Err(f) => {
            report.error = Some(f.report());
            EXIT_ERROR
        }
        Ok(()) if !report.checks_pass() => EXIT_CHECKS_FAILED,
        Ok(()) => EXIT_OK,
    };
    Outcome { report, exit_code, disc_file: extras.disc_file, boundary: extras.boundary }
}

fn run_classify(l: &LeviForm, s: &PipelineSettings, report: &mut Report) -> Result<(), Failure> {
    let c = classify(l, &s.classify_settings())?;
    report.classification = Some((&c).into());
    Ok(())
}

fn run_find_pair(l: &LeviForm, s: &PipelineSettings, report: &mut Report, extras: &mut Extras) -> Result<(), Failure> {
    let out = find_pair(l, s)?;
    let ver = &out.verification;
    report.classification = Some(ClassificationReport::from(&out.classification));
    report.search = Some(SearchReport {
        lambda_dir: out.search.lambda_dir.clone(),
        v_normalized: from_c64_vec(&out.search.v),
        distinct_eigenvalues: out.search.r,
        span_dim: out.search.span_dim,
        restarts_used: out.search.restarts_used,
        defect: (&out.search.report).into(),
    });
    report.pair = Some(PairReport {
        lambda: from_c64_vec(&out.pair.lambda),
        c: out.pair.c.clone(),
        w0: from_c64_vec(&out.pair.w0),
        y0: out.pair.y0.clone(),
        v: from_c64_vec(&out.pair.v),
        lambda_scale: Some(out.assembled.scale),
        positivity_min_eig: Some(out.assembled.positivity.min_eig),
        normalization: Some(matrix_to_json(&out.transform)),
    });
    report.solver = Some(SolverReport::new(&ver.solution, s.solver.tol, ver.pencil_scale));

    // the jet is coordinate dependent, so it is evaluated for the disc in the fixture's coordinates
    let n = s.disc.fourier_n;
    let lift_params = out.pair.lift();
    let lift = lift_boundary(l, &out.disc, &lift_params, n, f64::INFINITY)?;
    let jet = evaluate_jet(l, &out.disc, &lift, &lift_params)?;
    let attachment = attachment_residual(l, &out.disc, n)?;
    let boundary = out.disc.boundary_data_error(&out.pair);

    let mut disc_report = DiscReport::from(ver);
    disc_report.attachment_residual = attachment;
    disc_report.boundary_data_error = boundary;
    report.disc = Some(disc_report);
    report.jet = Some(JetReport::from(&jet));
    report.checks = vec![
        Check::at_most("solver_residual", ver.solution.residual, s.solver.tol * ver.pencil_scale),
        Check {
            name: "spectral_radius".into(),
            value: ver.solution.spectral_radius,
            tol: 1.0,
            pass: ver.solution.spectral_radius < 1.0,
        },
        Check::holds("search_nondefective", !out.search.report.defective),
        Check::holds("disc_nondefective", !ver.krylov_report.defective),
        Check::holds("oracles_agree", ver.oracles_agree()),
        Check::at_most("stationarity", ver.stationarity.defect, s.disc.stationarity_tol),
        Check::at_most("lift_pole", ver.pole_defect, s.disc.stationarity_tol),
        Check::at_most("attachment", attachment, s.disc.attachment_tol),
        Check::at_most("boundary_data", boundary, BOUNDARY_DATA_TOL),
    ];
    extras.disc_file = Some(DiscFile::new(&out.disc, &lift_params, Some(&out.pair.v)));
    extras.boundary = Some(BoundaryTable::new(&out.disc, n)?);
    Ok(())
}

fn check_dims(file: &DiscFile, l: &LeviForm) -> Result<(), FixtureError> {
    for (path, found, expected) in [("m", file.m, l.m()), ("k", file.k, l.k())] {
        if found != expected {
            return Err(FixtureError::Invalid {
                path: path.into(),
                message: format!("disc has {path} = {found}, fixture has {expected}"),
            });
        }
    }
    Ok(())
}

fn run_check_disc(
    l: &LeviForm,
    fixture: &Fixture,
    disc_text: Option<&str>,
    overrides: &Overrides,
    s: &PipelineSettings,
    report: &mut Report,
    extras: &mut Extras,
) -> Result<(), Failure> {
    let (disc, lift, pair) = match disc_text {
        Some(text) => {
            let file = DiscFile::parse(text)?;
            check_dims(&file, l)?;
            let disc = file.to_disc()?;
            let lift: LiftParams = file.lift_params()?;
            let v = file.prescribed_v()?.unwrap_or_else(|| disc.w_prime_at_one());
            let pair = StationaryPairData {
                lambda: lift.lambda.clone(),
                c: lift.c.clone(),
                w0: disc.w0.clone(),
                y0: disc.y0.clone(),
                v,
            };
            (disc, lift, pair)
        }
        None => {
            let pair = fixture.pair_data()?.ok_or_else(|| FixtureError::Invalid {
                path: "params".into(),
                message: "check-disc needs a disc file or fixture params".into(),
            })?;
            let disc = construct_disc(l, &pair, &s.disc)?;
            (disc, pair.lift(), pair)
        }
    };
    let n = overrides.fourier_n.unwrap_or(disc.fourier_n);
    let stationarity = check_stationary(l, &disc, &lift, n, s.disc.stationarity_tol)?;
    let attachment = attachment_residual(l, &disc, n)?;
    let boundary = disc.boundary_data_error(&pair);
    let fourier = check_defective_fourier(l, &disc, n, s.rank_tol)?;
    let lift_b = lift_boundary(l, &disc, &lift, n, f64::INFINITY)?;
    let jet = evaluate_jet(l, &disc, &lift_b, &lift)?;

    let mut checks = vec![
        Check::at_most("stationarity", stationarity.defect, s.disc.stationarity_tol),
        Check::at_most("lift_pole", lift_b.pole_defect, s.disc.stationarity_tol),
        Check::at_most("attachment", attachment, s.disc.attachment_tol),
        Check::at_most("boundary_data", boundary, BOUNDARY_DATA_TOL),
    ];
    let v = disc.w_prime_at_one();
    let krylov = match disc.matrix_m() {
        Some(m) if vec_norm(&v) > 0.0 => {
            let span = krylov_span(m, &v, s.krylov_tol)?;
            let r = defect_test(l, &span, s.rank_tol);
            checks.push(Check::holds("oracles_agree", r.defective == fourier.defective));
            Some((span.dim, r))
        }
        _ => None,
    };
    report.pair = Some(PairReport {
        lambda: from_c64_vec(&pair.lambda),
        c: pair.c.clone(),
        w0: from_c64_vec(&pair.w0),
        y0: pair.y0.clone(),
        v: from_c64_vec(&pair.v),
        lambda_scale: None,
        positivity_min_eig: None,
        normalization: None,
    });
    report.disc = Some(DiscReport {
        variant: disc.variant.into(),
        fourier_n: n,
        spectral_radius: disc.spectral_radius,
        tail_bound: disc.tail_bound,
        krylov_dim: krylov.as_ref().map_or(0, |k| k.0),
        krylov_defect: DefectJson::from(krylov.as_ref().map_or(&fourier, |k| &k.1)),
        fourier_defect: (&fourier).into(),
        stationarity_defect: stationarity.defect,
        attachment_residual: attachment,
        pole_defect: lift_b.pole_defect,
        boundary_data_error: boundary,
    });
    report.jet = Some(JetReport::from(&jet));
    report.checks = checks;
    extras.boundary = Some(BoundaryTable::new(&disc, n)?);
    Ok(())
}

fn run_sweep(l: &LeviForm, s: &PipelineSettings, sw: &SweepSettings, report: &mut Report) -> Result<(), Failure> {
    let out = sweep(l, s, sw)?;
    report.sweep = Some(SweepReport::from(&out));
    Ok(())
}
