//! Machine-readable run reports. Field order is fixed and no field depends on
//! the clock unless timing is requested, so equal inputs give equal bytes.

use std::fmt::Write as _;

use levi_disc_core::discs::JetData;
use levi_disc_core::levi::{Classification, NondegeneracyVerdict, PseudoconvexVerdict};
use levi_disc_core::stationary::{DefectReport, StableSolution};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::discfile::VariantName;
use crate::fixture::{from_c64_vec, Complex};
use crate::pipeline::{DiscVerification, SweepOutcome};

pub const VERSION: &str = "levi-disc/1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub fourier_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_zero: Option<bool>,
    /// Digest of the disc file passed to `check-disc`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_digest: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ tol`.
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Check { name: name.to_string(), value, tol, pass: value <= tol }
    }

    /// A yes/no condition, recorded as value 1 (holds) or 0.
    pub fn holds(name: &str, ok: bool) -> Self {
        Check { name: name.to_string(), value: if ok { 1.0 } else { 0.0 }, tol: 1.0, pass: ok }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub levi_generating: bool,
    pub levi_nondegenerate: bool,
    pub strongly_nondegenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nondegeneracy_witness: Option<Vec<f64>>,
    pub strongly_pseudoconvex: bool,
    /// Witness `c`, or the best direction found when the search failed.
    pub pseudoconvex_c: Vec<f64>,
    pub pseudoconvex_min_eigenvalue: f64,
}

impl From<&Classification> for ClassificationReport {
    fn from(c: &Classification) -> Self {
        let nondegeneracy_witness = match &c.strongly_nondegenerate {
            NondegeneracyVerdict::Yes { c, .. } => Some(c.clone()),
            NondegeneracyVerdict::ProbablyNo { .. } => None,
        };
        let (pseudoconvex_c, pseudoconvex_min_eigenvalue) = match &c.strongly_pseudoconvex {
            PseudoconvexVerdict::Yes { c, min_eigenvalue } => (c.clone(), *min_eigenvalue),
            PseudoconvexVerdict::NotFound { best_c, best_min_eigenvalue } => (best_c.clone(), *best_min_eigenvalue),
        };
        ClassificationReport {
            levi_generating: c.levi_generating,
            levi_nondegenerate: c.levi_nondegenerate,
            strongly_nondegenerate: c.strongly_nondegenerate.is_yes(),
            nondegeneracy_witness,
            strongly_pseudoconvex: c.strongly_pseudoconvex.is_yes(),
            pseudoconvex_c,
            pseudoconvex_min_eigenvalue,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectJson {
    pub defective: bool,
    pub rank: usize,
    pub k: usize,
    pub margin: f64,
    pub tol: f64,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl From<&DefectReport> for DefectJson {
    fn from(r: &DefectReport) -> Self {
        DefectJson {
            defective: r.defective,
            rank: r.rank,
            k: r.k,
            margin: r.margin,
            tol: r.tol,
            degenerate: r.degenerate,
            witness: r.witness.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    /// In normalized coordinates `Σ c_j A_j = I`.
    pub lambda_dir: Vec<f64>,
    pub v_normalized: Vec<Complex>,
    pub distinct_eigenvalues: usize,
    pub span_dim: usize,
    pub restarts_used: usize,
    pub defect: DefectJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub lambda: Vec<Complex>,
    pub c: Vec<f64>,
    pub w0: Vec<Complex>,
    pub y0: Vec<f64>,
    pub v: Vec<Complex>,
    /// Dyadic factor applied to the search direction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positivity_min_eig: Option<f64>,
    /// `R` with `w = R w̃` mapping normalized coordinates back.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Vec<Vec<Complex>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverReport {
    pub residual: f64,
    pub residual_tol: f64,
    pub spectral_radius: f64,
    pub iterations: usize,
    pub newton_steps: usize,
}

impl SolverReport {
    pub fn new(s: &StableSolution, tol: f64, scale: f64) -> Self {
        SolverReport {
            residual: s.residual,
            residual_tol: tol * scale,
            spectral_radius: s.spectral_radius,
            iterations: s.iterations,
            newton_steps: s.newton_steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscReport {
    pub variant: VariantName,
    pub fourier_n: usize,
    pub spectral_radius: f64,
    pub tail_bound: f64,
    pub krylov_dim: usize,
    pub krylov_defect: DefectJson,
    pub fourier_defect: DefectJson,
    pub stationarity_defect: f64,
    pub attachment_residual: f64,
    pub pole_defect: f64,
    pub boundary_data_error: f64,
}

impl From<&DiscVerification> for DiscReport {
    fn from(v: &DiscVerification) -> Self {
        DiscReport {
            variant: v.disc.variant.into(),
            fourier_n: v.disc.fourier_n,
            spectral_radius: v.disc.spectral_radius,
            tail_bound: v.disc.tail_bound,
            krylov_dim: v.krylov_dim,
            krylov_defect: (&v.krylov_report).into(),
            fourier_defect: (&v.fourier_report).into(),
            stationarity_defect: v.stationarity.defect,
            attachment_residual: v.disc.attachment_residual,
            pole_defect: v.pole_defect,
            boundary_data_error: v.boundary_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JetReport {
    pub phi: Vec<Complex>,
    pub phi_star: Vec<Complex>,
    pub i_dphi: Vec<Complex>,
    pub i_dphi_star: Vec<Complex>,
}

impl From<&JetData> for JetReport {
    fn from(j: &JetData) -> Self {
        JetReport {
            phi: from_c64_vec(&j.phi),
            phi_star: from_c64_vec(&j.phi_star),
            i_dphi: from_c64_vec(&j.i_dphi),
            i_dphi_star: from_c64_vec(&j.i_dphi_star),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginStats {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

impl MarginStats {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
        Some(MarginStats { min: v[0], median, mean: v.iter().sum::<f64>() / n as f64, max: v[n - 1] })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub trials: usize,
    pub lambda_zero: bool,
    pub witness_c: Vec<f64>,
    pub defective: usize,
    pub defective_fraction: f64,
    pub solver_failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<MarginStats>,
    pub margin_floor: f64,
    pub below_floor: usize,
}

impl From<&SweepOutcome> for SweepReport {
    fn from(s: &SweepOutcome) -> Self {
        SweepReport {
            trials: s.trials,
            lambda_zero: s.settings.lambda_zero,
            witness_c: s.witness.clone(),
            defective: s.defective,
            defective_fraction: s.defective_fraction(),
            solver_failures: s.solver_failures,
            margin: MarginStats::of(&s.margins),
            margin_floor: s.settings.margin_floor,
            below_floor: s.below_floor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: CommandEcho,
    pub input_digest: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc: Option<DiscReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jet: Option<JetReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepReport>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl Report {
    pub fn new(command: CommandEcho, input: &[u8], seed: u64) -> Self {
        Report {
            version: VERSION,
            command,
            input_digest: sha256_hex(input),
            seed,
            classification: None,
            search: None,
            pair: None,
            solver: None,
            disc: None,
            jet: None,
            sweep: None,
            checks: Vec::new(),
            error: None,
            wall_time_ms: None,
        }
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One `path = value` line per leaf.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        flatten(&value, String::new(), &mut out);
        out
    }
}

fn flatten(v: &Value, path: String, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (key, child) in map {
                let p = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                flatten(child, p, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array() && !is_pair(x)) => {
            for (i, child) in items.iter().enumerate() {
                flatten(child, format!("{path}[{i}]"), out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(leaf).collect();
            let _ = writeln!(out, "{path} = [{}]", parts.join(", "));
        }
        other => {
            let _ = writeln!(out, "{path} = {}", leaf(other));
        }
    }
}

fn is_pair(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number))
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if is_pair(v) => {
            let (re, im) = (a[0].as_f64().unwrap_or(f64::NAN), a[1].as_f64().unwrap_or(f64::NAN));
            format!("{re:?}{}{:?}i", if im.is_sign_negative() { "-" } else { "+" }, im.abs())
        }
        other => other.to_string(),
    }
}
