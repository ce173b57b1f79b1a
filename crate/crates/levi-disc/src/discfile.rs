//! JSON form of a constructed disc together with the lift parameters it was
//! built for, written by `find-pair --disc-out` and read by `check-disc`.

use levi_disc_core::discs::{DiscVariant, RationalDisc, WForm};
use levi_disc_core::numlin::{spectral_radius, CMatrix};
use levi_disc_core::stationary::LiftParams;
use serde::{Deserialize, Serialize};

use crate::fixture::{from_c64_vec, matrix_to_json, to_c64, to_c64_vec, Complex, FixtureError};
use crate::report::VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    X,
    ConjX,
    TransposeX,
    AdjointX,
    Taylor,
}

impl From<DiscVariant> for VariantName {
    fn from(v: DiscVariant) -> Self {
        match v {
            DiscVariant::X => Self::X,
            DiscVariant::ConjX => Self::ConjX,
            DiscVariant::TransposeX => Self::TransposeX,
            DiscVariant::AdjointX => Self::AdjointX,
            DiscVariant::Taylor => Self::Taylor,
        }
    }
}

impl From<VariantName> for DiscVariant {
    fn from(v: VariantName) -> Self {
        match v {
            VariantName::X => Self::X,
            VariantName::ConjX => Self::ConjX,
            VariantName::TransposeX => Self::TransposeX,
            VariantName::AdjointX => Self::AdjointX,
            VariantName::Taylor => Self::Taylor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FormSpec {
    Rational { m_matrix: Vec<Vec<Complex>>, u: Vec<Complex> },
    Taylor { coeffs: Vec<Vec<Complex>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSpec {
    pub lambda: Vec<Complex>,
    pub c: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscFile {
    pub version: String,
    pub m: usize,
    pub k: usize,
    pub lift: LiftSpec,
    pub w0: Vec<Complex>,
    pub y0: Vec<f64>,
    /// Prescribed `w'(1)`, checked when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Complex>>,
    pub variant: VariantName,
    pub form: FormSpec,
    pub fourier_n: usize,
    /// Taylor coefficients of `z`, `N/2` entries of length `k`.
    pub z_coeffs: Vec<Vec<Complex>>,
    /// Decay rate of the `w` coefficients; recomputed for rational forms.
    #[serde(default)]
    pub spectral_radius: f64,
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FixtureError {
    FixtureError::Invalid { path: path.into(), message: message.into() }
}

fn square(path: &str, rows: &[Vec<Complex>], m: usize) -> Result<CMatrix, FixtureError> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(invalid(path, format!("expected a {m}x{m} matrix")));
    }
    CMatrix::from_row_major(m, m, rows.iter().flatten().map(to_c64).collect()).map_err(|e| invalid(path, e.to_string()))
}

fn vector(path: &str, v: &[Complex], len: usize) -> Result<Vec<levi_disc_core::numlin::C64>, FixtureError> {
    if v.len() != len {
        return Err(invalid(path, format!("expected {len} entries, found {}", v.len())));
    }
    if v.iter().flatten().any(|x| !x.is_finite()) {
        return Err(invalid(path, "non-finite number"));
    }
    Ok(to_c64_vec(v))
}

impl DiscFile {
    pub fn new(disc: &RationalDisc, lift: &LiftParams, v: Option<&[levi_disc_core::numlin::C64]>) -> Self {
        let form = match &disc.form {
            WForm::Rational { m, u } => FormSpec::Rational { m_matrix: matrix_to_json(m), u: from_c64_vec(u) },
            WForm::Taylor { coeffs } => FormSpec::Taylor { coeffs: coeffs.iter().map(|a| from_c64_vec(a)).collect() },
        };
        DiscFile {
            version: VERSION.to_string(),
            m: disc.m(),
            k: disc.k(),
            lift: LiftSpec { lambda: from_c64_vec(&lift.lambda), c: lift.c.clone() },
            w0: from_c64_vec(&disc.w0),
            y0: disc.y0.clone(),
            v: v.map(from_c64_vec),
            variant: disc.variant.into(),
            form,
            fourier_n: disc.fourier_n,
            z_coeffs: disc.z_coeffs.iter().map(|z| from_c64_vec(z)).collect(),
            spectral_radius: disc.spectral_radius,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let file: DiscFile = crate::fixture::parse_json(text)?;
        if file.version != VERSION {
            return Err(invalid("version", format!("expected \"{VERSION}\", found \"{}\"", file.version)));
        }
        Ok(file)
    }

    pub fn lift_params(&self) -> Result<LiftParams, FixtureError> {
        let lambda = vector("lift.lambda", &self.lift.lambda, self.k)?;
        if self.lift.c.len() != self.k {
            return Err(invalid("lift.c", format!("expected {} entries, found {}", self.k, self.lift.c.len())));
        }
        Ok(LiftParams::new(lambda, self.lift.c.clone()))
    }

    pub fn prescribed_v(&self) -> Result<Option<Vec<levi_disc_core::numlin::C64>>, FixtureError> {
        self.v.as_ref().map(|v| vector("v", v, self.m)).transpose()
    }

    /// Rebuilds the disc. Residual fields are left at zero; the checks recompute them.
    pub fn to_disc(&self) -> Result<RationalDisc, FixtureError> {
        let (m, k) = (self.m, self.k);
        if m == 0 || k == 0 {
            return Err(invalid(if m == 0 { "m" } else { "k" }, "must be positive"));
        }
        if !self.fourier_n.is_power_of_two() || self.fourier_n < 8 {
            return Err(invalid("fourier_n", "must be a power of two, at least 8"));
        }
        let w0 = vector("w0", &self.w0, m)?;
        if self.y0.len() != k {
            return Err(invalid("y0", format!("expected {k} entries, found {}", self.y0.len())));
        }
        let (form, rho) = match &self.form {
            FormSpec::Rational { m_matrix, u } => {
                let mm = square("form.m_matrix", m_matrix, m)?;
                let rho = spectral_radius(&mm).map_err(|e| invalid("form.m_matrix", e.to_string()))?;
                if rho >= 1.0 {
                    return Err(invalid("form.m_matrix", format!("spectral radius {rho} is not below 1")));
                }
                (WForm::Rational { m: mm, u: vector("form.u", u, m)? }, rho)
            }
            FormSpec::Taylor { coeffs } => {
                let c = coeffs
                    .iter()
                    .enumerate()
                    .map(|(p, a)| vector(&format!("form.coeffs[{p}]"), a, m))
                    .collect::<Result<Vec<_>, _>>()?;
                (WForm::Taylor { coeffs: c }, self.spectral_radius)
            }
        };
        let z_coeffs = self
            .z_coeffs
            .iter()
            .enumerate()
            .map(|(n, z)| vector(&format!("z_coeffs[{n}]"), z, k))
            .collect::<Result<Vec<_>, _>>()?;
        let n = self.fourier_n;
        let tail_bound = if rho == 0.0 { 0.0 } else { rho.powi((n / 2) as i32) / (1.0 - rho) };
        Ok(RationalDisc {
            w0,
            y0: self.y0.clone(),
            form,
            variant: self.variant.into(),
            z_coeffs,
            fourier_n: n,
            spectral_radius: rho,
            tail_bound,
            attachment_residual: 0.0,
            stationarity_defect: 0.0,
        })
    }
}
