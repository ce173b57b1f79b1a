//! JSON fixtures: a Levi form, optional pair parameters, seed and tolerances.
//!
//! ```json
//! {"m": 2, "k": 2,
//!  "matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]], [[[0,0],[1,0]],[[1,0],[0,0]]]],
//!  "params": {"lambda": [[0.1,0],[0,0]], "c": [1,0]},
//!  "seed": 7}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major.

use levi_disc_core::levi::LeviForm;
use levi_disc_core::numlin::{CMatrix, HermitianMatrix, C64};
use levi_disc_core::stationary::StationaryPairData;
use serde::{Deserialize, Serialize};

/// Entrywise `|a_ij − conj(a_ji)|` allowed before a matrix is rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub type Complex = [f64; 2];

pub fn to_c64(z: &Complex) -> C64 {
    C64::new(z[0], z[1])
}

pub fn from_c64(z: &C64) -> Complex {
    [z.re, z.im]
}

pub fn to_c64_vec(v: &[Complex]) -> Vec<C64> {
    v.iter().map(to_c64).collect()
}

pub fn from_c64_vec(v: &[C64]) -> Vec<Complex> {
    v.iter().map(from_c64).collect()
}

pub fn matrix_to_json(a: &CMatrix) -> Vec<Vec<Complex>> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| from_c64(&a[(i, j)])).collect()).collect()
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FixtureError {
    FixtureError::Invalid { path: path.into(), message: message.into() }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationarity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attachment: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positivity_eps: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub lambda: Vec<Complex>,
    pub c: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<Vec<Complex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Complex>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub m: usize,
    pub k: usize,
    /// `k` matrices of `m` rows of `m` entries.
    pub matrices: Vec<Vec<Vec<Complex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fourier_n: Option<usize>,
}

/// Parses JSON, reporting the path of the offending value on failure.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FixtureError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        FixtureError::Parse { path, message: e.into_inner().to_string() }
    })
}

fn check_len(path: &str, found: usize, expected: usize) -> Result<(), FixtureError> {
    if found != expected {
        return Err(invalid(path, format!("expected {expected} entries, found {found}")));
    }
    Ok(())
}

fn check_finite(path: &str, values: impl IntoIterator<Item = f64>) -> Result<(), FixtureError> {
    if values.into_iter().any(|x| !x.is_finite()) {
        return Err(invalid(path, "non-finite number"));
    }
    Ok(())
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        parse_json(text)
    }

    pub fn from_form(l: &LeviForm) -> Self {
        Fixture {
            m: l.m(),
            k: l.k(),
            matrices: l.matrices().iter().map(|a| matrix_to_json(a.as_matrix())).collect(),
            params: None,
            seed: None,
            tolerances: None,
            fourier_n: None,
        }
    }

    /// Validates dimensions and Hermitian symmetry and builds the form.
    pub fn levi_form(&self) -> Result<LeviForm, FixtureError> {
        if self.m == 0 {
            return Err(invalid("m", "must be positive"));
        }
        if self.k == 0 {
            return Err(invalid("k", "must be positive"));
        }
        check_len("matrices", self.matrices.len(), self.k)?;
        let mut mats = Vec::with_capacity(self.k);
        for (j, rows) in self.matrices.iter().enumerate() {
            let path = format!("matrices[{j}]");
            check_len(&path, rows.len(), self.m)?;
            let mut data = Vec::with_capacity(self.m * self.m);
            for (i, row) in rows.iter().enumerate() {
                let row_path = format!("{path}[{i}]");
                check_len(&row_path, row.len(), self.m)?;
                check_finite(&row_path, row.iter().flatten().copied())?;
                data.extend(row.iter().map(to_c64));
            }
            let a = CMatrix::from_row_major(self.m, self.m, data).map_err(|e| invalid(&path, e.to_string()))?;
            let h = HermitianMatrix::new(a, HERMITIAN_TOL).map_err(|e| invalid(&path, e.to_string()))?;
            mats.push(h);
        }
        LeviForm::new(mats).map_err(|e| invalid("matrices", e.to_string()))
    }

    /// Pair data from `params`, with zero defaults for `w0`, `y0`, `v`.
    pub fn pair_data(&self) -> Result<Option<StationaryPairData>, FixtureError> {
        let Some(p) = &self.params else { return Ok(None) };
        let (m, k) = (self.m, self.k);
        check_len("params.lambda", p.lambda.len(), k)?;
        check_finite("params.lambda", p.lambda.iter().flatten().copied())?;
        check_len("params.c", p.c.len(), k)?;
        check_finite("params.c", p.c.iter().copied())?;
        let w0 = match &p.w0 {
            Some(w) => {
                check_len("params.w0", w.len(), m)?;
                check_finite("params.w0", w.iter().flatten().copied())?;
                to_c64_vec(w)
            }
            None => vec![C64::new(0.0, 0.0); m],
        };
        let y0 = match &p.y0 {
            Some(y) => {
                check_len("params.y0", y.len(), k)?;
                check_finite("params.y0", y.iter().copied())?;
                y.clone()
            }
            None => vec![0.0; k],
        };
        let v = match &p.v {
            Some(v) => {
                check_len("params.v", v.len(), m)?;
                check_finite("params.v", v.iter().flatten().copied())?;
                to_c64_vec(v)
            }
            None => vec![C64::new(0.0, 0.0); m],
        };
        Ok(Some(StationaryPairData { lambda: to_c64_vec(&p.lambda), c: p.c.clone(), w0, y0, v }))
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.clone().unwrap_or_default()
    }
}
