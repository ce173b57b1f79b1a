//! Holomorphic-extension oracles on sampled boundary data: stationarity,
//! defectiveness, the lift and its boundary jet at `ζ = 1`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::disc::{h_w, RationalDisc};
use super::fourier::{check_grid, grid_angles, BoundaryFunction};
use crate::error::{Error, Result};
use crate::levi::LeviForm;
use crate::numlin::{vec_norm, vec_sub, CMatrix, C64};
use crate::stationary::{DefectReport, LiftParams};

pub const DEFAULT_STATIONARITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationarityCheck {
    pub defect: f64,
    pub pass: bool,
}

/// `−Σ_j density_j · conj(w)ᵀ A_j`, the `w` part of the lift at one point.
fn lift_w_part(dw: &CMatrix, density: &[f64]) -> Vec<C64> {
    (0..dw.cols()).map(|col| -density.iter().enumerate().map(|(j, d)| dw[(j, col)] * d).sum::<C64>()).collect()
}

/// Does `ζ · Σ_j Re(λ_j ζ + c_j) · conj(w(ζ))ᵀ A_j` extend holomorphically?
pub fn check_stationary(
    l: &LeviForm,
    disc: &RationalDisc,
    p: &LiftParams,
    n: usize,
    tol: f64,
) -> Result<StationarityCheck> {
    if p.k() != l.k() {
        return Err(Error::DimensionMismatch { expected: l.k(), found: p.k() });
    }
    let f = BoundaryFunction::sample(n, 0.0, |zeta| {
        let density = p.density(zeta.arg());
        lift_w_part(&h_w(l, &disc.w(zeta)), &density).into_iter().map(|x| -x * zeta).collect()
    })?;
    let defect = f.holomorphic_extension_defect();
    Ok(StationarityCheck { defect, pass: defect <= tol })
}

/// Is there a nonzero `c ∈ ℝᵏ` with `Σ_j c_j conj(w)ᵀ A_j` holomorphic?
///
/// Operator `j` becomes the real vector of its negative Fourier coefficients
/// `n = −1, …, −N/2` (real and imaginary parts, all `m` components).
pub fn check_defective_fourier(l: &LeviForm, disc: &RationalDisc, n: usize, tol: f64) -> Result<DefectReport> {
    check_grid(n)?;
    let (m, k) = (l.m(), l.k());
    let f = BoundaryFunction::sample(n, 0.0, |zeta| h_w(l, &disc.w(zeta)).as_slice().to_vec())?;
    let coeffs = f.coefficients();
    let vectors: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let mut out = Vec::with_capacity(m * n);
            for col in 0..m {
                for z in &coeffs[j * m + col][n / 2..] {
                    out.push(z.re);
                    out.push(z.im);
                }
            }
            out
        })
        .collect();
    Ok(DefectReport::from_vectors(&vectors, tol))
}

/// Sampled lift `φ* = Re(λζ + c) · (½ I, −h_w)` on the unrotated grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftBoundary {
    pub fourier_n: usize,
    /// `Re(λ_j ζ + c_j)` per grid point.
    pub density: Vec<Vec<f64>>,
    /// The constant `ρ_z = ½ I`, stored as its scalar.
    pub dz_part: f64,
    /// `h_w(w(ζ))` per grid point, `k × m` with row `j = conj(w)ᵀ A_j`.
    pub dw_part: Vec<CMatrix>,
    /// Holomorphic-extension defect of `ζ · φ*`.
    pub pole_defect: f64,
}

impl LiftBoundary {
    /// `φ*(ζ_i) ∈ ℂ^{k+m}`: `(½ density, −Σ_j density_j h_{j,w})`.
    pub fn lift_vector(&self, i: usize) -> Vec<C64> {
        let d = &self.density[i];
        let mut out: Vec<C64> = d.iter().map(|x| C64::new(self.dz_part * x, 0.0)).collect();
        out.extend(lift_w_part(&self.dw_part[i], d));
        out
    }

    /// `ζ · φ*(ζ)` on the grid, one component per lift coordinate.
    pub fn times_zeta(&self) -> Result<BoundaryFunction> {
        let angles = grid_angles(self.fourier_n, 0.0);
        let rows: Vec<Vec<C64>> = (0..self.fourier_n)
            .map(|i| {
                let zeta = C64::from_polar(1.0, angles[i]);
                self.lift_vector(i).into_iter().map(|x| x * zeta).collect()
            })
            .collect();
        let dim = rows.first().map_or(0, Vec::len);
        BoundaryFunction::from_components((0..dim).map(|c| rows.iter().map(|r| r[c]).collect()).collect())
    }
}

/// Samples the lift of `disc` for `(λ, c)` and checks that `ζ φ*` extends
/// holomorphically; fails with [`Error::InconsistentLift`] otherwise.
pub fn lift_boundary(l: &LeviForm, disc: &RationalDisc, p: &LiftParams, n: usize, tol: f64) -> Result<LiftBoundary> {
    check_grid(n)?;
    if p.k() != l.k() {
        return Err(Error::DimensionMismatch { expected: l.k(), found: p.k() });
    }
    let angles = grid_angles(n, 0.0);
    let mut lift = LiftBoundary {
        fourier_n: n,
        density: angles.iter().map(|&t| p.density(t)).collect(),
        dz_part: 0.5,
        dw_part: angles.iter().map(|&t| h_w(l, &disc.w(C64::from_polar(1.0, t)))).collect(),
        pole_defect: 0.0,
    };
    lift.pole_defect = lift.times_zeta()?.holomorphic_extension_defect();
    if lift.pole_defect > tol {
        return Err(Error::InconsistentLift { defect: lift.pole_defect });
    }
    Ok(lift)
}

/// `(φ(1), φ*(1), i φ'(1), i φ*'(1))` with `φ = (z, w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetData {
    pub phi: Vec<C64>,
    pub phi_star: Vec<C64>,
    pub i_dphi: Vec<C64>,
    pub i_dphi_star: Vec<C64>,
}

impl JetData {
    pub fn to_vec(&self) -> Vec<C64> {
        [&self.phi, &self.phi_star, &self.i_dphi, &self.i_dphi_star].into_iter().flatten().copied().collect()
    }

    /// Euclidean distance of the concatenated jets.
    pub fn distance(&self, other: &JetData) -> f64 {
        vec_norm(&vec_sub(&self.to_vec(), &other.to_vec()))
    }
}

/// Boundary jet at `ζ = 1`. `w'(1)` comes from the closed form, `z'(1)` from
/// its Taylor coefficients, and `φ*'(1) = g'(1) − g(1)` from the holomorphic
/// extension `g = ζ φ*` differentiated spectrally.
pub fn evaluate_jet(l: &LeviForm, disc: &RationalDisc, lift: &LiftBoundary, p: &LiftParams) -> Result<JetData> {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut phi = disc.z(one);
    phi.extend(disc.w(one));

    let density = p.density(0.0);
    let mut phi_star: Vec<C64> = density.iter().map(|x| C64::new(lift.dz_part * x, 0.0)).collect();
    phi_star.extend(lift_w_part(&h_w(l, &disc.w(one)), &density));

    let mut dphi = disc.z_prime_at_one();
    dphi.extend(disc.w_prime_at_one());

    let n = lift.fourier_n;
    let coeffs = lift.times_zeta()?.coefficients();
    let dphi_star: Vec<C64> = coeffs
        .iter()
        .map(|c| {
            let (g, dg) = c[..n / 2]
                .iter()
                .enumerate()
                .fold((C64::new(0.0, 0.0), C64::new(0.0, 0.0)), |(g, dg), (idx, z)| (g + z, dg + z * (idx as f64)));
            dg - g
        })
        .collect();

    Ok(JetData {
        phi,
        phi_star,
        i_dphi: dphi.into_iter().map(|z| z * i).collect(),
        i_dphi_star: dphi_star.into_iter().map(|z| z * i).collect(),
    })
}
