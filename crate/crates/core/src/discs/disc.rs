//! Stationary discs `ζ ↦ (z(ζ), w(ζ))` attached to the quadric `Re z = h(w)`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::fourier::{check_grid, fft, grid_angles, BoundaryFunction};
use super::oracles::check_stationary;
use crate::error::{Error, Result};
use crate::levi::LeviForm;
use crate::numlin::{solve_complex, spectral_radius, vec_norm, vec_sub, CMatrix, ComplexLu, C64};
use crate::stationary::{solve_quadratic, QuadraticPencil, SolverSettings, StationaryPairData};

/// Which matrix the rational form uses, or the truncated Taylor solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscVariant {
    X,
    ConjX,
    TransposeX,
    AdjointX,
    Taylor,
}

/// Order in which [`construct_disc`] tries the forms of `w`.
pub const DEFAULT_VARIANTS: [DiscVariant; 5] =
    [DiscVariant::X, DiscVariant::ConjX, DiscVariant::TransposeX, DiscVariant::AdjointX, DiscVariant::Taylor];

/// The `w` component.
#[derive(Clone, Debug, PartialEq)]
pub enum WForm {
    /// `w(ζ) = w₀ + (ζ − 1)(I − ζM)⁻¹ u`.
    Rational { m: CMatrix, u: Vec<C64> },
    /// `w(ζ) = Σ_p a_p ζ^p`.
    Taylor { coeffs: Vec<Vec<C64>> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalDisc {
    pub w0: Vec<C64>,
    pub y0: Vec<f64>,
    pub form: WForm,
    pub variant: DiscVariant,
    /// Taylor coefficients `z_0, …, z_{N/2−1}` of `z(ζ)`, each in `ℂᵏ`.
    pub z_coeffs: Vec<Vec<C64>>,
    pub fourier_n: usize,
    /// `ρ(M)`.
    pub spectral_radius: f64,
    /// `ρ(M)^{N/2} / (1 − ρ(M))`, the geometric bound on dropped coefficients.
    pub tail_bound: f64,
    /// `max_θ max_j |Re z_j − h_j(w)|` on the grid.
    pub attachment_residual: f64,
    pub stationarity_defect: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscSettings {
    pub fourier_n: usize,
    pub solver: SolverSettings,
    pub stationarity_tol: f64,
    pub attachment_tol: f64,
}

pub const DEFAULT_FOURIER_N: usize = 512;

impl Default for DiscSettings {
    fn default() -> Self {
        Self {
            fourier_n: DEFAULT_FOURIER_N,
            solver: SolverSettings::default(),
            stationarity_tol: 1e-8,
            attachment_tol: 1e-9,
        }
    }
}

/// `h_{j,w}(w) = conj(w)ᵀ A_j` for every `j`, as rows of a `k × m` matrix.
pub fn h_w(l: &LeviForm, w: &[C64]) -> CMatrix {
    let m = l.m();
    let mut out = CMatrix::zeros(l.k(), m);
    for (j, a) in l.matrices().iter().enumerate() {
        for col in 0..m {
            out[(j, col)] = (0..m).map(|i| w[i].conj() * a[(i, col)]).sum();
        }
    }
    out
}

fn tail_bound(rho: f64, n: usize) -> f64 {
    if rho == 0.0 {
        0.0
    } else {
        rho.powi((n / 2) as i32) / (1.0 - rho)
    }
}

impl RationalDisc {
    pub fn m(&self) -> usize {
        self.w0.len()
    }

    pub fn k(&self) -> usize {
        self.y0.len()
    }

    /// `M` of the rational form, if that is the form in use.
    pub fn matrix_m(&self) -> Option<&CMatrix> {
        match &self.form {
            WForm::Rational { m, .. } => Some(m),
            WForm::Taylor { .. } => None,
        }
    }

    pub fn w(&self, zeta: C64) -> Vec<C64> {
        match &self.form {
            WForm::Rational { m, u } => {
                let dim = self.m();
                let mut a = CMatrix::identity(dim);
                a.axpy(-zeta, m);
                let s = solve_complex(&a, u).expect("I - ζM is invertible for |ζ| ≤ 1 when ρ(M) < 1");
                self.w0.iter().zip(s).map(|(w0, si)| w0 + (zeta - 1.0) * si).collect()
            }
            WForm::Taylor { coeffs } => horner(coeffs, zeta),
        }
    }

    /// `w'(1)`; for the rational form `(I − M)⁻¹ u`.
    pub fn w_prime_at_one(&self) -> Vec<C64> {
        match &self.form {
            WForm::Rational { m, u } => {
                let mut a = CMatrix::identity(self.m());
                a.axpy(C64::new(-1.0, 0.0), m);
                solve_complex(&a, u).expect("I - M is invertible when ρ(M) < 1")
            }
            WForm::Taylor { coeffs } => derivative_at_one(coeffs),
        }
    }

    pub fn z(&self, zeta: C64) -> Vec<C64> {
        horner(&self.z_coeffs, zeta)
    }

    pub fn z_prime_at_one(&self) -> Vec<C64> {
        derivative_at_one(&self.z_coeffs)
    }

    /// `w` sampled on the `n`-point grid.
    pub fn boundary_w(&self, n: usize, offset: f64) -> Result<BoundaryFunction> {
        BoundaryFunction::sample(n, offset, |z| self.w(z))
    }

    /// `(θ, (z(e^{iθ}), w(e^{iθ})))` on the `n`-point grid.
    pub fn boundary_samples(&self, n: usize) -> Result<Vec<(f64, Vec<C64>)>> {
        check_grid(n)?;
        Ok(grid_angles(n, 0.0)
            .into_iter()
            .map(|theta| {
                let zeta = C64::from_polar(1.0, theta);
                let mut phi = self.z(zeta);
                phi.extend(self.w(zeta));
                (theta, phi)
            })
            .collect())
    }

    /// The same disc in coordinates `w = R w̃`, for `Ã_j = R A_j R` with
    /// Hermitian invertible `R`: `z` is unchanged, `M ↦ R M R⁻¹`, `u ↦ R u`.
    pub fn change_coordinates(&self, r: &CMatrix) -> Result<RationalDisc> {
        if r.rows() != self.m() || !r.is_square() {
            return Err(Error::DimensionMismatch { expected: self.m(), found: r.rows() });
        }
        let form = match &self.form {
            WForm::Rational { m, u } => {
                let r_inv = crate::numlin::inverse(r)?;
                WForm::Rational { m: &(r * m) * &r_inv, u: r.mul_vec(u) }
            }
            WForm::Taylor { coeffs } => WForm::Taylor { coeffs: coeffs.iter().map(|a| r.mul_vec(a)).collect() },
        };
        Ok(RationalDisc { w0: r.mul_vec(&self.w0), form, ..self.clone() })
    }

    /// Largest deviation from `w(1) = w₀`, `w'(1) = v`, `Im z(1) = y₀`.
    pub fn boundary_data_error(&self, p: &StationaryPairData) -> f64 {
        let one = C64::new(1.0, 0.0);
        let e_w = vec_norm(&vec_sub(&self.w(one), &p.w0));
        let e_v = vec_norm(&vec_sub(&self.w_prime_at_one(), &p.v));
        let e_y = self.z(one).iter().zip(&p.y0).map(|(z, y)| (z.im - y).abs()).fold(0.0, f64::max);
        e_w.max(e_v).max(e_y)
    }
}

fn horner(coeffs: &[Vec<C64>], zeta: C64) -> Vec<C64> {
    let dim = coeffs.first().map_or(0, Vec::len);
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    for a in coeffs.iter().rev() {
        for (s, ai) in acc.iter_mut().zip(a) {
            *s = *s * zeta + ai;
        }
    }
    acc
}

fn derivative_at_one(coeffs: &[Vec<C64>]) -> Vec<C64> {
    let dim = coeffs.first().map_or(0, Vec::len);
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    for (p, a) in coeffs.iter().enumerate().skip(1) {
        for (s, ai) in acc.iter_mut().zip(a) {
            *s += ai * (p as f64);
        }
    }
    acc
}

fn check_pair(l: &LeviForm, p: &StationaryPairData) -> Result<()> {
    let (m, k) = (l.m(), l.k());
    for (len, want) in [(p.lambda.len(), k), (p.c.len(), k), (p.y0.len(), k), (p.w0.len(), m), (p.v.len(), m)] {
        if len != want {
            return Err(Error::DimensionMismatch { expected: want, found: len });
        }
    }
    Ok(())
}

/// Solves the quadratic matrix equation for `(λ, c)` and builds the disc.
pub fn construct_disc(l: &LeviForm, p: &StationaryPairData, settings: &DiscSettings) -> Result<RationalDisc> {
    check_pair(l, p)?;
    let pencil = QuadraticPencil::from_levi(l, &p.lift());
    let sol = solve_quadratic(&pencil, &settings.solver)?;
    construct_disc_from(l, p, &sol.x, settings, &DEFAULT_VARIANTS)
}

/// Builds the disc from a known stable solvent `x`, trying `variants` in
/// order and keeping the first whose `w` passes the stationarity oracle.
/// `w'(1) = v` is enforced through `u = (I − M) v`; `z` is the holomorphic
/// function with `Re z = h(w)` on the circle and `Im z(1) = y₀`.
pub fn construct_disc_from(
    l: &LeviForm,
    p: &StationaryPairData,
    x: &CMatrix,
    settings: &DiscSettings,
    variants: &[DiscVariant],
) -> Result<RationalDisc> {
    check_pair(l, p)?;
    let n = settings.fourier_n;
    check_grid(n)?;
    if x.rows() != l.m() || !x.is_square() {
        return Err(Error::DimensionMismatch { expected: l.m(), found: x.rows() });
    }
    let rho = spectral_radius(x)?;
    if rho >= 1.0 {
        return Err(Error::StabilityViolation { spectral_radius: rho });
    }
    let lift = p.lift();
    let mut best = f64::INFINITY;
    for &variant in variants {
        let form = match variant {
            DiscVariant::X => rational_form(x.clone(), &p.v),
            DiscVariant::ConjX => rational_form(x.conj(), &p.v),
            DiscVariant::TransposeX => rational_form(x.transpose(), &p.v),
            DiscVariant::AdjointX => rational_form(x.adjoint(), &p.v),
            DiscVariant::Taylor => match taylor_form(&QuadraticPencil::from_levi(l, &lift), &p.w0, &p.v, n / 4) {
                Ok(f) => f,
                Err(_) => continue,
            },
        };
        let mut disc = RationalDisc {
            w0: p.w0.clone(),
            y0: p.y0.clone(),
            form,
            variant,
            z_coeffs: Vec::new(),
            fourier_n: n,
            spectral_radius: rho,
            tail_bound: tail_bound(rho, n),
            attachment_residual: 0.0,
            stationarity_defect: 0.0,
        };
        let check = check_stationary(l, &disc, &lift, n, settings.stationarity_tol)?;
        if check.pass {
            disc.stationarity_defect = check.defect;
            attach_z(l, &mut disc, &p.y0)?;
            if disc.attachment_residual > settings.attachment_tol {
                return Err(Error::AttachmentFailed {
                    residual: disc.attachment_residual,
                    tol: settings.attachment_tol,
                });
            }
            return Ok(disc);
        }
        best = best.min(check.defect);
    }
    Err(Error::ConstructionFailed { defect: best })
}

fn rational_form(m: CMatrix, v: &[C64]) -> WForm {
    let mut i_minus_m = CMatrix::identity(m.rows());
    i_minus_m.axpy(C64::new(-1.0, 0.0), &m);
    let u = i_minus_m.mul_vec(v);
    WForm::Rational { m, u }
}

/// Truncated power series: `P* a_{p+1} + 2Q a_p + P a_{p−1} = 0` for
/// `2 ≤ p ≤ D` with `a_{D+1} = 0`, plus `Σ a_p = w₀` and `Σ p a_p = v`.
fn taylor_form(pencil: &QuadraticPencil, w0: &[C64], v: &[C64], degree: usize) -> Result<WForm> {
    let m = pencil.dim();
    let d = degree.max(2);
    let size = (d + 1) * m;
    let p = pencil.p();
    let p_adj = p.adjoint();
    let q = pencil.q().as_matrix();
    let mut sys = CMatrix::zeros(size, size);
    let mut rhs = vec![C64::new(0.0, 0.0); size];
    let mut row = 0;
    for pp in 2..=d {
        for i in 0..m {
            for col in 0..m {
                if pp < d {
                    sys[(row + i, (pp + 1) * m + col)] = p_adj[(i, col)];
                }
                sys[(row + i, pp * m + col)] = q[(i, col)] * 2.0;
                sys[(row + i, (pp - 1) * m + col)] = p[(i, col)];
            }
        }
        row += m;
    }
    for i in 0..m {
        for pp in 0..=d {
            sys[(row + i, pp * m + i)] = C64::new(1.0, 0.0);
            sys[(row + m + i, pp * m + i)] = C64::new(pp as f64, 0.0);
        }
        rhs[row + i] = w0[i];
        rhs[row + m + i] = v[i];
    }
    let sol = ComplexLu::new(&sys)?.solve(&rhs);
    Ok(WForm::Taylor { coeffs: sol.chunks(m).map(<[C64]>::to_vec).collect() })
}

/// `w` on the unrotated `n`-point grid, one vector per point.
fn w_on_grid(disc: &RationalDisc, n: usize) -> Vec<Vec<C64>> {
    grid_angles(n, 0.0).into_iter().map(|t| disc.w(C64::from_polar(1.0, t))).collect()
}

/// Schwarz reconstruction of `z` from `x = h(w)` on the grid.
fn attach_z(l: &LeviForm, disc: &mut RationalDisc, y0: &[f64]) -> Result<()> {
    let n = disc.fourier_n;
    let k = l.k();
    let x: Vec<Vec<f64>> = w_on_grid(disc, n).iter().map(|w| l.quadric(w)).collect();
    let mut coeffs = vec![vec![C64::new(0.0, 0.0); k]; n / 2];
    let scale = 1.0 / (n as f64);
    for j in 0..k {
        let mut data: Vec<C64> = x.iter().map(|xi| C64::new(xi[j], 0.0)).collect();
        fft(&mut data, false);
        let mut im_tail = 0.0;
        for idx in 1..n / 2 {
            let zn = data[idx] * (2.0 * scale);
            im_tail += zn.im;
            coeffs[idx][j] = zn;
        }
        coeffs[0][j] = C64::new(data[0].re * scale, y0[j] - im_tail);
    }
    disc.z_coeffs = coeffs;
    disc.attachment_residual = attachment_residual(l, disc, n)?;
    Ok(())
}

/// `max_θ max_j |Re z_j(e^{iθ}) − h_j(w(e^{iθ}))|` over the `n`-point grid,
/// with `z` summed from the stored coefficients.
pub fn attachment_residual(l: &LeviForm, disc: &RationalDisc, n: usize) -> Result<f64> {
    check_grid(n)?;
    if disc.m() != l.m() || disc.k() != l.k() || disc.z_coeffs.iter().any(|z| z.len() != l.k()) {
        return Err(Error::DimensionMismatch { expected: l.k(), found: disc.k() });
    }
    let x: Vec<Vec<f64>> = w_on_grid(disc, n).iter().map(|w| l.quadric(w)).collect();
    let mut residual = 0.0f64;
    for j in 0..l.k() {
        // ζⁿ = 1 on the grid, so coefficients fold modulo n
        let mut back = vec![C64::new(0.0, 0.0); n];
        for (idx, z) in disc.z_coeffs.iter().enumerate() {
            back[idx % n] += z[j];
        }
        fft(&mut back, true);
        for (zb, xi) in back.iter().zip(&x) {
            residual = residual.max((zb.re - xi[j]).abs());
        }
    }
    Ok(residual)
}
