//! Explicit stationary discs for the quadric and Fourier oracles on their
//! boundary values.
//!
//! Conventions: the pairing is bilinear, `⟨a, b⟩ = Σ a_l b_l`, so
//! `h_j(w) = conj(w)ᵀ A_j w` and `h_{j,w} = conj(w)ᵀ A_j`. For the quadric
//! `ρ = x − h(w)` gives `∂ρ = (½ I, −h_w)` and no correction matrix is needed
//! in the lift.

mod disc;
mod fourier;
mod oracles;

pub use crate::stationary::StationaryPairData;
pub use disc::{
    attachment_residual, construct_disc, construct_disc_from, h_w, DiscSettings, DiscVariant, RationalDisc, WForm,
    DEFAULT_FOURIER_N, DEFAULT_VARIANTS,
};
pub use fourier::{fft, grid_angles, holomorphic_extension_defect, signed_frequency, BoundaryFunction};
pub use oracles::{
    check_defective_fourier, check_stationary, evaluate_jet, lift_boundary, JetData, LiftBoundary, StationarityCheck,
    DEFAULT_STATIONARITY_TOL,
};
