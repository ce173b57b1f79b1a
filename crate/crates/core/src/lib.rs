//! Vector-valued Levi forms of generic CR quadrics and their stationary discs.
//!
//! A quadric `x_j = ⟨A_j w, w̄⟩`, `1 ≤ j ≤ k`, in `ℂ^{k+m}` is described by a
//! [`levi::LeviForm`]. The crate classifies such forms, solves the quadratic
//! matrix equation `P* X² + 2 Q X + P = 0` for its stable solvent, decides
//! whether a stationary disc is defective through the Krylov span `S(X, v)`,
//! searches for non-defective stationary pairs, and builds explicit discs with
//! their lifts so both defectiveness criteria can be checked against each
//! other on sampled boundary data.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod discs;
mod error;
pub mod levi;
pub mod numlin;
pub mod sample;
pub mod stationary;

pub use error::{Error, Result};
