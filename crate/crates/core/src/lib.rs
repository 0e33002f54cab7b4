//! Time-frequency analysis on expansible groups with a compact open subgroup,
//! realized exactly on the p-adic numbers `Q_p` and on Laurent series `F_p((t))`.
//!
//! Group elements live in the dense computable subrings `Z[1/p]` and
//! `F_p[t, 1/t]`, so every coset representative, ball center and lattice point
//! is exact. Function spaces are finite models: functions supported on `A^m H`
//! and constant on cosets of `A^{-k} H`, where `H` is the unit ball and `A` is
//! multiplication by `1/p` (resp. `1/t`).
//!
//! Modules:
//! - [`localfield`]: exact arithmetic, valuation, automorphism, character pairing.
//! - [`geometry`]: balls, coset reduction, canonical sections.
//! - [`density`]: Beurling density profiles and separated decompositions.
//! - [`model`]: finite models of `L^2(G)`, Fourier transform, STFT, norms.
//! - [`linalg`]: dense Hermitian eigen-solver and solves.
//! - [`gabor`]: Gabor systems, frame bounds, canonical duals.
//! - [`verify`]: the end-to-end check suite used by the CLI and the acceptance tests.

pub mod density;
pub mod error;
pub mod fft;
pub mod gabor;
pub mod geometry;
pub mod linalg;
pub mod localfield;
pub mod model;
pub mod random;
pub mod verify;

pub use error::{Error, Result};
pub use localfield::{GroupElement, GroupParams, Mode, Phase, Valuation};
