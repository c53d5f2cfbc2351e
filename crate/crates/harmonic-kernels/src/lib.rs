//! Boundary asymptotics of the Poisson kernel and the harmonic Bergman
//! kernel of radial model domains `{x_n > Φ(|x′|²)}`.
//!
//! The symbolic side computes the graded boundary symbols of the Poisson
//! operator `K`, of `Λ = K*K`, of `Λ⁻¹` and of `KΛ⁻¹K*` in exact rational
//! arithmetic, then transforms the center values into kernel expansions with
//! their logarithmic terms. The numeric side provides closed-form kernels,
//! finite-difference and spectral oracles, and least-squares fitting.

pub mod bergman_chain;
pub mod error;
pub mod kernel_transform;
pub mod numeric_oracle;
pub mod par;
pub mod poisson_recursion;
pub mod reference_kernels;
pub mod symbol_algebra;
pub mod verify;

pub use error::{Error, Result};
