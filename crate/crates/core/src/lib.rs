//! Iso-spectral Euler-Bernoulli beam operators.
//!
//! The canonical beam operator `L = d⁴/dz⁴ + d/dz(A d/dz) + B` is factorized
//! as `L = R*R` with a second-order factor `R = d²/dz² + r d/dz + s`. Swapping
//! the factors gives `L̂ = RR*`, which shares its eigenvalues with `L` (modulo
//! boundary conditions). The crate provides:
//!
//! - [`jets`]: truncated Taylor arithmetic holding raw derivatives,
//! - [`expr`]: a small expression language for user-supplied functions of `z`,
//! - [`factorization`]: the operators, their factor coefficients and the
//!   principal equation for `r`,
//! - [`families`]: closed-form solution families of the principal equation,
//! - [`symmetry`]: numerical verification of its Lie point symmetries,
//! - [`spectral`]: finite-difference spectra of beam operators.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod factorization;
pub mod families;
pub mod jets;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
pub use expr::Expr;
pub use factorization::{BeamCoefficients, FactorPair};
pub use jets::{Jet, JetFn};

/// Derivative order used when callers do not ask for a specific one.
pub const DEFAULT_ORDER: usize = 6;
