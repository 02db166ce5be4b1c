//! Exact verification engine for Walsh–Fourier summability on the dyadic group.
//!
//! Functions are step functions on rank-`N` dyadic cells ([`StepFunction`]), over either
//! exact rationals or `f64` ([`Scalar`]). On top of that sit the classical kernels, matrix
//! transform means, exhaustive checks of the kernel lemmas, and evaluators for the known
//! approximation bounds in terms of the dyadic modulus of continuity.

pub mod bounds;
pub mod corpus;
pub mod dyadic;
pub mod error;
pub mod identities;
pub mod kernels;
pub mod means;
pub mod norm;
pub mod parse;
pub mod real;
pub mod scalar;

pub use dyadic::{DyadicPoint, StepFunction};
pub use error::{Error, Result};
pub use identities::{KernelIdentityId, KernelIdentityReport};
pub use means::{TriangularRow, WeightScheme};
pub use norm::LpExponent;
pub use real::Real;
pub use scalar::{Rational, Scalar, ScalarMode};
