//! Cross-validation, training error and instability of nearest-neighbor
//! voting on noisy Boolean functions.
//!
//! The numeric core is generic over [`Scalar`]: `f64`/`f32` for speed and
//! [`num_rational::BigRational`] when a claim should hold exactly. The
//! aliases below fix the two usual choices.

pub mod bits;
pub mod black_box;
pub mod curves;
pub mod error;
pub mod error_theory;
pub mod estimators;
pub mod knn;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod selection;
pub mod stability;
pub mod stats;
pub mod verify;

pub use bits::{BitMatrix, BitVector};
pub use error::{Error, Result};
pub use scalar::{exact, Scalar};

/// Floating-point scalar used by the CLI and Monte Carlo code.
pub type Real = f64;
/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type RealVotingConfig = knn::VotingConfig<Real>;
pub type ExactVotingConfig = knn::VotingConfig<Exact>;
pub type RealExpectedErrors = error_theory::ExpectedErrors<Real>;
pub type ExactExpectedErrors = error_theory::ExpectedErrors<Exact>;
