//! Exact intersection numbers `<tau_{d_1} ... tau_{d_n}>_g` of psi classes
//! on the moduli spaces of stable pointed curves.
//!
//! Four independent evaluation strategies share one memo table:
//!
//! * [`dvv`]: the DVV (Virasoro) recursion, used as the reference;
//! * [`genus`]: strict genus descent, plus the `tau_0` identity driven by
//!   induction on the largest index;
//! * [`npoint`]: coefficient extraction from the exact n-point function.
//!
//! [`verify`] checks the correlator-level and generating-function-level
//! identities that tie them together.

pub mod arith;
pub mod cache;
pub mod combination;
pub mod dvv;
pub mod error;
pub mod genus;
pub mod key;
pub mod npoint;
pub mod poly;
pub mod rules;
pub mod scalar;
pub mod splits;
pub mod strategy;
pub mod verify;

pub use cache::CacheStore;
pub use error::{Error, Result};
pub use key::{canonicalize, CorrelatorKey};
pub use scalar::Scalar;
pub use strategy::{evaluate, Evaluator, Strategy};

/// Exact rational in lowest terms; the value type of every correlator.
pub type Rational = num_rational::BigRational;

/// Weighted sum of correlator products with exact coefficients.
pub type Combination = combination::LinearCombination<Rational>;

/// Homogeneous polynomial with exact coefficients.
pub type Polynomial = poly::HomogeneousPolynomial<Rational>;
