//! Random trigonometric polynomials
//!
//! ```text
//! X_n(t) = u + n^{-1/2} Σ_{k=1}^{n} (A_k cos kt + B_k sin kt)
//! ```
//!
//! with i.i.d. zero-mean, unit-variance coefficients. The crate provides
//! sampling and fast evaluation ([`poly`]), real-root and lattice sign-change
//! counting ([`roots`]), closed forms and quadratures for the limiting
//! stationary Gaussian process with sinc covariance ([`gaussian`]), and
//! counter-based random substreams ([`rng`]) so Monte Carlo runs can be
//! reproduced independently of scheduling.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod gaussian;
pub mod poly;
mod quadrature;
pub mod rng;
pub mod roots;
pub mod stats;
pub mod synthesis;

pub use error::Error;
pub use gaussian::BivariatePair;

pub use poly::{CoefficientFamily, GridEvaluation, TrigPolySample};
pub use rng::RandomStream;
pub use synthesis::GridPlan;
pub use roots::{LatticeCounter, LatticeSpec, RootCounter, RootKind, RootLocation, RootTally, Snap};


pub type Result<T> = core::result::Result<T, Error>;
