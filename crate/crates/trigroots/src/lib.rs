//! Monte Carlo harness and file formats for random trigonometric polynomials.
//!
//! The numerical kernels live in [`trigroots_core`]; this crate adds the
//! seeded, thread-count-independent experiment runners, CSV/JSON output and
//! the TOML configuration used by the `trigroots` binary.

pub mod config;
mod error;
pub mod experiments;
pub mod output;
mod parallel;
pub mod report;

pub use error::Error;
pub use trigroots_core;

pub type Result<T> = std::result::Result<T, Error>;

/// Version of the CSV/JSON layout; bumped on breaking changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "TRIGROOTS_THREADS";
