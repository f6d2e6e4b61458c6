//! Sparse binary measurement matrices for compressed sensing.
//!
//! The crate covers the whole pipeline around binary measurement matrices of
//! girth six:
//!
//! * [`matrices`]: array-code, DeVore and Euler-square constructions, seeded
//!   Gaussian baselines and Matrix Market IO.
//! * [`analysis`]: exact girth, degree profile, column overlap, coherence,
//!   rank and smallest singular value, and a sampled null-space check.
//! * [`bounds`]: closed-form sparsity guarantees and measurement bounds.
//! * [`solver`]: basis pursuit by operator splitting with a simplex oracle.
//! * [`experiments`]: seeded phase-transition sweeps and timing comparisons.
//! * [`report`]: CSV tables and SVG phase diagrams.
//! * [`cli`]: the `bincs` command-line front end.
//!
//! Each capability has a runnable program under `examples/`.

pub mod analysis;
pub mod bounds;
pub mod cli;
mod error;
pub mod experiments;
pub mod linalg;
pub mod matrices;
pub mod report;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
