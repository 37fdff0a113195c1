//! Certified bounds for the joint spectral radius of finite real matrix sets.
//!
//! The crate brackets `ρ(𝒜)` from both sides, measures irreducibility through
//! inscribed balls of symmetric orbit hulls, approximates a Barabanov norm on a
//! planar angle grid, and evaluates the explicit Lipschitz constant
//! `ν_p(𝒜) = max{1, ‖𝒜‖^p} / χ_p(𝒜)` controlling `|ρ(𝒜) − ρ(ℬ)| ≤ ν_p(𝒜)·H(𝒜, ℬ)`.

pub mod barabanov;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod irreducibility;
pub mod jsr;
pub mod linalg;
pub mod lipschitz;
pub mod metric;
pub mod semigroup;

pub use error::{Error, Result};
pub use linalg::{Matrix, MatrixSet, NormKind};
