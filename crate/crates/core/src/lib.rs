//! Computational Clifford algebra for covariantly equipped first-order
//! systems.
//!
//! The crate builds the complexified algebra `C ⊗ Cl(r,s)` ([`clifford`]),
//! genforms over a tetrad ([`genform`]), a Hermitian-consistent matrix
//! representation ([`matrix_rep`]), Hermitian idempotents and their ideals
//! ([`spinor_ideals`]), a Friedrichs symmetric hyperbolic Cauchy solver
//! ([`solver`]) and the model Dirac / Dirac-Hestenes assemblies with their
//! verification harnesses ([`models`]). The `cliffsolve` binary drives all of
//! it from a TOML run configuration ([`config`], [`cli`]).

pub mod cli;
pub mod clifford;
pub mod config;
pub mod error;
pub mod genform;
pub mod linalg;
pub mod matrix_rep;
pub mod models;
pub mod report;
pub mod sampling;
pub mod solver;
pub mod spinor_ideals;

pub use clifford::{blade_product, Blade, Involution, Multivector, Parity, Signature, C64};
pub use error::{Error, Result};
pub use genform::{Tetrad, TensorComponents};
pub use matrix_rep::{GammaSet, LinearOperator, Side, StateLayout};
pub use spinor_ideals::{HermitianIdempotent, IdealSet};

/// Tolerances shared across modules.
pub mod tol {
    /// Floating relative tolerance for algebraic identities.
    pub const ALGEBRA: f64 = 1e-12;
    /// Tetrad orthonormality.
    pub const TETRAD: f64 = 1e-12;
    /// Hermitian idempotent checks.
    pub const IDEMPOTENT: f64 = 1e-13;
    /// Ideal membership, scaled by `max(1, ‖U‖)`.
    pub const MEMBERSHIP: f64 = 1e-12;
    /// Hermiticity of assembled matrices.
    pub const HERMITIAN: f64 = 1e-10;
    /// Minimum eigenvalue that counts as positive definite.
    pub const POSITIVE: f64 = 1e-10;
    /// Gauge potential membership in `L(t)`.
    pub const GAUGE: f64 = 1e-10;
    /// Default CFL number.
    pub const CFL: f64 = 0.4;
}
