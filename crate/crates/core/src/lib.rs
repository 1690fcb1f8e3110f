//! Bound-state spectra and wavefunctions of the radial Dirac equation for
//! five exactly solvable scalar/vector potentials.
//!
//! The radial pair is reduced to the Schrödinger-like equation
//!
//! ```text
//! -G'' + [k(k+1)/r² + (V_S² - V_V²) + 2m V_S + 2ε V_V] G = (ε² - m²) G
//! ```
//!
//! whose solutions are written as `G(r) = f(r) F(s(r))`, with `F` built from a
//! generalized Laguerre or Jacobi polynomial. [`models`] holds the catalog of
//! potentials and their relativistic spectra, [`nu_engine`] the factorization
//! machinery, and [`oracle`] an independent finite-difference eigensolver
//! used to cross-check every analytic result.
//!
//! Natural units (ħ = c = 1) are used throughout.

pub mod error;
pub mod models;
pub mod nu_engine;
pub mod oracle;
pub mod special_poly;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use models::{BoundState, MappedParams, ModelKind, ModelSpec};
pub use nu_engine::{Decomposition, FamilyData, QuantumNumbers, RadialFn, SpinBranch};
pub use oracle::{GridSpec, OracleResult};
pub use special_poly::PolyFamilyKind;
