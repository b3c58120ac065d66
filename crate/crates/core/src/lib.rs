//! Dual-structure thermodynamics of relaxation processes.
//!
//! Equilibrium states of a thermodynamic system form a manifold carrying a
//! Riemannian metric and a pair of flat conjugate connections, all generated
//! by a convex potential. Newton-type relaxation toward a bath state `q` is
//! the gradient flow of the Bregman divergence `D*_q` (the negative
//! availability) in that geometry, and the sign of the Amari-Chentsov cubic
//! form on the flow velocity decides which of two equidistant initial states
//! relaxes faster.
//!
//! The crate provides:
//! - [`specfun`]: real polylogarithm and Gamma kernels for quantum gases,
//! - [`systems`]: a catalog of systems with analytic metric / cubic tensors,
//! - [`geometry`]: chart-level gradients, norms, cubic forms, curve lengths,
//! - [`flow`]: analytic and Runge-Kutta relaxation plus driven flows,
//! - [`analysis`]: equidistant solvers, asymmetry classification, speed-cost
//!   bound audits and the non-isobaric (Mpemba-like) scenario,
//! - [`cli`]: config ingestion and deterministic CSV/JSON export.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod specfun;
pub mod systems;
pub mod tensor;

pub use error::{Result, ThermoError};
