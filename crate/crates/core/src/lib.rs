//! Isogeometric quasi-Newton solvers for Bernoulli-type free boundary
//! problems on a 2D strip.
//!
//! The crate provides three schemes driven by the same shape-calculus
//! linearization: a coupled Galerkin scheme solving for the field and the
//! boundary update simultaneously, a decoupled (splitting) Galerkin scheme,
//! and a fully collocated scheme. A benchmark harness reproduces three
//! manufactured test problems with Dirichlet or periodic lateral conditions
//! and records per-iteration convergence histories.

pub mod benchmarks;
pub mod collocation;
pub mod dofs;
pub mod error;
pub mod galerkin;
pub mod geometry;
pub mod linalg;
pub mod problem;
pub mod quadrature;
pub mod solver;
pub mod spline;
pub mod svg;

pub use error::{Error, Result};
