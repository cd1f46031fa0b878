//! Topological certificates for eigenvalue degeneracies.
//!
//! A loop of real orthonormal eigenframes of a parameter-dependent real
//! symmetric Hamiltonian is a loop in SO(n). If that loop is not contractible
//! the Hamiltonian must become degenerate somewhere on every surface spanning
//! the parameter loop. This crate builds the frame loop, lifts it to 𝔰𝔬(n),
//! reads off the Z₂ class, and cross-checks against independent spin-lift
//! oracles. It also covers the projected-subspace variant and a surface
//! sweep of Berry phases for complex Hermitian families.

pub mod config;
pub mod error;
pub mod exec;
pub mod homotopy;
pub mod models;
pub mod oracles;
pub mod report;
pub mod skewlin;
pub mod stone;
pub mod subspace;
pub mod transport;

pub use config::Config;
pub use error::{Error, Result};
pub use exec::Exec;
