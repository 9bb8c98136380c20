//! Simulation and exact analytics for random-measurement doped Clifford (RMDC)
//! circuits.
//!
//! The crate has two halves that are meant to be checked against each other:
//!
//! * a Monte Carlo side ([`state`], [`clifford`], [`experiments`]) that samples
//!   uniform Clifford layers, interleaves single-qubit measurements in the
//!   `B_θ` basis (or the corresponding dephasing channel) and estimates the
//!   subsystem purity together with its ensemble fluctuations;
//! * an exact side ([`rep`], [`fold`], [`analytics`]) built on the Haar and
//!   Clifford Weingarten calculus for 2 and 4 copies, which produces closed
//!   forms and transfer-matrix recurrences for the same quantities.

pub mod analytics;
pub mod circuit;
pub mod clifford;
pub mod error;
pub mod experiments;
pub mod fold;
pub mod rep;
pub mod state;
pub mod validation;

pub use error::{Error, Result};
