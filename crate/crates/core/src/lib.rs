//! Numerical laboratory for open-system dynamics in which the system and
//! bath may start out correlated.
//!
//! A collection of joint initial states (an [`qdp::AssignmentFamily`]) and a
//! joint unitary induce a map on system states by tracing out the bath. The
//! crate audits such families for well-definedness, builds the induced map by
//! linear extension, certifies complete positivity through the Choi matrix,
//! and runs seeded experiments that walk through why only the uncorrelated
//! product scheme `rho_S (x) rho_B^fid` survives these requirements.

pub mod correlations;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod matlin;
pub mod qdp;
pub mod search;
pub mod states;

pub use error::{Error, Result};
