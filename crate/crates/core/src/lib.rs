//! Finite semigroup laboratory.
//!
//! Semigroups are Cayley tables on `{0..n-1}`. On top of validation the
//! crate computes Green's H-classes and the Clifford part, the semilattice
//! reflection, congruence closures and Rees quotients, exact extremal
//! statistics for the structural closedness conditions, and topologies
//! generated by e-bases, together with suites that check the classical
//! lemmas on every instance of a corpus.

pub mod classifier;
pub mod clique;
pub mod config;
pub mod congruence;
pub mod error;
pub mod families;
pub mod lemmas;
pub mod predicates;
pub mod reflection;
pub mod semigroup;
pub mod sgp;
pub mod structure;
pub mod subset;
pub mod topology;

pub use config::Limits;
pub use error::{Error, Result};
pub use semigroup::FiniteSemigroup;
pub use subset::Subset;
