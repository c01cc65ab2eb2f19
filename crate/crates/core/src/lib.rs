//! Executable constructions around the weak-* compactification of sequence
//! spaces.
//!
//! * [`lattice`]: finite posets and lattices, adjunctions, and the topologies
//!   a finite order admits.
//! * [`idempotents`]: idempotents, e-p pairs, split chains and their
//!   truncated limits, over finite tables and sampled rational carriers.
//! * [`seqspace`]: finite-support sequences with exact rational coordinates,
//!   `l_p` norms, the clamps `r_n`, truncations `g_n` and the `d_*` metric.
//! * [`setrep`]: symbolic closed sets with certified membership, prefix-gap
//!   bounds, weak-* closure oracles and the no-loss classifier.
//! * [`analysis`]: transition-system analyses and the best robust
//!   approximation over finite metric spaces.
//! * [`oracle`]: brute-force reference procedures used to cross-check the
//!   above.

pub mod analysis;
pub mod idempotents;
pub mod lattice;
pub mod oracle;
pub mod rat;
pub mod seqspace;
pub mod setrep;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub use rat::{Bracket, ExtQ, Q};
