//! Idempotents, the idempotent order, splittings and chains of e-p pairs.
//!
//! [`finite`] works on function tables and decides every law exactly;
//! [`sampled`] works on closures over infinite carriers and checks laws on
//! explicit sample sets.

pub mod finite;
pub mod sampled;

pub use finite::{idem_leq, jointly_mono, split, EpPair, FinMap, SplitChain, Stage, TruncatedLimit};
pub use sampled::{Endo, SampledChain};

/// Default depth for truncated limits.
pub const DEFAULT_DEPTH: usize = 4;
