//! Finite posets, complete lattices, monotone maps and adjunctions, plus the
//! topologies a finite order can carry.
//!
//! Elements are indices `0..n`; subsets are bit masks ([`Mask`]). All
//! constructions are brute force and meant for carriers of a handful of
//! elements.

mod adjoint;
mod poset;
mod topology;

pub use adjoint::{check_adjunction, check_galois, is_monotone, right_adjoint, MonotoneMap};
pub use poset::{full_mask, members, FiniteLattice, FinitePoset, Mask, MAX_CARRIER};
pub use topology::{
    alexandrov, enumerate_t0_topologies, scott_opens, specialization_order, tau_top, FiniteTopology, DEFAULT_ENUM_BOUND,
};
