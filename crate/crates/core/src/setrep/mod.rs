//! Symbolic subsets of finitely supported sequences: exact membership,
//! prefix gaps, and a three-valued weak-* closure test.

mod closure;
mod expr;
mod gap;
mod member;

pub use closure::{
    closure, fatten, find_member, in_closure, mirror_witness, no_loss, sphere_witness, ClosureBracket, NoLoss, Probe,
    SphereWitness,
};
pub use expr::{Functional, SetExpr};
pub use gap::{prefix_gap, Gap};
pub use member::{contains, set_dist, OutCert, TriState};
