//! Sequence spaces `l_p`, `l_{m,p}` and their closed balls, computed on
//! finitely supported sequences with exact rational coordinates.
//!
//! Norms are returned as [`Dist`] values carrying the exact sum of `p`-th
//! powers next to a certified bracket for its root.

mod chain;
mod norm;
mod vec;

use num_traits::Signed;

pub use chain::{chain_ctx, Level, SpaceChain, SpaceCtx};
pub use norm::{dinf, dist, dstar, norm, Dist, Exponent};
pub use vec::SeqVec;

use crate::rat::Q;

/// The clamp `r_n` onto `[-n, n]`.
pub fn clamp(n: u32, t: &Q) -> Q {
    let b = Q::from_integer(n.into());
    if *t > b {
        b
    } else if t.abs() <= b {
        t.clone()
    } else {
        -b
    }
}

/// The truncation `g_n`: clamp the first `n` coordinates by `r_n`, zero the
/// rest.
pub fn truncate(n: u32, x: &SeqVec) -> SeqVec {
    x.head(n as usize).map(|_, t| clamp(n, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    #[test]
    fn clamp_cases() {
        assert_eq!(clamp(3, &q(5)), q(3));
        assert_eq!(clamp(3, &qf(3, 2)), qf(3, 2));
        assert_eq!(clamp(3, &q(-7)), q(-3));
        assert_eq!(clamp(0, &q(-7)), q(0));
    }

    #[test]
    fn truncate_cases() {
        let x = SeqVec::from_dense([q(3), q(-1), qf(1, 2), q(2)]);
        assert_eq!(truncate(2, &x), SeqVec::from_dense([q(2), q(-1)]));
        assert_eq!(truncate(0, &x), SeqVec::zero());
        assert_eq!(truncate(3, &truncate(3, &x)), truncate(3, &x));
    }
}
