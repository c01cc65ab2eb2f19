use std::fmt;

use num_traits::Signed;

use crate::idempotents::{Endo, SampledChain};
use crate::rat::Q;
use crate::seqspace::{clamp, norm, truncate, Exponent, SeqVec};
use crate::{Error, Result};

/// The ambient space of a truncation chain.
///
/// * no `ball`, no `dim`: `l_p` with `g_n = truncate(n, ·)`;
/// * `dim = Some(m)`: `l_{m,p}` (`m = 1` is the real line) with `g_n`
///   clamping each of the `m` coordinates by `r_n`;
/// * `ball = Some((c, R))`: the closed ball `B(c, R)` of `l_p` with
///   `g_n(x) = (x_0, …, x_{n-1}, c_n, c_{n+1}, …)`; for the unit ball this
///   is plain truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceCtx {
    pub p: Exponent,
    pub ball: Option<(SeqVec, Q)>,
    pub dim: Option<usize>,
}

impl SpaceCtx {
    pub fn lp(p: Exponent) -> Self {
        SpaceCtx { p, ball: None, dim: None }
    }

    pub fn finite_dim(m: usize, p: Exponent) -> Self {
        SpaceCtx { p, ball: None, dim: Some(m) }
    }

    pub fn real_line() -> Self {
        Self::finite_dim(1, Exponent::two())
    }

    pub fn unit_ball(p: Exponent) -> Self {
        SpaceCtx { p, ball: Some((SeqVec::zero(), Q::from_integer(1.into()))), dim: None }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((_, r)) = &self.ball {
            if !r.is_positive() {
                return Err(Error::Input(format!("ball radius {r} must be positive")));
            }
            if self.dim.is_some() {
                return Err(Error::Input("a ball context is infinite-dimensional".into()));
            }
        }
        if self.dim == Some(0) {
            return Err(Error::Input("dimension must be at least 1".into()));
        }
        Ok(())
    }

    /// The idempotent `g_n` of this space.
    pub fn g(&self, n: usize) -> Endo<SeqVec> {
        match (&self.ball, self.dim) {
            (Some((c, _)), _) => {
                let c = c.clone();
                Endo::new(format!("g_{n}"), move |x: &SeqVec| {
                    let mut y = x.head(n);
                    for (i, t) in c.iter().filter(|(i, _)| *i >= n) {
                        y.set(i, t.clone());
                    }
                    y
                })
            }
            (None, Some(m)) => Endo::new(format!("g_{n}"), move |x: &SeqVec| {
                SeqVec::from_pairs((0..m).map(|i| (i, clamp(n as u32, &x.get(i)))))
            }),
            (None, None) => Endo::new(format!("g_{n}"), move |x: &SeqVec| truncate(n as u32, x)),
        }
    }

    /// Description of the `n`-th carrier `S_n`, the image of `g_n`.
    pub fn level(&self, n: usize) -> Level {
        match (&self.ball, self.dim) {
            (Some((c, r)), _) => Level::Ball { n, p: self.p.clone(), center: c.clone(), radius: r.clone() },
            (None, Some(m)) => Level::Box { dim: m, half_width: n, p: self.p.clone() },
            (None, None) => Level::Box { dim: n, half_width: n, p: self.p.clone() },
        }
    }
}

/// A finite-dimensional approximant `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Level {
    /// `[-w, w]^dim × 0^ω` with the metric `d_p`.
    Box { dim: usize, half_width: usize, p: Exponent },
    /// Points of the ball `B(c, R)` agreeing with `c` from index `n` on,
    /// i.e. the `n`-dimensional closed ball of radius `R` in `l_{n,p}`.
    Ball { n: usize, p: Exponent, center: SeqVec, radius: Q },
}

impl Level {
    pub fn dim(&self) -> usize {
        match self {
            Level::Box { dim, .. } => *dim,
            Level::Ball { n, .. } => *n,
        }
    }

    /// Certified membership; `None` when a root bracket straddles the
    /// radius.
    pub fn contains(&self, x: &SeqVec, tol: &Q) -> Option<bool> {
        match self {
            Level::Box { dim, half_width, .. } => {
                let w = Q::from_integer((*half_width).into());
                Some(x.support_end() <= *dim && x.iter().all(|(_, t)| t.abs() <= w))
            }
            Level::Ball { n, p, center, radius } => {
                let d = x.sub(center);
                if d.support_end() > *n {
                    return Some(false);
                }
                norm(&d, p, tol).ok()?.le_q(radius)
            }
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Box { dim, half_width, p } => write!(f, "[-{half_width},{half_width}]^{dim} with d_{p}"),
            Level::Ball { n, p, center, radius } if center.is_zero() => {
                write!(f, "closed ball of radius {radius} in l_({n},{p})")
            }
            Level::Ball { n, p, radius, .. } => {
                write!(f, "closed ball of radius {radius} in l_({n},{p}), shifted")
            }
        }
    }
}

/// The first `len` stages of the truncation chain of a space.
#[derive(Clone, Debug)]
pub struct SpaceChain {
    pub ctx: SpaceCtx,
    pub levels: Vec<Level>,
    pub chain: SampledChain<SeqVec>,
}

pub fn chain_ctx(ctx: &SpaceCtx, len: usize) -> Result<SpaceChain> {
    ctx.validate()?;
    Ok(SpaceChain {
        ctx: ctx.clone(),
        levels: (0..len).map(|n| ctx.level(n)).collect(),
        chain: SampledChain::new((0..len).map(|n| ctx.g(n)).collect()),
    })
}

impl SpaceChain {
    /// Checks on `sample` that each `g_n` maps into its declared carrier and
    /// fixes it pointwise there.
    pub fn check_levels(&self, sample: &[SeqVec], tol: &Q) -> Result<()> {
        for (n, level) in self.levels.iter().enumerate() {
            for x in sample {
                let y = self.chain.g(n).apply(x);
                if level.contains(&y, tol) == Some(false) {
                    return Err(Error::Input(format!("g_{n}({x}) = {y} lies outside {level}")));
                }
                if level.contains(x, tol) == Some(true) && y != *x {
                    return Err(Error::Input(format!("g_{n} moves {x}, a point of {level}")));
                }
            }
        }
        Ok(())
    }
}

impl Default for SpaceCtx {
    fn default() -> Self {
        SpaceCtx::lp(Exponent::two())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotents::sampled::{idem_leq, is_idempotent};
    use crate::rat::{pow2_neg, q, qf};

    fn sample() -> Vec<SeqVec> {
        let mut s = vec![SeqVec::zero()];
        for a in [-7, -2, 0, 1, 3] {
            for b in [-1, 0, 2] {
                for c in [0, 5] {
                    s.push(SeqVec::from_dense([qf(a, 2), q(b), q(c), qf(1, 3)]));
                }
            }
        }
        s
    }

    #[test]
    fn lp_levels_are_clamp_boxes() {
        let ch = chain_ctx(&SpaceCtx::lp(Exponent::two()), 7).unwrap();
        assert_eq!(ch.levels[3], Level::Box { dim: 3, half_width: 3, p: Exponent::two() });
        ch.chain.check_order(&sample()).unwrap();
        ch.check_levels(&sample(), &pow2_neg(40)).unwrap();
    }

    #[test]
    fn unit_ball_levels() {
        let ctx = SpaceCtx::unit_ball(Exponent::two());
        let ch = chain_ctx(&ctx, 5).unwrap();
        assert_eq!(ch.levels[3].dim(), 3);
        let inside = SeqVec::from_dense([qf(3, 5), qf(4, 5)]);
        assert_eq!(ch.levels[3].contains(&inside, &pow2_neg(40)), Some(true));
        assert_eq!(ch.levels[1].contains(&inside, &pow2_neg(40)), Some(false));
        assert_eq!(ch.chain.g(1).apply(&inside), SeqVec::unit(0).scale(&qf(3, 5)));
        let pts: Vec<SeqVec> = sample().into_iter().filter(|x| x.max_abs() <= q(1)).collect();
        ch.chain.check_order(&pts).unwrap();
    }

    #[test]
    fn real_line_level() {
        let ch = chain_ctx(&SpaceCtx::real_line(), 6).unwrap();
        assert_eq!(ch.levels[5], Level::Box { dim: 1, half_width: 5, p: Exponent::two() });
        let g5 = ch.chain.g(5);
        assert_eq!(g5.apply(&SeqVec::from_dense([q(9), q(3)])), SeqVec::from_dense([q(5)]));
        assert!(is_idempotent(g5, &sample()));
        assert!(idem_leq(ch.chain.g(2), g5, &sample()).unwrap());
    }

    #[test]
    fn shifted_ball_chain_stays_in_ball() {
        let c = SeqVec::from_dense([q(1), q(0), q(2)]);
        let ctx = SpaceCtx { p: Exponent::one(), ball: Some((c.clone(), q(3))), dim: None };
        let ch = chain_ctx(&ctx, 5).unwrap();
        let x = c.add(&SeqVec::from_dense([q(1), q(-1), q(1)]));
        assert_eq!(ch.chain.g(1).apply(&x), SeqVec::from_dense([q(2), q(0), q(2)]));
        ch.check_levels(&[x], &pow2_neg(40)).unwrap();
        assert!(chain_ctx(&SpaceCtx { ball: Some((c, q(0))), ..ctx }, 2).is_err());
    }
}
