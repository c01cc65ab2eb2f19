use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::rat::{qpow, Bracket, ExtQ, Q};
use crate::seqspace::{norm, Exponent, SeqVec};
use crate::setrep::expr::SetExpr;
use crate::Result;

/// Refutation of closure membership: no member `y` satisfies
/// `|x_i - y_i| < delta` for all `i < n`, because the prefix gap is at least
/// `bound >= delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutCert {
    pub n: usize,
    pub delta: Q,
    pub bound: ExtQ,
}

/// A certified three-valued verdict. `Unknown` carries bounds on the
/// relevant distance from the point to the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriState {
    In { witness: String },
    Out { cert: Option<OutCert> },
    Unknown { lo: ExtQ, hi: ExtQ },
}

impl TriState {
    pub fn member() -> Self {
        TriState::In { witness: "member".into() }
    }

    pub fn out() -> Self {
        TriState::Out { cert: None }
    }

    pub fn unknown() -> Self {
        TriState::Unknown { lo: ExtQ::zero(), hi: ExtQ::Inf }
    }

    pub fn is_in(&self) -> bool {
        matches!(self, TriState::In { .. })
    }

    pub fn is_out(&self) -> bool {
        matches!(self, TriState::Out { .. })
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            TriState::In { .. } => "In",
            TriState::Out { .. } => "Out",
            TriState::Unknown { .. } => "Unknown",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            TriState::In { witness } => json!({"verdict": "In", "witness": witness}),
            TriState::Out { cert: None } => json!({"verdict": "Out"}),
            TriState::Out { cert: Some(c) } => json!({
                "verdict": "Out",
                "cert": {"n": c.n, "delta": crate::rat::fmt_q(&c.delta), "bound": c.bound.to_json()},
            }),
            TriState::Unknown { lo, hi } => json!({"verdict": "Unknown", "lo": lo.to_json(), "hi": hi.to_json()}),
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            TriState::member()
        } else {
            TriState::out()
        }
    }
}

/// Certified `||v||_p <= r`, plus the distance bracket `max(0, ||v|| - r)`
/// for reporting when undecided.
fn norm_le(v: &SeqVec, p: &Exponent, r: &Q, tol: &Q) -> Result<TriState> {
    // integer powers decide without a root
    if let (Some(k), false) = (p.as_int(), r.is_negative()) {
        let pow: Q = v.iter().map(|(_, t)| qpow(&t.abs(), k)).sum();
        return Ok(TriState::from_bool(pow <= qpow(r, k)));
    }
    let d = norm(v, p, tol)?;
    Ok(match d.le_q(r) {
        Some(b) => TriState::from_bool(b),
        None => excess(&d.value, r),
    })
}

fn excess(value: &Bracket, r: &Q) -> TriState {
    let z = Q::zero();
    TriState::Unknown { lo: ExtQ::Fin((&value.lo - r).max(z.clone())), hi: ExtQ::Fin((&value.hi - r).max(z)) }
}

fn sphere_contains(x: &SeqVec, r: &Q, p: &Exponent, tol: &Q) -> Result<TriState> {
    let d = norm(x, p, tol)?;
    if let Some(k) = p.as_int() {
        return Ok(TriState::from_bool(d.pow.value() == Some(&qpow(r, k))));
    }
    Ok(match d.value.cmp_q(r) {
        Some(Ordering::Equal) => TriState::member(),
        Some(_) => TriState::out(),
        None => match (d.pow.value(), p) {
            // rational p-th powers decide equality exactly
            (Some(pw), Exponent::Finite(e)) => {
                let rp = crate::rat::abs_pow_bracket(r, e, tol);
                match rp.value() {
                    Some(v) => TriState::from_bool(v == pw),
                    None => TriState::out(),
                }
            }
            _ => excess(&d.value, r),
        },
    })
}

/// Exact or certified membership of `x` in the set itself.
pub fn contains(e: &SetExpr, x: &SeqVec, tol: &Q) -> Result<TriState> {
    e.validate()?;
    contains_rec(e, x, tol)
}

fn contains_rec(e: &SetExpr, x: &SeqVec, tol: &Q) -> Result<TriState> {
    Ok(match e {
        SetExpr::Ball { center, r, p } => norm_le(&x.sub(center), p, r, tol)?,
        SetExpr::Interval { s, t } => {
            let end = s.support_end().max(t.support_end()).max(x.support_end());
            TriState::from_bool((0..end).all(|i| {
                let v = x.get(i);
                s.get(i) <= v && v <= t.get(i)
            }))
        }
        SetExpr::Points(ps) => TriState::from_bool(ps.contains(x)),
        SetExpr::UnitVectors => {
            TriState::from_bool(x.nnz() == 1 && x.iter().all(|(_, t)| *t == Q::from_integer(1.into())))
        }
        SetExpr::Sphere { r, p } => sphere_contains(x, r, p, tol)?,
        SetExpr::Kernel { functional, level, center, r, p } => {
            if functional.eval(x) != *level {
                TriState::out()
            } else {
                norm_le(&x.sub(center), p, r, tol)?
            }
        }
        SetExpr::Union(cs) => {
            let mut all_out = true;
            for c in cs {
                match contains_rec(c, x, tol)? {
                    TriState::In { .. } => return Ok(TriState::member()),
                    TriState::Out { .. } => {}
                    TriState::Unknown { .. } => all_out = false,
                }
            }
            if all_out {
                TriState::out()
            } else {
                TriState::unknown()
            }
        }
        SetExpr::Intersection(cs) => {
            let mut all_in = true;
            for c in cs {
                match contains_rec(c, x, tol)? {
                    TriState::In { .. } => {}
                    TriState::Out { .. } => return Ok(TriState::out()),
                    TriState::Unknown { .. } => all_in = false,
                }
            }
            if all_in {
                TriState::member()
            } else {
                TriState::unknown()
            }
        }
        SetExpr::Fatten { child, delta, p } => match set_dist(child, x, p, tol)? {
            Some((lo, hi)) => {
                if hi <= ExtQ::Fin(delta.clone()) {
                    TriState::member()
                } else if lo > ExtQ::Fin(delta.clone()) {
                    TriState::out()
                } else {
                    TriState::Unknown { lo, hi }
                }
            }
            None => TriState::unknown(),
        },
        SetExpr::Trunc { child, n } => {
            if x.support_end() > *n {
                TriState::out()
            } else {
                fiber_nonempty(child, x, *n, tol)?
            }
        }
    })
}

/// Whether some member `y` of `e` has `y_i = x_i` for all `i < n`.
fn fiber_nonempty(e: &SetExpr, x: &SeqVec, n: usize, tol: &Q) -> Result<TriState> {
    let head = x.head(n);
    Ok(match e {
        SetExpr::Ball { center, r, p } => norm_le(&head.sub(&center.head(n)), p, r, tol)?,
        SetExpr::Sphere { r, p } => norm_le(&head, p, r, tol)?,
        SetExpr::Interval { s, t } => contains_rec(&SetExpr::Interval { s: s.head(n), t: t.head(n) }, &head, tol)?,
        SetExpr::Points(ps) => TriState::from_bool(ps.iter().any(|y| y.head(n) == head)),
        SetExpr::UnitVectors => {
            TriState::from_bool(head.is_zero() || contains_rec(&SetExpr::UnitVectors, &head, tol)?.is_in())
        }
        SetExpr::Kernel { functional: crate::setrep::Functional::Ones, level, center, r, .. } => {
            let k = level - center.sum() + center.head(n).sum() - head.sum();
            let cost = head.sub(&center.head(n)).iter().fold(k.abs(), |a, (_, t)| a + t.abs());
            TriState::from_bool(cost <= *r)
        }
        SetExpr::Union(cs) => {
            let mut all_out = true;
            for c in cs {
                match fiber_nonempty(c, x, n, tol)? {
                    TriState::In { .. } => return Ok(TriState::member()),
                    TriState::Out { .. } => {}
                    TriState::Unknown { .. } => all_out = false,
                }
            }
            if all_out {
                TriState::out()
            } else {
                TriState::unknown()
            }
        }
        _ => {
            if contains_rec(e, &head, tol)?.is_in() {
                TriState::member()
            } else {
                TriState::unknown()
            }
        }
    })
}

/// Bracket for `d_p(x, e) = inf_{y ∈ e} ||x - y||_p` where a closed form is
/// available; `None` otherwise.
pub fn set_dist(e: &SetExpr, x: &SeqVec, p: &Exponent, tol: &Q) -> Result<Option<(ExtQ, ExtQ)>> {
    let from = |b: Bracket| (ExtQ::Fin(b.lo), ExtQ::Fin(b.hi));
    let zero = Q::zero();
    Ok(match e {
        SetExpr::Ball { center, r, p: bp } if bp == p => {
            let d = norm(&x.sub(center), p, tol)?.value;
            Some(from(Bracket::new((&d.lo - r).max(zero.clone()), (&d.hi - r).max(zero))))
        }
        SetExpr::Interval { s, t } => {
            let end = s.support_end().max(t.support_end()).max(x.support_end());
            let gap = SeqVec::from_pairs((0..end).map(|i| {
                let v = x.get(i);
                let lo = s.get(i);
                let hi = t.get(i);
                let g = if v < lo {
                    lo - v
                } else if v > hi {
                    v - hi
                } else {
                    Q::zero()
                };
                (i, g)
            }));
            Some(from(norm(&gap, p, tol)?.value))
        }
        SetExpr::Points(ps) => {
            if ps.is_empty() {
                return Ok(Some((ExtQ::Inf, ExtQ::Inf)));
            }
            let mut best: Option<Bracket> = None;
            for y in ps {
                let d = norm(&x.sub(y), p, tol)?.value;
                best = Some(match best {
                    None => d,
                    Some(b) => b.min(&d),
                });
            }
            best.map(from)
        }
        SetExpr::Union(cs) => {
            let mut best: Option<(ExtQ, ExtQ)> = None;
            for c in cs {
                let (lo, hi) = match set_dist(c, x, p, tol)? {
                    Some(d) => d,
                    None => return Ok(None),
                };
                best = Some(match best {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.min(hi)),
                });
            }
            best
        }
        SetExpr::Fatten { child, delta, p: fp } if fp == p => set_dist(child, x, p, tol)?.map(|(lo, hi)| {
            let shrink = |v: ExtQ| match v {
                ExtQ::Fin(v) => ExtQ::Fin((v - delta).max(Q::zero())),
                ExtQ::Inf => ExtQ::Inf,
            };
            (shrink(lo), shrink(hi))
        }),
        _ => match contains_rec(e, x, tol)? {
            TriState::In { .. } => Some((ExtQ::zero(), ExtQ::zero())),
            _ => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{pow2_neg, q, qf};

    fn tol() -> Q {
        pow2_neg(40)
    }

    #[test]
    fn primitive_membership() {
        let b = SetExpr::unit_ball(Exponent::two());
        assert!(contains(&b, &SeqVec::from_dense([qf(3, 5), qf(4, 5)]), &tol()).unwrap().is_in());
        let iv = SetExpr::interval(SeqVec::unit(0).neg(), SeqVec::unit(0));
        assert!(contains(&iv, &SeqVec::unit(1), &tol()).unwrap().is_out());
        let s = SetExpr::Sphere { r: q(1), p: Exponent::one() };
        assert!(contains(&s, &SeqVec::from_dense([qf(1, 2), qf(1, 2)]), &tol()).unwrap().is_in());
        let s32 = SetExpr::Sphere { r: q(1), p: "3/2".parse().unwrap() };
        // (4/9)^(3/2) + (5/9)^(3/2) is irrational, (1)^(3/2) = 1 is not
        assert!(contains(&s32, &SeqVec::from_dense([qf(4, 9), qf(5, 9)]), &tol()).unwrap().is_out());
        assert!(contains(&s32, &SeqVec::unit(3), &tol()).unwrap().is_in());
    }

    #[test]
    fn kernel_membership() {
        let k = SetExpr::ones_kernel();
        assert!(contains(&k, &SeqVec::from_dense([qf(1, 2), qf(-1, 2)]), &tol()).unwrap().is_in());
        assert!(contains(&k, &SeqVec::unit(0), &tol()).unwrap().is_out());
        assert!(contains(&k, &SeqVec::from_dense([q(1), q(-1)]), &tol()).unwrap().is_out());
    }

    #[test]
    fn fattened_interval() {
        let iv = SetExpr::interval(SeqVec::unit(0).neg(), SeqVec::unit(0));
        let f = SetExpr::Fatten { child: Box::new(iv), delta: qf(1, 2), p: Exponent::two() };
        assert!(contains(&f, &SeqVec::unit(0).scale(&qf(5, 4)), &tol()).unwrap().is_in());
        assert!(contains(&f, &SeqVec::unit(0).scale(&qf(7, 4)), &tol()).unwrap().is_out());
    }

    #[test]
    fn truncation_images() {
        let b = SetExpr::Trunc { child: Box::new(SetExpr::unit_ball(Exponent::two())), n: 2 };
        assert!(contains(&b, &SeqVec::from_dense([qf(3, 5), qf(4, 5)]), &tol()).unwrap().is_in());
        assert!(contains(&b, &SeqVec::unit(2).scale(&qf(1, 2)), &tol()).unwrap().is_out());
        let k = SetExpr::Trunc { child: Box::new(SetExpr::ones_kernel()), n: 1 };
        assert!(contains(&k, &SeqVec::unit(0).scale(&qf(1, 2)), &tol()).unwrap().is_in());
        assert!(contains(&k, &SeqVec::unit(0).scale(&qf(3, 4)), &tol()).unwrap().is_out());
    }

    #[test]
    fn combinators() {
        let u = SetExpr::Union(vec![SetExpr::Points(vec![SeqVec::zero()]), SetExpr::UnitVectors]);
        assert!(contains(&u, &SeqVec::unit(4), &tol()).unwrap().is_in());
        assert!(contains(&u, &SeqVec::unit(4).scale(&q(2)), &tol()).unwrap().is_out());
        let i = SetExpr::Intersection(vec![SetExpr::unit_ball(Exponent::Inf), SetExpr::UnitVectors]);
        assert!(contains(&i, &SeqVec::unit(2), &tol()).unwrap().is_in());
    }
}
