//! Prefix gaps `inf_{y ∈ C} max_{i<n} |x_i - y_i|`.
//!
//! The coordinates from `n` on are unconstrained by the gap, so each
//! primitive reduces to a small finite-dimensional problem with a closed
//! form. Combinators propagate certified bounds.

use num_traits::{One, Signed, Zero};

use crate::rat::{abs_pow_bracket, from_f64, qf, qpow, root_bracket, root_exact, to_f64, Bracket, ExtQ, Q};
use crate::seqspace::{Exponent, SeqVec};
use crate::setrep::expr::{Functional, SetExpr};
use crate::setrep::member::contains;
use crate::{Error, Result};

/// Bracket `[lo, hi]` for a prefix gap; `Inf` stands for an empty set (as a
/// lower bound) or for "no upper bound known".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub lo: ExtQ,
    pub hi: ExtQ,
}

impl Gap {
    pub fn exact(v: Q) -> Self {
        Gap { lo: ExtQ::Fin(v.clone()), hi: ExtQ::Fin(v) }
    }

    pub fn zero() -> Self {
        Gap::exact(Q::zero())
    }

    /// The gap to the empty set.
    pub fn empty() -> Self {
        Gap { lo: ExtQ::Inf, hi: ExtQ::Inf }
    }

    pub fn bracket(b: Bracket) -> Self {
        Gap { lo: ExtQ::Fin(b.lo), hi: ExtQ::Fin(b.hi) }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    fn union(self, other: Gap) -> Gap {
        Gap { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    fn raise(self, t: &Q) -> Gap {
        let up = |v: ExtQ| v.max(ExtQ::Fin(t.clone()));
        Gap { lo: up(self.lo), hi: up(self.hi) }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"lo": self.lo.to_json(), "hi": self.hi.to_json()})
    }
}

/// Bracket for `inf_{y ∈ e} max_{i<n} |x_i - y_i|`.
pub fn prefix_gap(e: &SetExpr, x: &SeqVec, n: usize, tol: &Q) -> Result<Gap> {
    e.validate()?;
    if n == 0 {
        return Err(Error::Input("prefix length must be at least 1".into()));
    }
    if !tol.is_positive() {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    gap_rec(e, x, n, tol)
}

pub(crate) fn gap_rec(e: &SetExpr, x: &SeqVec, n: usize, tol: &Q) -> Result<Gap> {
    gap_with(e, x, n, tol, true)
}

/// The lower end of the prefix gap alone; upper ends that need a search are
/// left at `Inf`.
pub(crate) fn gap_lower(e: &SetExpr, x: &SeqVec, n: usize, tol: &Q) -> Result<ExtQ> {
    Ok(gap_with(e, x, n, tol, false)?.lo)
}

fn gap_with(e: &SetExpr, x: &SeqVec, n: usize, tol: &Q, upper: bool) -> Result<Gap> {
    if n == 0 {
        // only emptiness matters for an empty prefix
        let one = gap_with(e, x, 1, tol, upper)?;
        return Ok(Gap {
            lo: if one.lo == ExtQ::Inf { ExtQ::Inf } else { ExtQ::zero() },
            hi: if one.hi == ExtQ::Inf { ExtQ::Inf } else { ExtQ::zero() },
        });
    }
    Ok(match e {
        SetExpr::Ball { center, r, p } => {
            let a: Vec<Q> = (0..n).map(|i| (x.get(i) - center.get(i)).abs()).collect();
            ball_gap(a, r, p, tol)
        }
        SetExpr::Sphere { r, p } => {
            // any prefix of norm <= r extends to the sphere through the tail
            let a: Vec<Q> = (0..n).map(|i| x.get(i).abs()).collect();
            ball_gap(a, r, p, tol)
        }
        SetExpr::Interval { s, t } => Gap::exact(
            (0..n)
                .map(|i| {
                    let v = x.get(i);
                    let (lo, hi) = (s.get(i), t.get(i));
                    if v < lo {
                        lo - v
                    } else if v > hi {
                        v - hi
                    } else {
                        Q::zero()
                    }
                })
                .max()
                .unwrap_or_else(Q::zero),
        ),
        SetExpr::Points(ps) => ps
            .iter()
            .map(|y| (0..n).map(|i| (x.get(i) - y.get(i)).abs()).max().unwrap_or_else(Q::zero))
            .min()
            .map_or_else(Gap::empty, Gap::exact),
        SetExpr::UnitVectors => {
            let abs: Vec<Q> = (0..n).map(|i| x.get(i).abs()).collect();
            let far = abs.iter().max().cloned().unwrap_or_else(Q::zero);
            let near = (0..n).map(|j| {
                let hit = (x.get(j) - Q::one()).abs();
                abs.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| v.clone()).fold(hit, Q::max)
            });
            Gap::exact(near.fold(far, Q::min))
        }
        SetExpr::Kernel { functional: Functional::Ones, level, center, r, .. } => {
            let a: Vec<Q> = (0..n).map(|i| x.get(i) - center.get(i)).collect();
            kernel_gap(&a, &(level - center.sum()), r)
        }
        SetExpr::Kernel { functional: Functional::Coeffs(_), center, r, p, .. } => {
            let a: Vec<Q> = (0..n).map(|i| (x.get(i) - center.get(i)).abs()).collect();
            let outer = ball_gap(a, r, p, tol);
            let hi = if upper && contains(e, x, tol)?.is_in() { ExtQ::zero() } else { ExtQ::Inf };
            Gap { lo: outer.lo, hi }
        }
        SetExpr::Union(cs) => {
            let mut acc = Gap::empty();
            for c in cs {
                acc = acc.union(gap_with(c, x, n, tol, upper)?);
            }
            acc
        }
        SetExpr::Intersection(cs) => {
            let mut lo = ExtQ::zero();
            for c in cs {
                lo = lo.max(gap_with(c, x, n, tol, upper)?.lo);
            }
            let hi = if lo == ExtQ::Inf || !upper {
                ExtQ::Inf
            } else if contains(e, x, tol)?.is_in() {
                ExtQ::zero()
            } else {
                match feasible_point(cs, x, tol) {
                    Some(y) => ExtQ::Fin((0..n).map(|i| (x.get(i) - y.get(i)).abs()).max().unwrap_or_else(Q::zero)),
                    None => ExtQ::Inf,
                }
            };
            Gap { hi: hi.max(lo.clone()), lo }
        }
        SetExpr::Fatten { child, delta, .. } => {
            // the sup-prefix distance is dominated by every d_p
            let g = gap_with(child, x, n, tol, upper)?;
            let lo = match g.lo {
                ExtQ::Fin(v) => ExtQ::Fin((v - delta).max(Q::zero())),
                ExtQ::Inf => ExtQ::Inf,
            };
            Gap { lo, hi: g.hi }
        }
        SetExpr::Trunc { child, n: m } => {
            if n <= *m {
                gap_with(child, x, n, tol, upper)?
            } else {
                let tail = (*m..n).map(|i| x.get(i).abs()).max().unwrap_or_else(Q::zero);
                gap_with(child, x, *m, tol, upper)?.raise(&tail)
            }
        }
    })
}

/// Smallest `t >= 0` with `Σ max(0, a_i - t)^p <= r^p` (or `max` for
/// `p = inf`), given `a_i >= 0`.
fn ball_gap(mut a: Vec<Q>, r: &Q, p: &Exponent, tol: &Q) -> Gap {
    a.retain(|v| v.is_positive());
    a.sort_by(|u, v| v.cmp(u));
    let Some(top) = a.first().cloned() else {
        return Gap::zero();
    };
    match p {
        Exponent::Inf => Gap::exact((top - r).max(Q::zero())),
        Exponent::Finite(e) if e.is_one() => {
            let total: Q = a.iter().sum();
            if total <= *r {
                return Gap::zero();
            }
            // on [a_j, a_{j-1}] exactly the top j terms are active
            let mut s = Q::zero();
            for j in 1..=a.len() {
                s += &a[j - 1];
                let t = (&s - r) / Q::from_integer(j.into());
                let floor = a.get(j).cloned().unwrap_or_else(Q::zero);
                if t >= floor && t <= a[j - 1] {
                    return Gap::exact(t);
                }
            }
            unreachable!("piecewise-linear root must exist")
        }
        Exponent::Finite(e) => {
            let k = e.is_integer().then(|| e.to_integer());
            if k == Some(2.into()) {
                return ball_gap_quadratic(&a, r, tol);
            }
            ball_gap_bisect(&a, r, e, tol)
        }
    }
}

fn ball_gap_quadratic(a: &[Q], r: &Q, tol: &Q) -> Gap {
    let r2 = r * r;
    let phi = |t: &Q| a.iter().filter(|v| *v > t).map(|v| qpow(&(v - t), 2)).sum::<Q>();
    if phi(&Q::zero()) <= r2 {
        return Gap::zero();
    }
    let (mut s1, mut s2) = (Q::zero(), Q::zero());
    for j in 1..=a.len() {
        s1 += &a[j - 1];
        s2 += qpow(&a[j - 1], 2);
        let floor = a.get(j).cloned().unwrap_or_else(Q::zero);
        let ceil = a[j - 1].clone();
        // the piece is [floor, ceil]; phi decreases, so the root lies here
        // iff phi(floor) >= r^2 >= phi(ceil)
        if phi(&floor) < r2 {
            continue;
        }
        let jq = Q::from_integer(j.into());
        let disc = &s1 * &s1 - &jq * (&s2 - &r2);
        if let Some(sq) = root_exact(&disc, 2) {
            return Gap::exact((&s1 - sq) / &jq);
        }
        let sq = root_bracket(&disc, 2, &(tol * &jq));
        let lo = ((&s1 - &sq.hi) / &jq).max(floor);
        let hi = ((&s1 - &sq.lo) / &jq).min(ceil);
        return Gap::bracket(Bracket::new(lo, hi));
    }
    unreachable!("quadratic root must exist")
}

fn ball_gap_bisect(a: &[Q], r: &Q, e: &Q, tol: &Q) -> Gap {
    let inner = tol * qf(1, (a.len() as i64 + 1) * 4);
    let rp = abs_pow_bracket(r, e, &inner);
    let phi = |t: &Q| {
        a.iter()
            .filter(|v| *v > t)
            .map(|v| abs_pow_bracket(&(v - t), e, &inner))
            .fold(Bracket::zero(), |s, b| s.add(&b))
    };
    // Some(true): certainly feasible; Some(false): certainly infeasible
    let feasible = |t: &Q| {
        let f = phi(t);
        if f.hi <= rp.lo {
            Some(true)
        } else if f.lo > rp.hi {
            Some(false)
        } else {
            None
        }
    };
    let mut lo = Q::zero();
    match feasible(&lo) {
        Some(true) => return Gap::zero(),
        Some(false) => {}
        None => return Gap::bracket(Bracket::new(Q::zero(), a[0].clone())),
    }
    let mut hi = a[0].clone();
    let two = Q::from_integer(2.into());
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        match feasible(&mid) {
            Some(true) => hi = mid,
            Some(false) => lo = mid,
            None => break,
        }
    }
    Gap::bracket(Bracket::new(lo, hi))
}

/// Gap to `{y : Σ y = L, ||y - c||_1 <= R}` where `a_i = x_i - c_i` for the
/// prefix and `k = L - Σ c`. With `u = y - c` on the prefix the cheapest
/// completion costs `Σ|u_i| + |k - Σ u_i|`, minimized over the box
/// `|u_i - a_i| <= t` by `u_i = sgn(a_i) max(0, |a_i| - t)`.
fn kernel_gap(a: &[Q], k: &Q, r: &Q) -> Gap {
    if k.abs() > *r {
        return Gap::empty();
    }
    let shrink = |t: &Q| -> (Q, Q) {
        let (mut mass, mut sum) = (Q::zero(), Q::zero());
        for v in a {
            let m = (v.abs() - t).max(Q::zero());
            sum += if v.is_negative() { -m.clone() } else { m.clone() };
            mass += m;
        }
        (mass, sum)
    };
    let phi = |t: &Q| {
        let (mass, sum) = shrink(t);
        mass + (k - sum).abs()
    };
    let mut pts: Vec<Q> = std::iter::once(Q::zero()).chain(a.iter().map(Q::abs)).collect();
    pts.sort();
    pts.dedup();
    // add the zeros of k - S(t), where S is linear between breakpoints
    let mut all = pts.clone();
    for w in pts.windows(2) {
        let (s0, s1) = (shrink(&w[0]).1, shrink(&w[1]).1);
        if s0 != s1 {
            let t = &w[0] + (k - &s0) * (&w[1] - &w[0]) / (&s1 - &s0);
            if t > w[0] && t < w[1] {
                all.push(t);
            }
        }
    }
    all.sort();
    let vals: Vec<Q> = all.iter().map(phi).collect();
    if vals[0] <= *r {
        return Gap::zero();
    }
    for i in 1..all.len() {
        if vals[i] <= *r {
            let t = &all[i - 1] + (&vals[i - 1] - r) * (&all[i] - &all[i - 1]) / (&vals[i - 1] - &vals[i]);
            return Gap::exact(t);
        }
    }
    // past the last breakpoint phi is the constant |k| <= r
    Gap::exact(all.last().cloned().unwrap_or_else(Q::zero))
}

type Projection = Box<dyn Fn(&mut [f64])>;

/// Tries to exhibit a point in the intersection of convex primitives by
/// alternating projections in floating point, started at `x` and verified
/// exactly. Returns `None` when some operand has no projection or the
/// rounded point fails verification.
pub(crate) fn feasible_point(cs: &[SetExpr], x: &SeqVec, tol: &Q) -> Option<SeqVec> {
    const ROUNDS: usize = 200;
    let dim = cs.iter().map(SetExpr::support_end).max().unwrap_or(0).max(x.support_end());
    let dense = |v: &SeqVec| -> Vec<f64> { (0..dim).map(|i| to_f64(&v.get(i))).collect() };
    let mut projs: Vec<Projection> = Vec::new();
    for c in cs {
        match c {
            SetExpr::Ball { center, r, p } => {
                let c0 = dense(center);
                let r = to_f64(r) * (1.0 - 1e-9);
                match p {
                    Exponent::Inf => projs.push(Box::new(move |y: &mut [f64]| {
                        for (v, c) in y.iter_mut().zip(&c0) {
                            *v = v.clamp(c - r, c + r);
                        }
                    })),
                    Exponent::Finite(e) if e.is_one() => projs.push(Box::new(move |y: &mut [f64]| {
                        let d: Vec<f64> = y.iter().zip(&c0).map(|(v, c)| v - c).collect();
                        let d = project_l1(&d, r);
                        for ((v, c), w) in y.iter_mut().zip(&c0).zip(d) {
                            *v = c + w;
                        }
                    })),
                    Exponent::Finite(e) if *e == Q::from_integer(2.into()) => {
                        projs.push(Box::new(move |y: &mut [f64]| {
                            let nrm = y.iter().zip(&c0).map(|(v, c)| (v - c) * (v - c)).sum::<f64>().sqrt();
                            if nrm > r {
                                for (v, c) in y.iter_mut().zip(&c0) {
                                    *v = c + (*v - c) * r / nrm;
                                }
                            }
                        }))
                    }
                    _ => return None,
                }
            }
            SetExpr::Interval { s, t } => {
                let (lo, hi) = (dense(s), dense(t));
                projs.push(Box::new(move |y: &mut [f64]| {
                    for i in 0..y.len() {
                        let m = ((hi[i] - lo[i]) / 4.0).min(1e-9);
                        y[i] = y[i].clamp(lo[i] + m, hi[i] - m);
                    }
                }));
            }
            SetExpr::Points(ps) if ps.len() == 1 => {
                let p0 = dense(&ps[0]);
                projs.push(Box::new(move |y: &mut [f64]| y.copy_from_slice(&p0)));
            }
            _ => return None,
        }
    }
    let mut y = dense(x);
    for _ in 0..ROUNDS {
        let before = y.clone();
        for p in &projs {
            p(&mut y);
        }
        if before.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-15) {
            break;
        }
    }
    let mut snapped = SeqVec::from_pairs(y.iter().enumerate().filter_map(|(i, v)| {
        let v = if v.abs() < 1e-14 { 0.0 } else { *v };
        // round to a dyadic grid to keep denominators small
        from_f64((v * 2f64.powi(40)).round() / 2f64.powi(40)).map(|q| (i, q))
    }));
    // pinned interval coordinates may be non-dyadic
    for c in cs {
        if let SetExpr::Interval { s, t } = c {
            for i in 0..dim {
                let v = snapped.get(i).clamp(s.get(i), t.get(i));
                snapped.set(i, v);
            }
        }
    }
    let ok = cs.iter().all(|c| contains(c, &snapped, tol).map(|t| t.is_in()).unwrap_or(false));
    ok.then_some(snapped)
}

/// Euclidean projection onto the l_1 ball of radius `r`.
fn project_l1(v: &[f64], r: f64) -> Vec<f64> {
    let total: f64 = v.iter().map(|t| t.abs()).sum();
    if total <= r {
        return v.to_vec();
    }
    let mut u: Vec<f64> = v.iter().map(|t| t.abs()).collect();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - r) / (j as f64 + 1.0);
        if *uj > t {
            theta = t;
        }
    }
    v.iter().map(|t| t.signum() * (t.abs() - theta).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{pow2_neg, q};

    fn tol() -> Q {
        pow2_neg(40)
    }

    #[test]
    fn unit_vector_prefix_gaps() {
        let pts = SetExpr::Points((0..6).map(SeqVec::unit).collect());
        for n in 1..6 {
            assert_eq!(prefix_gap(&pts, &SeqVec::zero(), n, &tol()).unwrap(), Gap::zero());
        }
        assert_eq!(prefix_gap(&pts, &SeqVec::zero(), 6, &tol()).unwrap(), Gap::exact(q(1)));
        let half = SeqVec::unit(0).scale(&qf(1, 2));
        assert_eq!(prefix_gap(&SetExpr::UnitVectors, &half, 1, &tol()).unwrap(), Gap::exact(qf(1, 2)));
        assert_eq!(prefix_gap(&SetExpr::UnitVectors, &SeqVec::zero(), 5, &tol()).unwrap(), Gap::zero());
    }

    #[test]
    fn kernel_gap_matches_hand_bound() {
        let k = SetExpr::ones_kernel();
        assert_eq!(prefix_gap(&k, &SeqVec::unit(0), 1, &tol()).unwrap(), Gap::exact(qf(1, 2)));
        assert_eq!(prefix_gap(&k, &SeqVec::unit(0).scale(&qf(1, 2)), 1, &tol()).unwrap(), Gap::zero());
        assert_eq!(prefix_gap(&k, &SeqVec::unit(0).scale(&q(-2)), 3, &tol()).unwrap(), Gap::exact(qf(3, 2)));
        let far = SetExpr::Kernel {
            functional: Functional::Ones,
            level: q(3),
            center: SeqVec::zero(),
            r: q(1),
            p: Exponent::one(),
        };
        assert_eq!(prefix_gap(&far, &SeqVec::zero(), 1, &tol()).unwrap(), Gap::empty());
    }

    #[test]
    fn ball_gaps() {
        let b2 = SetExpr::unit_ball(Exponent::two());
        assert_eq!(prefix_gap(&b2, &SeqVec::zero(), 3, &tol()).unwrap(), Gap::zero());
        // (2, 0): need 2 - t <= 1
        assert_eq!(prefix_gap(&b2, &SeqVec::unit(0).scale(&q(2)), 2, &tol()).unwrap(), Gap::exact(q(1)));
        // (2, 2): 2 (2 - t)^2 = 1 gives t = 2 - 1/sqrt(2)
        let g = prefix_gap(&b2, &SeqVec::from_dense([q(2), q(2)]), 2, &tol()).unwrap();
        assert!(!g.is_exact());
        let (ExtQ::Fin(lo), ExtQ::Fin(hi)) = (&g.lo, &g.hi) else { panic!() };
        assert!(hi - lo <= tol());
        assert!(to_f64(lo) < 2.0 - 0.5f64.sqrt() + 1e-9 && to_f64(hi) > 2.0 - 0.5f64.sqrt() - 1e-9);
        let b1 = SetExpr::unit_ball(Exponent::one());
        assert_eq!(prefix_gap(&b1, &SeqVec::from_dense([q(1), q(1)]), 2, &tol()).unwrap(), Gap::exact(qf(1, 2)));
        let binf = SetExpr::unit_ball(Exponent::Inf);
        assert_eq!(prefix_gap(&binf, &SeqVec::from_dense([q(3), q(1)]), 2, &tol()).unwrap(), Gap::exact(q(2)));
        let b3 = SetExpr::unit_ball(Exponent::int(3));
        let g = prefix_gap(&b3, &SeqVec::unit(0).scale(&q(3)), 1, &tol()).unwrap();
        assert_eq!(g.lo.finite().map(|v| v <= &q(2)), Some(true));
        assert_eq!(g.hi.finite().map(|v| v >= &q(2)), Some(true));
    }

    #[test]
    fn intersection_bounds() {
        let half = SeqVec::unit(0).scale(&qf(1, 2));
        let a = SetExpr::ball(half.clone(), q(1), Exponent::two());
        let b = SetExpr::ball(half.neg(), q(1), Exponent::two());
        let both = SetExpr::Intersection(vec![a, b]);
        let inside = SeqVec::unit(1).scale(&qf(1, 2));
        assert_eq!(prefix_gap(&both, &inside, 2, &tol()).unwrap(), Gap::zero());
        let far = SeqVec::unit(1).scale(&q(2));
        let g = prefix_gap(&both, &far, 2, &tol()).unwrap();
        assert!(g.lo > ExtQ::zero());
        assert!(g.lo <= g.hi);
        assert!(g.hi <= ExtQ::Fin(q(2)));
        // Tangent balls meeting only at the origin.
        let a = SetExpr::ball(SeqVec::unit(0), q(1), Exponent::two());
        let b = SetExpr::ball(SeqVec::unit(0).neg(), q(1), Exponent::two());
        let g = prefix_gap(&SetExpr::Intersection(vec![a, b]), &inside, 2, &tol()).unwrap();
        assert!(g.lo > ExtQ::zero() && g.lo <= ExtQ::Fin(qf(1, 2)));
    }

    #[test]
    fn lower_mode_matches_full_lower_end() {
        let a = SetExpr::ball(SeqVec::unit(0).scale(&qf(1, 2)), q(1), Exponent::two());
        let b = SetExpr::ball(SeqVec::unit(0).scale(&qf(-1, 2)), q(1), Exponent::two());
        let e = SetExpr::Intersection(vec![a, SetExpr::Union(vec![b, SetExpr::UnitVectors])]);
        for x in [SeqVec::zero(), SeqVec::from_dense([q(0), q(2)]), SeqVec::from_dense([q(3), qf(1, 3)])] {
            for n in 1..4 {
                let full = gap_rec(&e, &x, n, &tol()).unwrap();
                assert_eq!(gap_lower(&e, &x, n, &tol()).unwrap(), full.lo);
            }
        }
    }

    #[test]
    fn rejects_empty_prefix() {
        assert!(prefix_gap(&SetExpr::UnitVectors, &SeqVec::zero(), 0, &tol()).is_err());
    }
}
