use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::rat::{abs_pow_bracket, inv_pow_bracket, pow2_neg, qf, Bracket, ExtQ, Q};
use crate::seqspace::{dist, norm, Exponent, SeqVec};
use crate::setrep::expr::{Functional, SetExpr};
use crate::setrep::gap::{feasible_point, gap_lower, gap_rec};
use crate::setrep::member::{contains, OutCert, TriState};
use crate::{Error, Result};

/// Probe parameters for the closure criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    /// Largest prefix length tried for a refutation.
    pub n_max: usize,
    /// Smallest gap accepted as a refutation.
    pub delta_min: Q,
    /// Width of root brackets.
    pub tol: Q,
}

impl Default for Probe {
    fn default() -> Self {
        Probe { n_max: 8, delta_min: pow2_neg(10), tol: pow2_neg(40) }
    }
}

impl Probe {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::Input("n_max must be at least 1".into()));
        }
        if !self.delta_min.is_positive() || !self.tol.is_positive() {
            return Err(Error::Input("delta_min and tol must be positive".into()));
        }
        Ok(())
    }
}

/// Decides whether `x` lies in the weak-* closure of `e`.
///
/// `In` needs a witness family valid for every prefix length: membership
/// itself, padding into a sphere, a far unit vector, or a balanced tail for
/// the all-ones kernel. `Out` needs a prefix `n <= n_max` whose certified
/// gap is at least `delta_min`; the certificate reports `delta` equal to
/// that gap. Everything else is `Unknown` with the gap bracket at `n_max`.
pub fn in_closure(e: &SetExpr, x: &SeqVec, probe: &Probe) -> Result<TriState> {
    e.validate()?;
    probe.validate()?;
    if let Some(witness) = closure_witness(e, x, probe)? {
        return Ok(TriState::In { witness });
    }
    let floor = ExtQ::Fin(probe.delta_min.clone());
    for n in 1..=probe.n_max {
        let lo = gap_lower(e, x, n, &probe.tol)?;
        if lo >= floor {
            let delta = lo.finite().cloned().unwrap_or_else(Q::one);
            return Ok(TriState::Out { cert: Some(OutCert { n, delta, bound: lo }) });
        }
    }
    let last = gap_rec(e, x, probe.n_max, &probe.tol)?;
    Ok(TriState::Unknown { lo: last.lo, hi: last.hi })
}

fn closure_witness(e: &SetExpr, x: &SeqVec, probe: &Probe) -> Result<Option<String>> {
    if contains(e, x, &probe.tol)?.is_in() {
        return Ok(Some("member".into()));
    }
    Ok(match e {
        SetExpr::Sphere { r, p } => {
            let ball = SetExpr::Ball { center: SeqVec::zero(), r: r.clone(), p: p.clone() };
            contains(&ball, x, &probe.tol)?.is_in().then(|| "sphere-pad".into())
        }
        SetExpr::UnitVectors => x.is_zero().then(|| "unit-vector-tail".into()),
        SetExpr::Kernel { functional: Functional::Ones, level, center, r, .. } => {
            if kernel_closure_holds(x, level, center, r) {
                let mirror_ok = level.is_zero()
                    && center.is_zero()
                    && x.iter().fold(Q::zero(), |a, (_, t)| a + t.abs()) * Q::from_integer(2.into()) <= *r;
                Some(if mirror_ok { "kernel-mirror" } else { "kernel-balance" }.into())
            } else {
                None
            }
        }
        SetExpr::Union(cs) => {
            for c in cs {
                if let Some(w) = closure_witness(c, x, probe)? {
                    return Ok(Some(w));
                }
            }
            None
        }
        _ => None,
    })
}

/// For finitely supported `x`, the prefix gap to the all-ones slice is zero
/// at every length iff it is zero up to the joint support, after which the
/// balance condition no longer changes.
fn kernel_closure_holds(x: &SeqVec, level: &Q, center: &SeqVec, r: &Q) -> bool {
    let k = level - center.sum();
    let end = x.support_end().max(center.support_end()).max(1);
    (1..=end).all(|n| {
        let (mut mass, mut sum) = (Q::zero(), Q::zero());
        for i in 0..n {
            let a = x.get(i) - center.get(i);
            mass += a.abs();
            sum += a;
        }
        mass + (&k - sum).abs() <= *r
    })
}

/// The mirrored point `(x_0, …, x_{n-1}, -x_0, …, -x_{n-1}, 0, …)`: it
/// agrees with `x` on the first `n` coordinates, sums to zero and has at most
/// twice the l_1 norm of `x`.
pub fn mirror_witness(x: &SeqVec, n: usize) -> SeqVec {
    let head = x.head(n);
    let mut out = head.clone();
    for (i, t) in head.iter() {
        out.set(n + i, -t.clone());
    }
    out
}

/// A point of the sphere `||y||_p = r` agreeing with `x` below `n`:
/// `y = (x_0, …, x_{n-1}, s, 0, …)` with `|s|^p = r^p - Σ_{i<n} |x_i|^p`.
/// The pad is stored through its exact `p`-th power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereWitness {
    pub prefix: SeqVec,
    pub pad_index: usize,
    /// `|s|^p` for finite `p`, or `s` itself for `p = inf`.
    pub pad_pow: Q,
    pub p: Exponent,
}

impl SphereWitness {
    /// Exact `||y||_p^p` (or `||y||_inf`).
    pub fn norm_pow(&self, tol: &Q) -> Result<Q> {
        match &self.p {
            Exponent::Inf => Ok(self.prefix.max_abs().max(self.pad_pow.clone())),
            p => {
                let s = prefix_pow(&self.prefix, p, tol)?;
                Ok(s + &self.pad_pow)
            }
        }
    }

    /// Bracket for the pad coordinate `s >= 0`.
    pub fn pad_value(&self, tol: &Q) -> Bracket {
        match &self.p {
            Exponent::Inf => Bracket::exact(self.pad_pow.clone()),
            Exponent::Finite(e) => inv_pow_bracket(&Bracket::exact(self.pad_pow.clone()), e, tol),
        }
    }
}

fn prefix_pow(v: &SeqVec, p: &Exponent, tol: &Q) -> Result<Q> {
    let mut s = Q::zero();
    for (_, t) in v.iter() {
        let b = p.abs_pow(t, tol);
        match b.value() {
            Some(w) => s += w,
            None => return Err(Error::Undecided(format!("|{t}|^{p} is irrational"))),
        }
    }
    Ok(s)
}

pub fn sphere_witness(x: &SeqVec, n: usize, r: &Q, p: &Exponent, tol: &Q) -> Result<SphereWitness> {
    let prefix = x.head(n);
    let pad_pow = match p {
        Exponent::Inf => {
            if prefix.max_abs() > *r {
                return Err(Error::Domain(format!("prefix of {x} leaves the ball of radius {r}")));
            }
            r.clone()
        }
        Exponent::Finite(e) => {
            let rp = abs_pow_bracket(r, e, tol)
                .value()
                .cloned()
                .ok_or_else(|| Error::Undecided(format!("{r}^{p} is irrational")))?;
            let rest = rp - prefix_pow(&prefix, p, tol)?;
            if rest.is_negative() {
                return Err(Error::Domain(format!("prefix of {x} leaves the ball of radius {r}")));
            }
            rest
        }
    };
    Ok(SphereWitness { prefix, pad_index: n, pad_pow, p: p.clone() })
}

/// Inner and outer approximations of the weak-* closure. `outer = None`
/// means no bound beyond the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureBracket {
    pub inner: SetExpr,
    pub outer: Option<SetExpr>,
}

impl ClosureBracket {
    pub fn is_exact(&self) -> bool {
        self.outer.as_ref() == Some(&self.inner)
    }

    fn exact(e: SetExpr) -> Self {
        ClosureBracket { outer: Some(e.clone()), inner: e }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "inner": self.inner.to_json(),
            "outer": self.outer.as_ref().map_or(Value::String("space".into()), SetExpr::to_json),
            "exact": self.is_exact(),
        })
    }
}

/// Brackets the weak-* closure of `e` by rewriting rules. `p` is the norm of
/// the enclosing ball used when nothing sharper is known.
pub fn closure(e: &SetExpr, p: &Exponent, tol: &Q) -> Result<ClosureBracket> {
    e.validate()?;
    Ok(closure_rec(e, p, tol))
}

fn closure_rec(e: &SetExpr, p: &Exponent, tol: &Q) -> ClosureBracket {
    if e.is_weak_star_closed() {
        return ClosureBracket::exact(e.clone());
    }
    let enclosing =
        || e.norm_bound(p, tol).map(|b| SetExpr::Ball { center: SeqVec::zero(), r: b.max(pow2_neg(40)), p: p.clone() });
    match e {
        SetExpr::Sphere { r, p } => {
            ClosureBracket::exact(SetExpr::Ball { center: SeqVec::zero(), r: r.clone(), p: p.clone() })
        }
        SetExpr::UnitVectors => {
            ClosureBracket::exact(SetExpr::Union(vec![SetExpr::UnitVectors, SetExpr::Points(vec![SeqVec::zero()])]))
        }
        SetExpr::Kernel { functional: Functional::Ones, level, center, r, p: kp } => {
            let within = SetExpr::Ball { center: center.clone(), r: r.clone(), p: kp.clone() };
            let inner = if level.is_zero() && center.is_zero() {
                SetExpr::Union(vec![
                    SetExpr::Ball { center: SeqVec::zero(), r: r * qf(1, 2), p: Exponent::one() },
                    e.clone(),
                ])
            } else {
                e.clone()
            };
            ClosureBracket { inner, outer: Some(within) }
        }
        SetExpr::Union(cs) => {
            let parts: Vec<ClosureBracket> = cs.iter().map(|c| closure_rec(c, p, tol)).collect();
            let outer = parts.iter().map(|b| b.outer.clone()).collect::<Option<Vec<_>>>().map(SetExpr::Union);
            ClosureBracket { inner: SetExpr::Union(parts.into_iter().map(|b| b.inner).collect()), outer }
        }
        SetExpr::Intersection(cs) => {
            let outers: Vec<SetExpr> = cs.iter().filter_map(|c| closure_rec(c, p, tol).outer).collect();
            let outer = if outers.is_empty() { enclosing() } else { Some(SetExpr::Intersection(outers)) };
            ClosureBracket { inner: e.clone(), outer }
        }
        _ => ClosureBracket { inner: e.clone(), outer: enclosing() },
    }
}

/// Verdict of the no-loss classifier with the reason behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoLoss {
    pub verdict: bool,
    pub note: String,
    pub witness: Option<SeqVec>,
}

impl NoLoss {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "note": self.note,
            "witness": self.witness.as_ref().map(SeqVec::to_json),
        })
    }
}

fn is_union_of_convex(e: &SetExpr) -> bool {
    match e {
        SetExpr::Union(cs) => cs.iter().all(SetExpr::is_convex_primitive),
        _ => e.is_convex_primitive(),
    }
}

/// Syntactic classifier: `true` iff `1 < p < inf`, `e` is an intersection
/// of finite unions of convex primitives, and a member is exhibited.
pub fn no_loss(e: &SetExpr, p: &Exponent, tol: &Q) -> Result<NoLoss> {
    e.validate()?;
    if !p.is_reflexive() {
        return Ok(NoLoss {
            verdict: false,
            note: format!("p = {p} is outside (1, inf): bounded closed convex sets may lose precision there"),
            witness: None,
        });
    }
    let normal = match e {
        SetExpr::Intersection(cs) => cs.iter().all(is_union_of_convex),
        _ => is_union_of_convex(e),
    };
    if !normal {
        return Ok(NoLoss {
            verdict: false,
            note: "not an intersection of finite unions of convex primitives".into(),
            witness: None,
        });
    }
    if let Some(y) = find_member(e, tol)? {
        return Ok(NoLoss {
            verdict: true,
            note: format!("nonempty intersection of unions of convex sets, witness {y}"),
            witness: Some(y),
        });
    }
    if gap_rec(e, &SeqVec::zero(), 1, tol)?.lo == ExtQ::Inf || refuted_branches(e, tol)? {
        return Ok(NoLoss { verdict: false, note: "the set is empty".into(), witness: None });
    }
    Err(Error::Undecided(format!("could not decide whether {e} is empty")))
}

fn conjuncts(e: &SetExpr) -> Vec<Vec<SetExpr>> {
    match e {
        SetExpr::Intersection(cs) => cs
            .iter()
            .map(|c| match c {
                SetExpr::Union(us) => us.clone(),
                other => vec![other.clone()],
            })
            .collect(),
        SetExpr::Union(us) => vec![us.clone()],
        other => vec![vec![other.clone()]],
    }
}

const MAX_BRANCHES: usize = 256;

/// Each choice of one union branch per conjunct, or `None` past
/// `MAX_BRANCHES` choices.
fn branch_choices(e: &SetExpr) -> Option<Vec<Vec<SetExpr>>> {
    let cs = conjuncts(e);
    let total = cs.iter().try_fold(1usize, |a, c| a.checked_mul(c.len()))?;
    if total > MAX_BRANCHES {
        return None;
    }
    Some(cs.into_iter().fold(vec![Vec::new()], |acc, options| {
        acc.iter()
            .flat_map(|pick| {
                options.iter().map(move |o| {
                    let mut next = pick.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect()
    }))
}

/// Every branch choice is certified empty by [`disjoint_primitives`].
fn refuted_branches(e: &SetExpr, tol: &Q) -> Result<bool> {
    let Some(picks) = branch_choices(e) else { return Ok(false) };
    for pick in picks {
        if !disjoint_primitives(&pick, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sound emptiness test for an intersection of balls and intervals: the
/// intervals meet in a box that must be nonempty and within reach of every
/// ball (its nearest point to a center is the clamped center, in every
/// `ℓ_p`), and balls with a common `p` must have centers within `r + r'`.
fn disjoint_primitives(cs: &[SetExpr], tol: &Q) -> Result<bool> {
    let boxes: Vec<(&SeqVec, &SeqVec)> =
        cs.iter().filter_map(|c| if let SetExpr::Interval { s, t } = c { Some((s, t)) } else { None }).collect();
    let balls: Vec<(&SeqVec, &Q, &Exponent)> = cs
        .iter()
        .filter_map(|c| if let SetExpr::Ball { center, r, p } = c { Some((center, r, p)) } else { None })
        .collect();
    if !boxes.is_empty() {
        let end = cs.iter().map(SetExpr::support_end).max().unwrap_or(0);
        let lo: Vec<Q> = (0..end).map(|i| boxes.iter().map(|(s, _)| s.get(i)).max().expect("nonempty")).collect();
        let hi: Vec<Q> = (0..end).map(|i| boxes.iter().map(|(_, t)| t.get(i)).min().expect("nonempty")).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Ok(true);
        }
        for (c, r, p) in &balls {
            // past `end` both the box and the center sit at 0
            let offset = SeqVec::from_dense((0..end).map(|i| {
                let v = c.get(i);
                &v - v.clone().max(lo[i].clone()).min(hi[i].clone())
            }));
            if norm(&offset, p, tol)?.le_q(r) == Some(false) {
                return Ok(true);
            }
        }
    }
    for (k, (c1, r1, p1)) in balls.iter().enumerate() {
        for (c2, r2, p2) in &balls[k + 1..] {
            if p1 == p2 && dist(c1, c2, p1, tol)?.le_q(&(*r1 + *r2)) == Some(false) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Looks for a certified member among simple candidates and, for
/// intersections, by alternating projections over each choice of union
/// branches.
pub fn find_member(e: &SetExpr, tol: &Q) -> Result<Option<SeqVec>> {
    let mut candidates = Vec::new();
    collect_candidates(e, &mut candidates);
    candidates.extend(ball_meeting_points(e));
    for y in &candidates {
        if contains(e, y, tol)?.is_in() {
            return Ok(Some(y.clone()));
        }
    }
    for pick in branch_choices(e).unwrap_or_default() {
        for start in candidates.iter().chain(std::iter::once(&SeqVec::zero())) {
            if let Some(y) = feasible_point(&pick, start, tol) {
                if contains(e, &y, tol)?.is_in() {
                    return Ok(Some(y));
                }
            }
        }
    }
    Ok(None)
}

/// For every pair of balls, `c + r/(r + r') (c' - c)`: within `r` of `c`
/// and `r'` of `c'` in any norm whenever the balls meet.
fn ball_meeting_points(e: &SetExpr) -> Vec<SeqVec> {
    fn balls<'a>(e: &'a SetExpr, out: &mut Vec<(&'a SeqVec, &'a Q)>) {
        match e {
            SetExpr::Ball { center, r, .. } => out.push((center, r)),
            SetExpr::Union(cs) | SetExpr::Intersection(cs) => cs.iter().for_each(|c| balls(c, out)),
            _ => {}
        }
    }
    let mut bs = Vec::new();
    balls(e, &mut bs);
    let mut out = Vec::new();
    for (k, (c1, r1)) in bs.iter().enumerate() {
        for (c2, r2) in &bs[k + 1..] {
            let w = *r1 / (*r1 + *r2);
            out.push(c1.add(&c2.sub(c1).scale(&w)));
        }
    }
    out
}

fn collect_candidates(e: &SetExpr, out: &mut Vec<SeqVec>) {
    match e {
        SetExpr::Ball { center, .. } | SetExpr::Kernel { center, .. } => out.push(center.clone()),
        SetExpr::Interval { s, t } => out.push(s.add(t).scale(&qf(1, 2))),
        SetExpr::Points(ps) => out.extend(ps.iter().cloned()),
        SetExpr::UnitVectors => out.push(SeqVec::unit(0)),
        SetExpr::Sphere { r, .. } => out.push(SeqVec::unit(0).scale(r)),
        SetExpr::Union(cs) | SetExpr::Intersection(cs) => cs.iter().for_each(|c| collect_candidates(c, out)),
        SetExpr::Fatten { child, .. } => collect_candidates(child, out),
        SetExpr::Trunc { child, n } => {
            let mut inner = Vec::new();
            collect_candidates(child, &mut inner);
            out.extend(inner.iter().map(|y| y.head(*n)));
        }
    }
}

/// The closed `delta`-fattening in the `d_p` metric, simplified where the
/// result is again a primitive.
pub fn fatten(e: &SetExpr, delta: &Q, p: &Exponent) -> Result<SetExpr> {
    if !delta.is_positive() {
        return Err(Error::Input(format!("fattening radius {delta} must be positive")));
    }
    e.validate()?;
    Ok(fatten_rec(e, delta, p))
}

fn fatten_rec(e: &SetExpr, delta: &Q, p: &Exponent) -> SetExpr {
    match e {
        SetExpr::Ball { center, r, p: bp } if bp == p => {
            SetExpr::Ball { center: center.clone(), r: r + delta, p: p.clone() }
        }
        SetExpr::Points(ps) if ps.len() == 1 => SetExpr::Ball { center: ps[0].clone(), r: delta.clone(), p: p.clone() },
        SetExpr::Points(ps) if !ps.is_empty() => SetExpr::Union(
            ps.iter().map(|y| SetExpr::Ball { center: y.clone(), r: delta.clone(), p: p.clone() }).collect(),
        ),
        SetExpr::Union(cs) => SetExpr::Union(cs.iter().map(|c| fatten_rec(c, delta, p)).collect()),
        SetExpr::Fatten { child, delta: d0, p: fp } if fp == p => {
            SetExpr::Fatten { child: child.clone(), delta: d0 + delta, p: p.clone() }
        }
        _ => SetExpr::Fatten { child: Box::new(e.clone()), delta: delta.clone(), p: p.clone() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn probe() -> Probe {
        Probe::default()
    }

    #[test]
    fn kernel_example() {
        let k = SetExpr::ones_kernel();
        let z = in_closure(&k, &SeqVec::unit(0), &probe()).unwrap();
        assert_eq!(z, TriState::Out { cert: Some(OutCert { n: 1, delta: qf(1, 2), bound: ExtQ::Fin(qf(1, 2)) }) });
        let y = SeqVec::from_dense([qf(1, 2), qf(-1, 2)]);
        assert!(contains(&k, &y, &probe().tol).unwrap().is_in());
        let inside = SeqVec::from_dense([qf(1, 4), qf(1, 8)]);
        assert_eq!(in_closure(&k, &inside, &probe()).unwrap(), TriState::In { witness: "kernel-mirror".into() });
        for n in 0..5 {
            let m = mirror_witness(&inside, n);
            assert!(contains(&k, &m, &probe().tol).unwrap().is_in());
            assert_eq!(m.head(n), inside.head(n));
        }
    }

    #[test]
    fn sphere_examples() {
        let s = SetExpr::Sphere { r: q(1), p: Exponent::two() };
        assert_eq!(in_closure(&s, &SeqVec::zero(), &probe()).unwrap(), TriState::In { witness: "sphere-pad".into() });
        let w = sphere_witness(&SeqVec::from_dense([qf(1, 2), qf(1, 3)]), 1, &q(1), &Exponent::two(), &probe().tol)
            .unwrap();
        assert_eq!(w.pad_pow, qf(3, 4));
        assert_eq!(w.norm_pow(&probe().tol).unwrap(), q(1));
        let c = closure(&s, &Exponent::two(), &probe().tol).unwrap();
        assert!(c.is_exact());
        assert_eq!(c.inner, SetExpr::unit_ball(Exponent::two()));
        assert!(in_closure(&s, &SeqVec::unit(0).scale(&q(2)), &probe()).unwrap().is_out());
    }

    #[test]
    fn unit_vector_examples() {
        let e = SetExpr::UnitVectors;
        assert!(in_closure(&e, &SeqVec::zero(), &probe()).unwrap().is_in());
        assert!(in_closure(&e, &SeqVec::unit(3), &probe()).unwrap().is_in());
        match in_closure(&e, &SeqVec::unit(0).scale(&qf(1, 2)), &probe()).unwrap() {
            TriState::Out { cert: Some(c) } => {
                assert_eq!((c.n, c.delta), (1, qf(1, 2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn closure_rules() {
        let tol = probe().tol;
        let iv = SetExpr::interval(SeqVec::unit(0).neg(), SeqVec::unit(1));
        assert!(closure(&iv, &Exponent::two(), &tol).unwrap().is_exact());
        let k = closure(&SetExpr::ones_kernel(), &Exponent::one(), &tol).unwrap();
        assert!(!k.is_exact());
        assert_eq!(k.outer, Some(SetExpr::unit_ball(Exponent::one())));
    }

    #[test]
    fn no_loss_examples() {
        let tol = probe().tol;
        let b = |c: i64, r: SeqVec| SetExpr::ball(r, qf(c, 2), Exponent::two());
        let e = SetExpr::Intersection(vec![
            SetExpr::Union(vec![b(1, SeqVec::zero()), b(1, SeqVec::unit(0).scale(&q(3)))]),
            b(2, SeqVec::unit(1)),
        ]);
        assert!(no_loss(&e, &Exponent::two(), &tol).unwrap().verdict);
        let s = SetExpr::Sphere { r: q(1), p: Exponent::two() };
        assert!(!no_loss(&s, &Exponent::two(), &tol).unwrap().verdict);
        let iv = SetExpr::Intersection(vec![
            SetExpr::interval(SeqVec::unit(0).neg(), SeqVec::unit(0)),
            SetExpr::unit_ball(Exponent::one()),
        ]);
        assert!(!no_loss(&iv, &Exponent::one(), &tol).unwrap().verdict);
    }

    #[test]
    fn certified_empty_intersections() {
        let tol = probe().tol;
        let p2 = Exponent::two();
        let v = |xs: [i64; 2]| SeqVec::from_dense(xs.map(|k| qf(k, 4)));
        let empty = |e: SetExpr| no_loss(&e, &p2, &tol).unwrap().note == "the set is empty";
        // intervals disjoint in the second coordinate
        assert!(empty(SetExpr::Intersection(vec![
            SetExpr::interval(v([0, 0]), v([4, 1])),
            SetExpr::interval(v([0, 2]), v([4, 4])),
        ])));
        // the box [1/2, 1] x [1/2, 1] is at distance sqrt(1/8) > 1/4 from 0
        assert!(empty(SetExpr::Intersection(vec![
            SetExpr::interval(v([2, 2]), v([4, 4])),
            SetExpr::ball(SeqVec::zero(), qf(1, 4), p2.clone()),
        ])));
        // centers 1 apart, radii 1/4 each
        assert!(empty(SetExpr::Intersection(vec![
            SetExpr::ball(SeqVec::zero(), qf(1, 4), p2.clone()),
            SetExpr::Union(vec![
                SetExpr::ball(SeqVec::unit(0), qf(1, 4), p2.clone()),
                SetExpr::ball(SeqVec::unit(1), qf(1, 4), p2.clone()),
            ]),
        ])));
        // but 1/2 + 1/2 reaches across
        let touching = SetExpr::Intersection(vec![
            SetExpr::ball(SeqVec::zero(), qf(1, 2), p2.clone()),
            SetExpr::ball(SeqVec::unit(0), qf(1, 2), p2.clone()),
        ]);
        assert!(no_loss(&touching, &p2, &tol).unwrap().verdict);
    }

    #[test]
    fn fatten_rules() {
        let p2 = Exponent::two();
        assert_eq!(
            fatten(&SetExpr::unit_ball(p2.clone()), &qf(1, 2), &p2).unwrap(),
            SetExpr::ball(SeqVec::zero(), qf(3, 2), p2.clone())
        );
        assert_eq!(
            fatten(&SetExpr::Points(vec![SeqVec::zero()]), &q(1), &p2).unwrap(),
            SetExpr::ball(SeqVec::zero(), q(1), p2.clone())
        );
        let iv = SetExpr::interval(SeqVec::unit(0).neg(), SeqVec::unit(0));
        let f = fatten(&iv, &qf(1, 2), &p2).unwrap();
        assert!(contains(&f, &SeqVec::unit(0).scale(&qf(5, 4)), &probe().tol).unwrap().is_in());
        assert!(fatten(&iv, &q(0), &p2).is_err());
    }
}
