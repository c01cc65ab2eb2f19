//! Transition-system analyses and the best robust approximation over finite
//! metric spaces.
//!
//! Subsets are bit masks. The information order on subsets is reverse
//! inclusion: a smaller set says more about the state. The two-point lattice
//! `Σ` is the lattice of closed subsets of a one-point space, so `⊤` is the
//! empty set and `⊥` the whole point; an analysis into `Σ` is an analysis
//! into a one-point metric space.
//!
//! Reachability counts zero steps: `reach(T, I)` always contains `I`, so a
//! bad state in `I` makes `safety` answer `⊥`.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::lattice::{full_mask, members, right_adjoint, FinitePoset, Mask, MonotoneMap, MAX_CARRIER};
use crate::rat::{fmt_q, q_from_json, qf, Q};
use crate::{Error, Result};

/// Largest domain for which analyses are tabulated over all subsets.
pub const MAX_ANALYSIS_POINTS: usize = 12;

/// Largest state space for the adjoint construction on the powerset lattice.
pub const MAX_ADJOINT_STATES: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    states: usize,
    rel: Vec<(usize, usize)>,
    succ: Vec<Mask>,
}

impl TransitionSystem {
    pub fn new(states: usize, rel: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if states > MAX_CARRIER {
            return Err(Error::Resource(format!("{states} states exceed the limit of {MAX_CARRIER}")));
        }
        let mut rel: Vec<(usize, usize)> = rel.into_iter().collect();
        rel.sort_unstable();
        rel.dedup();
        let mut succ = vec![0; states];
        for &(a, b) in &rel {
            if a >= states || b >= states {
                return Err(Error::Input(format!("transition ({a}, {b}) leaves the {states} states")));
            }
            succ[a] |= 1 << b;
        }
        Ok(TransitionSystem { states, rel, succ })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn rel(&self) -> &[(usize, usize)] {
        &self.rel
    }

    pub fn check_subset(&self, s: Mask) -> Result<()> {
        if s & !full_mask(self.states) != 0 {
            return Err(Error::Input(format!("state set {s:#b} leaves the {} states", self.states)));
        }
        Ok(())
    }

    /// `T_*(S) = {s' | ∃s ∈ S. T(s, s')}`.
    pub fn post(&self, s: Mask) -> Mask {
        members(s).fold(0, |m, a| m | self.succ[a])
    }

    /// Weakest precondition `{s | T_*({s}) ⊆ S'}`.
    pub fn wp(&self, target: Mask) -> Mask {
        (0..self.states).filter(|&a| self.succ[a] & !target == 0).fold(0, |m, a| m | 1 << a)
    }

    /// The weakest-precondition table obtained as the right adjoint of `post`
    /// on the powerset lattice under inclusion.
    pub fn wp_by_adjoint(&self) -> Result<Vec<Mask>> {
        if self.states > MAX_ADJOINT_STATES {
            return Err(Error::Resource(format!("adjoint construction is limited to {MAX_ADJOINT_STATES} states")));
        }
        let pow = Arc::new(FinitePoset::powerset(self.states));
        let table = (0..1usize << self.states).map(|s| self.post(s as Mask) as usize).collect();
        let f = MonotoneMap::new(pow.clone(), pow, table)?;
        let g = right_adjoint(&f)?.ok_or_else(|| Error::Domain("post failed to preserve unions".into()))?;
        Ok(g.table().iter().map(|&s| s as Mask).collect())
    }

    /// Least fixed point of `S ↦ I ∪ T_*(S)`.
    pub fn reach(&self, init: Mask) -> Mask {
        let mut s = init;
        loop {
            let next = s | self.post(s);
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// `⊤` iff no state of `bad` is reachable from `init`.
    pub fn safety(&self, init: Mask, bad: Mask) -> Sigma {
        if self.reach(init) & bad == 0 {
            Sigma::Top
        } else {
            Sigma::Bottom
        }
    }

    /// Parses `{"states": n, "rel": [[a, b], ...], "I": [...], "E": [...]}`.
    /// Missing `I` or `E` default to the empty set.
    pub fn from_json(v: &Value) -> Result<SystemQuery> {
        let o = v.as_object().ok_or_else(|| Error::Parse("system must be a JSON object".into()))?;
        let states = o
            .get("states")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("\"states\" must be a natural number".into()))? as usize;
        let pair = |p: &Value| -> Result<(usize, usize)> {
            match p.as_array().map(Vec::as_slice) {
                Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                    (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                    _ => Err(Error::Parse(format!("bad transition {p}"))),
                },
                _ => Err(Error::Parse(format!("bad transition {p}"))),
            }
        };
        let rel = match o.get("rel") {
            None => Vec::new(),
            Some(r) => r
                .as_array()
                .ok_or_else(|| Error::Parse("\"rel\" must be a list".into()))?
                .iter()
                .map(pair)
                .collect::<Result<_>>()?,
        };
        let system = TransitionSystem::new(states, rel)?;
        let init = parse_mask(o.get("I"), states)?;
        let bad = parse_mask(o.get("E"), states)?;
        Ok(SystemQuery { system, init, bad })
    }
}

/// A system with its initial and bad state sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemQuery {
    pub system: TransitionSystem,
    pub init: Mask,
    pub bad: Mask,
}

fn parse_mask(v: Option<&Value>, n: usize) -> Result<Mask> {
    let Some(v) = v else { return Ok(0) };
    let xs = v.as_array().ok_or_else(|| Error::Parse(format!("expected a list of states, got {v}")))?;
    let mut m = 0;
    for x in xs {
        match x.as_u64() {
            Some(i) if (i as usize) < n => m |= 1 << i,
            _ => return Err(Error::Input(format!("{x} is not one of the {n} states"))),
        }
    }
    Ok(m)
}

pub fn mask_json(m: Mask) -> Value {
    Value::Array(members(m).map(Value::from).collect())
}

/// The two-point lattice `⊥ < ⊤`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sigma {
    Bottom,
    Top,
}

impl Sigma {
    /// As a closed subset of the one-point space.
    pub fn to_mask(self) -> Mask {
        match self {
            Sigma::Top => 0,
            Sigma::Bottom => 1,
        }
    }

    pub fn from_mask(m: Mask) -> Self {
        if m == 0 {
            Sigma::Top
        } else {
            Sigma::Bottom
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sigma::Bottom => "bottom",
            Sigma::Top => "top",
        })
    }
}

/// A finite metric with rational distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetric {
    d: Vec<Vec<Q>>,
}

impl FiniteMetric {
    pub fn new(d: Vec<Vec<Q>>) -> Result<Self> {
        let n = d.len();
        if n > MAX_CARRIER {
            return Err(Error::Resource(format!("{n} points exceed the limit of {MAX_CARRIER}")));
        }
        if d.iter().any(|row| row.len() != n) {
            return Err(Error::Input("distance matrix must be square".into()));
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(Error::Input(format!("d({i}, {i}) = {} is not 0", d[i][i])));
            }
            for j in 0..n {
                if i != j && !d[i][j].is_positive() {
                    return Err(Error::Input(format!("d({i}, {j}) = {} is not positive", d[i][j])));
                }
                if d[i][j] != d[j][i] {
                    return Err(Error::Input(format!("d({i}, {j}) != d({j}, {i})")));
                }
                for k in 0..n {
                    if d[i][k] > &d[i][j] + &d[j][k] {
                        return Err(Error::Input(format!("triangle inequality fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(FiniteMetric { d })
    }

    /// All distinct points at distance 1.
    pub fn discrete(n: usize) -> Self {
        Self::new((0..n).map(|i| (0..n).map(|j| Q::from_integer(((i != j) as i64).into())).collect()).collect())
            .expect("discrete metric")
    }

    /// The points `0, 1, …, n-1` of the real line.
    pub fn line(n: usize) -> Self {
        Self::new((0..n).map(|i| (0..n).map(|j| Q::from_integer((i.abs_diff(j) as i64).into())).collect()).collect())
            .expect("line metric")
    }

    /// The one-point space; its closed sets form `Σ`.
    pub fn point() -> Self {
        Self::discrete(1)
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> &Q {
        &self.d[i][j]
    }

    pub fn full(&self) -> Mask {
        full_mask(self.len())
    }

    /// Distinct positive distances, increasing.
    pub fn spectrum(&self) -> Vec<Q> {
        let mut s: Vec<Q> = self.d.iter().flatten().filter(|v| v.is_positive()).cloned().collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn min_positive(&self) -> Option<Q> {
        self.spectrum().into_iter().next()
    }

    /// Closed neighbourhood `{x | d(x, i) <= r}` of every point.
    pub fn closed_balls(&self, r: &Q) -> Vec<Mask> {
        self.balls(|v| v <= r)
    }

    /// Open neighbourhood `{x | d(x, i) < r}` of every point.
    pub fn open_balls(&self, r: &Q) -> Vec<Mask> {
        self.balls(|v| v < r)
    }

    fn balls(&self, within: impl Fn(&Q) -> bool) -> Vec<Mask> {
        self.d
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, v)| within(v)).fold(0, |m, (j, _)| m | 1 << j))
            .collect()
    }

    /// The closed `δ`-fattening `C_δ = {x | ∃c ∈ C. d(x, c) <= δ}`.
    pub fn fatten(&self, c: Mask, delta: &Q) -> Mask {
        spread(c, &self.closed_balls(delta))
    }

    /// The open ball `B(S, ε)`.
    pub fn open_ball(&self, s: Mask, eps: &Q) -> Mask {
        spread(s, &self.open_balls(eps))
    }

    /// One radius inside each interval cut out by the spectrum, so that every
    /// open ball `B(S, r)` with `r > 0` equals one taken at a representative.
    pub fn open_radius_representatives(&self) -> Vec<Q> {
        let s = self.spectrum();
        let Some(first) = s.first() else { return vec![Q::from_integer(1.into())] };
        let mut out = vec![first * qf(1, 2)];
        out.extend(s.windows(2).map(|w| (&w[0] + &w[1]) * qf(1, 2)));
        out.push(s.last().expect("nonempty") + Q::from_integer(1.into()));
        out
    }

    /// Parses a square matrix of rationals.
    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("metric must be a matrix".into()))?;
        let d = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("metric rows must be lists".into()))?
                    .iter()
                    .map(q_from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.d.iter().map(|r| Value::Array(r.iter().map(|v| Value::String(fmt_q(v))).collect())).collect())
    }
}

fn spread(s: Mask, balls: &[Mask]) -> Mask {
    members(s).fold(0, |m, i| m | balls[i])
}

/// A monotone map `P(dom) → P(cod)`, tabulated over all input subsets.
/// Monotone for reverse inclusion is the same as monotone for inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    dom: Arc<FiniteMetric>,
    cod: Arc<FiniteMetric>,
    table: Vec<Mask>,
}

impl Analysis {
    pub fn from_table(dom: Arc<FiniteMetric>, cod: Arc<FiniteMetric>, table: Vec<Mask>) -> Result<Self> {
        let n = dom.len();
        if n > MAX_ANALYSIS_POINTS {
            return Err(Error::Resource(format!("{n} points exceed the limit of {MAX_ANALYSIS_POINTS}")));
        }
        if table.len() != 1 << n {
            return Err(Error::Input(format!("table has {} entries, expected {}", table.len(), 1 << n)));
        }
        if let Some(m) = table.iter().find(|&&m| m & !cod.full() != 0) {
            return Err(Error::Input(format!("output {m:#b} leaves the codomain")));
        }
        for s in 0..table.len() {
            for i in 0..n {
                let t = s | 1 << i;
                if table[s] & !table[t] != 0 {
                    return Err(Error::Domain(format!("not monotone: A({s:#b}) ⊄ A({t:#b})")));
                }
            }
        }
        Ok(Analysis { dom, cod, table })
    }

    pub fn from_fn(dom: Arc<FiniteMetric>, cod: Arc<FiniteMetric>, f: impl Fn(Mask) -> Mask) -> Result<Self> {
        let n = dom.len().min(MAX_ANALYSIS_POINTS + 1);
        let table = (0..1u64 << n).map(f).collect();
        Self::from_table(dom, cod, table)
    }

    pub fn identity(m: Arc<FiniteMetric>) -> Result<Self> {
        Self::from_fn(m.clone(), m, |s| s)
    }

    pub fn constant(dom: Arc<FiniteMetric>, cod: Arc<FiniteMetric>, value: Mask) -> Result<Self> {
        Self::from_fn(dom, cod, |_| value)
    }

    /// `S ↦ T_*(S)` on the metric's points.
    pub fn post(t: &TransitionSystem, m: Arc<FiniteMetric>) -> Result<Self> {
        Self::check_states(t, &m)?;
        Self::from_fn(m.clone(), m, |s| t.post(s))
    }

    /// `I ↦ T^*(I)`.
    pub fn reach(t: &TransitionSystem, m: Arc<FiniteMetric>) -> Result<Self> {
        Self::check_states(t, &m)?;
        Self::from_fn(m.clone(), m, |s| t.reach(s))
    }

    /// `I ↦ S(T, I, E)` into `Σ`.
    pub fn safety(t: &TransitionSystem, bad: Mask, m: Arc<FiniteMetric>) -> Result<Self> {
        Self::check_states(t, &m)?;
        Self::from_fn(m, Arc::new(FiniteMetric::point()), |s| t.safety(s, bad).to_mask())
    }

    fn check_states(t: &TransitionSystem, m: &FiniteMetric) -> Result<()> {
        if t.states() != m.len() {
            return Err(Error::Input(format!("{} states but {} metric points", t.states(), m.len())));
        }
        Ok(())
    }

    pub fn dom(&self) -> &Arc<FiniteMetric> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteMetric> {
        &self.cod
    }

    pub fn table(&self) -> &[Mask] {
        &self.table
    }

    pub fn apply(&self, s: Mask) -> Mask {
        self.table[s as usize]
    }

    /// Pointwise information order: `self(S) ⊇ other(S)` for every `S`.
    pub fn leq(&self, other: &Analysis) -> bool {
        self.table.len() == other.table.len() && self.table.iter().zip(&other.table).all(|(a, b)| b & !a == 0)
    }
}

/// `⋂_δ A(C_δ)` over the given radii: the join of the fattened outputs in
/// the information order.
pub fn fattened_meet(a: &Analysis, c: Mask, schedule: &[Q]) -> Result<Mask> {
    if schedule.is_empty() {
        return Err(Error::Input("empty δ schedule".into()));
    }
    Ok(schedule.iter().fold(a.cod.full(), |m, delta| m & a.apply(a.dom.fatten(c, delta))))
}

/// Checks that `schedule` is positive, strictly decreasing and ends below
/// the smallest positive distance of `m`, where every fattening is trivial.
pub fn check_schedule(m: &FiniteMetric, schedule: &[Q]) -> Result<()> {
    let last = schedule.last().ok_or_else(|| Error::Input("empty δ schedule".into()))?;
    if schedule.iter().any(|d| !d.is_positive()) || schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Input("δ schedule must be positive and strictly decreasing".into()));
    }
    if let Some(min) = m.min_positive() {
        if *last >= min {
            return Err(Error::Input(format!(
                "δ schedule stops at {last}, not below the resolution {min} of the metric"
            )));
        }
    }
    Ok(())
}

/// The spectrum in decreasing order followed by half the smallest distance.
pub fn default_schedule(m: &FiniteMetric) -> Vec<Q> {
    let mut s = m.spectrum();
    s.reverse();
    let floor = s.last().map_or(Q::from_integer(1.into()), |v| v * qf(1, 2));
    s.push(floor);
    s
}

/// `□_R(A)(C) = ⋂{A(C_δ) | δ > 0}`, computed over `schedule`.
pub fn box_robust(a: &Analysis, c: Mask, schedule: &[Q]) -> Result<Mask> {
    check_schedule(&a.dom, schedule)?;
    fattened_meet(a, c, schedule)
}

/// `□_R(A)` as an analysis.
pub fn box_robust_map(a: &Analysis) -> Result<Analysis> {
    let schedule = default_schedule(&a.dom);
    check_schedule(&a.dom, &schedule)?;
    let balls: Vec<Vec<Mask>> = schedule.iter().map(|d| a.dom.closed_balls(d)).collect();
    let table =
        (0..a.table.len() as Mask).map(|c| balls.iter().fold(a.cod.full(), |m, b| m & a.apply(spread(c, b)))).collect();
    Analysis::from_table(a.dom.clone(), a.cod.clone(), table)
}

/// A failure of `B(A(S), ε) ≤ A(B(S, δ))` for every admissible `δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub input: Mask,
    pub eps: Q,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({"S": mask_json(self.input), "eps": fmt_q(&self.eps)})
    }
}

/// `∀S ∀ε > 0 ∃δ > 0. B(A(S), ε) ≤ A(B(S, δ))` with open balls, checked at
/// one radius per interval of each spectrum. On a finite metric small balls
/// are singletons, so this always holds; see [`robust_violation_at`] for a
/// test that sees the metric.
pub fn robust_violation(a: &Analysis) -> Result<Option<Violation>> {
    check_enumerable(a)?;
    let eps_balls: Vec<(Q, Vec<Mask>)> =
        a.cod.open_radius_representatives().into_iter().map(|e| (e.clone(), a.cod.open_balls(&e))).collect();
    let delta_balls: Vec<Vec<Mask>> = a.dom.open_radius_representatives().iter().map(|d| a.dom.open_balls(d)).collect();
    Ok(find_violation(a, &eps_balls, &delta_balls))
}

pub fn is_robust(a: &Analysis) -> Result<bool> {
    Ok(robust_violation(a)?.is_none())
}

/// Robustness seen at resolution `h`: closed balls, with `ε` and `δ` both
/// ranging over radii `>= h`.
pub fn robust_violation_at(a: &Analysis, h: &Q) -> Result<Option<Violation>> {
    check_enumerable(a)?;
    if !h.is_positive() {
        return Err(Error::Input(format!("resolution {h} must be positive")));
    }
    let radii = |m: &FiniteMetric| {
        let mut r = vec![h.clone()];
        r.extend(m.spectrum().into_iter().filter(|v| v > h));
        r
    };
    let eps_balls: Vec<(Q, Vec<Mask>)> =
        radii(&a.cod).into_iter().map(|e| (e.clone(), a.cod.closed_balls(&e))).collect();
    let delta_balls: Vec<Vec<Mask>> = radii(&a.dom).iter().map(|d| a.dom.closed_balls(d)).collect();
    Ok(find_violation(a, &eps_balls, &delta_balls))
}

pub fn is_robust_at_resolution(a: &Analysis, h: &Q) -> Result<bool> {
    Ok(robust_violation_at(a, h)?.is_none())
}

fn check_enumerable(a: &Analysis) -> Result<()> {
    if a.dom.len() > MAX_ANALYSIS_POINTS || a.cod.len() > MAX_CARRIER {
        return Err(Error::Resource(format!("robustness check is limited to {MAX_ANALYSIS_POINTS} points")));
    }
    Ok(())
}

fn find_violation(a: &Analysis, eps_balls: &[(Q, Vec<Mask>)], delta_balls: &[Vec<Mask>]) -> Option<Violation> {
    for s in 0..a.table.len() as Mask {
        let out = a.apply(s);
        for (eps, eb) in eps_balls {
            let wide = spread(out, eb);
            if !delta_balls.iter().any(|db| a.apply(spread(s, db)) & !wide == 0) {
                return Some(Violation { input: s, eps: eps.clone() });
            }
        }
    }
    None
}

/// Checks on `□_R(A)` against `A` and a sample of other analyses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxReport {
    pub robust: bool,
    pub below: bool,
    pub idempotent: bool,
    pub equals_input: bool,
    /// Every sampled robust map below `A` is below `□_R(A)`.
    pub maximal: bool,
}

impl BoxReport {
    pub fn ok(&self) -> bool {
        self.robust && self.below && self.idempotent && self.maximal
    }

    pub fn to_json(&self) -> Value {
        json!({
            "robust": self.robust,
            "below": self.below,
            "idempotent": self.idempotent,
            "equals_input": self.equals_input,
            "maximal": self.maximal,
        })
    }
}

pub fn box_robust_report(a: &Analysis, samples: &[Analysis]) -> Result<BoxReport> {
    let b = box_robust_map(a)?;
    let mut maximal = true;
    for s in samples {
        if s.leq(a) && is_robust(s)? && !s.leq(&b) {
            maximal = false;
        }
    }
    Ok(BoxReport {
        robust: is_robust(&b)?,
        below: b.leq(a),
        idempotent: box_robust_map(&b)? == b,
        equals_input: b == *a,
        maximal,
    })
}

/// A random monotone analysis built from relational images, constants,
/// threshold maps, reachability, pointwise unions and intersections, and
/// composition. Monotone by construction.
pub fn random_analysis<R: Rng + ?Sized>(
    rng: &mut R,
    dom: Arc<FiniteMetric>,
    cod: Arc<FiniteMetric>,
    depth: u32,
) -> Result<Analysis> {
    let table = random_table(rng, dom.len(), cod.len(), depth);
    Analysis::from_table(dom, cod, table)
}

fn random_mask<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mask {
    rng.gen::<u64>() & full_mask(n)
}

fn random_table<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, depth: u32) -> Vec<Mask> {
    let inputs = 0..1u64 << n;
    let pick = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..6) };
    match pick {
        0 => {
            let succ: Vec<Mask> = (0..n).map(|_| random_mask(rng, m)).collect();
            inputs.map(|s| spread(s, &succ)).collect()
        }
        1 => {
            let k = random_mask(rng, m);
            inputs.map(|_| k).collect()
        }
        2 => {
            let (guard, low) = (random_mask(rng, n), random_mask(rng, m));
            let high = low | random_mask(rng, m);
            inputs.map(|s| if s & !guard == 0 { low } else { high }).collect()
        }
        3 => {
            let (a, b) = (random_table(rng, n, m, depth - 1), random_table(rng, n, m, depth - 1));
            a.iter().zip(&b).map(|(x, y)| x | y).collect()
        }
        4 => {
            let (a, b) = (random_table(rng, n, m, depth - 1), random_table(rng, n, m, depth - 1));
            a.iter().zip(&b).map(|(x, y)| x & y).collect()
        }
        _ => {
            let inner = random_table(rng, n, m, depth - 1);
            let succ: Vec<Mask> = (0..m).map(|_| random_mask(rng, m)).collect();
            let close = rng.gen_bool(0.5);
            inner
                .iter()
                .map(|&s| {
                    if close {
                        let mut r = s;
                        loop {
                            let next = r | spread(r, &succ);
                            if next == r {
                                break r;
                            }
                            r = next;
                        }
                    } else {
                        spread(s, &succ)
                    }
                })
                .collect()
        }
    }
}
