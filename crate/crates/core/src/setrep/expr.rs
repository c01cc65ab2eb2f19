use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::rat::{fmt_q, q_from_json as rational, Q};
use crate::seqspace::{norm, Exponent, SeqVec};
use crate::{Error, Result};

/// The linear functional cutting a kernel slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Functional {
    /// `x ↦ Σ_i x_i`, an element of `l_inf` outside `c_0`.
    Ones,
    /// `x ↦ Σ_i a_i x_i` for a finitely supported `a`.
    Coeffs(SeqVec),
}

impl Functional {
    pub fn eval(&self, x: &SeqVec) -> Q {
        match self {
            Functional::Ones => x.sum(),
            Functional::Coeffs(a) => x.iter().fold(Q::zero(), |acc, (i, t)| acc + t * a.get(i)),
        }
    }
}

/// A symbolic closed subset of a sequence space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    /// Closed ball `{y : ||y - center||_p <= r}`.
    Ball {
        center: SeqVec,
        r: Q,
        p: Exponent,
    },
    /// Sequence interval `{u : s_i <= u_i <= t_i}`; coordinates outside both
    /// supports are pinned to 0.
    Interval {
        s: SeqVec,
        t: SeqVec,
    },
    /// A finite set of points.
    Points(Vec<SeqVec>),
    /// The infinite family `{e_i | i ∈ ω}`.
    UnitVectors,
    /// Sphere `{y : ||y||_p = r}` around the origin.
    Sphere {
        r: Q,
        p: Exponent,
    },
    /// `{y ∈ B(center, r)_p : φ(y) = level}`.
    Kernel {
        functional: Functional,
        level: Q,
        center: SeqVec,
        r: Q,
        p: Exponent,
    },
    Union(Vec<SetExpr>),
    Intersection(Vec<SetExpr>),
    /// Closed fattening `{y : d_p(y, child) <= delta}`.
    Fatten {
        child: Box<SetExpr>,
        delta: Q,
        p: Exponent,
    },
    /// Image of `child` under `y ↦ (y_0, …, y_{n-1}, 0, …)`.
    Trunc {
        child: Box<SetExpr>,
        n: usize,
    },
}

impl SetExpr {
    pub fn ball(center: SeqVec, r: Q, p: Exponent) -> Self {
        SetExpr::Ball { center, r, p }
    }

    pub fn unit_ball(p: Exponent) -> Self {
        SetExpr::Ball { center: SeqVec::zero(), r: Q::one(), p }
    }

    pub fn interval(s: SeqVec, t: SeqVec) -> Self {
        SetExpr::Interval { s, t }
    }

    /// The slice `{x ∈ Ω_1 : Σ x_i = 0}`.
    pub fn ones_kernel() -> Self {
        SetExpr::Kernel {
            functional: Functional::Ones,
            level: Q::zero(),
            center: SeqVec::zero(),
            r: Q::one(),
            p: Exponent::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetExpr::Ball { r, .. } | SetExpr::Sphere { r, .. } => {
                if !r.is_positive() {
                    return Err(Error::Input(format!("radius {r} must be positive")));
                }
            }
            SetExpr::Interval { s, t } => {
                let end = s.support_end().max(t.support_end());
                if let Some(i) = (0..end).find(|&i| s.get(i) > t.get(i)) {
                    return Err(Error::Input(format!("interval has s_{i} > t_{i}")));
                }
            }
            SetExpr::Points(_) | SetExpr::UnitVectors => {}
            SetExpr::Kernel { functional, r, p, .. } => {
                if !r.is_positive() {
                    return Err(Error::Input(format!("radius {r} must be positive")));
                }
                if *functional == Functional::Ones && !p.is_one() {
                    return Err(Error::Input("the all-ones functional is only bounded on l_1".into()));
                }
            }
            SetExpr::Union(cs) | SetExpr::Intersection(cs) => {
                if cs.is_empty() {
                    return Err(Error::Input("union and intersection need at least one operand".into()));
                }
                for c in cs {
                    c.validate()?;
                }
            }
            SetExpr::Fatten { child, delta, .. } => {
                if !delta.is_positive() {
                    return Err(Error::Input(format!("fattening radius {delta} must be positive")));
                }
                child.validate()?;
            }
            SetExpr::Trunc { child, .. } => child.validate()?,
        }
        Ok(())
    }

    /// Whether the set is closed in the weak-* topology of bounded sets, by
    /// structural rules: balls, intervals, finite point sets and slices by
    /// finitely supported functionals are closed; finite unions and
    /// intersections, fattenings and truncation images of bounded closed
    /// sets stay closed.
    pub fn is_weak_star_closed(&self) -> bool {
        match self {
            SetExpr::Ball { .. } | SetExpr::Interval { .. } | SetExpr::Points(_) => true,
            SetExpr::Kernel { functional, .. } => matches!(functional, Functional::Coeffs(_)),
            SetExpr::Sphere { .. } | SetExpr::UnitVectors => false,
            SetExpr::Union(cs) | SetExpr::Intersection(cs) => cs.iter().all(SetExpr::is_weak_star_closed),
            SetExpr::Fatten { child, .. } | SetExpr::Trunc { child, .. } => child.is_weak_star_closed(),
        }
    }

    /// Convex primitives as used by the no-loss characterization.
    pub fn is_convex_primitive(&self) -> bool {
        match self {
            SetExpr::Ball { .. } | SetExpr::Interval { .. } | SetExpr::Kernel { .. } => true,
            SetExpr::Points(ps) => ps.len() == 1,
            SetExpr::Fatten { child, .. } => child.is_convex_primitive(),
            _ => false,
        }
    }

    /// One past the largest coordinate mentioned by the expression.
    pub fn support_end(&self) -> usize {
        match self {
            SetExpr::Ball { center, .. } => center.support_end(),
            SetExpr::Interval { s, t } => s.support_end().max(t.support_end()),
            SetExpr::Points(ps) => ps.iter().map(SeqVec::support_end).max().unwrap_or(0),
            SetExpr::UnitVectors | SetExpr::Sphere { .. } => 0,
            SetExpr::Kernel { functional, center, .. } => {
                let f = match functional {
                    Functional::Ones => 0,
                    Functional::Coeffs(a) => a.support_end(),
                };
                f.max(center.support_end())
            }
            SetExpr::Union(cs) | SetExpr::Intersection(cs) => cs.iter().map(SetExpr::support_end).max().unwrap_or(0),
            SetExpr::Fatten { child, .. } => child.support_end(),
            SetExpr::Trunc { child, n } => child.support_end().min(*n),
        }
    }

    /// An upper bound on `||y||_q` over members `y`, if one is known.
    pub fn norm_bound(&self, q: &Exponent, tol: &Q) -> Option<Q> {
        // ||·||_q <= ||·||_p whenever q >= p
        let dominated = |p: &Exponent| match (p, q) {
            (_, Exponent::Inf) => true,
            (Exponent::Inf, Exponent::Finite(_)) => false,
            (Exponent::Finite(a), Exponent::Finite(b)) => a <= b,
        };
        let nrm = |v: &SeqVec| norm(v, q, tol).ok().map(|d| d.value.hi);
        match self {
            SetExpr::Ball { center, r, p } => dominated(p).then(|| nrm(center).map(|c| c + r)).flatten(),
            SetExpr::Sphere { r, p } => dominated(p).then(|| r.clone()),
            SetExpr::Kernel { center, r, p, .. } => dominated(p).then(|| nrm(center).map(|c| c + r)).flatten(),
            SetExpr::Interval { s, t } => {
                let end = s.support_end().max(t.support_end());
                nrm(&SeqVec::from_pairs((0..end).map(|i| (i, s.get(i).abs().max(t.get(i).abs())))))
            }
            SetExpr::Points(ps) => {
                ps.iter().map(nrm).collect::<Option<Vec<_>>>()?.into_iter().max().or(Some(Q::zero()))
            }
            SetExpr::UnitVectors => Some(Q::one()),
            SetExpr::Union(cs) => {
                cs.iter().map(|c| c.norm_bound(q, tol)).collect::<Option<Vec<_>>>()?.into_iter().max()
            }
            SetExpr::Intersection(cs) => cs.iter().filter_map(|c| c.norm_bound(q, tol)).min(),
            SetExpr::Fatten { child, delta, p } => {
                if dominated(p) {
                    child.norm_bound(q, tol).map(|b| b + delta)
                } else {
                    None
                }
            }
            SetExpr::Trunc { child, .. } => child.norm_bound(q, tol),
        }
    }

    pub fn to_json(&self) -> Value {
        let qs = |v: &Q| Value::String(fmt_q(v));
        match self {
            SetExpr::Ball { center, r, p } => {
                json!({"ball": {"center": center.to_json(), "r": qs(r), "p": p.to_json()}})
            }
            SetExpr::Interval { s, t } => json!({"interval": {"s": s.to_json(), "t": t.to_json()}}),
            SetExpr::Points(ps) => json!({"points": ps.iter().map(SeqVec::to_json).collect::<Vec<_>>()}),
            SetExpr::UnitVectors => json!({"unit_vectors": {}}),
            SetExpr::Sphere { r, p } => json!({"sphere": {"r": qs(r), "p": p.to_json()}}),
            SetExpr::Kernel { functional, level, center, r, p } => {
                let f = match functional {
                    Functional::Ones => json!("ones"),
                    Functional::Coeffs(a) => json!({"coeffs": a.to_json()}),
                };
                let within = SetExpr::Ball { center: center.clone(), r: r.clone(), p: p.clone() };
                json!({"kernel": {"functional": f, "level": qs(level), "within": within.to_json()}})
            }
            SetExpr::Union(cs) => json!({"union": cs.iter().map(SetExpr::to_json).collect::<Vec<_>>()}),
            SetExpr::Intersection(cs) => {
                json!({"intersection": cs.iter().map(SetExpr::to_json).collect::<Vec<_>>()})
            }
            SetExpr::Fatten { child, delta, p } => {
                json!({"fatten": {"set": child.to_json(), "delta": qs(delta), "p": p.to_json()}})
            }
            SetExpr::Trunc { child, n } => json!({"trunc": {"set": child.to_json(), "n": n}}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let e = parse_expr(v)?;
        e.validate()?;
        Ok(e)
    }
}

fn field<'a>(o: &'a Map<String, Value>, k: &str) -> Result<&'a Value> {
    o.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")))
}

fn exponent(o: &Map<String, Value>) -> Result<Exponent> {
    match o.get("p") {
        None => Ok(Exponent::two()),
        Some(Value::String(s)) => s.parse(),
        Some(Value::Number(n)) => n.to_string().parse(),
        Some(v) => Err(Error::Parse(format!("bad exponent {v}"))),
    }
}

fn vector_or_zero(o: &Map<String, Value>, k: &str) -> Result<SeqVec> {
    o.get(k).map_or(Ok(SeqVec::zero()), SeqVec::from_json)
}

fn list(v: &Value) -> Result<Vec<SetExpr>> {
    v.as_array().ok_or_else(|| Error::Parse("expected a list of sets".into()))?.iter().map(parse_expr).collect()
}

fn parse_expr(v: &Value) -> Result<SetExpr> {
    if v.as_str() == Some("unit_vectors") {
        return Ok(SetExpr::UnitVectors);
    }
    let o = v
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| Error::Parse(format!("expected a one-key set object, got {v}")))?;
    let (tag, body) = o.iter().next().expect("one key");
    let obj = || body.as_object().ok_or_else(|| Error::Parse(format!("{tag} needs an object body")));
    Ok(match tag.as_str() {
        "ball" => {
            let b = obj()?;
            SetExpr::Ball { center: vector_or_zero(b, "center")?, r: rational(field(b, "r")?)?, p: exponent(b)? }
        }
        "interval" => {
            let b = obj()?;
            SetExpr::Interval { s: SeqVec::from_json(field(b, "s")?)?, t: SeqVec::from_json(field(b, "t")?)? }
        }
        "points" => SetExpr::Points(
            body.as_array()
                .ok_or_else(|| Error::Parse("points needs a list".into()))?
                .iter()
                .map(SeqVec::from_json)
                .collect::<Result<_>>()?,
        ),
        "unit_vectors" => SetExpr::UnitVectors,
        "sphere" => {
            let b = obj()?;
            SetExpr::Sphere { r: b.get("r").map_or(Ok(Q::one()), rational)?, p: exponent(b)? }
        }
        "kernel" => {
            let b = obj()?;
            let functional = match field(b, "functional")? {
                Value::String(s) if s == "ones" => Functional::Ones,
                Value::Object(f) => Functional::Coeffs(SeqVec::from_json(field(f, "coeffs")?)?),
                other => return Err(Error::Parse(format!("unknown functional {other}"))),
            };
            let level = b.get("level").map_or(Ok(Q::zero()), rational)?;
            let (center, r, p) = match b.get("within").map(parse_expr).transpose()? {
                None => (SeqVec::zero(), Q::one(), Exponent::one()),
                Some(SetExpr::Ball { center, r, p }) => (center, r, p),
                Some(_) => return Err(Error::Parse("kernel \"within\" must be a ball".into())),
            };
            SetExpr::Kernel { functional, level, center, r, p }
        }
        "union" => SetExpr::Union(list(body)?),
        "intersection" => SetExpr::Intersection(list(body)?),
        "fatten" => {
            let b = obj()?;
            SetExpr::Fatten {
                child: Box::new(parse_expr(field(b, "set")?)?),
                delta: rational(field(b, "delta")?)?,
                p: exponent(b)?,
            }
        }
        "trunc" => {
            let b = obj()?;
            let n = field(b, "n")?.as_u64().ok_or_else(|| Error::Parse("trunc n must be a natural".into()))?;
            SetExpr::Trunc { child: Box::new(parse_expr(field(b, "set")?)?), n: n as usize }
        }
        other => return Err(Error::Parse(format!("unknown set constructor {other:?}"))),
    })
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, cs: &[SetExpr], op: &str| -> fmt::Result {
            f.write_str("(")?;
            for (k, c) in cs.iter().enumerate() {
                if k > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")
        };
        match self {
            SetExpr::Ball { center, r, p } => write!(f, "B_{p}({center}, {r})"),
            SetExpr::Interval { s, t } => write!(f, "[{s}, {t}]"),
            SetExpr::Points(ps) => {
                f.write_str("{")?;
                for (k, x) in ps.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
            SetExpr::UnitVectors => f.write_str("{e_i}"),
            SetExpr::Sphere { r, p } => write!(f, "S_{p}({r})"),
            SetExpr::Kernel { functional, level, center, r, p } => {
                let name = match functional {
                    Functional::Ones => "Σ".to_string(),
                    Functional::Coeffs(a) => format!("<{a}, ·>"),
                };
                write!(f, "{{{name} = {level}}} ∩ B_{p}({center}, {r})")
            }
            SetExpr::Union(cs) => join(f, cs, "∪"),
            SetExpr::Intersection(cs) => join(f, cs, "∩"),
            SetExpr::Fatten { child, delta, p } => write!(f, "({child})_{delta}[d_{p}]"),
            SetExpr::Trunc { child, n } => write!(f, "trunc_{n}({child})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{pow2_neg, q, qf};

    #[test]
    fn json_round_trip() {
        let e = SetExpr::Intersection(vec![
            SetExpr::Union(vec![
                SetExpr::ball(SeqVec::unit(1), qf(1, 2), Exponent::two()),
                SetExpr::interval(SeqVec::unit(0).neg(), SeqVec::unit(0)),
            ]),
            SetExpr::ones_kernel(),
            SetExpr::Fatten { child: Box::new(SetExpr::UnitVectors), delta: qf(1, 4), p: Exponent::Inf },
            SetExpr::Trunc { child: Box::new(SetExpr::Sphere { r: q(1), p: "3/2".parse().unwrap() }), n: 3 },
            SetExpr::Points(vec![SeqVec::zero()]),
        ]);
        assert_eq!(SetExpr::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn parses_documented_shapes() {
        let v: Value = serde_json::from_str(
            r#"{"kernel":{"functional":"ones","level":"0","within":{"ball":{"center":{"coords":{}},"r":"1","p":"1"}}}}"#,
        )
        .unwrap();
        assert_eq!(SetExpr::from_json(&v).unwrap(), SetExpr::ones_kernel());
        let bad: Value = serde_json::from_str(r#"{"ball":{"r":"0"}}"#).unwrap();
        assert!(matches!(SetExpr::from_json(&bad), Err(Error::Input(_))));
        let bad: Value = serde_json::from_str(r#"{"blob":{}}"#).unwrap();
        assert!(matches!(SetExpr::from_json(&bad), Err(Error::Parse(_))));
        let bad: Value = serde_json::from_str(r#"{"union":[]}"#).unwrap();
        assert!(SetExpr::from_json(&bad).is_err());
        let bad: Value =
            serde_json::from_str(r#"{"kernel":{"functional":"ones","within":{"ball":{"r":"1","p":"2"}}}}"#).unwrap();
        assert!(SetExpr::from_json(&bad).is_err());
    }

    #[test]
    fn closedness_rules() {
        assert!(SetExpr::unit_ball(Exponent::one()).is_weak_star_closed());
        assert!(!SetExpr::ones_kernel().is_weak_star_closed());
        assert!(!SetExpr::Sphere { r: q(1), p: Exponent::two() }.is_weak_star_closed());
        assert!(!SetExpr::Union(vec![SetExpr::UnitVectors, SetExpr::Points(vec![])]).is_weak_star_closed());
    }

    #[test]
    fn norm_bounds() {
        let tol = pow2_neg(40);
        let b = SetExpr::ball(SeqVec::unit(0), q(1), Exponent::one());
        assert_eq!(b.norm_bound(&Exponent::two(), &tol), Some(q(2)));
        let b2 = SetExpr::unit_ball(Exponent::two());
        assert_eq!(b2.norm_bound(&Exponent::one(), &tol), None);
        assert_eq!(b2.norm_bound(&Exponent::Inf, &tol), Some(q(1)));
    }
}
