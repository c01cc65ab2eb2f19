//! Exact rational helpers: parsing, integer powers, and certified brackets
//! for irrational roots.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Parses `"3"`, `"-3/2"` or a plain decimal such as `"0.125"`.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// A rational from a JSON string (`"3/2"`) or number.
pub fn q_from_json(v: &serde_json::Value) -> Result<Q, Error> {
    match v {
        serde_json::Value::String(s) => parse_q(s),
        serde_json::Value::Number(n) => parse_q(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

/// Serialized form used everywhere on the wire: `"a/b"` or `"a"`.
pub fn fmt_q(v: &Q) -> String {
    v.to_string()
}

pub fn qpow(v: &Q, k: u32) -> Q {
    num_traits::pow(v.clone(), k as usize)
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: scale through the bit lengths
        let n = v.numer().to_f64().unwrap_or(f64::MAX);
        let d = v.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Exact k-th root of a non-negative integer, if it exists.
fn int_root_exact(v: &BigUint, k: u32) -> Option<BigUint> {
    let r = v.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *v).then_some(r)
}

/// Exact k-th root of a non-negative rational, if it is rational.
pub fn root_exact(v: &Q, k: u32) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    if k == 1 {
        return Some(v.clone());
    }
    let n = int_root_exact(v.numer().magnitude(), k)?;
    let d = int_root_exact(v.denom().magnitude(), k)?;
    Some(Q::new(BigInt::from_biguint(Sign::Plus, n), BigInt::from_biguint(Sign::Plus, d)))
}

/// A closed rational interval `[lo, hi]` known to contain some real value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Q,
    pub hi: Q,
}

impl Bracket {
    pub fn exact(v: Q) -> Self {
        Bracket { lo: v.clone(), hi: v }
    }

    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Bracket { lo, hi }
    }

    pub fn zero() -> Self {
        Bracket::exact(Q::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn value(&self) -> Option<&Q> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &Bracket) -> Bracket {
        Bracket::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Certified comparison with an exact value; `None` if `v` lies inside a
    /// non-degenerate bracket.
    pub fn cmp_q(&self, v: &Q) -> Option<Ordering> {
        if self.hi < *v {
            Some(Ordering::Less)
        } else if self.lo > *v {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn compare(&self, other: &Bracket) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn max(&self, other: &Bracket) -> Bracket {
        Bracket::new((&self.lo).max(&other.lo).clone(), (&self.hi).max(&other.hi).clone())
    }

    pub fn min(&self, other: &Bracket) -> Bracket {
        Bracket::new((&self.lo).min(&other.lo).clone(), (&self.hi).min(&other.hi).clone())
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

/// Bracket for the k-th root of `v >= 0` of width at most `tol`. Exact when
/// the root is rational.
pub fn root_bracket(v: &Q, k: u32, tol: &Q) -> Bracket {
    assert!(!v.is_negative(), "root of a negative value");
    if let Some(r) = root_exact(v, k) {
        return Bracket::exact(r);
    }
    let holds_below = |c: &Q| qpow(c, k) <= *v;
    // float seed, verified exactly
    let guess = to_f64(v).powf(1.0 / k as f64);
    let (mut lo, mut hi) = match (from_f64(guess * (1.0 - 1e-12)), from_f64(guess * (1.0 + 1e-12))) {
        (Some(a), Some(b)) if guess.is_finite() && guess > 0.0 && holds_below(&a) && !holds_below(&b) => (a, b),
        _ => (Q::zero(), v.clone().max(Q::one())),
    };
    let two = q(2);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if holds_below(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Bracket::new(lo, hi)
}

/// `|v|^p` for a rational exponent `p = a/b >= 1`.
pub fn abs_pow_bracket(v: &Q, p: &Q, tol: &Q) -> Bracket {
    let a = p.numer().to_u32().expect("exponent numerator too large");
    let b = p.denom().to_u32().expect("exponent denominator too large");
    let base = qpow(&v.abs(), a);
    if b == 1 {
        Bracket::exact(base)
    } else {
        root_bracket(&base, b, tol)
    }
}

/// `w^(1/p)` for `w` given as a bracket and `p = a/b`: the root of a monotone
/// function, so bracket endpoints map to bracket endpoints.
pub fn inv_pow_bracket(w: &Bracket, p: &Q, tol: &Q) -> Bracket {
    let a = p.numer().to_u32().expect("exponent numerator too large");
    let b = p.denom().to_u32().expect("exponent denominator too large");
    // w^(b/a) = root_a(w^b)
    let lo = root_bracket(&qpow(&w.lo, b), a, tol).lo;
    let hi = root_bracket(&qpow(&w.hi, b), a, tol).hi;
    Bracket::new(lo, hi)
}

/// Rationals extended with `+inf`, for distances to possibly empty sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtQ {
    Fin(Q),
    Inf,
}

impl ExtQ {
    pub fn zero() -> Self {
        ExtQ::Fin(Q::zero())
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtQ::Fin(v) => Some(v),
            ExtQ::Inf => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ExtQ::Fin(v) => serde_json::Value::String(fmt_q(v)),
            ExtQ::Inf => serde_json::Value::String("inf".into()),
        }
    }
}

impl fmt::Display for ExtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtQ::Fin(v) => write!(f, "{v}"),
            ExtQ::Inf => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/2").unwrap(), qf(3, 2));
        assert_eq!(parse_q("-1").unwrap(), q(-1));
        assert_eq!(parse_q("0.125").unwrap(), qf(1, 8));
        assert_eq!(parse_q("-1.5").unwrap(), qf(-3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert_eq!(fmt_q(&qf(2, 4)), "1/2");
    }

    #[test]
    fn exact_roots() {
        assert_eq!(root_exact(&qf(9, 4), 2), Some(qf(3, 2)));
        assert_eq!(root_exact(&qf(2, 1), 2), None);
        assert_eq!(root_exact(&qf(27, 8), 3), Some(qf(3, 2)));
    }

    #[test]
    fn sqrt_two_bracket_is_tight_and_sound() {
        let tol = pow2_neg(40);
        let b = root_bracket(&q(2), 2, &tol);
        assert!(b.width() <= tol);
        assert!(qpow(&b.lo, 2) <= q(2));
        assert!(qpow(&b.hi, 2) >= q(2));
    }

    #[test]
    fn fractional_power() {
        let tol = pow2_neg(40);
        // 4^(3/2) = 8 exactly
        assert_eq!(abs_pow_bracket(&q(4), &qf(3, 2), &tol), Bracket::exact(q(8)));
        let b = abs_pow_bracket(&q(2), &qf(3, 2), &tol);
        assert!(!b.is_exact());
        assert!(qpow(&b.lo, 2) <= q(8) && qpow(&b.hi, 2) >= q(8));
    }
}
