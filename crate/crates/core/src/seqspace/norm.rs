use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::rat::{abs_pow_bracket, fmt_q, inv_pow_bracket, parse_q, pow2_neg, qpow, Bracket, Q};
use crate::seqspace::SeqVec;
use crate::{Error, Result};

/// The exponent `p` of an `l_p` norm: a rational `>= 1` or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Q),
    Inf,
}

impl Exponent {
    pub fn finite(p: Q) -> Result<Self> {
        if p < Q::one() {
            return Err(Error::Domain(format!("exponent {p} is below 1")));
        }
        if p.numer().to_u32().is_none() || p.denom().to_u32().is_none() {
            return Err(Error::Domain(format!("exponent {p} is too large")));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn int(p: u32) -> Self {
        Exponent::Finite(Q::from_integer(p.into()))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn two() -> Self {
        Self::int(2)
    }

    /// Integer value of a finite integral exponent.
    pub fn as_int(&self) -> Option<u32> {
        match self {
            Exponent::Finite(p) if p.is_integer() => p.to_integer().to_u32(),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_int() == Some(1)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Exponent::Inf)
    }

    /// `1 < p < inf`: the reflexive range.
    pub fn is_reflexive(&self) -> bool {
        matches!(self, Exponent::Finite(p) if *p > Q::one())
    }

    /// `|t|^p`, exact when rational.
    pub fn abs_pow(&self, t: &Q, tol: &Q) -> Bracket {
        match self {
            Exponent::Finite(p) => abs_pow_bracket(t, p, tol),
            Exponent::Inf => Bracket::exact(t.abs()),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => f.write_str(&fmt_q(p)),
            Exponent::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Exponent::Inf),
            t => Exponent::finite(parse_q(t)?),
        }
    }
}

/// A norm or distance value. `pow` is the sum of `p`-th powers (equal to
/// `value` for `p = inf`); `value` is its `p`-th root. Both are exact when
/// rational and otherwise bracketed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dist {
    pub p: Exponent,
    pub pow: Bracket,
    pub value: Bracket,
}

impl Dist {
    pub fn exact(&self) -> Option<&Q> {
        self.value.value()
    }

    /// Certified `value <= r`, decided on `p`-th powers when `p` is an
    /// integer.
    pub fn le_q(&self, r: &Q) -> Option<bool> {
        if r.is_negative() {
            return Some(false);
        }
        let ord = match self.p.as_int() {
            Some(k) => self.pow.cmp_q(&qpow(r, k)),
            None => self.value.cmp_q(r),
        }?;
        Some(ord != Ordering::Greater)
    }

    /// Certified comparison; distances sharing `p` compare on `p`-th powers.
    pub fn cmp_dist(&self, other: &Dist) -> Option<Ordering> {
        if self.p == other.p {
            self.pow.compare(&other.pow)
        } else {
            self.value.compare(&other.value)
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "p": self.p.to_json() });
        match self.exact() {
            Some(x) => v["value"] = Value::String(fmt_q(x)),
            None => {
                v["lo"] = Value::String(fmt_q(&self.value.lo));
                v["hi"] = Value::String(fmt_q(&self.value.hi));
            }
        }
        if let Some(pw) = self.pow.value() {
            v["pow"] = Value::String(fmt_q(pw));
        }
        v
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `||x||_p`. The root bracket has width at most `tol`.
pub fn norm(x: &SeqVec, p: &Exponent, tol: &Q) -> Result<Dist> {
    if !tol.is_positive() {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    match p {
        Exponent::Inf => {
            let m = Bracket::exact(x.max_abs());
            Ok(Dist { p: p.clone(), pow: m.clone(), value: m })
        }
        Exponent::Finite(e) => {
            if *e < Q::one() {
                return Err(Error::Domain(format!("exponent {e} is below 1")));
            }
            let terms = Q::from_integer((x.nnz() + 1).into());
            let mut inner = tol / &terms;
            for _ in 0..64 {
                let pow = x.iter().map(|(_, t)| p.abs_pow(t, &inner)).fold(Bracket::zero(), |a, b| a.add(&b));
                let value = inv_pow_bracket(&pow, e, tol);
                if value.width() <= *tol {
                    return Ok(Dist { p: p.clone(), pow, value });
                }
                inner *= pow2_neg(4);
            }
            Err(Error::Resource(format!("could not bracket the {p}-norm to {tol}")))
        }
    }
}

pub fn dist(x: &SeqVec, y: &SeqVec, p: &Exponent, tol: &Q) -> Result<Dist> {
    norm(&x.sub(y), p, tol)
}

/// `d_inf(x, y) = max_i |x_i - y_i|`.
pub fn dinf(x: &SeqVec, y: &SeqVec) -> Q {
    x.sub(y).max_abs()
}

/// `d_*(x, y) = sum_n |x_n - y_n| / 2^(n+1)`, exact on finite supports.
pub fn dstar(x: &SeqVec, y: &SeqVec) -> Q {
    x.sub(y).iter().fold(Q::zero(), |acc, (i, t)| acc + t.abs() * pow2_neg(i as u32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    fn tol() -> Q {
        pow2_neg(40)
    }

    #[test]
    fn pythagorean_and_units() {
        let x = SeqVec::from_dense([q(3), q(4)]);
        assert_eq!(norm(&x, &Exponent::two(), &tol()).unwrap().exact(), Some(&q(5)));
        for p in ["1", "2", "3/2", "inf"] {
            let p: Exponent = p.parse().unwrap();
            assert_eq!(norm(&SeqVec::unit(7), &p, &tol()).unwrap().exact(), Some(&q(1)));
            assert_eq!(norm(&SeqVec::zero(), &p, &tol()).unwrap().exact(), Some(&q(0)));
        }
    }

    #[test]
    fn irrational_norm_is_bracketed() {
        let x = SeqVec::from_dense([q(1), q(1)]);
        let d = norm(&x, &Exponent::two(), &tol()).unwrap();
        assert_eq!(d.pow.value(), Some(&q(2)));
        assert!(d.value.width() <= tol());
        assert!(&d.value.lo * &d.value.lo <= q(2));
        assert_eq!(d.le_q(&qf(3, 2)), Some(true));
        assert_eq!(d.le_q(&qf(7, 5)), Some(false));
        let x = SeqVec::from_dense([q(2), q(3)]);
        let d = norm(&x, &"3/2".parse().unwrap(), &tol()).unwrap();
        assert!(d.value.width() <= tol());
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Inf);
        assert_eq!("3/2".parse::<Exponent>().unwrap(), Exponent::Finite(qf(3, 2)));
        assert!(matches!("1/2".parse::<Exponent>(), Err(Error::Domain(_))));
        assert!(matches!("x".parse::<Exponent>(), Err(Error::Parse(_))));
        assert!(norm(&SeqVec::zero(), &Exponent::Finite(qf(1, 2)), &tol()).is_err());
    }

    #[test]
    fn dstar_values() {
        assert_eq!(dstar(&SeqVec::unit(0), &SeqVec::zero()), qf(1, 2));
        assert_eq!(dstar(&SeqVec::unit(2), &SeqVec::unit(5)), pow2_neg(3) + pow2_neg(6));
        let x = SeqVec::from_dense([q(1), qf(-2, 3)]);
        assert_eq!(dist(&x, &x, &Exponent::two(), &tol()).unwrap().exact(), Some(&q(0)));
    }
}
