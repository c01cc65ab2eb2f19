use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::rat::{fmt_q, q_from_json, Q};
use crate::{Error, Result};

/// A finitely supported real sequence with exact rational coordinates.
/// Only nonzero coordinates are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqVec {
    coords: BTreeMap<usize, Q>,
}

impl SeqVec {
    pub fn zero() -> Self {
        SeqVec::default()
    }

    /// The unit sequence `e_i`.
    pub fn unit(i: usize) -> Self {
        Self::zero().with(i, Q::from_integer(1.into()))
    }

    pub fn from_dense(xs: impl IntoIterator<Item = Q>) -> Self {
        let mut v = Self::zero();
        for (i, x) in xs.into_iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut v = Self::zero();
        for (i, x) in pairs {
            v.set(i, x);
        }
        v
    }

    pub fn with(mut self, i: usize, x: Q) -> Self {
        self.set(i, x);
        self
    }

    pub fn set(&mut self, i: usize, x: Q) {
        if x.is_zero() {
            self.coords.remove(&i);
        } else {
            self.coords.insert(i, x);
        }
    }

    pub fn get(&self, i: usize) -> Q {
        self.coords.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Nonzero coordinates in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coords.iter().map(|(&i, x)| (i, x))
    }

    pub fn nnz(&self) -> usize {
        self.coords.len()
    }

    /// One past the largest nonzero index (0 for the zero sequence).
    pub fn support_end(&self) -> usize {
        self.coords.keys().next_back().map_or(0, |&i| i + 1)
    }

    /// Coordinates `0..n` as a dense vector.
    pub fn prefix(&self, n: usize) -> Vec<Q> {
        (0..n).map(|i| self.get(i)).collect()
    }

    /// Keeps coordinates `< n`, zeroing the tail.
    pub fn head(&self, n: usize) -> SeqVec {
        SeqVec { coords: self.coords.range(..n).map(|(&i, x)| (i, x.clone())).collect() }
    }

    pub fn map(&self, f: impl Fn(usize, &Q) -> Q) -> SeqVec {
        Self::from_pairs(self.iter().map(|(i, x)| (i, f(i, x))))
    }

    pub fn neg(&self) -> SeqVec {
        self.map(|_, x| -x)
    }

    pub fn scale(&self, c: &Q) -> SeqVec {
        self.map(|_, x| x * c)
    }

    pub fn add(&self, other: &SeqVec) -> SeqVec {
        let mut out = self.clone();
        for (i, y) in other.iter() {
            let s = out.get(i) + y;
            out.set(i, s);
        }
        out
    }

    pub fn sub(&self, other: &SeqVec) -> SeqVec {
        self.add(&other.neg())
    }

    pub fn sum(&self) -> Q {
        self.coords.values().fold(Q::zero(), |a, x| a + x)
    }

    pub fn max_abs(&self) -> Q {
        self.coords.values().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn to_json(&self) -> Value {
        let coords: Map<String, Value> = self.iter().map(|(i, x)| (i.to_string(), Value::String(fmt_q(x)))).collect();
        json!({ "coords": coords })
    }

    /// Accepts `{"coords": {"0": "3/2", ...}}` or a dense array of rationals.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(xs) => Ok(Self::from_dense(xs.iter().map(q_from_json).collect::<Result<Vec<_>>>()?)),
            Value::Object(o) => {
                let coords = o
                    .get("coords")
                    .and_then(Value::as_object)
                    .ok_or_else(|| Error::Parse("vector needs a \"coords\" object".into()))?;
                let mut out = SeqVec::zero();
                for (k, x) in coords {
                    let i: usize = k.parse().map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
                    out.set(i, q_from_json(x)?);
                }
                Ok(out)
            }
            _ => Err(Error::Parse(format!("expected a vector, got {v}"))),
        }
    }
}

impl fmt::Display for SeqVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 0..self.support_end() {
            write!(f, "{}, ", self.get(i))?;
        }
        f.write_str("0…)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    #[test]
    fn zeros_are_not_stored() {
        let v = SeqVec::from_dense([q(1), q(0), q(2)]).with(0, q(0));
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.support_end(), 3);
        assert_eq!(v.sub(&v), SeqVec::zero());
    }

    #[test]
    fn json_shapes() {
        let v = SeqVec::from_pairs([(0, qf(3, 2)), (4, q(-1))]);
        let j = v.to_json();
        assert_eq!(j, serde_json::json!({"coords": {"0": "3/2", "4": "-1"}}));
        assert_eq!(SeqVec::from_json(&j).unwrap(), v);
        assert_eq!(SeqVec::from_json(&serde_json::json!(["1/2", 0, "-1/2"])).unwrap().sum(), q(0));
        assert!(SeqVec::from_json(&serde_json::json!({"coords": {"x": "1"}})).is_err());
    }
}
