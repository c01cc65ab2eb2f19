//! Verification suites and one-off queries behind the `wstar` binary.
//!
//! A suite is a list of named checks. Each check draws its randomness from a
//! stream derived from the configured seed and its own id, so reports are
//! reproducible whatever the thread count.

pub mod commands;
pub mod suites;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use wstar_core::rat::{fmt_q, parse_q, pow2_neg};
use wstar_core::setrep::Probe;
use wstar_core::{Error, Q};

pub const DEFAULT_SEED: u64 = 0x5eed_0fc0_ffee;

/// Run-wide settings shared by suites and queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub tol: Q,
    pub n_max: usize,
    pub delta_min: Q,
    pub depth: u32,
    pub seed: u64,
    /// Worker threads; 0 lets the pool pick.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { tol: pow2_neg(40), n_max: 8, delta_min: pow2_neg(10), depth: 4, seed: DEFAULT_SEED, threads: 0 }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), Error> {
        if self.tol <= Q::from_integer(0.into()) || self.delta_min <= Q::from_integer(0.into()) {
            return Err(Error::Input("tol and delta-min must be positive".into()));
        }
        if self.n_max == 0 || self.depth == 0 {
            return Err(Error::Input("nmax and depth must be at least 1".into()));
        }
        Ok(())
    }

    pub fn probe(&self) -> Probe {
        Probe { n_max: self.n_max, delta_min: self.delta_min.clone(), tol: self.tol.clone() }
    }

    /// The random stream of the check named `id`.
    pub fn rng(&self, id: &str) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(fnv1a(id.as_bytes()));
        r
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tol": fmt_q(&self.tol),
            "nmax": self.n_max,
            "delta_min": fmt_q(&self.delta_min),
            "depth": self.depth,
            "seed": self.seed,
        })
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Parses a positive rational, also accepting `2^-k`.
pub fn parse_positive(s: &str) -> Result<Q, Error> {
    let v = match s.trim().strip_prefix("2^-") {
        Some(k) => pow2_neg(k.parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?),
        None => parse_q(s)?,
    };
    if v <= Q::from_integer(0.into()) {
        return Err(Error::Input(format!("{s} is not positive")));
    }
    Ok(v)
}

/// The outcome of one named property.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub id: &'static str,
    pub pass: bool,
    pub detail: Value,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn to_json(&self) -> Value {
        let mut v = json!({"suite": self.suite, "id": self.id, "pass": self.pass, "detail": self.detail});
        if let Some(c) = &self.counterexample {
            v["counterexample"] = Value::String(c.clone());
        }
        v
    }

    pub fn errored(suite: &'static str, id: &'static str, e: Error) -> Self {
        Check { suite, id, pass: false, detail: Value::Null, counterexample: Some(format!("error: {e}")) }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, if self.pass { "pass" } else { "FAIL" })?;
        if !self.detail.is_null() {
            write!(f, " {}", self.detail)?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Counts cases and keeps the first failure.
#[derive(Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub failures: usize,
    pub first: Option<String>,
}

impl Tally {
    pub fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        self.first = self.first.or(other.first);
        self
    }

    /// A check whose detail records the case count next to `extra`.
    pub fn finish(self, suite: &'static str, id: &'static str, extra: Value) -> Check {
        let mut detail = json!({"cases": self.cases, "failures": self.failures});
        if let Value::Object(m) = extra {
            for (k, v) in m {
                detail[k] = v;
            }
        }
        Check { suite, id, pass: self.failures == 0, detail, counterexample: self.first }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use wstar_core::rat::qf;

    #[test]
    fn positive_rationals() {
        assert_eq!(parse_positive("2^-10").unwrap(), pow2_neg(10));
        assert_eq!(parse_positive("3/8").unwrap(), qf(3, 8));
        assert!(matches!(parse_positive("0"), Err(Error::Input(_))));
        assert!(matches!(parse_positive("2^-x"), Err(Error::Parse(_))));
    }

    #[test]
    fn config_validation() {
        assert!(Config::default().validate().is_ok());
        assert!(Config { n_max: 0, ..Config::default() }.validate().is_err());
        assert!(Config { delta_min: qf(0, 1), ..Config::default() }.validate().is_err());
    }

    #[test]
    fn streams_depend_on_seed_and_id() {
        let c = Config::default();
        let draw = |c: &Config, id: &str| c.rng(id).gen::<u64>();
        assert_eq!(draw(&c, "a"), draw(&c, "a"));
        assert_ne!(draw(&c, "a"), draw(&c, "b"));
        assert_ne!(draw(&c, "a"), draw(&Config { seed: 1, ..c.clone() }, "a"));
    }

    #[test]
    fn tally_keeps_the_first_failure() {
        let mut t = Tally::default();
        t.expect(true, || "no".into());
        t.expect(false, || "first".into());
        t.expect(false, || "second".into());
        let c = t.finish("s", "x", json!({"k": 1}));
        assert!(!c.pass);
        assert_eq!(c.counterexample.as_deref(), Some("first"));
        assert_eq!(c.detail, json!({"cases": 3, "failures": 2, "k": 1}));
        assert_eq!(c.to_string().lines().next(), Some(r#"x: FAIL {"cases":3,"failures":2,"k":1}"#));
    }
}
