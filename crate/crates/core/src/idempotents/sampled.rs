//! Idempotents on infinite carriers (rationals, sequences), checked
//! pointwise on declared sample sets with exact equality.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

pub type MapFn<T> = Arc<dyn Fn(&T) -> T + Send + Sync>;

/// A named endomap given by a closure.
#[derive(Clone)]
pub struct Endo<T> {
    name: String,
    f: MapFn<T>,
}

impl<T> fmt::Debug for Endo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endo({})", self.name)
    }
}

impl<T> Endo<T> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &T) -> T {
        (self.f)(x)
    }
}

impl<T: 'static> Endo<T> {
    pub fn new(name: impl Into<String>, f: impl Fn(&T) -> T + Send + Sync + 'static) -> Self {
        Endo { name: name.into(), f: Arc::new(f) }
    }

    pub fn identity() -> Self
    where
        T: Clone,
    {
        Endo::new("id", |x: &T| x.clone())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Endo<T>) -> Endo<T> {
        let (f, g) = (first.f.clone(), self.f.clone());
        Endo { name: format!("{}∘{}", self.name, first.name), f: Arc::new(move |x| g(&f(x))) }
    }
}

pub fn agree_on<T: PartialEq>(a: &Endo<T>, b: &Endo<T>, sample: &[T]) -> bool {
    sample.iter().all(|x| a.apply(x) == b.apply(x))
}

pub fn is_idempotent<T: PartialEq>(g: &Endo<T>, sample: &[T]) -> bool {
    sample.iter().all(|x| {
        let y = g.apply(x);
        g.apply(&y) == y
    })
}

/// `g1 <= g2` checked on `sample`.
pub fn idem_leq<T: PartialEq>(g1: &Endo<T>, g2: &Endo<T>, sample: &[T]) -> Result<bool> {
    if !is_idempotent(g1, sample) || !is_idempotent(g2, sample) {
        return Err(Error::Input(format!("{} or {} is not idempotent on the sample", g1.name, g2.name)));
    }
    Ok(sample.iter().all(|x| {
        let a = g1.apply(x);
        g1.apply(&g2.apply(x)) == a && g2.apply(&a) == a
    }))
}

/// A chain of idempotents `g_0 <= g_1 <= ...` on one carrier, each split
/// through its fixed points: `f_n` is the inclusion and `q_n` is `g_n`.
#[derive(Clone, Debug)]
pub struct SampledChain<T> {
    gs: Vec<Endo<T>>,
}

impl<T: Clone + PartialEq + 'static> SampledChain<T> {
    pub fn new(gs: Vec<Endo<T>>) -> Self {
        SampledChain { gs }
    }

    pub fn len(&self) -> usize {
        self.gs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gs.is_empty()
    }

    pub fn g(&self, n: usize) -> &Endo<T> {
        &self.gs[n]
    }

    /// Checks `g_n <= g_{n+1}` for all consecutive stages on `sample`.
    pub fn check_order(&self, sample: &[T]) -> Result<()> {
        for n in 0..self.gs.len().saturating_sub(1) {
            if !idem_leq(&self.gs[n], &self.gs[n + 1], sample)? {
                return Err(Error::Input(format!("g_{n} is not below g_{} on the sample", n + 1)));
            }
        }
        Ok(())
    }

    /// Points of `X_n` obtained by retracting the sample.
    pub fn carrier_sample(&self, n: usize, sample: &[T]) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for x in sample {
            let y = self.gs[n].apply(x);
            if !out.contains(&y) {
                out.push(y);
            }
        }
        out
    }

    /// `(e_n, p_n) = (q_{n+1}∘f_n, q_n∘f_{n+1})`, as endomaps of the ambient
    /// carrier meant to be applied to points of `X_n` and `X_{n+1}`.
    pub fn connecting(&self, n: usize) -> Result<(Endo<T>, Endo<T>)> {
        if n + 1 >= self.gs.len() {
            return Err(Error::Input(format!("no stage after {n}")));
        }
        Ok((self.gs[n + 1].clone(), self.gs[n].clone()))
    }

    pub fn h(&self, i: usize, j: usize) -> Result<Endo<T>> {
        let depth = self.gs.len();
        if i >= depth || j >= depth {
            return Err(Error::Input(format!("h_({i},{j}) outside chain of length {depth}")));
        }
        let mut acc = Endo::identity();
        if i < j {
            for k in i..j {
                acc = self.connecting(k)?.0.after(&acc);
            }
        } else {
            for k in (j..i).rev() {
                acc = self.connecting(k)?.1.after(&acc);
            }
        }
        Ok(acc)
    }
}
