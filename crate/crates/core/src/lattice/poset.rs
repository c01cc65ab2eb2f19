use std::sync::Arc;

use crate::{Error, Result};

/// Subsets of a small carrier, one bit per element.
pub type Mask = u64;

pub const MAX_CARRIER: usize = 64;

pub fn full_mask(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn members(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m >> i & 1 == 1)
}

/// A finite partial order on `0..len()` stored as a dense relation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_CARRIER {
            return Err(Error::Resource(format!("poset with {n} elements")));
        }
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::Input("leq must be a square matrix matching elements".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::Input(format!("not reflexive at {a}")));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Input(format!("not antisymmetric at ({a},{b})")));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Input(format!("not transitive at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn from_leq(leq: Vec<Vec<bool>>) -> Result<Self> {
        let labels = (0..leq.len()).map(|i| i.to_string()).collect();
        Self::new(labels, leq)
    }

    /// Builds the order from a predicate on indices.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::from_leq((0..n).map(|a| (0..n).map(|b| leq(a, b)).collect()).collect())
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |a, b| a <= b).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn(n, |a, b| a == b).expect("antichain is a poset")
    }

    /// `0 = bottom`, `1` and `2` incomparable atoms, `3 = top`.
    pub fn diamond() -> Self {
        Self::from_fn(4, |a, b| a == b || a == 0 || b == 3).expect("diamond is a poset")
    }

    /// Subsets of an `n`-set (as masks `0..2^n`) under inclusion.
    pub fn powerset(n: usize) -> Self {
        Self::from_fn(1 << n, |a, b| a & !b == 0).expect("powerset is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn full(&self) -> Mask {
        full_mask(self.len())
    }

    pub fn upper_bounds(&self, s: Mask) -> Mask {
        (0..self.len()).filter(|&u| members(s).all(|x| self.leq[x][u])).fold(0, |m, u| m | 1 << u)
    }

    pub fn lower_bounds(&self, s: Mask) -> Mask {
        (0..self.len()).filter(|&l| members(s).all(|x| self.leq[l][x])).fold(0, |m, l| m | 1 << l)
    }

    /// Least element of `s`, if any.
    pub fn least(&self, s: Mask) -> Option<usize> {
        members(s).find(|&a| members(s).all(|b| self.leq[a][b]))
    }

    pub fn greatest(&self, s: Mask) -> Option<usize> {
        members(s).find(|&a| members(s).all(|b| self.leq[b][a]))
    }

    pub fn sup(&self, s: Mask) -> Option<usize> {
        self.least(self.upper_bounds(s))
    }

    pub fn inf(&self, s: Mask) -> Option<usize> {
        self.greatest(self.lower_bounds(s))
    }

    pub fn up_closure(&self, s: Mask) -> Mask {
        (0..self.len()).filter(|&y| members(s).any(|x| self.leq[x][y])).fold(0, |m, y| m | 1 << y)
    }

    pub fn down_closure(&self, s: Mask) -> Mask {
        (0..self.len()).filter(|&y| members(s).any(|x| self.leq[y][x])).fold(0, |m, y| m | 1 << y)
    }

    pub fn is_up_set(&self, s: Mask) -> bool {
        self.up_closure(s) == s
    }

    pub fn principal_down(&self, y: usize) -> Mask {
        self.down_closure(1 << y)
    }

    /// Every subset has a sup and an inf. Empty posets are not lattices.
    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        // bottom, top and binary joins/meets suffice on finite carriers
        if self.sup(0).is_none() || self.inf(0).is_none() {
            return false;
        }
        (0..n).all(|a| (0..n).all(|b| self.sup(1 << a | 1 << b).is_some() && self.inf(1 << a | 1 << b).is_some()))
    }

    /// The lattice of down-sets ordered by inclusion; elements are listed in
    /// increasing mask order and labelled by their members.
    pub fn down_set_lattice(&self) -> (FinitePoset, Vec<Mask>) {
        assert!(self.len() <= 20, "down-set enumeration is exponential");
        let sets: Vec<Mask> = (0..=full_mask(self.len())).filter(|&m| self.down_closure(m) == m).collect();
        let labels = sets
            .iter()
            .map(|&m| format!("{{{}}}", members(m).map(|i| self.labels[i].clone()).collect::<Vec<_>>().join(",")))
            .collect();
        let leq = sets.iter().map(|&a| sets.iter().map(|&b| a & !b == 0).collect()).collect();
        (FinitePoset::new(labels, leq).expect("inclusion is a partial order"), sets)
    }

    /// Same order with elements renamed by `perm` (new index of old `i` is
    /// `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> FinitePoset {
        let n = self.len();
        let mut leq = vec![vec![false; n]; n];
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..n {
                leq[perm[a]][perm[b]] = self.leq[a][b];
            }
        }
        FinitePoset { labels, leq }
    }

    pub fn same_order(&self, other: &FinitePoset) -> bool {
        self.leq == other.leq
    }
}

/// A complete lattice on a finite carrier with precomputed join/meet tables.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    poset: Arc<FinitePoset>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    pub fn new(poset: impl Into<Arc<FinitePoset>>) -> Result<Self> {
        let poset = poset.into();
        if !poset.is_lattice() {
            return Err(Error::Input("poset is not a lattice".into()));
        }
        let n = poset.len();
        let table = |f: &dyn Fn(Mask) -> Option<usize>| -> Vec<Vec<usize>> {
            (0..n).map(|a| (0..n).map(|b| f(1 << a | 1 << b).expect("checked lattice")).collect()).collect()
        };
        let join = table(&|m| poset.sup(m));
        let meet = table(&|m| poset.inf(m));
        let bottom = poset.sup(0).expect("checked lattice");
        let top = poset.inf(0).expect("checked lattice");
        Ok(FiniteLattice { poset, join, meet, bottom, top })
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn sup(&self, s: Mask) -> usize {
        members(s).fold(self.bottom, |acc, x| self.join[acc][x])
    }

    pub fn inf(&self, s: Mask) -> usize {
        members(s).fold(self.top, |acc, x| self.meet[acc][x])
    }
}
