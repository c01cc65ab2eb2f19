//! Idempotents and e-p pairs on finite carriers `0..n`, as function tables.

use crate::{Error, Result};

/// A function `0..dom -> 0..cod`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinMap {
    cod: usize,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(cod: usize, table: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&y| y >= cod) {
            return Err(Error::Input(format!("value {bad} outside carrier of size {cod}")));
        }
        Ok(FinMap { cod, table })
    }

    /// An endomap on `0..table.len()`.
    pub fn endo(table: Vec<usize>) -> Result<Self> {
        let n = table.len();
        Self::new(n, table)
    }

    pub fn identity(n: usize) -> Self {
        FinMap { cod: n, table: (0..n).collect() }
    }

    pub fn constant(dom: usize, cod: usize, v: usize) -> Result<Self> {
        Self::new(cod, vec![v; dom])
    }

    pub fn dom(&self) -> usize {
        self.table.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinMap) -> FinMap {
        assert_eq!(first.cod, self.dom(), "composition of mismatched maps");
        FinMap { cod: self.cod, table: first.table.iter().map(|&x| self.table[x]).collect() }
    }

    pub fn is_endo(&self) -> bool {
        self.cod == self.dom()
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && self.table.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_endo() && self.table.iter().all(|&y| self.table[y] == y)
    }

    /// Sorted list of values hit.
    pub fn image(&self) -> Vec<usize> {
        let mut v = self.table.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// `g1 <= g2` in the idempotent order: `g1∘g2 = g1 = g2∘g1`.
pub fn idem_leq(g1: &FinMap, g2: &FinMap) -> Result<bool> {
    if !g1.is_idempotent() || !g2.is_idempotent() {
        return Err(Error::Input("idempotent order needs idempotent arguments".into()));
    }
    if g1.dom() != g2.dom() {
        return Err(Error::Input("idempotents on different carriers".into()));
    }
    Ok(g1.after(g2) == *g1 && g2.after(g1) == *g1)
}

/// An embedding `e: X -> Y` with projection `p: Y -> X`, `p∘e = id_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpPair {
    pub e: FinMap,
    pub p: FinMap,
}

impl EpPair {
    pub fn new(e: FinMap, p: FinMap) -> Result<Self> {
        let pair = EpPair { e, p };
        if !pair.is_ep() {
            return Err(Error::Input("p∘e is not the identity".into()));
        }
        Ok(pair)
    }

    pub fn is_ep(&self) -> bool {
        self.e.cod() == self.p.dom() && self.p.cod() == self.e.dom() && self.p.after(&self.e).is_identity()
    }

    /// `(e2∘e1, p1∘p2)` where `self = (e2, p2)`.
    pub fn after(&self, first: &EpPair) -> EpPair {
        EpPair { e: self.e.after(&first.e), p: first.p.after(&self.p) }
    }

    /// The idempotent `e∘p` on the target.
    pub fn idempotent(&self) -> FinMap {
        self.e.after(&self.p)
    }
}

/// Splits an idempotent through its image: `e` is the inclusion of the image
/// (listed in increasing order), `p` the corestriction of `g`.
pub fn split(g: &FinMap) -> Result<(Vec<usize>, EpPair)> {
    if !g.is_idempotent() {
        return Err(Error::Input("only idempotents split".into()));
    }
    let image = g.image();
    let k = image.len();
    let index_of = |y: usize| image.binary_search(&y).expect("value in image");
    let e = FinMap::new(g.dom(), image.clone())?;
    let p = FinMap::new(k, g.table().iter().map(|&y| index_of(y)).collect())?;
    Ok((image, EpPair { e, p }))
}

/// One stage of a split chain: the idempotent `g_n` on the ambient carrier,
/// its image `X_n`, and the splitting `(f_n, q_n)`.
#[derive(Clone, Debug)]
pub struct Stage {
    pub g: FinMap,
    pub image: Vec<usize>,
    pub split: EpPair,
}

/// An increasing chain `g_0 <= g_1 <= ...` of idempotents on one carrier,
/// each split through its image.
#[derive(Clone, Debug)]
pub struct SplitChain {
    stages: Vec<Stage>,
}

impl SplitChain {
    pub fn new(gs: Vec<FinMap>) -> Result<Self> {
        if gs.is_empty() {
            return Err(Error::Input("empty chain".into()));
        }
        let mut stages = Vec::with_capacity(gs.len());
        for (n, g) in gs.into_iter().enumerate() {
            let (image, split) = split(&g)?;
            if let Some(prev) = stages.last() {
                let prev: &Stage = prev;
                if !idem_leq(&prev.g, &g)? {
                    return Err(Error::Input(format!("g_{} is not below g_{}", n - 1, n)));
                }
            }
            stages.push(Stage { g, image, split });
        }
        Ok(SplitChain { stages })
    }

    pub fn carrier_len(&self) -> usize {
        self.stages[0].g.dom()
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stage(&self, n: usize) -> &Stage {
        &self.stages[n]
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// The unique e-p pair `(e_n, p_n): X_n => X_{n+1}` with
    /// `(f_n, q_n) = (f_{n+1}, q_{n+1}) ∘ (e_n, p_n)`.
    pub fn connecting(&self, n: usize) -> Result<EpPair> {
        if n + 1 >= self.len() {
            return Err(Error::Input(format!("no stage after {n}")));
        }
        let (lo, hi) = (&self.stages[n].split, &self.stages[n + 1].split);
        Ok(EpPair { e: hi.p.after(&lo.e), p: lo.p.after(&hi.e) })
    }

    /// The family `h_{i,j}: X_i -> X_j`.
    pub fn h(&self, i: usize, j: usize) -> Result<FinMap> {
        let depth = self.len();
        if i >= depth || j >= depth {
            return Err(Error::Input(format!("h_({i},{j}) outside chain of length {depth}")));
        }
        let mut acc = FinMap::identity(self.stages[i].image.len());
        if i < j {
            for k in i..j {
                acc = self.connecting(k)?.e.after(&acc);
            }
        } else {
            for k in (j..i).rev() {
                acc = self.connecting(k)?.p.after(&acc);
            }
        }
        Ok(acc)
    }

    /// Every e-p, factorization and `h` law that fails, as readable lines.
    pub fn law_failures(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        let len = self.len();
        for n in 0..len {
            let f = &self.stages[n].split;
            if !f.is_ep() {
                bad.push(format!("(f_{n}, q_{n}) is not an e-p pair"));
            }
            if f.idempotent() != self.stages[n].g {
                bad.push(format!("f_{n}∘q_{n} != g_{n}"));
            }
        }
        for n in 0..len.saturating_sub(1) {
            let c = self.connecting(n)?;
            let (lo, hi) = (&self.stages[n].split, &self.stages[n + 1].split);
            if !c.is_ep() {
                bad.push(format!("p_{n}∘e_{n} != id"));
            }
            if hi.e.after(&c.e) != lo.e || c.p.after(&hi.p) != lo.p {
                bad.push(format!("(f_{n}, q_{n}) does not factor through stage {}", n + 1));
            }
        }
        for i in 0..len {
            for j in 0..len {
                let hij = self.h(i, j)?;
                if hij != self.stages[j].split.p.after(&self.stages[i].split.e) {
                    bad.push(format!("h_({i},{j}) != q_{j}∘f_{i}"));
                }
                if i == j && !hij.is_identity() {
                    bad.push(format!("h_({i},{i}) != id"));
                }
                if i <= j && !self.h(j, i)?.after(&hij).is_identity() {
                    bad.push(format!("h_({j},{i})∘h_({i},{j}) != id"));
                }
                for k in 0..len {
                    let monotone = (i <= j && j <= k) || (i >= j && j >= k);
                    if monotone && self.h(j, k)?.after(&hij) != self.h(i, k)? {
                        bad.push(format!("h_({j},{k})∘h_({i},{j}) != h_({i},{k})"));
                    }
                }
            }
        }
        Ok(bad)
    }

    /// Builds the truncated limit of `(p_n)` at depth `depth`: all tuples
    /// `(x_0, ..., x_depth)` of ambient elements with `x_i = g_i(x_{i+1})`
    /// and `x_i` in `X_i`.
    pub fn truncated_limit(&self, depth: usize, max_elements: usize) -> Result<TruncatedLimit> {
        if depth >= self.len() {
            return Err(Error::Input(format!("depth {depth} beyond chain of length {}", self.len())));
        }
        let top = &self.stages[depth].image;
        if top.len() > max_elements {
            return Err(Error::Resource(format!("{} limit elements", top.len())));
        }
        // a compatible tuple is determined by its last entry
        let tuples = top
            .iter()
            .map(|&x| {
                let mut t = vec![0; depth + 1];
                t[depth] = x;
                for i in (0..depth).rev() {
                    t[i] = self.stages[i].g.apply(t[i + 1]);
                }
                t
            })
            .collect();
        Ok(TruncatedLimit { depth, gs: self.stages[..=depth].iter().map(|s| s.g.clone()).collect(), tuples })
    }
}

/// Finite stage of the limit of a chain of projections.
#[derive(Clone, Debug)]
pub struct TruncatedLimit {
    depth: usize,
    gs: Vec<FinMap>,
    tuples: Vec<Vec<usize>>,
}

impl TruncatedLimit {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn is_compatible(&self, t: &[usize]) -> bool {
        t.len() == self.depth + 1
            && (0..=self.depth).all(|i| self.gs[i].apply(t[i]) == t[i])
            && (0..self.depth).all(|i| self.gs[i].apply(t[i + 1]) == t[i])
    }

    /// `q̄_n`: projection of the `k`-th limit element.
    pub fn project(&self, n: usize, k: usize) -> usize {
        self.tuples[k][n]
    }

    fn index_of(&self, t: &[usize]) -> Option<usize> {
        self.tuples.iter().position(|u| u == t)
    }

    /// `f̄_n(x)` for `x` in `X_n`: walk down with the projections and up with
    /// the embeddings (inclusions of images).
    pub fn embed(&self, n: usize, x: usize) -> Option<usize> {
        let mut t = vec![0; self.depth + 1];
        t[n] = x;
        for i in (0..n).rev() {
            t[i] = self.gs[i].apply(t[i + 1]);
        }
        for i in n + 1..=self.depth {
            t[i] = t[i - 1];
        }
        self.index_of(&t)
    }

    /// `ḡ_n = f̄_n ∘ q̄_n` as an endomap of the limit elements.
    pub fn idempotent(&self, n: usize) -> FinMap {
        let table =
            (0..self.len()).map(|k| self.embed(n, self.project(n, k)).expect("embedding lands in the limit")).collect();
        FinMap { cod: self.len(), table }
    }

    /// The canonical map from the ambient carrier: `x ↦ (g_0 x, ..., g_N x)`.
    pub fn iota(&self, x: usize) -> Option<usize> {
        let t: Vec<usize> = self.gs.iter().map(|g| g.apply(x)).collect();
        self.index_of(&t)
    }
}

/// The idempotents `gs` separate points of `0..n`: `g_i x = g_i y` for all
/// `i` forces `x = y`.
pub fn jointly_mono(n: usize, gs: &[FinMap]) -> bool {
    (0..n).all(|x| (0..x).all(|y| gs.iter().any(|g| g.apply(x) != g.apply(y))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn endo(t: &[usize]) -> FinMap {
        FinMap::endo(t.to_vec()).unwrap()
    }

    #[test]
    fn idempotence_examples() {
        assert!(FinMap::identity(3).is_idempotent());
        assert!(!endo(&[1, 2, 0]).is_idempotent());
    }

    #[test]
    fn order_examples() {
        let g = endo(&[0, 1, 1]);
        assert!(idem_leq(&g, &g).unwrap());
        assert!(idem_leq(&g, &FinMap::identity(3)).unwrap());
        let c0 = endo(&[0, 0]);
        let c1 = endo(&[1, 1]);
        assert!(!idem_leq(&c0, &c1).unwrap());
        assert!(idem_leq(&endo(&[1, 2, 0]), &g).is_err());
    }

    #[test]
    fn split_examples() {
        let (img, ep) = split(&endo(&[0, 0, 0])).unwrap();
        assert_eq!(img, vec![0]);
        assert_eq!(ep.p.table(), &[0, 0, 0]);
        let g = endo(&[0, 1, 1]);
        let (img, ep) = split(&g).unwrap();
        assert_eq!(img, vec![0, 1]);
        assert_eq!(ep.idempotent(), g);
        assert!(ep.is_ep());
        let (img, ep) = split(&FinMap::identity(3)).unwrap();
        assert_eq!(img, vec![0, 1, 2]);
        assert!(ep.e.is_identity() && ep.p.is_identity());
        assert!(split(&endo(&[1, 0])).is_err());
    }

    #[test]
    fn connecting_pair_of_two_stage_chain() {
        let chain = SplitChain::new(vec![endo(&[0, 0, 0]), endo(&[0, 1, 1])]).unwrap();
        let ep = chain.connecting(0).unwrap();
        assert_eq!(ep.e.table(), &[0]);
        assert_eq!(ep.p.table(), &[0, 0]);
        assert!(ep.is_ep());
    }

    #[test]
    fn chain_order_violation_is_rejected() {
        assert!(SplitChain::new(vec![endo(&[0, 1, 1]), endo(&[0, 0, 0])]).is_err());
    }

    #[test]
    fn constant_chain_has_identity_connections() {
        let g = endo(&[0, 1, 1]);
        let chain = SplitChain::new(vec![g.clone(), g.clone(), g]).unwrap();
        for n in 0..2 {
            let ep = chain.connecting(n).unwrap();
            assert!(ep.e.is_identity() && ep.p.is_identity());
        }
        let lim = chain.truncated_limit(2, 100).unwrap();
        assert_eq!(lim.len(), 2);
    }

    #[test]
    fn h_family_bounds() {
        let chain = SplitChain::new(vec![endo(&[0, 0, 0]), endo(&[0, 1, 1])]).unwrap();
        assert!(chain.h(0, 0).unwrap().is_identity());
        assert!(chain.h(0, 2).is_err());
    }

    #[test]
    fn collapsing_projections_give_a_point() {
        let c = endo(&[0, 0, 0]);
        let chain = SplitChain::new(vec![c.clone(), c.clone(), c]).unwrap();
        assert_eq!(chain.truncated_limit(2, 10).unwrap().len(), 1);
    }
}
