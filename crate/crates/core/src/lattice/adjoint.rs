use std::sync::Arc;

use super::poset::{members, FinitePoset, Mask};
use crate::{Error, Result};

/// Order-preserving map between finite posets, stored as a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    dom: Arc<FinitePoset>,
    cod: Arc<FinitePoset>,
    table: Vec<usize>,
}

fn check_total(dom: &FinitePoset, cod: &FinitePoset, table: &[usize]) -> Result<()> {
    if table.len() != dom.len() {
        return Err(Error::Input(format!("table has {} entries for a domain of {}", table.len(), dom.len())));
    }
    if let Some(&bad) = table.iter().find(|&&y| y >= cod.len()) {
        return Err(Error::Input(format!("table value {bad} outside codomain")));
    }
    Ok(())
}

/// Whether `table` is an order-preserving map `dom -> cod`.
pub fn is_monotone(dom: &FinitePoset, cod: &FinitePoset, table: &[usize]) -> Result<bool> {
    check_total(dom, cod, table)?;
    let n = dom.len();
    Ok((0..n).all(|x| (0..n).all(|y| !dom.leq(x, y) || cod.leq(table[x], table[y]))))
}

impl MonotoneMap {
    pub fn new(dom: Arc<FinitePoset>, cod: Arc<FinitePoset>, table: Vec<usize>) -> Result<Self> {
        if !is_monotone(&dom, &cod, &table)? {
            return Err(Error::Input("map is not monotone".into()));
        }
        Ok(MonotoneMap { dom, cod, table })
    }

    pub fn identity(p: Arc<FinitePoset>) -> Self {
        let table = (0..p.len()).collect();
        MonotoneMap { dom: p.clone(), cod: p, table }
    }

    pub fn constant(dom: Arc<FinitePoset>, cod: Arc<FinitePoset>, value: usize) -> Result<Self> {
        let table = vec![value; dom.len()];
        Self::new(dom, cod, table)
    }

    pub fn dom(&self) -> &Arc<FinitePoset> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinitePoset> {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self, s: Mask) -> Mask {
        members(s).fold(0, |m, x| m | 1 << self.table[x])
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MonotoneMap) -> Result<MonotoneMap> {
        if !first.cod.same_order(&self.dom) {
            return Err(Error::Input("composition of mismatched maps".into()));
        }
        Ok(MonotoneMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            table: first.table.iter().map(|&x| self.table[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// `f(sup S) = sup f(S)` for every subset `S`, including the empty one.
    /// The empty set and pairs suffice: a finite poset with a least element
    /// and binary joins has all joins, and preservation extends by induction.
    pub fn preserves_sups(&self) -> bool {
        self.preserves(|p, s| p.sup(s))
    }

    pub fn preserves_infs(&self) -> bool {
        self.preserves(|p, s| p.inf(s))
    }

    fn preserves(&self, bound: impl Fn(&FinitePoset, Mask) -> Option<usize>) -> bool {
        let ok = |s: Mask| match (bound(&self.dom, s), bound(&self.cod, self.image(s))) {
            (Some(a), Some(b)) => self.table[a] == b,
            _ => false,
        };
        ok(0) && (0..self.dom.len()).all(|a| (0..a).all(|b| ok(1 << a | 1 << b)))
    }
}

/// `g(y) = sup{x | f(x) <= y}` when `f` preserves all sups; `None` otherwise.
pub fn right_adjoint(f: &MonotoneMap) -> Result<Option<MonotoneMap>> {
    if !f.dom.is_lattice() {
        return Err(Error::Input("domain of a left adjoint must be a lattice".into()));
    }
    if !f.preserves_sups() {
        return Ok(None);
    }
    let table = (0..f.cod.len())
        .map(|y| {
            let below = (0..f.dom.len()).filter(|&x| f.cod.leq(f.table[x], y)).fold(0, |m, x| m | 1 << x);
            f.dom.sup(below).expect("domain is a lattice")
        })
        .collect();
    let g = MonotoneMap::new(f.cod.clone(), f.dom.clone(), table)?;
    debug_assert!(check_adjunction(f, &g).unwrap_or(false));
    Ok(Some(g))
}

/// `f ⊣ g`: `f∘g <= id` and `g∘f >= id` pointwise.
pub fn check_adjunction(f: &MonotoneMap, g: &MonotoneMap) -> Result<bool> {
    if !f.dom.same_order(&g.cod) || !f.cod.same_order(&g.dom) {
        return Err(Error::Input("f: X -> Y needs g: Y -> X".into()));
    }
    let counit = (0..f.cod.len()).all(|y| f.cod.leq(f.table[g.table[y]], y));
    let unit = (0..f.dom.len()).all(|x| f.dom.leq(x, g.table[f.table[x]]));
    Ok(counit && unit)
}

/// The hom-set form: `x <= g(y)` iff `f(x) <= y` for all `x, y`.
pub fn check_galois(f: &MonotoneMap, g: &MonotoneMap) -> Result<bool> {
    if !f.dom.same_order(&g.cod) || !f.cod.same_order(&g.dom) {
        return Err(Error::Input("f: X -> Y needs g: Y -> X".into()));
    }
    Ok((0..f.dom.len()).all(|x| (0..f.cod.len()).all(|y| f.dom.leq(x, g.table[y]) == f.cod.leq(f.table[x], y))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(p: FinitePoset) -> Arc<FinitePoset> {
        Arc::new(p)
    }

    #[test]
    fn monotonicity_examples() {
        let c3 = FinitePoset::chain(3);
        assert!(is_monotone(&c3, &c3, &[0, 1, 2]).unwrap());
        let d = FinitePoset::diamond();
        assert!(is_monotone(&d, &d, &[0, 2, 1, 3]).unwrap());
        let c2 = FinitePoset::chain(2);
        assert!(!is_monotone(&c2, &c2, &[1, 0]).unwrap());
        assert!(matches!(is_monotone(&c2, &c2, &[1]), Err(Error::Input(_))));
        assert!(matches!(is_monotone(&c2, &c2, &[0, 2]), Err(Error::Input(_))));
    }

    #[test]
    fn adjoint_examples() {
        let d = arc(FinitePoset::diamond());
        let id = MonotoneMap::identity(d.clone());
        assert_eq!(right_adjoint(&id).unwrap(), Some(id.clone()));

        let c2 = arc(FinitePoset::chain(2));
        let bot = MonotoneMap::constant(c2.clone(), c2.clone(), 0).unwrap();
        let g = right_adjoint(&bot).unwrap().unwrap();
        assert_eq!(g.table(), &[1, 1]);

        let top = MonotoneMap::constant(c2.clone(), c2.clone(), 1).unwrap();
        assert_eq!(right_adjoint(&top).unwrap(), None);
    }

    #[test]
    fn inclusion_into_diamond() {
        let c2 = arc(FinitePoset::chain(2));
        let d = arc(FinitePoset::diamond());
        let inc = MonotoneMap::new(c2, d, vec![0, 3]).unwrap();
        let g = right_adjoint(&inc).unwrap().unwrap();
        assert_eq!(g.table(), &[0, 0, 0, 1]);
        assert!(check_adjunction(&inc, &g).unwrap());
        assert!(check_galois(&inc, &g).unwrap());
    }

    #[test]
    fn atom_swap_is_self_adjoint() {
        // an order automorphism is adjoint to its inverse, and the swap is an involution
        let d = arc(FinitePoset::diamond());
        let swap = MonotoneMap::new(d.clone(), d.clone(), vec![0, 2, 1, 3]).unwrap();
        assert!(check_adjunction(&swap, &swap).unwrap());
        let id = MonotoneMap::identity(d);
        assert!(!check_adjunction(&swap, &id).unwrap());
        assert!(!check_galois(&swap, &id).unwrap());
    }

    #[test]
    fn mismatched_pair_is_an_input_error() {
        let c2 = arc(FinitePoset::chain(2));
        let c3 = arc(FinitePoset::chain(3));
        let f = MonotoneMap::identity(c2);
        let g = MonotoneMap::identity(c3);
        assert!(check_adjunction(&f, &g).is_err());
    }
}
