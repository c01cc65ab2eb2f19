use std::collections::BTreeSet;

use super::poset::{full_mask, members, FiniteLattice, FinitePoset, Mask};
use crate::{Error, Result};

/// Default carrier bound for exhaustive topology enumeration.
pub const DEFAULT_ENUM_BOUND: usize = 4;

/// A topology on `0..n` given by its family of open sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    n: usize,
    opens: BTreeSet<Mask>,
}

fn closed_under_union_and_meet(opens: &BTreeSet<Mask>) -> bool {
    opens.iter().all(|&a| opens.iter().all(|&b| opens.contains(&(a | b)) && opens.contains(&(a & b))))
}

impl FiniteTopology {
    pub fn new(n: usize, opens: impl IntoIterator<Item = Mask>) -> Result<Self> {
        if n > 16 {
            return Err(Error::Resource(format!("topology on {n} points")));
        }
        let full = full_mask(n);
        let opens: BTreeSet<Mask> = opens.into_iter().collect();
        if opens.iter().any(|&u| u & !full != 0) {
            return Err(Error::Input("open set outside the carrier".into()));
        }
        if !opens.contains(&0) || !opens.contains(&full) {
            return Err(Error::Input("topology must contain the empty set and the carrier".into()));
        }
        if !closed_under_union_and_meet(&opens) {
            return Err(Error::Input("open sets not closed under union and intersection".into()));
        }
        Ok(FiniteTopology { n, opens })
    }

    /// Closes a family under finite intersections and unions, adding the
    /// empty set and the carrier.
    pub fn generated_by(n: usize, subbase: impl IntoIterator<Item = Mask>) -> Self {
        let mut opens: BTreeSet<Mask> = subbase.into_iter().collect();
        opens.insert(0);
        opens.insert(full_mask(n));
        loop {
            let snapshot: Vec<Mask> = opens.iter().copied().collect();
            let before = opens.len();
            for &a in &snapshot {
                for &b in &snapshot {
                    opens.insert(a | b);
                    opens.insert(a & b);
                }
            }
            if opens.len() == before {
                break;
            }
        }
        FiniteTopology { n, opens }
    }

    pub fn carrier_len(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &BTreeSet<Mask> {
        &self.opens
    }

    pub fn neighborhoods(&self, x: usize) -> impl Iterator<Item = Mask> + '_ {
        self.opens.iter().copied().filter(move |u| u >> x & 1 == 1)
    }

    pub fn is_t0(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| self.opens.iter().any(|&u| (u >> x & 1) != (u >> y & 1))))
    }

    pub fn is_subset_of(&self, other: &FiniteTopology) -> bool {
        self.opens.is_subset(&other.opens)
    }
}

/// All up-closed subsets.
pub fn alexandrov(p: &FinitePoset) -> FiniteTopology {
    let opens = (0..=p.full()).filter(|&m| p.is_up_set(m)).collect();
    FiniteTopology { n: p.len(), opens }
}

/// The topology generated by the complements of principal down-sets.
pub fn tau_top(p: &FinitePoset) -> FiniteTopology {
    let full = p.full();
    FiniteTopology::generated_by(p.len(), (0..p.len()).map(|y| full & !p.principal_down(y)))
}

/// `x <= y` iff every open containing `x` contains `y`.
pub fn specialization_order(t: &FiniteTopology) -> Result<FinitePoset> {
    if !t.is_t0() {
        return Err(Error::Domain("topology is not T0: two points share all neighborhoods".into()));
    }
    FinitePoset::from_fn(t.n, |x, y| t.neighborhoods(x).all(|u| u >> y & 1 == 1))
}

/// Every T0 topology on the carrier whose specialization order is `p`, by
/// exhaustive search over families of subsets.
pub fn enumerate_t0_topologies(p: &FinitePoset, bound: usize) -> Result<Vec<FiniteTopology>> {
    let n = p.len();
    if n > bound || n > 4 {
        return Err(Error::Resource(format!("carrier of {n} elements exceeds the enumeration bound {}", bound.min(4))));
    }
    let full = full_mask(n);
    // candidate opens other than the empty set and the carrier
    let middle: Vec<Mask> = (1..full).collect();
    let mut found = Vec::new();
    for family in 0u64..(1u64 << middle.len()) {
        let mut opens = BTreeSet::from([0, full]);
        opens.extend(members(family).map(|i| middle[i]));
        if !closed_under_union_and_meet(&opens) {
            continue;
        }
        let t = FiniteTopology { n, opens };
        if let Ok(order) = specialization_order(&t) {
            if order.same_order(p) {
                found.push(t);
            }
        }
    }
    Ok(found)
}

/// Up-sets `U` such that whenever a directed subset has its sup in `U`, one
/// of its members already lies in `U`.
pub fn scott_opens(l: &FiniteLattice) -> FiniteTopology {
    let p = l.poset();
    let n = p.len();
    let directed: Vec<Mask> = (1..=full_mask(n))
        .filter(|&d| members(d).all(|a| members(d).all(|b| p.upper_bounds(1 << a | 1 << b) & d != 0)))
        .collect();
    let opens = (0..=full_mask(n))
        .filter(|&u| p.is_up_set(u))
        .filter(|&u| directed.iter().all(|&d| u >> l.sup(d) & 1 == 0 || d & u != 0))
        .collect();
    FiniteTopology { n, opens }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_topologies() {
        let c2 = FinitePoset::chain(2);
        let sierpinski = FiniteTopology::new(2, [0, 0b10, 0b11]).unwrap();
        assert_eq!(alexandrov(&c2), sierpinski);
        assert_eq!(tau_top(&c2), sierpinski);
        assert_eq!(enumerate_t0_topologies(&c2, 4).unwrap(), vec![sierpinski]);
    }

    #[test]
    fn antichain_gets_the_discrete_topology() {
        let a = alexandrov(&FinitePoset::antichain(2));
        assert_eq!(a.opens().len(), 4);
        assert!(specialization_order(&a).unwrap().same_order(&FinitePoset::antichain(2)));
    }

    #[test]
    fn specialization_examples() {
        let s = FiniteTopology::new(2, [0, 0b10, 0b11]).unwrap();
        let o = specialization_order(&s).unwrap();
        assert!(o.leq(0, 1) && !o.leq(1, 0));
        let indiscrete = FiniteTopology::new(2, [0, 0b11]).unwrap();
        assert!(matches!(specialization_order(&indiscrete), Err(Error::Domain(_))));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_t0_topologies(&FinitePoset::chain(3), 4).unwrap().len(), 1);
        let one = enumerate_t0_topologies(&FinitePoset::chain(1), 4).unwrap();
        assert_eq!(one, vec![FiniteTopology::new(1, [0, 1]).unwrap()]);
        assert!(matches!(enumerate_t0_topologies(&FinitePoset::chain(5), 4), Err(Error::Resource(_))));
    }

    #[test]
    fn scott_equals_alexandrov_on_small_lattices() {
        for p in [FinitePoset::chain(1), FinitePoset::chain(2), FinitePoset::diamond()] {
            let l = FiniteLattice::new(p.clone()).unwrap();
            assert_eq!(scott_opens(&l), alexandrov(&p));
        }
        let one = FiniteLattice::new(FinitePoset::chain(1)).unwrap();
        assert_eq!(scott_opens(&one).opens().len(), 2);
    }

    #[test]
    fn rejects_non_topologies() {
        assert!(FiniteTopology::new(2, [0b01, 0b11]).is_err());
        assert!(FiniteTopology::new(2, [0, 0b01, 0b10, 0b11]).is_ok());
        assert!(FiniteTopology::new(2, [0, 0b01, 0b10]).is_err());
    }
}
