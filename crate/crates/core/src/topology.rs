//! Order complexes of subgroup posets and their Euler characteristics.
//!
//! The i-simplices of the order complex (the nerve, with degenerate
//! simplices dropped) are the strictly increasing chains of `i + 1` poset
//! elements, so `χ = Σ (-1)^i c_i` is obtained by counting chains.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::group::euler_phi;
use crate::lattice::SubgroupLattice;

/// A finite strict partial order on `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    less: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Builds a poset from a strict order relation, rejecting relations that
    /// are not irreflexive and transitive.
    pub fn new(len: usize, less: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let less: Vec<Vec<bool>> = (0..len).map(|i| (0..len).map(|j| less(i, j)).collect()).collect();
        for i in 0..len {
            if less[i][i] {
                return invalid(format!("relation is reflexive at {i}"));
            }
            for j in 0..len {
                if !less[i][j] {
                    continue;
                }
                if let Some(k) = (0..len).find(|&k| less[j][k] && !less[i][k]) {
                    return invalid(format!("relation is not transitive at {i} < {j} < {k}"));
                }
            }
        }
        Ok(FinitePoset { less })
    }

    pub fn antichain(len: usize) -> Self {
        FinitePoset { less: vec![vec![false; len]; len] }
    }

    pub fn chain(len: usize) -> Self {
        FinitePoset { less: (0..len).map(|i| (0..len).map(|j| i < j).collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.less.len()
    }

    pub fn is_empty(&self) -> bool {
        self.less.is_empty()
    }

    #[inline]
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.less[i][j] || self.less[j][i]
    }

    /// Counts strictly increasing chains by length.
    pub fn euler_summary(&self) -> EulerSummary {
        let n = self.len();
        // in a strict order, a < b implies b has more predecessors than a
        let mut topo: Vec<usize> = (0..n).collect();
        topo.sort_by_key(|&x| (0..n).filter(|&y| self.less[y][x]).count());

        let mut ends: Vec<Vec<BigUint>> = vec![Vec::new(); n];
        let mut counts: Vec<BigUint> = Vec::new();
        for (pos, &x) in topo.iter().enumerate() {
            let mut here = vec![BigUint::one()];
            for &y in &topo[..pos] {
                if !self.less[y][x] {
                    continue;
                }
                if ends[y].len() + 1 > here.len() {
                    here.resize(ends[y].len() + 1, BigUint::zero());
                }
                for (k, c) in ends[y].iter().enumerate() {
                    here[k + 1] += c;
                }
            }
            if here.len() > counts.len() {
                counts.resize(here.len(), BigUint::zero());
            }
            for (k, c) in here.iter().enumerate() {
                counts[k] += c;
            }
            ends[x] = here;
        }
        EulerSummary::from_counts(counts)
    }

    /// True when some element is comparable to every other one.
    pub fn is_cone(&self) -> bool {
        let n = self.len();
        (0..n).any(|x| (0..n).all(|y| y == x || self.comparable(x, y)))
    }
}

/// Chain counts of a poset and the Euler characteristics of its order
/// complex. `chain_counts[i]` is the number of `i`-simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerSummary {
    pub chain_counts: Vec<BigUint>,
    pub chi: BigInt,
    pub chi_tilde: BigInt,
}

impl EulerSummary {
    pub fn from_counts(chain_counts: Vec<BigUint>) -> Self {
        let mut chi = BigInt::zero();
        for (i, c) in chain_counts.iter().enumerate() {
            let c = BigInt::from(c.clone());
            if i % 2 == 0 {
                chi += c;
            } else {
                chi -= c;
            }
        }
        let chi_tilde = &chi - 1;
        EulerSummary { chain_counts, chi, chi_tilde }
    }
}

/// The poset of proper subgroups `X` of `G` with `C ≤ X` and `X ≰ H`,
/// ordered by inclusion.
#[derive(Clone, Debug)]
pub struct TPoset {
    pub c: usize,
    pub h: usize,
    /// Lattice positions, ascending.
    pub elements: Vec<usize>,
    pub order: FinitePoset,
}

impl TPoset {
    pub fn build(lat: &SubgroupLattice, c: usize, h: usize) -> Result<Self> {
        if !lat.is_cyclic(c) {
            return invalid(format!("base subgroup {} is not cyclic", lat.subgroup(c)));
        }
        if h == lat.top() {
            return invalid("the excluded bound must be a proper subgroup");
        }
        if !lat.contains(c, h) {
            return invalid(format!("{} is not contained in {}", lat.subgroup(c), lat.subgroup(h)));
        }
        let elements: Vec<usize> = (c..lat.top()).filter(|&x| lat.contains(c, x) && !lat.contains(x, h)).collect();
        let order = FinitePoset {
            less: elements.iter().map(|&a| elements.iter().map(|&b| a != b && lat.contains(a, b)).collect()).collect(),
        };
        Ok(TPoset { c, h, elements, order })
    }

    pub fn count_chains(&self) -> EulerSummary {
        self.order.euler_summary()
    }

    pub fn is_cone(&self) -> bool {
        self.order.is_cone()
    }
}

/// One cyclic subgroup's share of a reduced-Euler-characteristic sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicTerm {
    /// Lattice position of the cyclic subgroup `C`.
    pub c: usize,
    pub c_order: usize,
    pub phi: u64,
    pub chi_tilde: BigInt,
    /// `±χ̃·φ(|C|)`; the sign is `+` unless the term was produced for an
    /// odd-size intersection in the maximal-subgroup expansion.
    pub signed_contribution: BigInt,
}

impl CyclicTerm {
    pub fn negated(&self) -> CyclicTerm {
        CyclicTerm { signed_contribution: -&self.signed_contribution, ..self.clone() }
    }
}

/// `χ̃` of the poset for every cyclic `C ≤ H` (trivial subgroup included),
/// each weighted by `φ(|C|)`. The weighted sum equals `Σ_{X≤H} |X| μ(X,G)`.
pub fn chi_tilde_for_all_cyclic(lat: &SubgroupLattice, h: usize) -> Result<Vec<CyclicTerm>> {
    if h == lat.top() {
        return invalid("H must be a proper subgroup");
    }
    (0..=h)
        .filter(|&c| lat.is_cyclic(c) && lat.contains(c, h))
        .map(|c| {
            let summary = TPoset::build(lat, c, h)?.count_chains();
            let c_order = lat.subgroup(c).order();
            let phi = euler_phi(c_order as u64)?;
            Ok(CyclicTerm {
                c,
                c_order,
                phi,
                signed_contribution: &summary.chi_tilde * phi,
                chi_tilde: summary.chi_tilde,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::GroupSpec;
    use std::sync::Arc;

    fn lattice(spec: &str) -> SubgroupLattice {
        let g = spec.parse::<GroupSpec>().unwrap().build().unwrap();
        SubgroupLattice::build(Arc::new(g))
    }

    fn counts(s: &EulerSummary) -> Vec<u64> {
        s.chain_counts.iter().map(|c| u64::try_from(c.clone()).unwrap()).collect()
    }

    #[test]
    fn small_posets() {
        let e = FinitePoset::antichain(0).euler_summary();
        assert_eq!((e.chi.clone(), e.chi_tilde.clone()), (0.into(), (-1).into()));
        assert!(e.chain_counts.is_empty());

        let e = FinitePoset::antichain(1).euler_summary();
        assert_eq!(counts(&e), vec![1]);
        assert_eq!(e.chi_tilde, 0.into());

        let e = FinitePoset::chain(2).euler_summary();
        assert_eq!(counts(&e), vec![2, 1]);
        assert_eq!((e.chi.clone(), e.chi_tilde.clone()), (1.into(), 0.into()));

        let e = FinitePoset::antichain(3).euler_summary();
        assert_eq!((e.chi.clone(), e.chi_tilde.clone()), (3.into(), 2.into()));

        // chain of 4: subsets of a 4-set by size are the chains
        assert_eq!(counts(&FinitePoset::chain(4).euler_summary()), vec![4, 6, 4, 1]);
    }

    #[test]
    fn cones() {
        assert!(FinitePoset::antichain(1).is_cone());
        assert!(!FinitePoset::antichain(2).is_cone());
        assert!(FinitePoset::chain(3).is_cone());
        assert!(!FinitePoset::antichain(0).is_cone());
    }

    #[test]
    fn rejects_non_orders() {
        assert!(FinitePoset::new(2, |i, j| i == j).is_err());
        // 0 < 1 < 2 without 0 < 2
        assert!(FinitePoset::new(3, |i, j| j == i + 1).is_err());
        assert!(FinitePoset::new(3, |i, j| i < j).is_ok());
    }

    #[test]
    fn crown_is_a_circle() {
        // a0,a1 < b0,b1: the order complex is a 4-cycle
        let p = FinitePoset::new(4, |i, j| i < 2 && j >= 2).unwrap();
        let e = p.euler_summary();
        assert_eq!(counts(&e), vec![4, 4]);
        assert_eq!(e.chi, 0.into());
        assert!(!p.is_cone());
    }

    #[test]
    fn s3_posets() {
        let s3 = lattice("sym:3");
        let a3 = s3.select(3, 0).unwrap();
        let p = TPoset::build(&s3, 0, a3).unwrap();
        assert_eq!(p.elements.len(), 3);
        assert!(p.elements.iter().all(|&x| s3.subgroup(x).order() == 2));
        assert_eq!(p.count_chains().chi_tilde, 2.into());

        let p = TPoset::build(&s3, a3, a3).unwrap();
        assert!(p.elements.is_empty());
        assert_eq!(p.count_chains().chi_tilde, (-1).into());

        let terms = chi_tilde_for_all_cyclic(&s3, a3).unwrap();
        let summary: Vec<(usize, u64, i64)> =
            terms.iter().map(|t| (t.c_order, t.phi, i64::try_from(&t.chi_tilde).unwrap())).collect();
        assert_eq!(summary, vec![(1, 1, 2), (3, 2, -1)]);
        let total: BigInt = terms.iter().map(|t| &t.signed_contribution).sum();
        assert_eq!(total, 0.into());
    }

    #[test]
    fn klein_posets() {
        let v4 = lattice("elab:2:2");
        let p = TPoset::build(&v4, 0, 1).unwrap();
        assert_eq!(p.elements, vec![2, 3]);
        assert_eq!(p.count_chains().chi_tilde, 1.into());
        let terms = chi_tilde_for_all_cyclic(&v4, 1).unwrap();
        let chis: Vec<i64> = terms.iter().map(|t| i64::try_from(&t.chi_tilde).unwrap()).collect();
        assert_eq!(chis, vec![1, -1]);
    }

    #[test]
    fn build_validation() {
        let v4 = lattice("elab:2:2");
        assert!(TPoset::build(&v4, v4.top(), 1).is_err()); // not cyclic
        assert!(TPoset::build(&v4, 2, 1).is_err()); // C not in H
        assert!(TPoset::build(&v4, 0, v4.top()).is_err());
        assert!(chi_tilde_for_all_cyclic(&v4, v4.top()).is_err());
    }
}
