//! B-groups, the largest B-group quotient β(G), and the supporting group
//! constructions: quotients, isomorphism tests, nilpotency and solvability.

use std::collections::VecDeque;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::bitset::ElementSet;
use crate::error::{invalid, Error, Result};
use crate::group::{is_prime, GroupTable};
use crate::lattice::{generated_by, greedy_generators, Subgroup, SubgroupLattice};
use crate::mgn::{describe, m_direct};

/// `G` is a B-group when `m_{G,N} = 0` for every minimal normal `N`.
pub fn is_b_group(lat: &SubgroupLattice) -> Result<bool> {
    for n in lat.minimal_normal_subgroups() {
        if !m_direct(lat, n)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `m_{G,N} = 0` over every non-trivial normal subgroup and fails
/// if the verdict differs from the minimal-normal-subgroup test.
pub fn is_b_group_full(lat: &SubgroupLattice) -> Result<bool> {
    let mut full = true;
    for n in lat.normal_subgroups().into_iter().filter(|&n| n != 0) {
        if !m_direct(lat, n)?.is_zero() {
            full = false;
            break;
        }
    }
    let minimal = is_b_group(lat)?;
    if minimal != full {
        return Err(Error::Inconsistent(format!(
            "{}: minimal-normal B-group test says {minimal}, full test says {full}",
            lat.group().name()
        )));
    }
    Ok(full)
}

#[derive(Clone, Debug)]
pub struct BetaResult {
    /// Lattice position of the chosen `N`.
    pub chosen: usize,
    pub chosen_n: Subgroup,
    /// `G/N`.
    pub beta: GroupTable,
    /// Every normal `N` with `m_{G,N} ≠ 0`, in lattice order.
    pub all_nonzero: Vec<(usize, BigRational)>,
    /// Those of `all_nonzero` that are maximal under inclusion.
    pub maximal_nonzero: Vec<usize>,
}

/// β(G) = G/N for `N` normal and maximal with `m_{G,N} ≠ 0`.
///
/// When several such `N` exist the first in lattice order is chosen, and
/// the quotients by the others must be isomorphic to it.
pub fn beta(lat: &SubgroupLattice) -> Result<BetaResult> {
    let mut all_nonzero = Vec::new();
    for n in lat.normal_subgroups() {
        let m = m_direct(lat, n)?;
        if !m.is_zero() {
            all_nonzero.push((n, m));
        }
    }
    let maximal_nonzero: Vec<usize> = all_nonzero
        .iter()
        .map(|(n, _)| *n)
        .filter(|&n| !all_nonzero.iter().any(|&(k, _)| k != n && lat.contains(n, k)))
        .collect();
    let chosen = *maximal_nonzero.first().ok_or_else(|| Error::Inconsistent("m_{G,1} vanished".into()))?;
    let g = lat.group();
    let beta = quotient_group(g, lat.subgroup(chosen))?;
    for &other in &maximal_nonzero[1..] {
        let q = quotient_group(g, lat.subgroup(other))?;
        if !are_isomorphic(&beta, &q) {
            return Err(Error::Inconsistent(format!(
                "{}: quotients by {} and {} are not isomorphic",
                g.name(),
                describe(lat, chosen),
                describe(lat, other)
            )));
        }
    }
    Ok(BetaResult { chosen, chosen_n: lat.subgroup(chosen).clone(), beta, all_nonzero, maximal_nonzero })
}

/// `G/N` on left cosets. Cosets are numbered by their least element, so the
/// coset of the identity (when it is element 0) comes first.
pub fn quotient_group(g: &GroupTable, n: &Subgroup) -> Result<GroupTable> {
    if n.members().universe() != g.order() || !Subgroup::is_closed_in(n.members(), g) {
        return invalid("N is not a subgroup of this group");
    }
    let normal = g.elements().all(|x| n.elements().all(|y| n.contains(g.conjugate(x, y))));
    if !normal {
        return Err(Error::NotNormal(n.to_string()));
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for y in n.elements() {
            coset_of[g.mul(x, y)] = id;
        }
    }
    let k = reps.len();
    let mut mul = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            mul.push(coset_of[g.mul(a, b)] as u32);
        }
    }
    GroupTable::from_table(format!("{}/{}", g.name(), n), k, mul)
}

fn center_order(g: &GroupTable) -> usize {
    g.elements().filter(|&z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z))).count()
}

fn commutator_subgroup(g: &GroupTable, a: &ElementSet, b: &ElementSet) -> Subgroup {
    let mut comms = ElementSet::empty(g.order());
    for x in a.iter() {
        for y in b.iter() {
            comms.insert(g.commutator(x, y));
        }
    }
    let gens: Vec<usize> = comms.iter().collect();
    generated_by(g, &gens)
}

pub fn derived_subgroup(g: &GroupTable) -> Subgroup {
    let all = ElementSet::full(g.order());
    commutator_subgroup(g, &all, &all)
}

/// Extends `gens[i] ↦ imgs[i]` to a map on `⟨gens⟩`. Returns `None` unless
/// the extension is a well-defined injective homomorphism.
fn extend_hom(a: &GroupTable, b: &GroupTable, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    let mut used = vec![false; b.order()];
    map[a.identity()] = b.identity();
    used[b.identity()] = true;
    let mut queue = VecDeque::from([a.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = a.mul(x, s);
            let img = b.mul(map[x], t);
            if map[y] == usize::MAX {
                if used[img] {
                    return None;
                }
                used[img] = true;
                map[y] = img;
                queue.push_back(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    Some(map)
}

/// Exact isomorphism test: backtracking over images of a small generating
/// set of `a`, after comparing cheap invariants.
pub fn are_isomorphic(a: &GroupTable, b: &GroupTable) -> bool {
    if a.order() != b.order()
        || a.order_profile() != b.order_profile()
        || a.is_abelian() != b.is_abelian()
        || center_order(a) != center_order(b)
        || derived_subgroup(a).order() != derived_subgroup(b).order()
    {
        return false;
    }
    let gens = greedy_generators(a, &ElementSet::full(a.order()));
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = a.element_order(s);
            b.elements().filter(|&t| b.element_order(t) == o).collect()
        })
        .collect();

    fn search(a: &GroupTable, b: &GroupTable, gens: &[usize], cands: &[Vec<usize>], imgs: &mut Vec<usize>) -> bool {
        let k = imgs.len();
        if k == gens.len() {
            return extend_hom(a, b, gens, imgs).is_some_and(|m| m.iter().all(|&v| v != usize::MAX));
        }
        for &t in &cands[k] {
            imgs.push(t);
            if extend_hom(a, b, &gens[..=k], imgs).is_some() && search(a, b, gens, cands, imgs) {
                return true;
            }
            imgs.pop();
        }
        false
    }
    search(a, b, &gens, &candidates, &mut Vec::new())
}

/// Lower central series reaches the trivial group.
pub fn is_nilpotent(g: &GroupTable) -> bool {
    let all = ElementSet::full(g.order());
    let mut current = Subgroup::try_from_members(all.clone(), g).expect("whole group");
    loop {
        if current.order() == 1 {
            return true;
        }
        let next = commutator_subgroup(g, current.members(), &all);
        if next.order() == current.order() {
            return false;
        }
        current = next;
    }
}

/// Derived series reaches the trivial group.
pub fn is_solvable(g: &GroupTable) -> bool {
    let mut current = ElementSet::full(g.order());
    loop {
        if current.count() == 1 {
            return true;
        }
        let next = commutator_subgroup(g, &current, &current);
        if next.order() == current.count() {
            return false;
        }
        current = next.members().clone();
    }
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Lattice position of `O_p(G)`, the largest normal p-subgroup.
pub fn o_p(lat: &SubgroupLattice, p: usize) -> Result<usize> {
    if !is_prime(p as u64) {
        return invalid(format!("{p} is not prime"));
    }
    let normal_p: Vec<usize> =
        lat.normal_subgroups().into_iter().filter(|&n| is_power_of(lat.subgroup(n).order(), p)).collect();
    let largest = *normal_p.last().expect("the trivial subgroup is a normal p-subgroup");
    if !normal_p.iter().all(|&n| lat.contains(n, largest)) {
        return Err(Error::Inconsistent("normal p-subgroups have no largest element".into()));
    }
    Ok(largest)
}

/// Whether `G/O_p(G)` is cyclic.
pub fn is_cyclic_mod_p_in(lat: &SubgroupLattice, p: usize) -> Result<bool> {
    let op = o_p(lat, p)?;
    Ok(quotient_group(lat.group(), lat.subgroup(op))?.is_cyclic())
}

pub fn is_cyclic_mod_p(g: &GroupTable, p: usize) -> Result<bool> {
    let lat = SubgroupLattice::enumerate(Arc::new(g.clone()));
    is_cyclic_mod_p_in(&lat, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::GroupSpec;

    fn table(spec: &str) -> GroupTable {
        spec.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    fn lattice(spec: &str) -> SubgroupLattice {
        SubgroupLattice::build(Arc::new(table(spec)))
    }

    #[test]
    fn b_group_examples() {
        assert!(is_b_group_full(&lattice("elab:2:2")).unwrap());
        assert!(!is_b_group_full(&lattice("cyclic:6")).unwrap());
        assert!(is_b_group_full(&lattice("alt:5")).unwrap());
        assert!(is_b_group_full(&lattice("sym:3")).unwrap());
    }

    #[test]
    fn beta_examples() {
        let c6 = lattice("cyclic:6");
        let b = beta(&c6).unwrap();
        assert_eq!(b.chosen, c6.top());
        assert_eq!(b.beta.order(), 1);

        let s3 = lattice("sym:3");
        let b = beta(&s3).unwrap();
        assert_eq!(b.chosen, 0);
        assert!(are_isomorphic(&b.beta, s3.group()));

        let v4 = lattice("elab:2:2");
        let b = beta(&v4).unwrap();
        assert_eq!(b.chosen, 0);
        assert_eq!(b.beta.order(), 4);
    }

    #[test]
    fn quotients() {
        let s3 = lattice("sym:3");
        let a3 = s3.select(3, 0).unwrap();
        assert_eq!(quotient_group(s3.group(), s3.subgroup(a3)).unwrap().order(), 2);
        let same = quotient_group(s3.group(), s3.subgroup(0)).unwrap();
        assert!(are_isomorphic(&same, s3.group()));
        let t = s3.select(2, 0).unwrap();
        assert!(matches!(quotient_group(s3.group(), s3.subgroup(t)), Err(Error::NotNormal(_))));

        let d8 = lattice("dihedral:8");
        let z = d8.normal_subgroups().into_iter().find(|&n| d8.subgroup(n).order() == 2).unwrap();
        let q = quotient_group(d8.group(), d8.subgroup(z)).unwrap();
        assert_eq!(q.order_profile(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn quotient_by_brute_force_cosets() {
        let g = table("sym:4");
        let lat = SubgroupLattice::enumerate(Arc::new(g.clone()));
        for n in lat.normal_subgroups() {
            let sub = lat.subgroup(n);
            let q = quotient_group(&g, sub).unwrap();
            // coset of x*y is the product of the cosets of x and y
            let cosets: Vec<ElementSet> = g
                .elements()
                .map(|x| ElementSet::from_indices(g.order(), sub.elements().map(|y| g.mul(x, y))))
                .collect();
            let mut reps: Vec<&ElementSet> = Vec::new();
            for c in &cosets {
                if !reps.contains(&c) {
                    reps.push(c);
                }
            }
            assert_eq!(reps.len(), q.order());
            for x in g.elements() {
                for y in g.elements() {
                    let cx = reps.iter().position(|c| *c == &cosets[x]).unwrap();
                    let cy = reps.iter().position(|c| *c == &cosets[y]).unwrap();
                    let cxy = reps.iter().position(|c| *c == &cosets[g.mul(x, y)]).unwrap();
                    assert_eq!(q.mul(cx, cy), cxy);
                }
            }
        }
    }

    #[test]
    fn isomorphism() {
        assert!(!are_isomorphic(&table("cyclic:4"), &table("elab:2:2")));
        assert!(!are_isomorphic(&table("cyclic:6"), &table("sym:3")));
        assert!(are_isomorphic(&table("product:cyclic:2,cyclic:3"), &table("cyclic:6")));
        assert!(are_isomorphic(&table("sym:3"), &table("dihedral:6")));
        assert!(are_isomorphic(&table("perm:(1 2 3 4);(1 3)"), &table("dihedral:8")));
        assert!(!are_isomorphic(&table("dihedral:8"), &table("quaternion:8")));
        assert!(are_isomorphic(&table("product:dihedral:6,cyclic:2"), &table("dihedral:12")));
        assert!(!are_isomorphic(&table("sym:4"), &table("product:alt:4,cyclic:2")));
        assert!(!are_isomorphic(&table("product:cyclic:4,cyclic:4"), &table("product:quaternion:8,cyclic:2")));
    }

    #[test]
    fn nilpotent_and_solvable() {
        assert!(is_nilpotent(&table("dihedral:8")));
        let s3 = table("sym:3");
        assert!(!is_nilpotent(&s3));
        assert!(is_solvable(&s3));
        assert!(!is_solvable(&table("alt:5")));
        assert!(is_solvable(&table("sym:4")));
        assert!(is_nilpotent(&table("cyclic:12")));
        assert!(is_nilpotent(&table("cyclic:1")));
    }

    #[test]
    fn cyclic_mod_p() {
        assert!(is_cyclic_mod_p(&table("dihedral:8"), 2).unwrap());
        assert!(is_cyclic_mod_p(&table("sym:3"), 3).unwrap());
        assert!(!is_cyclic_mod_p(&table("sym:3"), 2).unwrap());
        assert!(is_cyclic_mod_p(&table("sym:3"), 4).is_err());
    }
}
