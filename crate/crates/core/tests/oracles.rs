//! Cross-checks of the lattice, Möbius and m-value machinery against
//! independent brute-force computations.

use std::sync::Arc;

use burnside_core::group::{build_from_generators, Permutation, DEFAULT_ORDER_CAP};
use burnside_core::lattice::mobius_by_recursion;
use burnside_core::mgn::{self, Methods, MgnReport};
use burnside_core::topology::chi_tilde_for_all_cyclic;
use burnside_core::{BigInt, GroupSpec, GroupTable, SubgroupLattice};
use proptest::prelude::*;

fn table(spec: &str) -> GroupTable {
    spec.parse::<GroupSpec>().unwrap().build().unwrap()
}

/// Products of elements in `mask` until nothing new appears.
fn close(g: &GroupTable, mut mask: u64) -> u64 {
    loop {
        let mut next = mask;
        for a in (0..g.order()).filter(|a| mask >> a & 1 == 1) {
            for b in (0..g.order()).filter(|b| mask >> b & 1 == 1) {
                next |= 1 << g.mul(a, b);
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

/// Every subgroup, found by deciding membership element by element and
/// discarding any partial choice whose closure hits an excluded element.
fn brute_force_subgroups(g: &GroupTable) -> Vec<u64> {
    assert!(g.order() <= 64);
    fn search(g: &GroupTable, include: u64, exclude: u64, out: &mut Vec<u64>) {
        let Some(e) = (0..g.order()).find(|&e| (include | exclude) >> e & 1 == 0) else {
            out.push(include);
            return;
        };
        search(g, include, exclude | 1 << e, out);
        let c = close(g, include | 1 << e);
        if c & exclude == 0 {
            search(g, c, exclude, out);
        }
    }
    let mut out = Vec::new();
    search(g, 1 << g.identity(), 0, &mut out);
    out.sort_unstable();
    out
}

fn lattice_masks(lat: &SubgroupLattice) -> Vec<u64> {
    let mut v: Vec<u64> = lat.subgroups().iter().map(|s| s.elements().fold(0u64, |m, x| m | 1 << x)).collect();
    v.sort_unstable();
    v
}

const SMALL: &[&str] = &[
    "cyclic:1",
    "cyclic:8",
    "cyclic:12",
    "sym:3",
    "dihedral:8",
    "dihedral:12",
    "dihedral:16",
    "quaternion:8",
    "elab:2:2",
    "elab:2:3",
    "elab:3:2",
    "alt:4",
    "sym:4",
    "product:cyclic:2,cyclic:4",
    "product:cyclic:2,cyclic:6",
    "product:sym:3,cyclic:2",
    "product:dihedral:8,cyclic:2",
    "product:quaternion:8,cyclic:2",
    "elab:2:4",
];

#[test]
fn subgroup_enumeration_matches_brute_force() {
    for spec in SMALL {
        let g = table(spec);
        let lat = SubgroupLattice::enumerate(Arc::new(g.clone()));
        assert_eq!(lattice_masks(&lat), brute_force_subgroups(&g), "{spec}");
    }
}

#[test]
fn brute_force_oracle_sanity() {
    assert_eq!(brute_force_subgroups(&table("sym:3")).len(), 6);
    assert_eq!(brute_force_subgroups(&table("dihedral:8")).len(), 10);
    assert_eq!(brute_force_subgroups(&table("sym:4")).len(), 30);
}

fn check_incidence(lat: &SubgroupLattice) {
    let n = lat.len();
    let zeta = lat.zeta().unwrap();
    let mu = lat.mobius().unwrap();
    let id = burnside_core::lattice::IncidenceMatrix::identity(n);
    assert_eq!(zeta.product(mu), id);
    assert_eq!(mu.product(zeta), id);
    assert_eq!(*mu, mobius_by_recursion(lat));
    for i in 0..n {
        assert_eq!(mu.get(i, i), 1);
        for j in 0..n {
            if zeta.get(i, j) == 0 {
                assert_eq!(mu.get(i, j), 0);
            }
            if j < i {
                assert_eq!(zeta.get(i, j), 0, "zeta is upper triangular");
            }
        }
    }
    // Σ_{X ≤ Y ≤ G} μ(X, Y) = 0 for X < G
    let top = lat.top();
    for x in 0..top {
        let s: i64 = (x..=top).filter(|&y| lat.contains(x, y)).map(|y| mu.get(x, y)).sum();
        assert_eq!(s, 0);
    }
}

fn check_prime_routes(lat: &SubgroupLattice) {
    let chain = lat.longest_chain();
    for h in 0..lat.top() {
        let direct = mgn::big_m_prime_direct(lat, h).unwrap();
        let rec = mgn::big_m_prime_recursive(lat, h).unwrap();
        let topo: BigInt = chi_tilde_for_all_cyclic(lat, h).unwrap().iter().map(|t| &t.signed_contribution).sum();
        assert_eq!(direct, rec.value, "{} H={h}", lat.group().name());
        assert_eq!(direct, topo, "{} H={h}", lat.group().name());
        assert!(rec.depth <= chain);
    }
}

#[test]
fn incidence_algebra_identities() {
    for spec in SMALL {
        check_incidence(&SubgroupLattice::build(Arc::new(table(spec))));
    }
}

#[test]
fn m_prime_routes_agree_on_every_proper_subgroup() {
    for spec in SMALL {
        check_prime_routes(&SubgroupLattice::build(Arc::new(table(spec))));
    }
}

fn arb_permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn arb_group() -> impl Strategy<Value = GroupTable> {
    (2usize..=5)
        .prop_flat_map(|d| prop::collection::vec(arb_permutation(d), 1..=2))
        .prop_map(|gens| build_from_generators("random", &gens, DEFAULT_ORDER_CAP).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_permutation_groups(g in arb_group()) {
        let lat = SubgroupLattice::build(Arc::new(g.clone()));
        for s in lat.subgroups() {
            prop_assert_eq!(g.order() % s.order(), 0);
        }
        for x in g.elements() {
            prop_assert_eq!(g.order() % g.element_order(x), 0);
        }
        check_incidence(&lat);
        if g.order() <= 24 {
            check_prime_routes(&lat);
            prop_assert_eq!(lattice_masks(&lat), brute_force_subgroups(&g));
        }
        for n in lat.normal_subgroups() {
            if n != lat.top() && lat.maximal_subgroups_containing(n).unwrap().len() > mgn::MAX_COVER_SIZE {
                continue;
            }
            let r = MgnReport::compute(&lat, n, Methods::ALL).unwrap();
            prop_assert!(r.agreement, "{}", r);
            let complement = mgn::sum_outside_supplements(&lat, n).unwrap();
            let lhs = r.value().clone() + burnside_core::BigRational::new(complement, BigInt::from(g.order()));
            prop_assert_eq!(lhs, mgn::m_self(&lat).unwrap());
        }
    }

    #[test]
    fn same_generators_same_table(gens in (2usize..=5).prop_flat_map(|d| prop::collection::vec(arb_permutation(d), 0..=3))) {
        let a = build_from_generators("g", &gens, DEFAULT_ORDER_CAP).unwrap();
        let b = build_from_generators("g", &gens, DEFAULT_ORDER_CAP).unwrap();
        prop_assert_eq!(a, b);
    }
}
