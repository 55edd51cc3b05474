use burnside_core::topology::FinitePoset;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Counts chains by listing every subset and checking it is totally ordered.
fn chains_by_subsets(p: &FinitePoset) -> Vec<u64> {
    let n = p.len();
    let mut counts = vec![0u64; n];
    for mask in 1u32..(1 << n) {
        let elems: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let total = elems.iter().all(|&a| elems.iter().all(|&b| a == b || p.comparable(a, b)));
        if total {
            counts[elems.len() - 1] += 1;
        }
    }
    while counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}

/// A random strict order: the transitive closure of random edges `i → j`, `i < j`.
fn arb_poset() -> impl Strategy<Value = FinitePoset> {
    (0usize..=9).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut less = vec![vec![false; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    less[i][j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if less[i][k] && less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
            FinitePoset::new(n, |i, j| less[i][j]).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn dp_matches_subset_enumeration(p in arb_poset()) {
        let e = p.euler_summary();
        let dp: Vec<u64> = e.chain_counts.iter().map(|c| u64::try_from(c.clone()).unwrap()).collect();
        prop_assert_eq!(&dp, &chains_by_subsets(&p));
        // no zero gaps
        prop_assert!(dp.iter().all(|&c| c > 0));
        prop_assert_eq!(e.chi_tilde, e.chi - 1);
    }

    #[test]
    fn relabeling_preserves_summary(p in arb_poset(), seed in any::<u64>()) {
        let n = p.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let q = FinitePoset::new(n, |i, j| p.less(perm[i], perm[j])).unwrap();
        prop_assert_eq!(p.euler_summary(), q.euler_summary());
    }

    #[test]
    fn cone_forces_zero_reduced_characteristic(p in arb_poset()) {
        if p.is_cone() {
            prop_assert_eq!(p.euler_summary().chi_tilde, BigInt::from(0));
        }
        // a unique maximal element is a cone point
        let n = p.len();
        let maxima: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| !p.less(i, j))).collect();
        if maxima.len() == 1 {
            prop_assert!(p.is_cone());
            prop_assert_eq!(p.euler_summary().chi, BigInt::from(1));
        }
    }
}

#[test]
fn antichains() {
    for k in 0..8 {
        let e = FinitePoset::antichain(k).euler_summary();
        assert_eq!(e.chi_tilde, BigInt::from(k as i64 - 1));
    }
}
