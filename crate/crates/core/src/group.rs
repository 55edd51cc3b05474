//! Finite groups as explicit multiplication tables.

use std::collections::HashMap;
use std::fmt;

use crate::error::{invalid, Error, Result};

/// Default upper bound on the order of any group built by this crate.
pub const DEFAULT_ORDER_CAP: usize = 5000;

/// Associativity is checked at construction only up to this order.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 512;

/// A finite group given by its full Cayley table.
///
/// Elements are the indices `0..order`. Tables built by this crate always
/// put the identity at index 0, but tables handed to [`GroupTable::from_table`]
/// may place it anywhere.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u32>,
    identity: usize,
    inv: Vec<usize>,
    name: String,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable").field("name", &self.name).field("order", &self.order).finish()
    }
}

impl GroupTable {
    /// Builds a group from a row-major `order × order` table, checking the
    /// group axioms.
    pub fn from_table(name: impl Into<String>, order: usize, mul: Vec<u32>) -> Result<Self> {
        if order == 0 {
            return invalid("a group has at least one element");
        }
        if mul.len() != order * order {
            return invalid(format!("table has {} entries, expected {}", mul.len(), order * order));
        }
        if mul.iter().any(|&x| x as usize >= order) {
            return invalid("table entry out of range");
        }
        // Latin square
        let mut seen = vec![0usize; order];
        for r in 0..order {
            for c in 0..order {
                let v = mul[r * order + c] as usize;
                if seen[v] == 2 * r + 1 {
                    return invalid(format!("row {r} repeats element {v}"));
                }
                seen[v] = 2 * r + 1;
            }
        }
        for c in 0..order {
            for r in 0..order {
                let v = mul[r * order + c] as usize;
                if seen[v] == 2 * c + 2 {
                    return invalid(format!("column {c} repeats element {v}"));
                }
                seen[v] = 2 * c + 2;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] as usize == x && mul[x * order + e] as usize == x))
            .ok_or_else(|| Error::Validation("table has no two-sided identity".into()))?;
        let mut inv = vec![0; order];
        for (x, slot) in inv.iter_mut().enumerate() {
            let y = (0..order)
                .find(|&y| mul[x * order + y] as usize == identity)
                .expect("latin square rows contain the identity");
            if mul[y * order + x] as usize != identity {
                return invalid(format!("element {x} has no two-sided inverse"));
            }
            *slot = y;
        }
        let g = GroupTable { order, mul, identity, inv, name: name.into() };
        if order <= ASSOCIATIVITY_CHECK_LIMIT && !g.is_associative() {
            return invalid("table is not associative");
        }
        Ok(g)
    }

    fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        self.mul(self.mul(self.inv(a), self.inv(b)), ab)
    }

    /// `g x g⁻¹`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// The least `k ≥ 1` with `x^k = 1`.
    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|x| self.element_order(x) == self.order)
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements().map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return invalid("euler_phi is undefined at 0");
    }
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    Ok(phi)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// A permutation of `{0, .., n-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i >= n || hit[i] {
                return invalid(format!("{images:?} is not a bijection on {n} points"));
            }
            hit[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of `degree` points from 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > degree {
                    return invalid(format!("point {p} outside 1..={degree}"));
                }
                if moved[p - 1] {
                    return invalid(format!("point {p} appears in more than one cycle"));
                }
                moved[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                images[p - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, p: usize) -> usize {
        self.0[p]
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&p| other.0[p]).collect())
    }

    fn padded(&self, degree: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.0.len()..degree);
        Permutation(v)
    }
}

/// Breadth-first closure of a list of permutations.
///
/// Element 0 is the identity; the remaining elements appear in the order
/// they are first reached by right-multiplying already-found elements by
/// the generators, in generator order. Generators of smaller degree are
/// extended by fixed points.
pub fn build_from_generators(name: impl Into<String>, generators: &[Permutation], cap: usize) -> Result<GroupTable> {
    let degree = generators.iter().map(Permutation::degree).max().unwrap_or(0);
    let gens: Vec<Permutation> = generators.iter().map(|g| g.padded(degree)).collect();
    for g in &gens {
        Permutation::from_images(g.0.clone())?;
    }

    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    // right[x * ngens + i] = index of x * gens[i]
    let mut right: Vec<usize> = Vec::new();
    let mut parent = vec![usize::MAX];
    let mut via = vec![usize::MAX];
    let mut head = 0;
    while head < elements.len() {
        for (gi, g) in gens.iter().enumerate() {
            let y = elements[head].then(g);
            let yi = match index.get(&y) {
                Some(&i) => i,
                None => {
                    let i = elements.len();
                    if i + 1 > cap {
                        return Err(Error::SizeLimit { cap });
                    }
                    index.insert(y.clone(), i);
                    elements.push(y);
                    parent.push(head);
                    via.push(gi);
                    i
                }
            };
            right.push(yi);
        }
        head += 1;
    }

    let n = elements.len();
    let ngens = gens.len();
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        mul[a * n] = a as u32;
        for b in 1..n {
            let prev = mul[a * n + parent[b]] as usize;
            mul[a * n + b] = right[prev * ngens + via[b]] as u32;
        }
    }
    GroupTable::from_table(name, n, mul)
}

fn check_cap(order: u128, cap: usize) -> Result<usize> {
    if order > cap as u128 {
        Err(Error::SizeLimit { cap })
    } else {
        Ok(order as usize)
    }
}

pub fn cyclic(n: usize, cap: usize) -> Result<GroupTable> {
    if n == 0 {
        return invalid("cyclic order must be at least 1");
    }
    check_cap(n as u128, cap)?;
    let mul = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
    GroupTable::from_table(format!("cyclic:{n}"), n, mul)
}

/// Dihedral group of order `n`: index `k < n/2` is `r^k`, index `n/2 + k`
/// is `s r^k`.
pub fn dihedral(n: usize, cap: usize) -> Result<GroupTable> {
    if n < 2 || !n.is_multiple_of(2) {
        return invalid(format!("dihedral order must be even and at least 2, got {n}"));
    }
    check_cap(n as u128, cap)?;
    let m = n / 2;
    let split = |x: usize| (x >= m, x % m);
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let ((sa, ra), (sb, rb)) = (split(a), split(b));
            // r^a s = s r^-a
            let r = if sb { (rb + m - ra) % m } else { (ra + rb) % m };
            let s = sa ^ sb;
            mul.push((if s { m + r } else { r }) as u32);
        }
    }
    GroupTable::from_table(format!("dihedral:{n}"), n, mul)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

pub fn symmetric(n: usize, cap: usize) -> Result<GroupTable> {
    if n == 0 {
        return invalid("symmetric degree must be at least 1");
    }
    check_cap(factorial(n), cap)?;
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[vec![1, 2]])?);
        gens.push(Permutation::from_cycles(n, &[(1..=n).collect()])?);
    }
    build_from_generators(format!("sym:{n}"), &gens, cap)
}

pub fn alternating(n: usize, cap: usize) -> Result<GroupTable> {
    if n == 0 {
        return invalid("alternating degree must be at least 1");
    }
    check_cap((factorial(n) / 2).max(1), cap)?;
    let gens = (3..=n).map(|k| Permutation::from_cycles(n, &[vec![1, 2, k]])).collect::<Result<Vec<_>>>()?;
    build_from_generators(format!("alt:{n}"), &gens, cap)
}

/// The quaternion group `{±1, ±i, ±j, ±k}`, indexed `1, i, j, k, -1, -i, -j, -k`.
pub fn quaternion(n: usize, cap: usize) -> Result<GroupTable> {
    if n != 8 {
        return invalid(format!("only quaternion:8 is supported, got quaternion:{n}"));
    }
    check_cap(8, cap)?;
    // unit product table: (sign flip, unit) for units 1, i, j, k
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let mut mul = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            let (flip, u) = UNIT[a % 4][b % 4];
            let neg = (a >= 4) ^ (b >= 4) ^ flip;
            mul.push((if neg { u + 4 } else { u }) as u32);
        }
    }
    GroupTable::from_table("quaternion:8", 8, mul)
}

pub fn elementary_abelian(p: usize, k: usize, cap: usize) -> Result<GroupTable> {
    if !is_prime(p as u64) {
        return invalid(format!("elementary abelian base {p} is not prime"));
    }
    let order = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(p as u128)).unwrap_or(u128::MAX);
    let n = check_cap(order, cap)?;
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (mut x, mut y, mut place, mut sum) = (a, b, 1, 0);
            for _ in 0..k {
                sum += ((x % p + y % p) % p) * place;
                x /= p;
                y /= p;
                place *= p;
            }
            mul.push(sum as u32);
        }
    }
    GroupTable::from_table(format!("elab:{p}:{k}"), n, mul)
}

/// Componentwise product; element `(a, b)` has index `a * |B| + b`.
pub fn direct_product(a: &GroupTable, b: &GroupTable, cap: usize) -> Result<GroupTable> {
    let n = check_cap(a.order() as u128 * b.order() as u128, cap)?;
    let nb = b.order();
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let p = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
            mul.push(p as u32);
        }
    }
    GroupTable::from_table(format!("product:[{}],[{}]", a.name(), b.name()), n, mul)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &cycles).unwrap()
    }

    #[test]
    fn generators_three_cycle() {
        let g = build_from_generators("c3", &[perm(3, &[&[1, 2, 3]])], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_cyclic());
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn generators_s3() {
        let gens = [perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])];
        let g = build_from_generators("s3", &gens, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        // element 1 is the first generator, a transposition
        assert_eq!(g.element_order(1), 2);
        assert_eq!(g.element_order(0), 1);
    }

    #[test]
    fn generators_empty_is_trivial() {
        let g = build_from_generators("1", &[], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn generators_cap_exceeded() {
        let gens = [perm(5, &[&[1, 2]]), perm(5, &[&[1, 2, 3, 4, 5]])];
        assert_eq!(build_from_generators("s5", &gens, 100).unwrap_err(), Error::SizeLimit { cap: 100 });
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
    }

    #[test]
    fn deterministic_indexing() {
        let gens = [perm(4, &[&[1, 2]]), perm(4, &[&[1, 2, 3, 4]])];
        let a = build_from_generators("s4", &gens, DEFAULT_ORDER_CAP).unwrap();
        let b = build_from_generators("s4", &gens, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn family_orders_and_profiles() {
        let c6 = cyclic(6, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(c6.element_order(1), 6);
        let v4 = direct_product(&cyclic(2, 100).unwrap(), &cyclic(2, 100).unwrap(), 100).unwrap();
        assert_eq!(v4.order_profile(), vec![1, 2, 2, 2]);
        let d8 = dihedral(8, 100).unwrap();
        assert_eq!(d8.order_profile(), vec![1, 2, 2, 2, 2, 2, 4, 4]);
        let q8 = quaternion(8, 100).unwrap();
        assert_eq!(q8.order_profile(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        assert_eq!(symmetric(4, 100).unwrap().order(), 24);
        assert_eq!(alternating(5, 100).unwrap().order(), 60);
        assert_eq!(alternating(2, 100).unwrap().order(), 1);
        assert_eq!(elementary_abelian(3, 2, 100).unwrap().order_profile(), [1, 3, 3, 3, 3, 3, 3, 3, 3]);
        assert_eq!(elementary_abelian(2, 0, 100).unwrap().order(), 1);
    }

    #[test]
    fn family_validation() {
        assert!(cyclic(0, 100).is_err());
        assert!(dihedral(7, 100).is_err());
        assert!(dihedral(0, 100).is_err());
        assert!(quaternion(12, 100).is_err());
        assert!(elementary_abelian(4, 2, 100).is_err());
        assert_eq!(symmetric(8, 5000).unwrap_err(), Error::SizeLimit { cap: 5000 });
    }

    #[test]
    fn element_order_divides_order() {
        for g in [symmetric(4, 100).unwrap(), dihedral(12, 100).unwrap(), quaternion(8, 8).unwrap()] {
            for x in g.elements() {
                assert_eq!(g.order() % g.element_order(x), 0);
            }
        }
    }

    #[test]
    fn from_table_rejects_bad_tables() {
        // not a latin square
        assert!(GroupTable::from_table("x", 2, vec![0, 1, 1, 1]).is_err());
        // a latin square with no identity: a*b = -a-b mod 3
        assert!(GroupTable::from_table("x", 3, vec![0, 2, 1, 2, 1, 0, 1, 0, 2]).is_err());
        // identity need not be element 0
        assert_eq!(GroupTable::from_table("x", 2, vec![1, 0, 0, 1]).unwrap().identity(), 1);
        // a latin square (loop) of order 5 that is not associative
        #[rustfmt::skip]
        let loop5 = vec![
            0, 1, 2, 3, 4,
            1, 0, 3, 4, 2,
            2, 4, 0, 1, 3,
            3, 2, 4, 0, 1,
            4, 3, 1, 2, 0,
        ];
        let err = GroupTable::from_table("loop", 5, loop5).unwrap_err();
        assert_eq!(err, Error::Validation("table is not associative".into()));
    }

    fn phi_brute(n: u64) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
    }

    #[test]
    fn totient() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(6).unwrap(), phi_brute(6));
        assert_eq!(euler_phi(12).unwrap(), phi_brute(12));
        assert_eq!(phi_brute(6), 2);
        assert_eq!(phi_brute(12), 4);
        for n in 1..300 {
            assert_eq!(euler_phi(n).unwrap(), phi_brute(n), "n = {n}");
        }
        assert!(euler_phi(0).is_err());
    }
}
