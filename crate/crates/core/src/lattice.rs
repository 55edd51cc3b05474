//! The subgroup lattice of a finite group, with its zeta and Möbius
//! incidence matrices.
//!
//! Subgroups are kept in a canonical order: by order, then by the numeric
//! value of the member bitset. Inclusion implies a weakly smaller order, so
//! in this order the zeta matrix is upper unitriangular and its inverse can
//! be taken by back-substitution.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::bitset::ElementSet;
use crate::error::{invalid, Error, Result};
use crate::group::GroupTable;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: ElementSet,
    order: usize,
}

impl Subgroup {
    /// Wraps a member set without checking closure.
    fn from_members(members: ElementSet) -> Self {
        let order = members.count();
        Subgroup { members, order }
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    fn check_parent(&self, other: &Subgroup) -> Result<()> {
        if self.members.universe() != other.members.universe() {
            return invalid("subgroups belong to different parent groups");
        }
        Ok(())
    }

    /// `A ∩ B`.
    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_parent(other)?;
        Ok(Subgroup::from_members(self.members.intersection(&other.members)))
    }

    /// `⟨A ∪ B⟩`.
    pub fn join(&self, other: &Subgroup, g: &GroupTable) -> Result<Subgroup> {
        self.check_parent(other)?;
        if self.members.universe() != g.order() {
            return invalid("subgroup does not belong to this group");
        }
        let gens: Vec<usize> =
            greedy_generators(g, &self.members).into_iter().chain(greedy_generators(g, &other.members)).collect();
        Ok(generated_by(g, &gens))
    }

    /// Checks closure under multiplication and inverses.
    pub fn is_closed_in(members: &ElementSet, g: &GroupTable) -> bool {
        if members.universe() != g.order() || !members.contains(g.identity()) {
            return false;
        }
        let elts: Vec<usize> = members.iter().collect();
        elts.iter().all(|&a| members.contains(g.inv(a)) && elts.iter().all(|&b| members.contains(g.mul(a, b))))
    }

    pub fn try_from_members(members: ElementSet, g: &GroupTable) -> Result<Subgroup> {
        if !Subgroup::is_closed_in(&members, g) {
            return invalid(format!("{members} is not a subgroup of {}", g.name()));
        }
        Ok(Subgroup::from_members(members))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {})", self.order, self.members)
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.members, f)
    }
}

/// The subgroup generated by `elements`.
pub fn generated_by(g: &GroupTable, elements: &[usize]) -> Subgroup {
    let gens: Vec<usize> = elements.iter().copied().filter(|&x| x != g.identity()).collect();
    let mut members = ElementSet::empty(g.order());
    members.insert(g.identity());
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = g.mul(x, s);
            if members.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Subgroup::from_members(members)
}

/// A short generating list for the subgroup with the given members,
/// preferring elements of large order.
pub fn greedy_generators(g: &GroupTable, members: &ElementSet) -> Vec<usize> {
    let mut elts: Vec<(usize, usize)> = members.iter().map(|x| (g.element_order(x), x)).collect();
    elts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let target = members.count();
    let mut gens = Vec::new();
    let mut span = generated_by(g, &[]);
    for (_, x) in elts {
        if span.order() == target {
            break;
        }
        if !span.contains(x) {
            gens.push(x);
            span = generated_by(g, &gens);
        }
    }
    gens
}

/// A dense square integer matrix indexed by lattice positions.
#[derive(Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IncidenceMatrix {
    pub fn zeros(n: usize) -> Self {
        IncidenceMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn product(&self, other: &IncidenceMatrix) -> IncidenceMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Debug for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.n).map(|i| self.row(i))).finish()
    }
}

#[derive(Clone, Debug)]
struct Incidence {
    zeta: IncidenceMatrix,
    mobius: IncidenceMatrix,
}

/// All subgroups of a group, in canonical order, plus derived flags.
///
/// Position 0 is always the trivial subgroup and the last position is the
/// whole group.
#[derive(Clone)]
pub struct SubgroupLattice {
    group: Arc<GroupTable>,
    subgroups: Vec<Subgroup>,
    index: HashMap<ElementSet, usize>,
    generators: Vec<Vec<usize>>,
    cyclic: Vec<bool>,
    normal: Vec<bool>,
    maximal: Vec<bool>,
    incidence: Option<Incidence>,
}

impl fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("group", &self.group.name())
            .field("subgroups", &self.subgroups.len())
            .finish()
    }
}

impl SubgroupLattice {
    /// Enumerates every subgroup: the cyclic subgroups `⟨x⟩` seed the set,
    /// which is then closed under joins. Since every subgroup is a join of
    /// cyclic ones, joining each new subgroup with every cyclic seed reaches
    /// them all. Incidence matrices are left unset.
    pub fn enumerate(group: Arc<GroupTable>) -> Self {
        let g = &*group;
        let mut seeds: Vec<(ElementSet, usize)> = Vec::new();
        let mut seen_seed = HashSet::new();
        for x in g.elements() {
            let c = generated_by(g, &[x]);
            if seen_seed.insert(c.members.clone()) {
                seeds.push((c.members, x));
            }
        }

        let mut found: HashMap<ElementSet, Vec<usize>> = HashMap::new();
        let mut queue = VecDeque::new();
        for (m, x) in &seeds {
            let gens = if *x == g.identity() { vec![] } else { vec![*x] };
            found.insert(m.clone(), gens.clone());
            queue.push_back((m.clone(), gens));
        }
        while let Some((m, gens)) = queue.pop_front() {
            for (c, x) in &seeds {
                if c.is_subset(&m) {
                    continue;
                }
                let mut jg = gens.clone();
                jg.push(*x);
                let j = generated_by(g, &jg);
                if !found.contains_key(&j.members) {
                    found.insert(j.members.clone(), jg.clone());
                    queue.push_back((j.members, jg));
                }
            }
        }

        let subgroups: Vec<Subgroup> = found.into_keys().map(Subgroup::from_members).collect();
        Self::from_subgroups(group, subgroups)
    }

    fn from_subgroups(group: Arc<GroupTable>, mut subgroups: Vec<Subgroup>) -> Self {
        subgroups.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.members.cmp(&b.members)));
        let g = &*group;
        let index = subgroups.iter().enumerate().map(|(i, s)| (s.members.clone(), i)).collect();
        let generators: Vec<Vec<usize>> = subgroups.iter().map(|s| greedy_generators(g, &s.members)).collect();
        let cyclic = subgroups.iter().map(|s| s.elements().any(|x| g.element_order(x) == s.order)).collect();
        let top_gens = generators.last().cloned().unwrap_or_default();
        let normal = subgroups
            .iter()
            .zip(&generators)
            .map(|(s, gens)| top_gens.iter().all(|&t| gens.iter().all(|&x| s.contains(g.conjugate(t, x)))))
            .collect();
        let n = subgroups.len();
        let maximal = (0..n)
            .map(|h| {
                h + 1 < n
                    && !(h + 1..n - 1)
                        .any(|k| subgroups[k].order > subgroups[h].order && subgroups[h].is_subgroup_of(&subgroups[k]))
            })
            .collect();
        SubgroupLattice { group, subgroups, index, generators, cyclic, normal, maximal, incidence: None }
    }

    /// Fills in zeta and the Möbius function, the latter as the exact inverse
    /// of zeta by back-substitution on the upper unitriangular matrix.
    pub fn compute_incidence(mut self) -> Self {
        let n = self.len();
        let mut zeta = IncidenceMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                if self.contains(i, j) {
                    zeta.set(i, j, 1);
                }
            }
        }
        let uppers: Vec<Vec<usize>> = (0..n).map(|i| (i + 1..n).filter(|&k| zeta.get(i, k) != 0).collect()).collect();
        let mut mobius = IncidenceMatrix::zeros(n);
        for j in 0..n {
            mobius.set(j, j, 1);
            for i in (0..j).rev() {
                let s: i64 =
                    uppers[i].iter().take_while(|&&k| k <= j).map(|&k| zeta.get(i, k) * mobius.get(k, j)).sum();
                mobius.set(i, j, -s);
            }
        }
        self.incidence = Some(Incidence { zeta, mobius });
        self
    }

    /// Enumeration followed by [`compute_incidence`](Self::compute_incidence).
    pub fn build(group: Arc<GroupTable>) -> Self {
        Self::enumerate(group).compute_incidence()
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn position(&self, members: &ElementSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn position_of(&self, s: &Subgroup) -> Option<usize> {
        self.position(&s.members)
    }

    pub fn generators(&self, i: usize) -> &[usize] {
        &self.generators[i]
    }

    /// `subgroup(i) ⊆ subgroup(j)`.
    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i == j
            || (self.subgroups[i].order < self.subgroups[j].order
                && self.subgroups[j].order.is_multiple_of(self.subgroups[i].order)
                && self.subgroups[i].is_subgroup_of(&self.subgroups[j]))
    }

    pub fn has_incidence(&self) -> bool {
        self.incidence.is_some()
    }

    pub fn zeta(&self) -> Result<&IncidenceMatrix> {
        self.incidence
            .as_ref()
            .map(|i| &i.zeta)
            .ok_or_else(|| Error::Validation("incidence matrices have not been computed".into()))
    }

    pub fn mobius(&self) -> Result<&IncidenceMatrix> {
        self.incidence
            .as_ref()
            .map(|i| &i.mobius)
            .ok_or_else(|| Error::Validation("incidence matrices have not been computed".into()))
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn is_cyclic(&self, i: usize) -> bool {
        self.cyclic[i]
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.maximal[i]
    }

    pub fn normal_subgroups(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.normal[i]).collect()
    }

    /// Non-trivial normal subgroups that contain no smaller non-trivial
    /// normal subgroup.
    pub fn minimal_normal_subgroups(&self) -> Vec<usize> {
        let nontrivial: Vec<usize> = self.normal_subgroups().into_iter().filter(|&i| i != 0).collect();
        nontrivial.iter().copied().filter(|&i| !nontrivial.iter().any(|&j| j != i && self.contains(j, i))).collect()
    }

    pub fn cyclic_subgroups(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cyclic[i]).collect()
    }

    /// Lattice positions of all subgroups of `subgroup(i)`.
    pub fn subgroups_of(&self, i: usize) -> Vec<usize> {
        (0..=i).filter(|&k| self.contains(k, i)).collect()
    }

    /// Maximal subgroups `H` of `G` with `subgroup(n) ⊆ H`. When `n` is itself
    /// maximal it is included.
    pub fn maximal_subgroups_containing(&self, n: usize) -> Result<Vec<usize>> {
        if n == self.top() {
            return invalid("the whole group lies in no maximal subgroup");
        }
        Ok((n..self.len()).filter(|&h| self.maximal[h] && self.contains(n, h)).collect())
    }

    pub fn intersect(&self, i: usize, j: usize) -> usize {
        let m = self.subgroups[i].members.intersection(&self.subgroups[j].members);
        self.index[&m]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let gens: Vec<usize> = self.generators[i].iter().chain(&self.generators[j]).copied().collect();
        let s = generated_by(&self.group, &gens);
        self.index[&s.members]
    }

    /// Position of subgroup `i` among the subgroups of the same order.
    pub fn rank_within_order(&self, i: usize) -> usize {
        let o = self.subgroups[i].order;
        self.subgroups[..i].iter().filter(|s| s.order == o).count()
    }

    /// Inverse of [`rank_within_order`](Self::rank_within_order).
    pub fn select(&self, order: usize, rank: usize) -> Option<usize> {
        (0..self.len()).filter(|&i| self.subgroups[i].order == order).nth(rank)
    }

    /// Number of subgroups in a longest strictly increasing chain.
    pub fn longest_chain(&self) -> usize {
        let n = self.len();
        let mut best = vec![1usize; n];
        for j in 0..n {
            for i in 0..j {
                if self.contains(i, j) {
                    best[j] = best[j].max(best[i] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Writes the line-oriented cache format: a header line, one line of
    /// member indices per subgroup, then the `zeta` and `mobius` sections
    /// as row-major integer lines.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Cache(e.to_string());
        let inc =
            self.incidence.as_ref().ok_or_else(|| Error::Cache("incidence matrices have not been computed".into()))?;
        writeln!(w, "group {} order {} subgroups {}", self.group.name(), self.group.order(), self.len()).map_err(io)?;
        for s in &self.subgroups {
            let line: Vec<String> = s.elements().map(|x| x.to_string()).collect();
            writeln!(w, "{}", line.join(" ")).map_err(io)?;
        }
        for (title, m) in [("zeta", &inc.zeta), ("mobius", &inc.mobius)] {
            writeln!(w, "{title}").map_err(io)?;
            for i in 0..m.size() {
                let line: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
                writeln!(w, "{}", line.join(" ")).map_err(io)?;
            }
        }
        Ok(())
    }

    /// Reads a lattice previously written by [`write_cache`](Self::write_cache)
    /// for the same group table. Member sets are re-checked for closure and
    /// the stored zeta matrix must match inclusion.
    pub fn read_cache<R: BufRead>(group: Arc<GroupTable>, r: R) -> Result<Self> {
        let bad = |m: String| Error::Cache(m);
        let mut lines = r.lines().map(|l| l.map_err(|e| Error::Cache(e.to_string())));
        let mut next = || lines.next().unwrap_or_else(|| Err(bad("unexpected end of file".into())));

        let header = next()?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() < 6
            || toks[0] != "group"
            || toks[toks.len() - 4] != "order"
            || toks[toks.len() - 2] != "subgroups"
        {
            return Err(bad(format!("bad header `{header}`")));
        }
        let order: usize = toks[toks.len() - 3].parse().map_err(|_| bad("bad order".into()))?;
        let k: usize = toks[toks.len() - 1].parse().map_err(|_| bad("bad subgroup count".into()))?;
        if order != group.order() {
            return Err(bad(format!("cache is for a group of order {order}, not {}", group.order())));
        }

        let mut subgroups = Vec::with_capacity(k);
        for _ in 0..k {
            let line = next()?;
            let idx = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().filter(|&x| x < order))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| bad(format!("bad member line `{line}`")))?;
            let s = Subgroup::try_from_members(ElementSet::from_indices(order, idx), &group)
                .map_err(|e| bad(e.to_string()))?;
            subgroups.push(s);
        }

        let mut read_matrix = |title: &str| -> Result<IncidenceMatrix> {
            let t = next()?;
            if t.trim() != title {
                return Err(bad(format!("expected `{title}` section, found `{t}`")));
            }
            let mut m = IncidenceMatrix::zeros(k);
            for i in 0..k {
                let line = next()?;
                let row = line
                    .split_whitespace()
                    .map(|t| t.parse::<i64>().ok())
                    .collect::<Option<Vec<i64>>>()
                    .filter(|r| r.len() == k)
                    .ok_or_else(|| bad(format!("bad {title} row {i}")))?;
                for (j, v) in row.into_iter().enumerate() {
                    m.set(i, j, v);
                }
            }
            Ok(m)
        };
        let zeta = read_matrix("zeta")?;
        let mobius = read_matrix("mobius")?;

        let mut lat = Self::from_subgroups(group, subgroups);
        if lat.len() != k {
            return Err(bad("duplicate subgroups".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if zeta.get(i, j) != i64::from(lat.contains(i, j)) {
                    return Err(bad("zeta does not match inclusion (subgroups out of canonical order?)".into()));
                }
            }
        }
        lat.incidence = Some(Incidence { zeta, mobius });
        Ok(lat)
    }
}

/// Möbius function from its defining recursion
/// `μ(x,x) = 1`, `μ(x,y) = -Σ_{x ≤ z < y} μ(x,z)`.
pub fn mobius_by_recursion(lat: &SubgroupLattice) -> IncidenceMatrix {
    let n = lat.len();
    let mut m = IncidenceMatrix::zeros(n);
    for x in 0..n {
        m.set(x, x, 1);
        for y in x + 1..n {
            if !lat.contains(x, y) {
                continue;
            }
            let s: i64 = (x..y).filter(|&z| lat.contains(x, z) && lat.contains(z, y)).map(|z| m.get(x, z)).sum();
            m.set(x, y, -s);
        }
    }
    m
}
