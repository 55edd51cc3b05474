//! The invariant `m_{G,N} = (1/|G|) Σ_{XN=G} |X| μ(X,G)` and the partial
//! sums `M'_{G,H} = Σ_{X≤H} |X| μ(X,G)`, each computed along independent
//! routes:
//!
//! * directly from the Möbius matrix,
//! * by the recursion `M'_{G,H} = -Σ_{C≤H cyclic} φ(|C|) - Σ_{Y<G, Y≰H} M'_{Y,Y∩H}`,
//!   which never touches the Möbius matrix,
//! * from reduced Euler characteristics of the posets `{X : C ≤ X < G, X ≰ H}`,
//!   combined by inclusion–exclusion over the maximal subgroups containing `N`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bitset::ElementSet;
use crate::error::{invalid, Error, Result};
use crate::group::euler_phi;
use crate::lattice::SubgroupLattice;
use crate::topology::{chi_tilde_for_all_cyclic, CyclicTerm};

/// Largest number of maximal subgroups the inclusion–exclusion will expand.
pub const MAX_COVER_SIZE: usize = 20;

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ratio(num: BigInt, order: usize) -> BigRational {
    BigRational::new(num, BigInt::from(order))
}

fn require_normal(lat: &SubgroupLattice, n: usize) -> Result<()> {
    if n >= lat.len() {
        return invalid(format!("no subgroup at lattice position {n}"));
    }
    if !lat.is_normal(n) {
        return Err(Error::NotNormal(describe(lat, n)));
    }
    Ok(())
}

fn require_proper(lat: &SubgroupLattice, h: usize) -> Result<()> {
    if h >= lat.len() {
        return invalid(format!("no subgroup at lattice position {h}"));
    }
    if h == lat.top() {
        return invalid("H must be a proper subgroup of G");
    }
    Ok(())
}

/// `order=k,index=j` selector text plus the member set.
pub fn describe(lat: &SubgroupLattice, i: usize) -> String {
    let s = lat.subgroup(i);
    format!("order={},index={} {}", s.order(), lat.rank_within_order(i), s)
}

/// The product set `XN`.
fn product_set(lat: &SubgroupLattice, x: usize, n: usize) -> ElementSet {
    let g = lat.group();
    let mut out = ElementSet::empty(g.order());
    for a in lat.subgroup(x).elements() {
        for b in lat.subgroup(n).elements() {
            out.insert(g.mul(a, b));
        }
    }
    out
}

/// `m_{G,N}` from the definition.
pub fn m_direct(lat: &SubgroupLattice, n: usize) -> Result<BigRational> {
    require_normal(lat, n)?;
    let mu = lat.mobius()?;
    let top = lat.top();
    let order = lat.group().order();
    let mut sum = BigInt::zero();
    for x in 0..lat.len() {
        let xn = product_set(lat, x, n);
        if lat.position(&xn).is_none() {
            return Err(Error::Inconsistent(format!(
                "XN is not a subgroup for X = {} and N = {}",
                describe(lat, x),
                describe(lat, n)
            )));
        }
        if xn.count() == order {
            sum += BigInt::from(lat.subgroup(x).order() as i64 * mu.get(x, top));
        }
    }
    Ok(ratio(sum, order))
}

/// `m_{G,G}`.
pub fn m_self(lat: &SubgroupLattice) -> Result<BigRational> {
    m_direct(lat, lat.top())
}

/// `φ(|G|)/|G|` for cyclic `G`, else 0.
pub fn m_self_closed_form(lat: &SubgroupLattice) -> BigRational {
    let g = lat.group();
    if g.is_cyclic() {
        let phi = euler_phi(g.order() as u64).expect("group order is positive");
        ratio(BigInt::from(phi), g.order())
    } else {
        BigRational::zero()
    }
}

/// `M'_{G,H} = Σ_{X≤H} |X| μ(X,G)` from the Möbius matrix.
pub fn big_m_prime_direct(lat: &SubgroupLattice, h: usize) -> Result<BigInt> {
    require_proper(lat, h)?;
    let mu = lat.mobius()?;
    let top = lat.top();
    Ok((0..=h)
        .filter(|&x| lat.contains(x, h))
        .map(|x| BigInt::from(lat.subgroup(x).order() as i64 * mu.get(x, top)))
        .sum())
}

/// `m'_{G,H} = M'_{G,H} / |G|`.
pub fn m_prime_direct(lat: &SubgroupLattice, h: usize) -> Result<BigRational> {
    Ok(ratio(big_m_prime_direct(lat, h)?, lat.group().order()))
}

/// Outcome of evaluating `M'` through the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recursion {
    pub value: BigInt,
    /// Deepest nesting of recursive calls, counting the outermost as 1.
    pub depth: usize,
}

/// Memoized evaluator for `M'_{Y,K}` with `K < Y ≤ G`, keyed on lattice
/// positions. The subgroups of `Y` are read off the parent lattice.
pub struct RecursiveMPrime<'a> {
    lat: &'a SubgroupLattice,
    memo: HashMap<(usize, usize), (BigInt, usize)>,
}

impl<'a> RecursiveMPrime<'a> {
    pub fn new(lat: &'a SubgroupLattice) -> Self {
        RecursiveMPrime { lat, memo: HashMap::new() }
    }

    /// `M'_{G,H}`.
    pub fn evaluate(&mut self, h: usize) -> Result<Recursion> {
        require_proper(self.lat, h)?;
        let (value, depth) = self.eval(self.lat.top(), h);
        Ok(Recursion { value, depth })
    }

    fn eval(&mut self, y: usize, k: usize) -> (BigInt, usize) {
        if let Some(hit) = self.memo.get(&(y, k)) {
            return hit.clone();
        }
        let lat = self.lat;
        let mut value = BigInt::zero();
        for c in 0..=k {
            if lat.is_cyclic(c) && lat.contains(c, k) {
                value -= euler_phi(lat.subgroup(c).order() as u64).expect("positive order");
            }
        }
        let mut depth = 1;
        for y1 in 0..y {
            if !lat.contains(y1, y) || lat.contains(y1, k) {
                continue;
            }
            let k1 = lat.intersect(y1, k);
            let (v, d) = self.eval(y1, k1);
            value -= v;
            depth = depth.max(d + 1);
        }
        self.memo.insert((y, k), (value.clone(), depth));
        (value, depth)
    }
}

/// `M'_{G,H}` through the recursion.
pub fn big_m_prime_recursive(lat: &SubgroupLattice, h: usize) -> Result<Recursion> {
    RecursiveMPrime::new(lat).evaluate(h)
}

/// Calls `visit(σ, H_σ)` for every non-empty `σ ⊆ {0..hs.len()}`, where
/// `H_σ` is the intersection of the chosen subgroups.
fn for_each_intersection(lat: &SubgroupLattice, hs: &[usize], mut visit: impl FnMut(&[usize], usize)) -> Result<()> {
    if hs.len() > MAX_COVER_SIZE {
        return invalid(format!(
            "{} maximal subgroups would need 2^{} intersections (limit {MAX_COVER_SIZE})",
            hs.len(),
            hs.len()
        ));
    }
    fn rec(
        lat: &SubgroupLattice,
        hs: &[usize],
        start: usize,
        sigma: &mut Vec<usize>,
        meet: usize,
        visit: &mut impl FnMut(&[usize], usize),
    ) {
        for i in start..hs.len() {
            let m = if sigma.is_empty() { hs[i] } else { lat.intersect(meet, hs[i]) };
            sigma.push(i);
            visit(sigma, m);
            rec(lat, hs, i + 1, sigma, m, visit);
            sigma.pop();
        }
    }
    rec(lat, hs, 0, &mut Vec::new(), lat.top(), &mut visit);
    Ok(())
}

fn sign_of(sigma_len: usize) -> i32 {
    if sigma_len.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// One intersection `H_σ` of maximal subgroups and its signed cover term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverTerm {
    /// Indices into the list of maximal subgroups containing `N`.
    pub sigma: Vec<usize>,
    pub h_sigma: usize,
    pub big_m_prime: BigInt,
}

/// The inclusion–exclusion terms `(σ, H_σ, M'_{G,H_σ})`, with `M'` taken
/// from the Möbius matrix. `Σ (-1)^{|σ|+1} M'_{G,H_σ}` equals
/// `Σ_{XN≠G} |X| μ(X,G)`.
pub fn inclusion_exclusion_decomposition(lat: &SubgroupLattice, n: usize) -> Result<Vec<CoverTerm>> {
    require_normal(lat, n)?;
    let hs = lat.maximal_subgroups_containing(n)?;
    let mut memo: HashMap<usize, BigInt> = HashMap::new();
    let mut out = Vec::new();
    let mut err = None;
    for_each_intersection(lat, &hs, |sigma, h| {
        let v = match memo.get(&h) {
            Some(v) => v.clone(),
            None => match big_m_prime_direct(lat, h) {
                Ok(v) => {
                    memo.insert(h, v.clone());
                    v
                }
                Err(e) => {
                    err.get_or_insert(e);
                    BigInt::zero()
                }
            },
        };
        out.push(CoverTerm { sigma: sigma.to_vec(), h_sigma: h, big_m_prime: v });
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `Σ_{XN≠G} |X| μ(X,G)` summed directly.
pub fn sum_outside_supplements(lat: &SubgroupLattice, n: usize) -> Result<BigInt> {
    require_normal(lat, n)?;
    let mu = lat.mobius()?;
    let top = lat.top();
    let order = lat.group().order();
    Ok((0..lat.len())
        .filter(|&x| product_set(lat, x, n).count() != order)
        .map(|x| BigInt::from(lat.subgroup(x).order() as i64 * mu.get(x, top)))
        .sum())
}

/// One `σ` of the main expansion: its sign, `H_σ`, and the per-cyclic terms.
#[derive(Clone, Debug)]
pub struct SigmaTerm {
    pub sigma: Vec<usize>,
    pub h_sigma: usize,
    /// `(-1)^{|σ|}`
    pub sign: i32,
    unsigned: Arc<Vec<CyclicTerm>>,
}

impl SigmaTerm {
    /// The cyclic terms with `signed_contribution = (-1)^{|σ|} χ̃ φ(|C|)`.
    pub fn terms(&self) -> Vec<CyclicTerm> {
        self.unsigned.iter().map(|t| if self.sign < 0 { t.negated() } else { t.clone() }).collect()
    }

    pub fn total(&self) -> BigInt {
        let s: BigInt = self.unsigned.iter().map(|t| &t.signed_contribution).sum();
        s * self.sign
    }
}

/// `m_{G,N}` assembled from reduced Euler characteristics.
#[derive(Clone, Debug)]
pub struct TheoremExpansion {
    pub value: BigRational,
    /// Set when `G` is cyclic, where the expansion does not apply and the
    /// value is `m_direct` instead.
    pub fallback_direct: bool,
    /// Lattice positions of the maximal subgroups containing `N`.
    pub maximal: Vec<usize>,
    pub breakdown: Vec<SigmaTerm>,
}

/// Evaluates the Euler-characteristic expansion of `m_{G,N}` for a
/// non-cyclic `G` and proper normal `N`. Only inclusion, intersections and
/// chain counts are used; the Möbius matrix is consulted only for the
/// cyclic fallback.
pub fn theorem_expansion(lat: &SubgroupLattice, n: usize) -> Result<TheoremExpansion> {
    require_normal(lat, n)?;
    if n == lat.top() {
        return invalid("N must be a proper normal subgroup");
    }
    if lat.group().is_cyclic() {
        return Ok(TheoremExpansion {
            value: m_direct(lat, n)?,
            fallback_direct: true,
            maximal: Vec::new(),
            breakdown: Vec::new(),
        });
    }
    let hs = lat.maximal_subgroups_containing(n)?;
    let mut cache: HashMap<usize, Arc<Vec<CyclicTerm>>> = HashMap::new();
    let mut breakdown = Vec::new();
    let mut err = None;
    for_each_intersection(lat, &hs, |sigma, h| {
        let terms = match cache.get(&h) {
            Some(t) => t.clone(),
            None => match chi_tilde_for_all_cyclic(lat, h) {
                Ok(t) => {
                    let t = Arc::new(t);
                    cache.insert(h, t.clone());
                    t
                }
                Err(e) => {
                    err.get_or_insert(e);
                    Arc::new(Vec::new())
                }
            },
        };
        breakdown.push(SigmaTerm { sigma: sigma.to_vec(), h_sigma: h, sign: sign_of(sigma.len()), unsigned: terms });
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let total: BigInt = breakdown.iter().map(SigmaTerm::total).sum();
    Ok(TheoremExpansion { value: ratio(total, lat.group().order()), fallback_direct: false, maximal: hs, breakdown })
}

/// `m_{G,N} = m_{G,G} - (1/|G|) Σ_σ (-1)^{|σ|+1} M'_{G,H_σ}` with `M'`
/// from the recursion and `m_{G,G}` in closed form. Independent of the
/// Möbius matrix, and valid for cyclic `G` and for `N = G`.
pub fn m_recursive(lat: &SubgroupLattice, n: usize) -> Result<BigRational> {
    require_normal(lat, n)?;
    let base = m_self_closed_form(lat);
    if n == lat.top() {
        return Ok(base);
    }
    let hs = lat.maximal_subgroups_containing(n)?;
    let mut rec = RecursiveMPrime::new(lat);
    let mut outside = BigInt::zero();
    let mut err = None;
    for_each_intersection(lat, &hs, |sigma, h| match rec.evaluate(h) {
        Ok(r) => outside -= r.value * sign_of(sigma.len()),
        Err(e) => {
            err.get_or_insert(e);
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(base - ratio(outside, lat.group().order()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Methods {
    pub direct: bool,
    pub theorem: bool,
    pub recursive: bool,
}

impl Methods {
    pub const ALL: Methods = Methods { direct: true, theorem: true, recursive: true };

    pub fn is_empty(&self) -> bool {
        !(self.direct || self.theorem || self.recursive)
    }
}

impl std::str::FromStr for Methods {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut m = Methods { direct: false, theorem: false, recursive: false };
        for part in s.split(',').map(str::trim) {
            match part {
                "all" => m = Methods::ALL,
                "direct" => m.direct = true,
                "theorem" => m.theorem = true,
                "recursive" => m.recursive = true,
                other => return invalid(format!("unknown method `{other}`")),
            }
        }
        Ok(m)
    }
}

/// `m_{G,N}` by every requested route, with the cross-check.
#[derive(Clone, Debug)]
pub struct MgnReport {
    pub group: String,
    /// Lattice position of `N`.
    pub n: usize,
    pub n_description: String,
    pub m_direct: Option<BigRational>,
    pub m_theorem: Option<BigRational>,
    pub m_recursive: Option<BigRational>,
    /// True when the theorem route could not apply (cyclic `G` or `N = G`)
    /// and reports `m_direct` instead.
    pub theorem_fallback: bool,
    /// All computed values are equal.
    pub agreement: bool,
    pub breakdown: Vec<SigmaTerm>,
}

impl MgnReport {
    pub fn compute(lat: &SubgroupLattice, n: usize, methods: Methods) -> Result<Self> {
        if methods.is_empty() {
            return invalid("no method selected");
        }
        require_normal(lat, n)?;
        let m_direct_v = if methods.direct { Some(m_direct(lat, n)?) } else { None };
        let mut theorem_fallback = false;
        let mut breakdown = Vec::new();
        let m_theorem_v = if !methods.theorem {
            None
        } else if n == lat.top() {
            theorem_fallback = true;
            Some(match &m_direct_v {
                Some(v) => v.clone(),
                None => m_direct(lat, n)?,
            })
        } else {
            let t = theorem_expansion(lat, n)?;
            theorem_fallback = t.fallback_direct;
            breakdown = t.breakdown;
            Some(t.value)
        };
        let m_recursive_v = if methods.recursive { Some(m_recursive(lat, n)?) } else { None };

        let values: Vec<&BigRational> = [&m_direct_v, &m_theorem_v, &m_recursive_v].into_iter().flatten().collect();
        let agreement = values.windows(2).all(|w| w[0] == w[1]);
        Ok(MgnReport {
            group: lat.group().name().to_string(),
            n,
            n_description: describe(lat, n),
            m_direct: m_direct_v,
            m_theorem: m_theorem_v,
            m_recursive: m_recursive_v,
            theorem_fallback,
            agreement,
            breakdown,
        })
    }

    /// The agreed value, or the first computed one.
    pub fn value(&self) -> &BigRational {
        self.m_direct
            .as_ref()
            .or(self.m_theorem.as_ref())
            .or(self.m_recursive.as_ref())
            .expect("at least one method is computed")
    }
}

/// `m_{G,N}` by all three routes.
pub fn m_main_theorem(lat: &SubgroupLattice, n: usize) -> Result<MgnReport> {
    if n == lat.top() {
        return invalid("N must be a proper normal subgroup");
    }
    MgnReport::compute(lat, n, Methods::ALL)
}

impl fmt::Display for MgnReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<BigRational>| v.as_ref().map_or("-".to_string(), format_rational);
        write!(
            f,
            "N {}: m = {} [direct={} theorem={}{} recursive={}] agreement={}",
            self.n_description,
            format_rational(self.value()),
            show(&self.m_direct),
            show(&self.m_theorem),
            if self.theorem_fallback { " (fallback=direct)" } else { "" },
            show(&self.m_recursive),
            self.agreement
        )
    }
}
