//! The cross-verification sweep: every method on every (group, proper normal
//! subgroup) pair of a catalog, plus the per-group invariant checks.

use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::Result;
use burnside_core::bgroup::{self, beta, is_b_group, is_b_group_full, is_cyclic_mod_p_in, quotient_group};
use burnside_core::lattice::IncidenceMatrix;
use burnside_core::mgn::{self, format_rational, Methods, MgnReport};
use burnside_core::topology::{chi_tilde_for_all_cyclic, TPoset};
use burnside_core::{BigInt, BigRational, GroupTable, SubgroupLattice};
use rayon::prelude::*;

use crate::cache::LatticeCache;
use crate::catalog::{Catalog, CatalogEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Human,
    Tsv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_group_order: usize,
    pub methods: Methods,
    pub cache: LatticeCache,
    pub jobs: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_group_order: 48,
            methods: Methods::ALL,
            cache: LatticeCache::disabled(),
            jobs: 1,
            format: OutputFormat::Tsv,
        }
    }
}

/// Largest `--max-order` accepted by the sweep.
pub const MAX_SWEEP_ORDER: usize = 512;

/// Subgroups of groups up to this order are all checked against the
/// Euler-characteristic and recursive forms of `M'`; above it only normal ones.
pub const ALL_SUBGROUP_CHECK_ORDER: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub group: String,
    pub order: usize,
    pub n_order: usize,
    pub n_index: usize,
    pub m_direct: Option<BigRational>,
    pub m_theorem: Option<BigRational>,
    pub theorem_fallback: bool,
    pub m_recursive: Option<BigRational>,
    pub agree: bool,
}

impl Row {
    pub fn from_report(lat: &SubgroupLattice, r: &MgnReport) -> Self {
        Row {
            group: lat.group().name().to_string(),
            order: lat.group().order(),
            n_order: lat.subgroup(r.n).order(),
            n_index: lat.rank_within_order(r.n),
            m_direct: r.m_direct.clone(),
            m_theorem: r.m_theorem.clone(),
            theorem_fallback: r.theorem_fallback,
            m_recursive: r.m_recursive.clone(),
            agree: r.agreement,
        }
    }

    pub fn tsv(&self) -> String {
        let show = |v: &Option<BigRational>| v.as_ref().map_or("-".to_string(), format_rational);
        let theorem = if self.theorem_fallback && self.m_theorem.is_some() {
            "fallback=direct".to_string()
        } else {
            show(&self.m_theorem)
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.group,
            self.order,
            self.n_order,
            self.n_index,
            show(&self.m_direct),
            theorem,
            show(&self.m_recursive),
            self.agree
        )
    }
}

pub const TSV_HEADER: &str = "group\torder\tN_order\tN_index\tm_direct\tm_theorem\tm_recursive\tagree";

#[derive(Clone, Debug, Default)]
pub struct GroupOutcome {
    pub name: String,
    pub order: usize,
    pub rows: Vec<Row>,
    /// Broken invariants; any entry fails the sweep.
    pub failures: Vec<String>,
    /// Noteworthy but non-fatal observations.
    pub findings: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub groups: Vec<GroupOutcome>,
    /// Catalog entries above the order limit.
    pub skipped: Vec<String>,
}

impl VerifyReport {
    pub fn rows(&self) -> impl Iterator<Item = &Row> {
        self.groups.iter().flat_map(|g| &g.rows)
    }

    pub fn failures(&self) -> Vec<String> {
        self.groups.iter().flat_map(|g| g.failures.iter().map(move |f| format!("{}: {f}", g.name))).collect()
    }

    pub fn findings(&self) -> Vec<String> {
        self.groups.iter().flat_map(|g| g.findings.iter().map(move |f| format!("{}: {f}", g.name))).collect()
    }

    pub fn passed(&self) -> bool {
        self.groups.iter().all(|g| g.failures.is_empty() && g.rows.iter().all(|r| r.agree))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(TSV_HEADER);
        out.push('\n');
        for r in self.rows() {
            out.push_str(&r.tsv());
            out.push('\n');
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let _ = writeln!(out, "{} (order {}): {} normal subgroups checked", g.name, g.order, g.rows.len());
            for r in &g.rows {
                let _ = writeln!(
                    out,
                    "  N order={},index={}: m = {} agree={}",
                    r.n_order,
                    r.n_index,
                    r.m_direct
                        .as_ref()
                        .or(r.m_theorem.as_ref())
                        .or(r.m_recursive.as_ref())
                        .map_or("-".into(), format_rational),
                    r.agree
                );
            }
            for f in &g.failures {
                let _ = writeln!(out, "  FAIL {f}");
            }
            for f in &g.findings {
                let _ = writeln!(out, "  note {f}");
            }
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Tsv => self.to_tsv(),
            OutputFormat::Human => self.to_human(),
        }
    }
}

/// Runs the sweep on a worker pool of `config.jobs` threads. Output order
/// follows the catalog regardless of scheduling.
pub fn run(catalog: &Catalog, config: &RunConfig) -> Result<VerifyReport> {
    if config.methods.is_empty() {
        anyhow::bail!("no method selected");
    }
    if config.max_group_order > MAX_SWEEP_ORDER {
        anyhow::bail!("--max-order may not exceed {MAX_SWEEP_ORDER}");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build()?;
    let outcomes: Vec<Option<GroupOutcome>> =
        pool.install(|| catalog.entries.par_iter().map(|e| verify_entry(e, config)).collect());
    let mut report = VerifyReport::default();
    for (entry, outcome) in catalog.entries.iter().zip(outcomes) {
        match outcome {
            Some(o) => report.groups.push(o),
            None => report.skipped.push(entry.name.clone()),
        }
    }
    Ok(report)
}

fn verify_entry(entry: &CatalogEntry, config: &RunConfig) -> Option<GroupOutcome> {
    let mut out = GroupOutcome { name: entry.name.clone(), ..GroupOutcome::default() };
    let table = match entry.spec.build_with_cap(config.max_group_order) {
        Ok(t) => t,
        Err(burnside_core::Error::SizeLimit { .. }) => return None,
        Err(e) => {
            out.failures.push(format!("cannot build group: {e}"));
            return Some(out);
        }
    };
    out.order = table.order();
    let lat = match config.cache.load_or_build(Arc::new(table)) {
        Ok(l) => l,
        Err(e) => {
            out.failures.push(format!("lattice cache: {e}"));
            return Some(out);
        }
    };

    let proper_normal: Vec<usize> = lat.normal_subgroups().into_iter().filter(|&n| n != lat.top()).collect();
    let reports: Vec<std::result::Result<MgnReport, String>> = proper_normal
        .par_iter()
        .map(|&n| {
            let methods = methods_within_cover_cap(&lat, n, config.methods);
            MgnReport::compute(&lat, n, methods).map_err(|e| format!("{}: {e}", mgn::describe(&lat, n)))
        })
        .collect();
    for &n in &proper_normal {
        if methods_within_cover_cap(&lat, n, config.methods) != config.methods {
            out.findings.push(format!(
                "more than {} maximal subgroups contain {}; only the direct method was run",
                mgn::MAX_COVER_SIZE,
                mgn::describe(&lat, n)
            ));
        }
    }
    for r in reports {
        match r {
            Ok(r) => {
                if !r.agreement {
                    out.failures.push(format!("methods disagree: {r}"));
                }
                out.rows.push(Row { group: entry.name.clone(), ..Row::from_report(&lat, &r) });
            }
            Err(e) => out.failures.push(e),
        }
    }

    let mut checks = Checks { lat: &lat, failures: Vec::new(), findings: Vec::new() };
    checks.run(entry);
    out.failures.extend(checks.failures);
    out.findings.extend(checks.findings);
    Some(out)
}

/// The expansion routes enumerate subsets of the maximal subgroups above
/// `N`; past the cap only the direct method is kept.
fn methods_within_cover_cap(lat: &SubgroupLattice, n: usize, methods: Methods) -> Methods {
    let cover = lat.maximal_subgroups_containing(n).map_or(0, |h| h.len());
    if cover > mgn::MAX_COVER_SIZE {
        Methods { direct: true, theorem: false, recursive: false }
    } else {
        methods
    }
}

struct Checks<'a> {
    lat: &'a SubgroupLattice,
    failures: Vec<String>,
    findings: Vec<String>,
}

impl Checks<'_> {
    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn run(&mut self, entry: &CatalogEntry) {
        self.incidence();
        if let Err(e) = self.values() {
            self.fail(e.to_string());
        }
        if let Err(e) = self.b_groups(entry) {
            self.fail(e.to_string());
        }
    }

    fn incidence(&mut self) {
        let lat = self.lat;
        let (Ok(zeta), Ok(mu)) = (lat.zeta(), lat.mobius()) else {
            self.fail("incidence matrices missing");
            return;
        };
        let id = IncidenceMatrix::identity(lat.len());
        if zeta.product(mu) != id || mu.product(zeta) != id {
            self.fail("zeta and mobius are not mutually inverse");
        }
        let top = lat.top();
        for x in 0..lat.len() {
            for y in 0..lat.len() {
                if zeta.get(x, y) == 0 && mu.get(x, y) != 0 {
                    self.fail(format!("mobius nonzero outside inclusion at ({x}, {y})"));
                }
            }
            if x != top {
                let s: i64 = (x..=top).filter(|&y| lat.contains(x, y)).map(|y| mu.get(x, y)).sum();
                if s != 0 {
                    self.fail(format!("interval sum of mobius from {} is {s}", mgn::describe(lat, x)));
                }
            }
        }
        let g = lat.group();
        if g.is_cyclic() {
            let divisors = (1..=g.order()).filter(|d| g.order().is_multiple_of(*d)).count();
            if divisors != lat.len() {
                self.fail(format!("cyclic group with {} subgroups, expected {divisors}", lat.len()));
            }
        }
    }

    fn values(&mut self) -> burnside_core::Result<()> {
        let lat = self.lat;
        let g = lat.group();
        let m_self = mgn::m_self(lat)?;
        if m_self != mgn::m_self_closed_form(lat) {
            self.fail(format!("m(G,G) = {}, closed form disagrees", format_rational(&m_self)));
        }
        if mgn::m_direct(lat, 0)? != BigRational::from_integer(1.into()) {
            self.fail("m(G,1) != 1");
        }

        let hs: Vec<usize> = if g.order() <= ALL_SUBGROUP_CHECK_ORDER {
            (0..lat.top()).collect()
        } else {
            lat.normal_subgroups().into_iter().filter(|&n| n != lat.top()).collect()
        };
        let mut rec = mgn::RecursiveMPrime::new(lat);
        for h in hs {
            let direct = mgn::big_m_prime_direct(lat, h)?;
            let topo: BigInt = chi_tilde_for_all_cyclic(lat, h)?.iter().map(|t| &t.signed_contribution).sum();
            let recursive = rec.evaluate(h)?.value;
            if direct != topo || direct != recursive {
                self.fail(format!(
                    "M' mismatch at H = {}: direct {direct}, euler {topo}, recursive {recursive}",
                    mgn::describe(lat, h)
                ));
            }
        }

        for n in lat.normal_subgroups() {
            let m = mgn::m_direct(lat, n)?;
            let outside = mgn::sum_outside_supplements(lat, n)?;
            if &m + BigRational::new(outside, BigInt::from(g.order())) != m_self {
                self.fail(format!("complement identity fails at N = {}", mgn::describe(lat, n)));
            }
            self.prime_index_contractible_case(n, &m)?;
        }
        Ok(())
    }

    /// Index-p normal subgroups whose posets all have vanishing reduced Euler
    /// characteristic must have m = 0.
    fn prime_index_contractible_case(&mut self, n: usize, m: &BigRational) -> burnside_core::Result<()> {
        let lat = self.lat;
        let g = lat.group();
        if n == lat.top() || g.is_cyclic() {
            return Ok(());
        }
        let index = g.order() / lat.subgroup(n).order();
        if !burnside_core::group::is_prime(index as u64) {
            return Ok(());
        }
        let mut all_zero = true;
        for c in (0..=n).filter(|&c| lat.is_cyclic(c) && lat.contains(c, n)) {
            let p = TPoset::build(lat, c, n)?;
            if p.is_cone() && p.count_chains().chi_tilde != BigInt::from(0) {
                self.fail("cone poset with nonzero reduced Euler characteristic");
            }
            if p.count_chains().chi_tilde != BigInt::from(0) {
                all_zero = false;
            }
        }
        if all_zero && *m != BigRational::from_integer(0.into()) {
            self.fail(format!("all posets acyclic but m != 0 at N = {}", mgn::describe(lat, n)));
        }
        Ok(())
    }

    fn b_groups(&mut self, entry: &CatalogEntry) -> burnside_core::Result<()> {
        let lat = self.lat;
        let g = lat.group();
        let verdict = is_b_group_full(lat)?;
        let b = beta(lat)?;
        if let Some(exp) = entry.expected.is_b_group {
            if exp != verdict {
                self.fail(format!("expected is_b_group = {exp}, got {verdict}"));
            }
        }
        if let Some(exp) = entry.expected.beta_order {
            if exp != b.beta.order() {
                self.fail(format!("expected beta order {exp}, got {}", b.beta.order()));
            }
        }
        let beta_lat = SubgroupLattice::build(Arc::new(b.beta.clone()));
        if !is_b_group(&beta_lat)? {
            self.fail("beta(G) is not a B-group");
        }
        if bgroup::is_solvable(g) && bgroup::is_nilpotent(g) != bgroup::is_nilpotent(&b.beta) {
            self.fail("nilpotency of beta(G) differs from G");
        }
        for p in [2, 3, 5] {
            if is_cyclic_mod_p_in(lat, p)? != is_cyclic_mod_p_in(&beta_lat, p)? {
                self.fail(format!("cyclic-mod-{p} differs between G and beta(G)"));
            }
        }
        for m in lat.normal_subgroups() {
            let nonzero = b.all_nonzero.iter().any(|(k, _)| *k == m);
            let q = quotient_group(g, lat.subgroup(m))?;
            let q_beta = beta(&SubgroupLattice::build(Arc::new(q)))?.beta;
            let same = bgroup::are_isomorphic(&b.beta, &q_beta);
            if nonzero != same {
                self.findings.push(format!(
                    "m(G,M) != 0 is {nonzero} but beta(G) ~ beta(G/M) is {same} for M = {}",
                    mgn::describe(lat, m)
                ));
            }
        }
        Ok(())
    }
}

/// Builds a group and lattice outside the sweep, honouring the cache.
pub fn lattice_for(table: GroupTable, cache: &LatticeCache) -> Result<SubgroupLattice> {
    cache.load_or_build(Arc::new(table))
}
