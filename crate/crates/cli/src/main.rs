use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use burnside_cli::cache::LatticeCache;
use burnside_cli::catalog::Catalog;
use burnside_cli::verify::{self, OutputFormat, Row, RunConfig, TSV_HEADER};
use burnside_cli::NSelector;
use burnside_core::bgroup::{are_isomorphic, beta, is_b_group_full};
use burnside_core::mgn::{self, format_rational, Methods, MgnReport};
use burnside_core::{GroupSpec, GroupTable, SubgroupLattice};
use clap::{Parser, Subcommand};

/// Exact computation of Bouc's invariant m(G,N), B-groups and beta(G) for
/// small finite groups.
///
/// Group specs: cyclic:N, dihedral:N (N = group order), sym:N, alt:N,
/// quaternion:8, elab:P:K, product:<spec>,<spec>, perm:(1 2 3)(4 5);(1 2).
#[derive(Parser)]
#[command(name = "burnside", version)]
struct Cli {
    /// Directory for cached subgroup lattices.
    #[arg(long, global = true, env = "BURNSIDE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Subgroup lattice summary.
    Lattice {
        spec: GroupSpec,
        /// List every subgroup.
        #[arg(long)]
        list: bool,
    },
    /// m(G,N) for one or all normal subgroups.
    Mgn {
        spec: GroupSpec,
        /// `order=k[,index=j]` (j-th subgroup of order k, 0-based, in canonical
        /// lattice order: by order, then by element bitset) or `all`
        /// (every proper normal subgroup).
        #[arg(long = "N", value_name = "SELECTOR")]
        n: NSelector,
        /// direct, theorem, recursive, or all; comma-separated.
        #[arg(long, default_value = "all")]
        methods: Methods,
        /// Print every (sigma, C) term of the Euler-characteristic expansion.
        #[arg(long)]
        breakdown: bool,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
    /// B-group verdict and beta(G).
    Bgroup { spec: GroupSpec },
    /// beta(G) with every normal subgroup of nonzero m.
    Beta { spec: GroupSpec },
    /// Check all methods and invariants over a catalog.
    Verify {
        /// `default`, `extended`, or a TOML catalog file.
        #[arg(long, default_value = "default")]
        catalog: String,
        #[arg(long, default_value_t = 48)]
        max_order: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "all")]
        methods: Methods,
        #[arg(long, value_enum, default_value = "tsv")]
        format: OutputFormat,
    },
    /// Manage the lattice cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Build and store lattices for a catalog.
    Build {
        #[arg(long, default_value = "default")]
        catalog: String,
        #[arg(long, default_value_t = 48)]
        max_order: usize,
    },
    List,
    Clear,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = LatticeCache::new(cli.cache_dir);
    match run(cli.command, &cache) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn lattice_of(spec: &GroupSpec, cache: &LatticeCache) -> Result<SubgroupLattice> {
    let table = spec.build().with_context(|| format!("building {spec}"))?;
    cache.load_or_build(Arc::new(table))
}

fn run(command: Command, cache: &LatticeCache) -> Result<ExitCode> {
    match command {
        Command::Lattice { spec, list } => cmd_lattice(&lattice_of(&spec, cache)?, list, cache),
        Command::Mgn { spec, n, methods, breakdown, format } => {
            cmd_mgn(&lattice_of(&spec, cache)?, n, methods, breakdown, format)
        }
        Command::Bgroup { spec } => cmd_bgroup(&lattice_of(&spec, cache)?),
        Command::Beta { spec } => cmd_beta(&lattice_of(&spec, cache)?),
        Command::Verify { catalog, max_order, jobs, methods, format } => {
            let catalog = Catalog::resolve(&catalog)?;
            let config = RunConfig { max_group_order: max_order, methods, cache: cache.clone(), jobs, format };
            let report = verify::run(&catalog, &config)?;
            print!("{}", report.render(format));
            for f in report.findings() {
                eprintln!("note: {f}");
            }
            for f in report.failures() {
                eprintln!("FAIL: {f}");
            }
            let rows = report.rows().count();
            eprintln!(
                "{} groups, {rows} rows, {} skipped above order {max_order}, {} failures",
                report.groups.len(),
                report.skipped.len(),
                report.failures().len()
            );
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Cache { action } => cmd_cache(action, cache),
    }
}

fn cmd_lattice(lat: &SubgroupLattice, list: bool, cache: &LatticeCache) -> Result<ExitCode> {
    let n = lat.len();
    println!("{n} {}", if n == 1 { "subgroup" } else { "subgroups" });
    let mut histogram: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for i in 0..n {
        let e = histogram.entry(lat.subgroup(i).order()).or_default();
        e.0 += 1;
        e.1 += lat.is_normal(i) as usize;
        e.2 += lat.is_maximal(i) as usize;
    }
    for (order, (count, normal, maximal)) in histogram {
        println!("order {order}: {count} (normal {normal}, maximal {maximal})");
    }
    if list {
        for i in 0..n {
            let mut flags = Vec::new();
            if lat.is_normal(i) {
                flags.push("normal");
            }
            if lat.is_maximal(i) {
                flags.push("maximal");
            }
            if lat.is_cyclic(i) {
                flags.push("cyclic");
            }
            println!("{} {}", mgn::describe(lat, i), flags.join(" "));
        }
    }
    if let Some(path) = cache.path_for(lat.group().name()) {
        eprintln!("cached at {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_mgn(
    lat: &SubgroupLattice,
    selector: NSelector,
    methods: Methods,
    breakdown: bool,
    format: OutputFormat,
) -> Result<ExitCode> {
    if methods.is_empty() {
        bail!("no method selected");
    }
    let mut ok = true;
    if format == OutputFormat::Tsv {
        println!("{TSV_HEADER}");
    }
    for n in selector.resolve(lat)? {
        let report = MgnReport::compute(lat, n, methods)?;
        ok &= report.agreement;
        match format {
            OutputFormat::Tsv => println!("{}", Row::from_report(lat, &report).tsv()),
            OutputFormat::Human => println!("{report}"),
        }
        if breakdown {
            print_breakdown(lat, &report);
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn print_breakdown(lat: &SubgroupLattice, report: &MgnReport) {
    for s in &report.breakdown {
        let sigma: Vec<String> = s.sigma.iter().map(usize::to_string).collect();
        println!(
            "  sigma {{{}}} H_sigma {} sign {} total {}",
            sigma.join(","),
            mgn::describe(lat, s.h_sigma),
            s.sign,
            s.total()
        );
        for t in s.terms() {
            println!(
                "    C {} phi {} chi_tilde {} contribution {}",
                mgn::describe(lat, t.c),
                t.phi,
                t.chi_tilde,
                t.signed_contribution
            );
        }
    }
}

/// Name of a built-in catalog group isomorphic to `g`, if any.
fn catalog_name(g: &GroupTable) -> Option<String> {
    Catalog::resolve("extended").ok()?.entries.into_iter().find_map(|e| {
        let t = e.spec.build_with_cap(g.order()).ok()?;
        (t.order() == g.order() && are_isomorphic(&t, g)).then_some(e.name)
    })
}

fn describe_beta(lat: &SubgroupLattice, chosen: usize, beta: &GroupTable) -> String {
    if chosen == lat.trivial() {
        "G".to_string()
    } else if chosen == lat.top() {
        "trivial".to_string()
    } else {
        let mut s = format!("G/N, order {}", beta.order());
        if let Some(name) = catalog_name(beta) {
            s.push_str(&format!(" (isomorphic to {name})"));
        }
        s
    }
}

fn cmd_bgroup(lat: &SubgroupLattice) -> Result<ExitCode> {
    let verdict = is_b_group_full(lat)?;
    let b = beta(lat)?;
    println!("B-group: {}; beta = {}", if verdict { "yes" } else { "no" }, describe_beta(lat, b.chosen, &b.beta));
    println!("chosen N: {}", mgn::describe(lat, b.chosen));
    let matched = catalog_name(&b.beta).map_or(String::new(), |n| format!(" ({n})"));
    println!("beta order: {}{matched}", b.beta.order());
    Ok(ExitCode::SUCCESS)
}

fn cmd_beta(lat: &SubgroupLattice) -> Result<ExitCode> {
    let b = beta(lat)?;
    println!("beta = {}", describe_beta(lat, b.chosen, &b.beta));
    for (n, m) in &b.all_nonzero {
        let tag = if b.maximal_nonzero.contains(n) { " maximal" } else { "" };
        println!("N {}: m = {}{tag}", mgn::describe(lat, *n), format_rational(m));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cache(action: CacheAction, cache: &LatticeCache) -> Result<ExitCode> {
    let Some(dir) = cache.dir() else {
        bail!("no cache directory; pass --cache-dir or set BURNSIDE_CACHE_DIR");
    };
    match action {
        CacheAction::Build { catalog, max_order } => {
            let catalog = Catalog::resolve(&catalog)?;
            let mut built = 0;
            for e in &catalog.entries {
                let Ok(table) = e.spec.build_with_cap(max_order) else {
                    continue;
                };
                let lat = SubgroupLattice::build(Arc::new(table));
                cache.store(&lat)?;
                built += 1;
            }
            println!("{built} lattices written to {}", dir.display());
        }
        CacheAction::List => {
            for p in cache.entries()? {
                println!("{}", p.display());
            }
        }
        CacheAction::Clear => println!("{} entries removed", cache.clear()?),
    }
    Ok(ExitCode::SUCCESS)
}
