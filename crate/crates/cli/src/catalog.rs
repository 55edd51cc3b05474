use std::collections::HashSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use burnside_core::GroupSpec;
use serde::Deserialize;

/// Regression pins for a catalog group.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub is_b_group: Option<bool>,
    pub beta_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: GroupSpec,
    pub expected: Expected,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: Option<String>,
    spec: String,
    #[serde(default)]
    expected: Expected,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    #[serde(default)]
    group: Vec<RawEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.name.as_str()) {
                bail!("duplicate catalog name `{}`", e.name);
            }
        }
        Ok(Catalog { entries })
    }

    /// Parses the TOML catalog format:
    ///
    /// ```toml
    /// [[group]]
    /// name = "S3"          # optional, defaults to the spec text
    /// spec = "sym:3"
    /// expected = { is_b_group = true, beta_order = 6 }
    /// ```
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawCatalog = toml::from_str(text).context("invalid catalog file")?;
        let entries = raw
            .group
            .into_iter()
            .map(|r| {
                let spec: GroupSpec = r.spec.parse().with_context(|| format!("in spec `{}`", r.spec))?;
                Ok(CatalogEntry { name: r.name.unwrap_or_else(|| spec.to_string()), spec, expected: r.expected })
            })
            .collect::<Result<Vec<_>>>()?;
        Catalog::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text)
    }

    /// `default`, `extended`, or a path to a TOML catalog.
    pub fn resolve(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(default_catalog()),
            "extended" => Ok(extended_catalog()),
            path => Self::load(Path::new(path)),
        }
    }
}

fn entry(spec: &str, expected: Expected) -> CatalogEntry {
    let spec: GroupSpec = spec.parse().expect("built-in catalog spec parses");
    CatalogEntry { name: spec.to_string(), spec, expected }
}

fn pin(is_b_group: bool, beta_order: usize) -> Expected {
    Expected { is_b_group: Some(is_b_group), beta_order: Some(beta_order) }
}

/// Cyclic groups up to 24, dihedral groups of order 6 to 24, and a spread
/// of small abelian, nilpotent, solvable and simple groups.
pub fn default_catalog() -> Catalog {
    let mut entries = Vec::new();
    entries.push(entry("cyclic:1", pin(true, 1)));
    for n in 2..=24 {
        entries.push(entry(&format!("cyclic:{n}"), pin(false, 1)));
    }
    for n in (6..=24).step_by(2) {
        entries.push(entry(&format!("dihedral:{n}"), Expected::default()));
    }
    entries.push(entry("sym:3", pin(true, 6)));
    entries.push(entry("sym:4", Expected::default()));
    entries.push(entry("alt:4", Expected::default()));
    entries.push(entry("alt:5", pin(true, 60)));
    entries.push(entry("quaternion:8", Expected::default()));
    entries.push(entry("elab:2:2", pin(true, 4)));
    entries.push(entry("elab:2:3", Expected::default()));
    entries.push(entry("elab:3:2", pin(true, 9)));
    entries.push(entry("product:cyclic:2,cyclic:4", Expected::default()));
    entries.push(entry("product:cyclic:2,cyclic:6", Expected::default()));
    entries.push(entry("product:cyclic:3,cyclic:3", pin(true, 9)));
    entries.push(entry("product:sym:3,cyclic:2", Expected::default()));
    entries.push(entry("product:dihedral:8,cyclic:2", Expected::default()));
    Catalog::new(entries).expect("built-in names are unique")
}

/// Additional non-cyclic groups, mostly of order 25 to 48.
pub fn extra_groups() -> Vec<CatalogEntry> {
    [
        "elab:2:4",
        "product:cyclic:4,cyclic:4",
        "product:quaternion:8,cyclic:2",
        "product:alt:4,cyclic:2",
        "product:quaternion:8,cyclic:3",
        "product:sym:3,cyclic:3",
        "dihedral:28",
        "dihedral:30",
        "dihedral:32",
        "product:dihedral:8,elab:2:2",
        "product:quaternion:8,elab:2:2",
        "product:cyclic:3,cyclic:9",
        "product:sym:3,sym:3",
        "product:alt:4,cyclic:3",
        "dihedral:36",
        "product:sym:3,cyclic:6",
        "dihedral:40",
        "product:dihedral:10,cyclic:4",
        "product:sym:4,cyclic:2",
        "product:alt:4,cyclic:4",
        "dihedral:48",
    ]
    .into_iter()
    .map(|s| entry(s, Expected::default()))
    .collect()
}

pub fn extended_catalog() -> Catalog {
    let mut entries = default_catalog().entries;
    entries.extend(extra_groups());
    Catalog::new(entries).expect("built-in names are unique")
}
