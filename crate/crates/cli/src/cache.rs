use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use burnside_core::{GroupTable, SubgroupLattice};

/// On-disk store of computed lattices, one file per group name.
#[derive(Clone, Debug, Default)]
pub struct LatticeCache {
    dir: Option<PathBuf>,
}

impl LatticeCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        LatticeCache { dir }
    }

    pub fn disabled() -> Self {
        LatticeCache { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(&self, group_name: &str) -> Option<PathBuf> {
        let file: String =
            group_name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
        self.dir.as_ref().map(|d| d.join(format!("{file}.lattice")))
    }

    /// Loads the cached lattice for `group`, if there is a readable one.
    pub fn load(&self, group: &Arc<GroupTable>) -> Option<SubgroupLattice> {
        let path = self.path_for(group.name())?;
        let file = fs::File::open(path).ok()?;
        SubgroupLattice::read_cache(group.clone(), BufReader::new(file)).ok()
    }

    pub fn store(&self, lat: &SubgroupLattice) -> Result<Option<PathBuf>> {
        let Some(path) = self.path_for(lat.group().name()) else {
            return Ok(None);
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        let tmp = path.with_extension("lattice.tmp");
        let file = fs::File::create(&tmp).with_context(|| format!("writing {}", tmp.display()))?;
        lat.write_cache(BufWriter::new(file))?;
        fs::rename(&tmp, &path)?;
        Ok(Some(path))
    }

    /// Cached lattice if present and valid, otherwise a freshly built one
    /// (written back when caching is enabled).
    pub fn load_or_build(&self, group: Arc<GroupTable>) -> Result<SubgroupLattice> {
        if let Some(lat) = self.load(&group) {
            return Ok(lat);
        }
        let lat = SubgroupLattice::build(group);
        self.store(&lat)?;
        Ok(lat)
    }

    pub fn entries(&self) -> Result<Vec<PathBuf>> {
        let Some(dir) = &self.dir else {
            return Ok(Vec::new());
        };
        if !dir.exists() {
            return Ok(Vec::new());
        }
        let mut v: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "lattice"))
            .collect();
        v.sort();
        Ok(v)
    }

    pub fn clear(&self) -> Result<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}
