//! Command-line front end for `burnside-core`: group catalogs, the lattice
//! cache and the cross-verification sweep.

pub mod cache;
pub mod catalog;
pub mod verify;

use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use burnside_core::SubgroupLattice;

/// Chooses normal subgroups on the command line.
///
/// `order=k,index=j` is the `j`-th subgroup of order `k` (0-based) in the
/// lattice's canonical order: by order, then by the element bitset read as a
/// binary number. `index` defaults to 0. `all` is every proper normal subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NSelector {
    All,
    Pick { order: usize, index: usize },
}

impl FromStr for NSelector {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(NSelector::All);
        }
        let (mut order, mut index) = (None, 0);
        for part in s.split(',').map(str::trim) {
            let (key, value) = part.split_once('=').ok_or_else(|| anyhow!("expected key=value, got `{part}`"))?;
            let value: usize = value.trim().parse().map_err(|_| anyhow!("`{value}` is not a number"))?;
            match key.trim() {
                "order" => order = Some(value),
                "index" => index = value,
                other => bail!("unknown selector key `{other}`"),
            }
        }
        let order = order.ok_or_else(|| anyhow!("selector needs order=k"))?;
        Ok(NSelector::Pick { order, index })
    }
}

impl NSelector {
    /// Lattice positions selected. Normality is not checked here.
    pub fn resolve(&self, lat: &SubgroupLattice) -> Result<Vec<usize>> {
        match *self {
            NSelector::All => Ok(lat.normal_subgroups().into_iter().filter(|&n| n != lat.top()).collect()),
            NSelector::Pick { order, index } => lat
                .select(order, index)
                .map(|n| vec![n])
                .ok_or_else(|| anyhow!("no subgroup with order={order},index={index}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn selectors() {
        assert_eq!("all".parse::<NSelector>().unwrap(), NSelector::All);
        assert_eq!("order=3".parse::<NSelector>().unwrap(), NSelector::Pick { order: 3, index: 0 });
        assert_eq!("order=2,index=1".parse::<NSelector>().unwrap(), NSelector::Pick { order: 2, index: 1 });
        for bad in ["index=1", "order=x", "size=2", "order"] {
            assert!(bad.parse::<NSelector>().is_err(), "{bad}");
        }
    }

    #[test]
    fn resolve_klein() {
        let g = "elab:2:2".parse::<burnside_core::GroupSpec>().unwrap().build().unwrap();
        let lat = SubgroupLattice::build(Arc::new(g));
        assert_eq!(NSelector::All.resolve(&lat).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(NSelector::Pick { order: 2, index: 2 }.resolve(&lat).unwrap(), vec![3]);
        assert!(NSelector::Pick { order: 2, index: 3 }.resolve(&lat).is_err());
    }
}
