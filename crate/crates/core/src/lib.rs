//! Exact computation of Bouc's invariant `m_{G,N}` for finite groups given
//! by Cayley tables, together with the subgroup-lattice, poset-topology and
//! B-group machinery it rests on.
//!
//! ```
//! use std::sync::Arc;
//! use burnside_core::{mgn, GroupSpec, SubgroupLattice};
//!
//! let g: GroupSpec = "sym:3".parse().unwrap();
//! let lat = SubgroupLattice::build(Arc::new(g.build().unwrap()));
//! let a3 = lat.select(3, 0).unwrap();
//! let report = mgn::m_main_theorem(&lat, a3).unwrap();
//! assert!(report.agreement);
//! assert_eq!(mgn::format_rational(report.value()), "0/1");
//! ```

pub mod bgroup;
pub mod bitset;
pub mod error;
pub mod group;
pub mod lattice;
pub mod mgn;
pub mod spec;
pub mod topology;

pub use error::{Error, Result};
pub use group::GroupTable;
pub use lattice::{Subgroup, SubgroupLattice};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use spec::GroupSpec;
