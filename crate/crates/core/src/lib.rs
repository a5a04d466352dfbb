//! Finite soft sets over a fixed parameter list, soft elementary topologies,
//! and decision procedures for separation, compactness, subspaces, maps and
//! Baire category.
//!
//! A universe holds at most 64 points; slices are bitmasks.

pub mod baire;
pub mod compactness;
pub mod error;
pub mod io;
pub mod maps;
pub mod oracle;
pub mod separation;
pub mod soft;
pub mod subspace;
pub mod topology;

pub use error::{Error, Result};
pub use maps::SoftFunction;
pub use soft::{e_union_family, ss, SoftElement, SoftElementBag, SoftSet, Universe};
pub use topology::SoftTopology;
