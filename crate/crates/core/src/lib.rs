//! Normalizers, one-sided normalizers and double cosets for subgroup pairs
//! `H ⊆ G`, plus the group algebra of finite groups.

pub mod algebra;
pub mod bimodule;
pub mod catalog;
pub mod definition;
pub mod error;
pub mod group;
pub mod report;
pub mod subgroup;

pub use error::{Error, Result};
pub use group::{reduce_word, Ball, Dihedral, Element, FiniteGroup, GroupSpec, IndexWindow, Word, DEFAULT_ELEMENT_CAP};
pub use subgroup::{SubgroupKind, SubgroupOracle};
