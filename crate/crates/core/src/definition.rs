//! JSON group and subgroup definitions.
//!
//! ```json
//! { "family": "permutations", "degree": 3, "generators": ["(12)", "(123)"],
//!   "subgroup": { "kind": "generated", "generators": ["(123)"] } }
//! ```
//!
//! The schema is `docs/schema/group.schema.json`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::group::{finite, FiniteGroup, GroupSpec, IndexWindow};
use crate::subgroup::{SubgroupKind, SubgroupOracle};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowDefinition {
    pub lo: i64,
    pub hi: i64,
}

impl WindowDefinition {
    fn build(w: &Option<WindowDefinition>, default: IndexWindow) -> Result<IndexWindow> {
        match w {
            Some(w) => IndexWindow::new(w.lo, w.hi),
            None => Ok(default),
        }
    }
}

/// A permutation as 1-based cycle notation or as the list of images of
/// `0..degree`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Permutation {
    Cycles(String),
    Images(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupDefinition {
    /// Multiplication table: `table[a][b]` is the index of `ab`.
    Finite {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        identity: usize,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Permutations {
        degree: usize,
        generators: Vec<Permutation>,
    },
    /// A built-in finite group by name.
    Builtin {
        name: String,
    },
    Free {
        rank: usize,
    },
    FreeInfinite {
        #[serde(default)]
        window: Option<WindowDefinition>,
    },
    FreeByZ {
        #[serde(default)]
        window: Option<WindowDefinition>,
    },
    Ex74 {
        #[serde(default)]
        window: Option<WindowDefinition>,
    },
    Product {
        left: Box<GroupDefinition>,
        right: Box<GroupDefinition>,
    },
}

/// An element of a finite group by index or label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupDefinition {
    /// Explicit element indices; must already be a subgroup.
    Elements {
        elements: Vec<usize>,
    },
    /// Subgroup of a finite group generated by the listed elements.
    Generated {
        generators: Vec<ElementRef>,
    },
    /// A catalog selector such as `A3`, `trivial` or `whole`.
    Named {
        name: String,
    },
    FreeFactor {
        letters: Vec<i64>,
    },
    /// Words over `letters` whose weighted exponent sum is `0 mod modulus`;
    /// `weights` lists `[letter, weight]` pairs, missing letters weigh 0.
    FreeFactorKernel {
        letters: Vec<i64>,
        weights: Vec<(i64, i64)>,
        modulus: i64,
    },
    Hn {
        n: i64,
    },
    Ex74,
    Product {
        left: Box<SubgroupDefinition>,
        right: Box<SubgroupDefinition>,
    },
}

/// A group definition file: the group fields plus an optional `subgroup`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDocument {
    #[serde(flatten)]
    pub group: GroupDefinition,
    #[serde(default)]
    pub subgroup: Option<SubgroupDefinition>,
}

impl GroupDefinition {
    pub fn build(&self) -> Result<GroupSpec> {
        Ok(match self {
            GroupDefinition::Finite {
                table,
                identity,
                labels,
            } => GroupSpec::finite(FiniteGroup::from_table(table.clone(), *identity, labels.clone())?),
            GroupDefinition::Permutations { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|p| match p {
                        Permutation::Cycles(s) => finite::parse_cycles(s, *degree),
                        Permutation::Images(v) => Ok(v.clone()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupSpec::finite(FiniteGroup::from_permutations(*degree, &gens)?)
            }
            GroupDefinition::Builtin { name } => catalog::finite_group(name)?,
            GroupDefinition::Free { rank } => GroupSpec::free(*rank),
            GroupDefinition::FreeInfinite { window } => {
                GroupSpec::free_infinite(WindowDefinition::build(window, IndexWindow::DEFAULT)?)
            }
            GroupDefinition::FreeByZ { window } => {
                GroupSpec::free_by_z(WindowDefinition::build(window, IndexWindow::DEFAULT)?)
            }
            GroupDefinition::Ex74 { window } => GroupSpec::ex74(WindowDefinition::build(window, catalog::EX74_WINDOW)?),
            GroupDefinition::Product { left, right } => GroupSpec::product(left.build()?, right.build()?),
        })
    }
}

impl SubgroupDefinition {
    pub fn build(&self, group: &GroupSpec) -> Result<SubgroupOracle> {
        match self {
            SubgroupDefinition::Elements { elements } => SubgroupOracle::finite(group, elements.iter().copied()),
            SubgroupDefinition::Generated { generators } => {
                let g = group
                    .as_finite()
                    .ok_or_else(|| Error::Unsupported("generated subgroups need a finite group".into()))?;
                let idx = generators
                    .iter()
                    .map(|r| match r {
                        ElementRef::Index(i) => Ok(*i),
                        ElementRef::Label(l) => g
                            .find_label(l)
                            .ok_or_else(|| Error::UnknownName(format!("element {l:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                SubgroupOracle::finite_generated(group, idx)
            }
            SubgroupDefinition::Named { name } => catalog::finite_subgroup(group, name),
            SubgroupDefinition::FreeFactor { letters } => SubgroupOracle::free_factor(group, letters.iter().copied()),
            SubgroupDefinition::FreeFactorKernel {
                letters,
                weights,
                modulus,
            } => SubgroupOracle::new(
                group,
                SubgroupKind::FreeFactorKernel {
                    letters: letters.iter().copied().collect(),
                    weights: weights.iter().copied().collect(),
                    modulus: *modulus,
                },
            ),
            SubgroupDefinition::Hn { n } => SubgroupOracle::hn(group, *n),
            SubgroupDefinition::Ex74 => SubgroupOracle::ex74(group),
            SubgroupDefinition::Product { left, right } => {
                let (g1, g2) = group
                    .components()
                    .ok_or_else(|| Error::Unsupported("product subgroup of a non-product group".into()))?;
                SubgroupOracle::product(group, left.build(g1)?, right.build(g2)?)
            }
        }
    }
}

impl GroupDocument {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Definition(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Definition(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The group, and the subgroup if one is given.
    pub fn build(&self) -> Result<(GroupSpec, Option<SubgroupOracle>)> {
        let group = self.group.build()?;
        let subgroup = self.subgroup.as_ref().map(|s| s.build(&group)).transpose()?;
        Ok((group, subgroup))
    }
}
