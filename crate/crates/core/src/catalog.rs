//! Built-in groups and subgroup pairs.

use crate::error::{Error, Result};
use crate::group::{finite, FiniteGroup, GroupSpec, IndexWindow};
use crate::subgroup::SubgroupOracle;

/// Built-in finite groups, smallest first.
pub const FINITE_GROUPS: &[&str] = &["Z2", "Z4", "Z2xZ2", "S3", "Q8", "D4", "A4", "S4", "A5", "A5xA5"];

/// Built-in pairs with an infinite group.
pub const INFINITE_PAIRS: &[&str] = &["F2-in-F3", "a-in-F2", "Hn", "Ex74", "Hn-x-Hn"];

/// Built-in pairs of finite groups given as direct products of two
/// catalog pairs.
pub const FINITE_PRODUCT_PAIRS: &[&str] = &["S3/A3-x-Z4/Z2", "S3/C2-x-S4/D4"];

/// Default letter window for `F_∞ ⋊ D_∞`. Each window index contributes four
/// letters, so the radius-4 ball of the wider default window would not fit
/// under the element cap.
pub const EX74_WINDOW: IndexWindow = IndexWindow { lo: -1, hi: 1 };

/// Named subgroups: group, name, generators in the group's labels.
const NAMED_SUBGROUPS: &[(&str, &str, &[&str])] = &[
    ("Z4", "Z2", &["2"]),
    ("S3", "A3", &["(123)"]),
    ("S3", "C2", &["(12)"]),
    ("Q8", "Z2", &["-1"]),
    ("Q8", "Z4", &["i"]),
    ("D4", "Z4", &["(1234)"]),
    ("D4", "Z2", &["(13)(24)"]),
    ("D4", "V4", &["(13)", "(24)"]),
    ("A4", "V4", &["(12)(34)", "(13)(24)"]),
    ("A4", "A3", &["(123)"]),
    ("S4", "A4", &["(123)", "(12)(34)"]),
    ("S4", "D4", &["(1234)", "(13)"]),
    ("S4", "V4", &["(12)(34)", "(13)(24)"]),
    ("S4", "S3", &["(12)", "(123)"]),
    ("A5", "A4", &["(123)", "(12)(34)"]),
    ("A5", "Z5", &["(12345)"]),
];

fn perms(degree: usize, cycles: &[&str]) -> FiniteGroup {
    let gens: Vec<Vec<usize>> = cycles
        .iter()
        .map(|c| finite::parse_cycles(c, degree).expect("built-in cycle"))
        .collect();
    FiniteGroup::from_permutations(degree, &gens).expect("built-in permutation group")
}

/// Quaternion group with elements `1, -1, i, -i, j, -j, k, -k`.
fn quaternion() -> FiniteGroup {
    // Unit products as (sign flip, unit) with units 1, i, j, k.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let rows = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (s, u) = UNIT[x / 2][y / 2];
                    2 * u + ((x % 2) ^ (y % 2) ^ s)
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    FiniteGroup::from_table(rows, 0, Some(labels)).expect("quaternion table")
}

pub fn finite_group_raw(name: &str) -> Result<FiniteGroup> {
    Ok(match name {
        "Z1" | "trivial" => FiniteGroup::cyclic(1),
        "Z2" => FiniteGroup::cyclic(2),
        "Z4" => FiniteGroup::cyclic(4),
        "Z2xZ2" => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        "S3" => perms(3, &["(12)", "(123)"]),
        "Q8" => quaternion(),
        "D4" => perms(4, &["(1234)", "(13)"]),
        "A4" => perms(4, &["(123)", "(12)(34)"]),
        "S4" => perms(4, &["(12)", "(1234)"]),
        "A5" => perms(5, &["(12345)", "(123)"]),
        "A5xA5" => {
            let a5 = finite_group_raw("A5")?;
            FiniteGroup::direct_product(&a5, &a5)
        }
        _ => {
            if let Some(n) = name.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                if (1..=10_000).contains(&n) {
                    return Ok(FiniteGroup::cyclic(n));
                }
            }
            return Err(Error::UnknownName(format!("finite group {name:?}")));
        }
    })
}

/// A built-in finite group. Besides [`FINITE_GROUPS`], `Zn` names any cyclic
/// group.
pub fn finite_group(name: &str) -> Result<GroupSpec> {
    finite_group_raw(name).map(GroupSpec::finite)
}

/// Resolves a subgroup of a finite group.
///
/// Accepted selectors: `trivial`, `whole`, a name from the built-in table
/// (`A3` in `S3`, `V4` in `A4`, …), `gen:` followed by `;`-separated element
/// labels, or `idx:` followed by `,`-separated element indices (both close
/// under the group law).
pub fn finite_subgroup(group: &GroupSpec, selector: &str) -> Result<SubgroupOracle> {
    let g = group
        .as_finite()
        .ok_or_else(|| Error::Unsupported("finite subgroup selector on an infinite group".into()))?;
    match selector {
        "trivial" => SubgroupOracle::finite(group, [g.identity()]),
        "whole" => SubgroupOracle::finite(group, 0..g.order()),
        _ => {
            if let Some(rest) = selector.strip_prefix("gen:") {
                let gens = rest
                    .split(';')
                    .map(|l| {
                        g.find_label(l.trim())
                            .ok_or_else(|| Error::UnknownName(format!("element {l:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SubgroupOracle::finite_generated(group, gens)
            } else if let Some(rest) = selector.strip_prefix("idx:") {
                let gens = rest
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Definition(format!("index {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SubgroupOracle::finite_generated(group, gens)
            } else if NAMED_SUBGROUPS.iter().any(|(_, n, _)| *n == selector) {
                // The same name is listed for several groups; use the entry
                // whose generator labels exist in this one.
                let idx = NAMED_SUBGROUPS
                    .iter()
                    .filter(|(_, n, _)| *n == selector)
                    .find_map(|(_, _, gens)| gens.iter().map(|l| g.find_label(l)).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| Error::UnknownName(format!("{selector} is not a subgroup of this group")))?;
                SubgroupOracle::finite_generated(group, idx)
            } else {
                Err(Error::UnknownName(format!("subgroup {selector:?}")))
            }
        }
    }
}

/// Named subgroups listed for a built-in finite group.
pub fn named_subgroups(group: &str) -> Vec<&'static str> {
    NAMED_SUBGROUPS
        .iter()
        .filter(|(g, _, _)| *g == group)
        .map(|(_, n, _)| *n)
        .collect()
}

/// A resolved group and subgroup.
#[derive(Clone, Debug)]
pub struct Pair {
    pub name: String,
    pub group: GroupSpec,
    pub subgroup: SubgroupOracle,
}

/// Resolves a built-in pair.
///
/// * a finite group name with a subgroup selector (default `trivial`);
/// * `F2-in-F3`, `a-in-F2`, `Ex74`;
/// * `Hn` and `Hn-x-Hn`, with the selector giving `n` (default 0);
/// * the entries of [`FINITE_PRODUCT_PAIRS`].
pub fn pair(name: &str, selector: Option<&str>) -> Result<Pair> {
    let parse_n = || -> Result<i64> {
        selector
            .map(|s| {
                s.trim_start_matches("n=")
                    .parse::<i64>()
                    .map_err(|_| Error::Definition(format!("expected an integer n, got {s:?}")))
            })
            .unwrap_or(Ok(0))
    };
    let no_selector = |name: &str| match selector {
        Some(s) => Err(Error::Definition(format!(
            "{name} takes no subgroup selector (got {s:?})"
        ))),
        None => Ok(()),
    };
    let (group, subgroup) = match name {
        "F2-in-F3" => {
            no_selector(name)?;
            let g = GroupSpec::free(3);
            let h = SubgroupOracle::free_factor(&g, [0, 1])?;
            (g, h)
        }
        "a-in-F2" => {
            no_selector(name)?;
            let g = GroupSpec::free(2);
            let h = SubgroupOracle::free_factor(&g, [0])?;
            (g, h)
        }
        "Hn" => {
            let g = GroupSpec::free_by_z(IndexWindow::DEFAULT);
            let h = SubgroupOracle::hn(&g, parse_n()?)?;
            (g, h)
        }
        "Ex74" => {
            no_selector(name)?;
            let g = GroupSpec::ex74(EX74_WINDOW);
            let h = SubgroupOracle::ex74(&g)?;
            (g, h)
        }
        "Hn-x-Hn" => {
            let n = parse_n()?;
            let f = GroupSpec::free_by_z(IndexWindow::DEFAULT);
            let h = SubgroupOracle::hn(&f, n)?;
            let g = GroupSpec::product(f.clone(), f);
            let ph = SubgroupOracle::product(&g, h.clone(), h)?;
            (g, ph)
        }
        _ if name.contains("-x-") => {
            no_selector(name)?;
            let (l, r) = name.split_once("-x-").expect("checked");
            let component = |s: &str| -> Result<Pair> {
                let (g, h) = s
                    .split_once('/')
                    .ok_or_else(|| Error::UnknownName(format!("product component {s:?}, expected G/H")))?;
                pair(g, Some(h))
            };
            let (a, b) = (component(l)?, component(r)?);
            let g = GroupSpec::product(a.group, b.group);
            let h = SubgroupOracle::product(&g, a.subgroup, b.subgroup)?;
            (g, h)
        }
        _ => {
            let g = finite_group(name)?;
            let h = finite_subgroup(&g, selector.unwrap_or("trivial"))?;
            (g, h)
        }
    };
    Ok(Pair {
        name: name.to_string(),
        group,
        subgroup,
    })
}
