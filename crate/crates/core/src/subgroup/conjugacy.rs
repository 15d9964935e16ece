//! `H`-conjugacy classes and the irreducibility criterion: `L(H) ⊆ L(G)` is
//! irreducible iff every `g ≠ e` has infinitely many `H`-conjugates.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::oracle::{SubgroupKind, SubgroupOracle};
use crate::error::{Error, Result};
use crate::group::{Element, Family, GroupSpec, Word};

/// Rule ids. These are the only sources of certified verdicts.
pub mod rules {
    /// Conjugating by a reduced word of a non-cyclic free factor never fully
    /// cancels against an element outside the centralizer.
    pub const FREE_NO_CANCELLATION: &str = "free-no-cancellation";
    /// In a free factor of rank one, conjugation by powers of the generator
    /// fixes exactly the elements of that cyclic factor.
    pub const FREE_CYCLIC: &str = "free-cyclic-centralizer";
    /// Semidirect families: conjugating by a letter that occurs nowhere in the
    /// element produces pairwise distinct, uncancelled words.
    pub const FRESH_LETTER: &str = "semidirect-fresh-letter";
    /// Finite groups: the class is computed over all of `H`.
    pub const FINITE_EXHAUSTIVE: &str = "finite-exhaustive";
    pub const PRODUCT: &str = "product-componentwise";
    pub const IDENTITY: &str = "identity";
}

/// What a family rule says about the `H`-conjugacy class of an element.
#[derive(Clone, Debug, PartialEq)]
pub enum ConjugacyRule {
    Finite(BTreeSet<Element>, &'static str),
    Infinite(&'static str),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConjugacyVerdict {
    CertifiedInfinite { rule: &'static str },
    AtLeast { count: usize },
    Finite { conjugates: Vec<String> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyReport {
    pub element: Element,
    pub counts: BTreeMap<usize, usize>,
    pub conjugates: BTreeSet<Element>,
    pub verdict: ConjugacyVerdict,
}

/// The family rule for the `H`-conjugacy class of `g`.
pub fn conjugacy_rule(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<ConjugacyRule> {
    group.validate(g)?;
    if group.is_identity(g) {
        return Ok(ConjugacyRule::Finite(BTreeSet::from([g.clone()]), rules::IDENTITY));
    }
    match (h.kind(), group.family(), g) {
        (SubgroupKind::Finite(set), Family::Finite(fg), Element::Finite(x)) => {
            let class = set.iter().map(|&k| Element::Finite(fg.conj(k, *x))).collect();
            Ok(ConjugacyRule::Finite(class, rules::FINITE_EXHAUSTIVE))
        }
        (SubgroupKind::FreeFactor(letters), _, Element::Free(w))
        | (SubgroupKind::FreeFactorKernel { letters, .. }, _, Element::Free(w)) => Ok(free_rule(letters, w)),
        (SubgroupKind::Hn(_), _, Element::FreeByZ { .. }) | (SubgroupKind::Ex74H, _, Element::Ex74 { .. }) => {
            Ok(ConjugacyRule::Infinite(rules::FRESH_LETTER))
        }
        (SubgroupKind::Product(h1, h2), Family::Product(g1, g2), Element::Product(x, y)) => {
            match (conjugacy_rule(g1, h1, x)?, conjugacy_rule(g2, h2, y)?) {
                (ConjugacyRule::Finite(a, _), ConjugacyRule::Finite(b, _)) => {
                    let set = a
                        .iter()
                        .flat_map(|p| b.iter().map(move |q| Element::pair(p.clone(), q.clone())))
                        .collect();
                    Ok(ConjugacyRule::Finite(set, rules::PRODUCT))
                }
                _ => Ok(ConjugacyRule::Infinite(rules::PRODUCT)),
            }
        }
        _ => Err(Error::Unsupported(format!("conjugacy rule for {} in {}", g, h))),
    }
}

fn free_rule(letters: &BTreeSet<i64>, w: &Word<i64>) -> ConjugacyRule {
    let fixed = || ConjugacyRule::Finite(BTreeSet::from([Element::Free(w.clone())]), rules::FREE_CYCLIC);
    match letters.len() {
        0 => fixed(),
        1 => {
            let s = *letters.iter().next().unwrap();
            // The subgroup is ⟨s⟩ or a finite-index ⟨sᵐ⟩; either way the
            // centralizer of any nontrivial member is ⟨s⟩.
            if w.all_letters(|l| l == s) {
                fixed()
            } else {
                ConjugacyRule::Infinite(rules::FREE_CYCLIC)
            }
        }
        _ => ConjugacyRule::Infinite(rules::FREE_NO_CANCELLATION),
    }
}

/// Enumerates `{h g h⁻¹ : h ∈ H ∩ Ball(r)}` and combines it with the family
/// rule.
pub fn h_conjugates(
    group: &GroupSpec,
    h: &SubgroupOracle,
    g: &Element,
    radius: usize,
    cap: usize,
) -> Result<ConjugacyReport> {
    if radius == 0 {
        return Err(Error::Precondition("h_conjugates needs radius ≥ 1".into()));
    }
    group.validate(g)?;
    let ball = group.ball(radius, cap)?;
    let mut seen: HashSet<Element> = HashSet::new();
    let mut counts = BTreeMap::new();
    for r in 0..=radius {
        for k in ball.sphere(r) {
            if h.contains(k)? {
                seen.insert(group.conj(k, g));
            }
        }
        counts.insert(r, seen.len());
    }
    let conjugates: BTreeSet<Element> = seen.into_iter().collect();
    let verdict = match conjugacy_rule(group, h, g)? {
        ConjugacyRule::Infinite(rule) => ConjugacyVerdict::CertifiedInfinite { rule },
        ConjugacyRule::Finite(set, _) if set == conjugates => ConjugacyVerdict::Finite {
            conjugates: set.iter().map(|x| group.label(x)).collect(),
        },
        ConjugacyRule::Finite(..) => ConjugacyVerdict::AtLeast {
            count: conjugates.len(),
        },
    };
    Ok(ConjugacyReport {
        element: g.clone(),
        counts,
        conjugates,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Irreducibility {
    /// Every non-identity element of the ball has a certified infinite class.
    Irreducible {
        checked: usize,
        rules: BTreeMap<&'static str, usize>,
    },
    /// A non-identity element with a certified finite class.
    NotIrreducible {
        witness: Element,
        conjugates: BTreeSet<Element>,
    },
    Inconclusive {
        radius: usize,
    },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Irreducibility::Irreducible { .. } => "irreducible",
            Irreducibility::NotIrreducible { .. } => "not_irreducible",
            Irreducibility::Inconclusive { .. } => "inconclusive",
        }
    }
}

pub fn irreducibility_check(
    group: &GroupSpec,
    h: &SubgroupOracle,
    radius: usize,
    cap: usize,
) -> Result<Irreducibility> {
    if radius == 0 {
        return Ok(Irreducibility::Inconclusive { radius });
    }
    let ball = group.ball(radius, cap)?;
    let mut rules: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut checked = 0;
    for g in ball.iter().skip(1) {
        match conjugacy_rule(group, h, g)? {
            ConjugacyRule::Finite(conjugates, _) => {
                return Ok(Irreducibility::NotIrreducible {
                    witness: g.clone(),
                    conjugates,
                });
            }
            ConjugacyRule::Infinite(rule) => *rules.entry(rule).or_default() += 1,
        }
        checked += 1;
    }
    if checked == 0 {
        // Nothing but the identity to look at.
        return Ok(Irreducibility::Inconclusive { radius });
    }
    Ok(Irreducibility::Irreducible { checked, rules })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentReport {
    pub h_verdict: Irreducibility,
    pub k_verdict: Irreducibility,
    pub representatives: Vec<Element>,
    /// Number of elements of `H ∩ Ball(r)` matched to a representative.
    pub covered: usize,
    /// `H` irreducible ⟹ `K` irreducible, at this radius.
    pub implication_holds: bool,
}

/// Checks that irreducibility descends from `H` to a finite-index `K ⊆ H`
/// given by left coset representatives `H = ⋃ hᵢK`.
pub fn finite_index_descent_check(
    group: &GroupSpec,
    h: &SubgroupOracle,
    k: &SubgroupOracle,
    representatives: &[Element],
    radius: usize,
    cap: usize,
) -> Result<DescentReport> {
    for rep in representatives {
        group.validate(rep)?;
        if !h.contains(rep)? {
            return Err(Error::CosetCover(format!("representative {rep} is not in H")));
        }
    }
    let ball = group.ball(radius, cap)?;
    let inverses: Vec<Element> = representatives.iter().map(|x| group.inv(x)).collect();
    let mut covered = 0;
    for x in ball.iter() {
        if k.contains(x)? && !h.contains(x)? {
            return Err(Error::Precondition(format!("{x} lies in K but not in H")));
        }
        if !h.contains(x)? {
            continue;
        }
        let hit = inverses.iter().try_fold(false, |acc, inv| -> Result<bool> {
            Ok(acc || k.contains(&group.mul(inv, x))?)
        })?;
        if !hit {
            return Err(Error::CosetCover(format!("{x} is in none of the cosets hᵢK")));
        }
        covered += 1;
    }
    let h_verdict = irreducibility_check(group, h, radius, cap)?;
    let k_verdict = irreducibility_check(group, k, radius, cap)?;
    let implication_holds = !h_verdict.is_irreducible() || k_verdict.is_irreducible();
    Ok(DescentReport {
        h_verdict,
        k_verdict,
        representatives: representatives.to_vec(),
        covered,
        implication_holds,
    })
}
