use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Alphabet, Dihedral, Element, Family, GroupSpec, Word};

/// How a subgroup is described. Every description comes with an exact
/// membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum SubgroupKind {
    /// An explicit index set in a finite group.
    Finite(BTreeSet<usize>),
    /// The free factor generated by a subset of the letters of a free group.
    FreeFactor(BTreeSet<i64>),
    /// Kernel of `w ↦ Σ weight(letter)·exponent mod modulus` restricted to the
    /// free factor on `letters`. A finite-index subgroup of that factor.
    FreeFactorKernel {
        letters: BTreeSet<i64>,
        weights: BTreeMap<i64, i64>,
        modulus: i64,
    },
    /// `H_n = ⟨g_i : i ≥ n⟩` inside `F_∞ ⋊ ℤ`.
    Hn(i64),
    /// The subgroup of `F_∞ ⋊ D_∞` generated by `F_∞` and the flip, i.e.
    /// every element whose `ℤ`-part is zero.
    Ex74H,
    Product(Arc<SubgroupOracle>, Arc<SubgroupOracle>),
}

/// A subgroup of a fixed parent group, validated against it on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupOracle {
    kind: SubgroupKind,
}

impl SubgroupOracle {
    /// Checks that `kind` makes sense inside `parent`. Finite index sets are
    /// checked to be subgroups.
    pub fn new(parent: &GroupSpec, kind: SubgroupKind) -> Result<Self> {
        let unsupported = |what: &str| {
            Err(Error::Unsupported(format!(
                "{what} inside a {} group",
                parent.family_name()
            )))
        };
        match (parent.family(), &kind) {
            (Family::Finite(g), SubgroupKind::Finite(set)) => {
                if !g.is_subgroup(set) {
                    return Err(Error::NotSubgroup(format!("{set:?} is not closed under the group law")));
                }
            }
            (Family::Free(alpha), SubgroupKind::FreeFactor(letters))
            | (Family::Free(alpha), SubgroupKind::FreeFactorKernel { letters, .. }) => {
                if let Alphabet::Rank(n) = alpha {
                    if letters.iter().any(|&l| l < 0 || l >= *n as i64) {
                        return Err(Error::Definition(format!("letters {letters:?} outside rank {n}")));
                    }
                }
                if let SubgroupKind::FreeFactorKernel { modulus, weights, .. } = &kind {
                    if *modulus < 1 {
                        return Err(Error::Definition(format!("modulus {modulus} must be positive")));
                    }
                    if weights.keys().any(|l| !letters.contains(l)) {
                        return Err(Error::Definition("weights on letters outside the factor".into()));
                    }
                }
            }
            (Family::FreeByZ(_), SubgroupKind::Hn(_)) => {}
            (Family::Ex74(_), SubgroupKind::Ex74H) => {}
            (Family::Product(a, b), SubgroupKind::Product(h1, h2)) => {
                SubgroupOracle::new(a, h1.kind.clone())?;
                SubgroupOracle::new(b, h2.kind.clone())?;
            }
            (_, k) => return unsupported(k.name()),
        }
        Ok(SubgroupOracle { kind })
    }

    pub fn finite(parent: &GroupSpec, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(parent, SubgroupKind::Finite(elements.into_iter().collect()))
    }

    /// Subgroup of a finite group generated by `gens`.
    pub fn finite_generated(parent: &GroupSpec, gens: impl IntoIterator<Item = usize>) -> Result<Self> {
        let g = parent
            .as_finite()
            .ok_or_else(|| Error::Unsupported("generated subgroup of an infinite group".into()))?;
        let gens: Vec<usize> = gens.into_iter().collect();
        if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
            return Err(Error::Definition(format!("element index {bad} out of range")));
        }
        Self::new(parent, SubgroupKind::Finite(g.closure(gens)))
    }

    pub fn free_factor(parent: &GroupSpec, letters: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::new(parent, SubgroupKind::FreeFactor(letters.into_iter().collect()))
    }

    pub fn hn(parent: &GroupSpec, n: i64) -> Result<Self> {
        Self::new(parent, SubgroupKind::Hn(n))
    }

    pub fn ex74(parent: &GroupSpec) -> Result<Self> {
        Self::new(parent, SubgroupKind::Ex74H)
    }

    pub fn product(parent: &GroupSpec, left: SubgroupOracle, right: SubgroupOracle) -> Result<Self> {
        Self::new(parent, SubgroupKind::Product(Arc::new(left), Arc::new(right)))
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn components(&self) -> Option<(&SubgroupOracle, &SubgroupOracle)> {
        match &self.kind {
            SubgroupKind::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Exact membership.
    pub fn contains(&self, g: &Element) -> Result<bool> {
        let mismatch = || Error::FamilyMismatch {
            family: self.kind.name(),
            element: g.to_string(),
        };
        Ok(match (&self.kind, g) {
            (SubgroupKind::Finite(set), Element::Finite(i)) => set.contains(i),
            (SubgroupKind::FreeFactor(letters), Element::Free(w)) => w.all_letters(|l| letters.contains(&l)),
            (
                SubgroupKind::FreeFactorKernel {
                    letters,
                    weights,
                    modulus,
                },
                Element::Free(w),
            ) => w.all_letters(|l| letters.contains(&l)) && weight(w, weights).rem_euclid(*modulus) == 0,
            (SubgroupKind::Hn(n), Element::FreeByZ { word, shift }) => *shift == 0 && word.all_letters(|i| i >= *n),
            (SubgroupKind::Ex74H, Element::Ex74 { base, .. }) => base.shift == 0,
            (SubgroupKind::Product(a, b), Element::Product(x, y)) => a.contains(x)? && b.contains(y)?,
            _ => return Err(mismatch()),
        })
    }

    /// Generators of `H` that lie in the parent's ball window, inverses
    /// included. The boolean says whether they generate all of `H`.
    pub fn generators(&self, parent: &GroupSpec) -> (Vec<Element>, bool) {
        match (&self.kind, parent.family()) {
            (SubgroupKind::Finite(set), Family::Finite(g)) => {
                let gens = g.greedy_generators(set.iter().copied());
                (with_inverses(parent, gens.into_iter().map(Element::Finite)), true)
            }
            (SubgroupKind::FreeFactor(letters), Family::Free(alpha)) => {
                let (ls, complete) = windowed_letters(letters, alpha);
                (
                    with_inverses(parent, ls.into_iter().map(|l| Element::Free(Word::letter(l)))),
                    complete,
                )
            }
            (SubgroupKind::FreeFactorKernel { .. }, _) => (Vec::new(), false),
            (SubgroupKind::Hn(n), Family::FreeByZ(window)) => {
                let gens = window.indices().filter(|i| i >= n).map(|i| Element::g(i, 1));
                (with_inverses(parent, gens), false)
            }
            (SubgroupKind::Ex74H, Family::Ex74(window)) => {
                let mut gens: Vec<Element> = Vec::new();
                for n in window.indices() {
                    for flip in [false, true] {
                        gens.push(Element::Ex74 {
                            word: Word::letter(Dihedral::new(n, flip)),
                            base: Dihedral::IDENTITY,
                        });
                    }
                }
                gens.push(Element::Ex74 {
                    word: Word::identity(),
                    base: Dihedral::new(0, true),
                });
                (with_inverses(parent, gens), false)
            }
            (SubgroupKind::Product(a, b), Family::Product(ga, gb)) => {
                let (ea, eb) = (ga.identity(), gb.identity());
                let (la, ca) = a.generators(ga);
                let (lb, cb) = b.generators(gb);
                let mut gens: Vec<Element> = la.into_iter().map(|x| Element::pair(x, eb.clone())).collect();
                gens.extend(lb.into_iter().map(|y| Element::pair(ea.clone(), y)));
                (gens, ca && cb)
            }
            _ => (Vec::new(), false),
        }
    }

    /// Members of `H` among the given elements, keeping their order.
    pub fn filter<'a>(&self, elements: impl IntoIterator<Item = &'a Element>) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        for x in elements {
            if self.contains(x)? {
                out.push(x.clone());
            }
        }
        Ok(out)
    }
}

impl SubgroupKind {
    pub fn name(&self) -> &'static str {
        match self {
            SubgroupKind::Finite(_) => "finite subgroup",
            SubgroupKind::FreeFactor(_) => "free factor",
            SubgroupKind::FreeFactorKernel { .. } => "free factor kernel",
            SubgroupKind::Hn(_) => "H_n",
            SubgroupKind::Ex74H => "ex74 H",
            SubgroupKind::Product(..) => "product subgroup",
        }
    }
}

impl fmt::Display for SubgroupOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SubgroupKind::Finite(set) => write!(f, "finite subgroup of order {}", set.len()),
            SubgroupKind::FreeFactor(l) => write!(f, "free factor on {l:?}"),
            SubgroupKind::FreeFactorKernel { letters, modulus, .. } => {
                write!(f, "index-{modulus} kernel in free factor on {letters:?}")
            }
            SubgroupKind::Hn(n) => write!(f, "H_{n}"),
            SubgroupKind::Ex74H => write!(f, "⟨F_∞, ℤ₂⟩"),
            SubgroupKind::Product(a, b) => write!(f, "{a} × {b}"),
        }
    }
}

pub(crate) fn weight(w: &Word<i64>, weights: &BTreeMap<i64, i64>) -> i64 {
    w.syllables()
        .iter()
        .map(|(l, e)| weights.get(l).copied().unwrap_or(0) * e)
        .sum()
}

fn windowed_letters(letters: &BTreeSet<i64>, alpha: &Alphabet) -> (Vec<i64>, bool) {
    match alpha {
        Alphabet::Rank(_) => (letters.iter().copied().collect(), true),
        Alphabet::Integers(w) => {
            let inside: Vec<i64> = letters.iter().copied().filter(|l| (w.lo..=w.hi).contains(l)).collect();
            let complete = inside.len() == letters.len();
            (inside, complete)
        }
    }
}

fn with_inverses(parent: &GroupSpec, gens: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for s in gens {
        let t = parent.inv(&s);
        for x in [s, t] {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{IndexWindow, Word};

    #[test]
    fn hn_membership() {
        let g = GroupSpec::free_by_z(IndexWindow::DEFAULT);
        let h = SubgroupOracle::hn(&g, 0).unwrap();
        assert!(h.contains(&Element::g(3, 1)).unwrap());
        assert!(!h.contains(&Element::g(-1, 1)).unwrap());
        assert!(!h.contains(&Element::phi(1)).unwrap());
        assert!(h.contains(&g.identity()).unwrap());
    }

    #[test]
    fn ex74_membership_ignores_word_and_flip() {
        let g = GroupSpec::ex74(IndexWindow::new(-1, 1).unwrap());
        let h = SubgroupOracle::ex74(&g).unwrap();
        let w = Word::reduce([(Dihedral::new(4, true), 2), (Dihedral::new(-7, false), -1)]);
        assert!(h
            .contains(&Element::Ex74 {
                word: w.clone(),
                base: Dihedral::new(0, true)
            })
            .unwrap());
        assert!(!h
            .contains(&Element::Ex74 {
                word: w,
                base: Dihedral::new(2, false)
            })
            .unwrap());
    }

    #[test]
    fn free_factor_membership() {
        let g = GroupSpec::free(3);
        let h = SubgroupOracle::free_factor(&g, [0, 1]).unwrap();
        assert!(h.contains(&crate::reduce_word([(0, 2), (1, -1)])).unwrap());
        assert!(!h.contains(&crate::reduce_word([(2, 1)])).unwrap());
    }

    #[test]
    fn rejects_non_subgroup_and_bad_pairing() {
        let g = GroupSpec::finite(crate::FiniteGroup::cyclic(4));
        assert!(matches!(SubgroupOracle::finite(&g, [0, 1]), Err(Error::NotSubgroup(_))));
        assert!(SubgroupOracle::finite(&g, [0, 2]).is_ok());
        assert!(matches!(SubgroupOracle::hn(&g, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn membership_rejects_foreign_elements() {
        let g = GroupSpec::free(2);
        let h = SubgroupOracle::free_factor(&g, [0]).unwrap();
        assert!(h.contains(&Element::phi(1)).is_err());
    }
}
