//! Left cosets, double cosets `HgH` as unions of left cosets, and the
//! no-cancellation combinatorics of words `x w y` in `F₃`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Dihedral, Element, Family, GroupSpec, Word};
use crate::subgroup::{SubgroupKind, SubgroupOracle};

pub mod rules {
    /// `g ∈ H`: the double coset is `H` itself.
    pub const IDENTITY_COSET: &str = "identity-coset";
    /// Finite groups: the coset closure terminates.
    pub const FINITE_EXHAUSTIVE: &str = "finite-exhaustive";
    /// `F_∞ ⋊ D_∞`: `HgH` consists of the cosets with `ℤ`-part `±n`.
    pub const EX74_Z_PART: &str = "ex74-z-part";
    /// Free factors: `p⁻¹xp ∉ H` for `1 ≠ x ∈ H` and `p` with non-factor ends.
    pub const FREE_NO_CANCELLATION: &str = "free-no-cancellation";
    pub const PRODUCT: &str = "product-componentwise";
}

/// Letter id of `c` in `F₃`.
pub const LETTER_C: i64 = 2;

/// Canonical representative of `gH`: equal ids iff `g₁⁻¹g₂ ∈ H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftCosetId(pub Element);

impl std::fmt::Display for LeftCosetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}H", self.0)
    }
}

/// The exact canonical representative of `gH`.
///
/// * finite: the smallest index in `gH`;
/// * free factor on `S`: `g` with its longest suffix over `S` removed;
/// * `H_n`: for `g = vφᵏ`, drop the longest suffix of `v` over letters `≥ n+k`;
/// * `F_∞ ⋊ D_∞`: `(e, (n, 0))` where `n` is the `ℤ`-part of `g`.
pub fn left_coset_id(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<LeftCosetId> {
    group.validate(g)?;
    canonical_left(group, h, g).map(LeftCosetId)
}

fn canonical_left(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<Element> {
    Ok(match (h.kind(), group.family(), g) {
        (SubgroupKind::Finite(set), Family::Finite(fg), Element::Finite(x)) => {
            Element::Finite(set.iter().map(|&y| fg.mul(*x, y)).min().expect("subgroups contain e"))
        }
        (SubgroupKind::FreeFactor(s), _, Element::Free(w)) => Element::Free(w.split_suffix(|l| s.contains(&l)).0),
        (SubgroupKind::Hn(n), _, Element::FreeByZ { word, shift }) => {
            let (core, _) = word.split_suffix(|i| i >= n + shift);
            Element::FreeByZ {
                word: core,
                shift: *shift,
            }
        }
        (SubgroupKind::Ex74H, _, Element::Ex74 { base, .. }) => Element::Ex74 {
            word: Word::identity(),
            base: Dihedral::new(base.shift, false),
        },
        (SubgroupKind::Product(h1, h2), Family::Product(g1, g2), Element::Product(x, y)) => {
            Element::pair(canonical_left(g1, h1, x)?, canonical_left(g2, h2, y)?)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no canonical left cosets for {h} (element {g})"
            )))
        }
    })
}

/// Canonical representative of `HgH`, computed the same way from both ends.
pub fn double_coset_key(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<Element> {
    group.validate(g)?;
    canonical_double(group, h, g)
}

fn canonical_double(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<Element> {
    Ok(match (h.kind(), group.family(), g) {
        (SubgroupKind::Finite(set), Family::Finite(fg), Element::Finite(x)) => {
            let mut best = usize::MAX;
            for &a in set {
                let ax = fg.mul(a, *x);
                for &b in set {
                    best = best.min(fg.mul(ax, b));
                }
            }
            Element::Finite(best)
        }
        (SubgroupKind::FreeFactor(s), _, Element::Free(w)) => {
            let (_, rest) = w.split_prefix(|l| s.contains(&l));
            Element::Free(rest.split_suffix(|l| s.contains(&l)).0)
        }
        (SubgroupKind::Hn(n), _, Element::FreeByZ { word, shift }) => {
            let (_, rest) = word.split_prefix(|i| i >= *n);
            Element::FreeByZ {
                word: rest.split_suffix(|i| i >= n + shift).0,
                shift: *shift,
            }
        }
        (SubgroupKind::Ex74H, _, Element::Ex74 { base, .. }) => Element::Ex74 {
            word: Word::identity(),
            base: Dihedral::new(base.shift.abs(), false),
        },
        (SubgroupKind::Product(h1, h2), Family::Product(g1, g2), Element::Product(x, y)) => {
            Element::pair(canonical_double(g1, h1, x)?, canonical_double(g2, h2, y)?)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no canonical double cosets for {h} (element {g})"
            )))
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum DoubleCosetVerdict {
    /// `HgH` is exactly `n` left cosets; certified by `rule`.
    ExactlyN { n: u64, rule: &'static str },
    /// At least `count` left cosets were found and the growth is not
    /// conclusive.
    AtLeast { count: usize },
    /// Strictly growing coset counts over the last three radii. `rule` names
    /// a family rule that proves infiniteness, when one applies.
    ApparentlyInfinite {
        radii: Vec<usize>,
        counts: Vec<usize>,
        rule: Option<&'static str>,
    },
}

impl DoubleCosetVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            DoubleCosetVerdict::ExactlyN { .. } => "exactly_n",
            DoubleCosetVerdict::AtLeast { .. } => "at_least",
            DoubleCosetVerdict::ApparentlyInfinite { .. } => "apparently_infinite",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleCosetReport {
    pub representative: Element,
    pub key: Element,
    /// Left cosets inside `HgH`, in discovery order.
    pub left_cosets_found: Vec<LeftCosetId>,
    pub verdict: DoubleCosetVerdict,
    /// The trace `n` of the bimodule when the verdict is `ExactlyN`.
    pub trace: Option<u64>,
    /// Number of left cosets reached with `H`-words of length at most `r`.
    pub counts: BTreeMap<usize, usize>,
}

type CosetClosure = (Vec<(LeftCosetId, Element)>, BTreeMap<usize, usize>, bool);

/// Left cosets `hgH` reached from `gH` by left multiplication with
/// `H`-generators, breadth first, up to `radius` steps. Returns the cosets, the
/// `H`-word used for each, the per-radius counts and whether the closure
/// stopped growing before the radius ran out.
fn coset_closure(
    group: &GroupSpec,
    h: &SubgroupOracle,
    g: &Element,
    radius: usize,
    cap: usize,
) -> Result<CosetClosure> {
    let (gens, _) = h.generators(group);
    let start = left_coset_id(group, h, g)?;
    let mut found = vec![(start.clone(), group.identity())];
    let mut seen = HashMap::from([(start, 0usize)]);
    let mut counts = BTreeMap::from([(0, 1)]);
    let mut frontier = VecDeque::from([0usize]);
    let mut saturated = false;
    for r in 1..=radius {
        let mut next = VecDeque::new();
        while let Some(i) = frontier.pop_front() {
            for s in &gens {
                let word = group.mul(s, &found[i].1);
                let id = left_coset_id(group, h, &group.mul(&word, g))?;
                if !seen.contains_key(&id) {
                    if found.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    seen.insert(id.clone(), found.len());
                    next.push_back(found.len());
                    found.push((id, word));
                }
            }
        }
        counts.insert(r, found.len());
        if next.is_empty() {
            saturated = true;
            for rr in r + 1..=radius {
                counts.insert(rr, found.len());
            }
            break;
        }
        frontier = next;
    }
    Ok((found, counts, saturated))
}

/// Exact number of left cosets in `HgH` when a family rule determines it.
fn exact_rule(group: &GroupSpec, h: &SubgroupOracle, g: &Element, cap: usize) -> Result<Option<(u64, &'static str)>> {
    if h.contains(g)? {
        return Ok(Some((1, rules::IDENTITY_COSET)));
    }
    Ok(match (h.kind(), group.family(), g) {
        (SubgroupKind::Finite(_), Family::Finite(fg), _) => {
            let (found, _, saturated) = coset_closure(group, h, g, fg.order(), cap)?;
            debug_assert!(saturated);
            Some((found.len() as u64, rules::FINITE_EXHAUSTIVE))
        }
        (SubgroupKind::Ex74H, _, Element::Ex74 { .. }) => Some((2, rules::EX74_Z_PART)),
        (SubgroupKind::Product(h1, h2), Family::Product(g1, g2), Element::Product(x, y)) => {
            match (exact_rule(g1, h1, x, cap)?, exact_rule(g2, h2, y, cap)?) {
                (Some((a, _)), Some((b, _))) => Some((a * b, rules::PRODUCT)),
                _ => None,
            }
        }
        _ => None,
    })
}

/// Rule proving that `HgH` is an infinite union of left cosets.
fn infinite_rule(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<Option<&'static str>> {
    if h.contains(g)? {
        return Ok(None);
    }
    Ok(match (h.kind(), group.family(), g) {
        (SubgroupKind::FreeFactor(s), _, _) if !s.is_empty() => Some(rules::FREE_NO_CANCELLATION),
        (SubgroupKind::Product(h1, h2), Family::Product(g1, g2), Element::Product(x, y)) => infinite_rule(g1, h1, x)?
            .or(infinite_rule(g2, h2, y)?)
            .map(|_| rules::PRODUCT),
        _ => None,
    })
}

/// Decomposes `HgH` into left cosets reachable with `H`-words of length at
/// most `radius`.
///
/// Every coset found is re-verified: its stored `H`-word `h` is a member of
/// `H`, and the coset's canonical representative equals `h·g·h₂` with
/// `h₂ ∈ H`.
pub fn double_coset_analyze(
    group: &GroupSpec,
    h: &SubgroupOracle,
    g: &Element,
    radius: usize,
    cap: usize,
) -> Result<DoubleCosetReport> {
    if radius == 0 {
        return Err(Error::Precondition("double coset analysis needs radius ≥ 1".into()));
    }
    group.validate(g)?;
    let (found, counts, saturated) = coset_closure(group, h, g, radius, cap)?;
    for (id, word) in &found {
        let hg = group.mul(word, g);
        let h2 = group.mul(&group.inv(&hg), &id.0);
        if !h.contains(word)? || !h.contains(&h2)? {
            return Err(Error::Disagreement {
                element: g.to_string(),
                detail: format!("coset {id} is not of the form h·g·H"),
            });
        }
    }
    let key = double_coset_key(group, h, g)?;
    let exact = exact_rule(group, h, g, cap)?;
    let verdict = match exact {
        Some((n, rule)) => {
            let complete = found.len() as u64 == n;
            if found.len() as u64 > n || (saturated && !complete) {
                return Err(Error::Disagreement {
                    element: g.to_string(),
                    detail: format!("{rule} predicts {n} left cosets, closure found {}", found.len()),
                });
            }
            DoubleCosetVerdict::ExactlyN { n, rule }
        }
        None if saturated => {
            // The generator list is windowed, so a stalled closure is only a
            // lower bound.
            DoubleCosetVerdict::AtLeast { count: found.len() }
        }
        None => {
            let radii: Vec<usize> = (radius.saturating_sub(2).max(1)..=radius).collect();
            let tail: Vec<usize> = radii.iter().map(|r| counts[r]).collect();
            let growing = radii.len() >= 3 && tail.windows(2).all(|w| w[0] < w[1]);
            if growing {
                DoubleCosetVerdict::ApparentlyInfinite {
                    radii,
                    counts: tail,
                    rule: infinite_rule(group, h, g)?,
                }
            } else {
                DoubleCosetVerdict::AtLeast { count: found.len() }
            }
        }
    };
    let trace = match verdict {
        DoubleCosetVerdict::ExactlyN { n, .. } => Some(n),
        _ => None,
    };
    Ok(DoubleCosetReport {
        representative: g.clone(),
        key,
        left_cosets_found: found.into_iter().map(|(id, _)| id).collect(),
        verdict,
        trace,
        counts,
    })
}

#[derive(Clone, Debug)]
pub struct DoubleCosetClass {
    /// Elements of the ball in this double coset.
    pub ball_members: usize,
    pub report: DoubleCosetReport,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub radius: usize,
    pub ball_size: usize,
    /// Classes ordered by their first element in the ball.
    pub classes: Vec<DoubleCosetClass>,
    /// No left coset id appears in two classes.
    pub disjoint: bool,
    /// Sum of traces when every class is `ExactlyN`.
    pub total_trace: Option<u64>,
}

/// Partitions `Ball(r)` into double cosets and analyzes each at radius `r`.
pub fn full_ball_decomposition(
    group: &GroupSpec,
    h: &SubgroupOracle,
    radius: usize,
    cap: usize,
) -> Result<Decomposition> {
    if radius == 0 {
        return Err(Error::Precondition("decomposition needs radius ≥ 1".into()));
    }
    let ball = group.ball(radius, cap)?;
    let keys: Vec<Element> = ball
        .elements()
        .par_iter()
        .map(|x| double_coset_key(group, h, x))
        .collect::<Result<_>>()?;
    let mut order: Vec<(Element, usize)> = Vec::new();
    let mut index: HashMap<&Element, usize> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        match index.get(k) {
            Some(&c) => order[c].1 += 1,
            None => {
                index.insert(k, order.len());
                order.push((ball.elements()[i].clone(), 1));
            }
        }
    }
    let classes: Vec<DoubleCosetClass> = order
        .into_par_iter()
        .map(|(rep, members)| {
            double_coset_analyze(group, h, &rep, radius, cap).map(|report| DoubleCosetClass {
                ball_members: members,
                report,
            })
        })
        .collect::<Result<_>>()?;
    let mut owner: HashMap<&LeftCosetId, usize> = HashMap::new();
    let mut disjoint = true;
    for (c, class) in classes.iter().enumerate() {
        for id in &class.report.left_cosets_found {
            if let Some(&other) = owner.get(id) {
                disjoint &= other == c;
            } else {
                owner.insert(id, c);
            }
        }
    }
    let total_trace = classes.iter().map(|c| c.report.trace).sum::<Option<u64>>();
    Ok(Decomposition {
        radius,
        ball_size: ball.len(),
        classes,
        disjoint,
        total_trace,
    })
}

/// `[G : H]` for a finite pair, cross-checked against the total trace of the
/// full double-coset decomposition.
pub fn finite_index_trace_total(group: &GroupSpec, h: &SubgroupOracle) -> Result<u64> {
    let (Family::Finite(fg), SubgroupKind::Finite(set)) = (group.family(), h.kind()) else {
        return Err(Error::Unsupported("index as total trace needs a finite pair".into()));
    };
    if !fg.is_subgroup(set) {
        return Err(Error::NotSubgroup(format!("{set:?}")));
    }
    let index = (fg.order() / set.len()) as u64;
    let decomposition = full_ball_decomposition(group, h, fg.order(), usize::MAX)?;
    if decomposition.ball_size != fg.order() || decomposition.total_trace != Some(index) || !decomposition.disjoint {
        return Err(Error::Disagreement {
            element: "e".into(),
            detail: format!("index {index} but decomposition total {:?}", decomposition.total_trace),
        });
    }
    Ok(index)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordGridReport {
    pub word: Element,
    pub radius: usize,
    pub pairs: usize,
    /// Pairs `(x, y)` whose product `xwy` was already produced.
    pub collisions: usize,
    /// Pairs with `|xwy| ≠ |x| + |w| + |y|`.
    pub non_additive: usize,
}

impl WordGridReport {
    pub fn injective(&self) -> bool {
        self.collisions == 0
    }

    pub fn additive(&self) -> bool {
        self.non_additive == 0
    }

    pub fn holds(&self) -> bool {
        self.injective() && self.additive()
    }
}

fn boundary_check(w: &Element) -> Result<&Word<i64>> {
    let Element::Free(word) = w else {
        return Err(Error::FamilyMismatch {
            family: "free",
            element: w.to_string(),
        });
    };
    if let Some(&(l, _)) = word.syllables().iter().find(|(l, _)| !(0..=LETTER_C).contains(l)) {
        return Err(Error::Precondition(format!("{w} uses letter {l} outside F3")));
    }
    match (word.first(), word.last()) {
        (Some((LETTER_C, _)), Some((LETTER_C, _))) => Ok(word),
        (None, _) | (_, None) => Err(Error::Precondition("the empty word has no boundary letter".into())),
        (Some((l, e)), _) if l != LETTER_C => Err(Error::Precondition(format!(
            "{w} begins with {} which is not a power of c",
            Element::Free(Word::power(l, e))
        ))),
        (_, Some((l, e))) => Err(Error::Precondition(format!(
            "{w} ends with {} which is not a power of c",
            Element::Free(Word::power(l, e))
        ))),
    }
}

fn f2_ball(radius: usize, cap: usize) -> Result<Vec<Word<i64>>> {
    let ball = GroupSpec::free(2).ball(radius, cap)?;
    Ok(ball
        .iter()
        .map(|x| match x {
            Element::Free(w) => w.clone(),
            _ => unreachable!("free group ball"),
        })
        .collect())
}

/// Checks that `(x, y) ↦ xwy` is injective on `F₂ ∩ Ball(r)` squared and that
/// no cancellation happens, for `w` beginning and ending with a power of `c`.
pub fn free_bimodule_word_check(w: &Element, radius: usize, cap: usize) -> Result<WordGridReport> {
    let word = boundary_check(w)?;
    let xs = f2_ball(radius, cap)?;
    let mut seen = std::collections::HashSet::with_capacity(xs.len() * xs.len());
    let mut report = WordGridReport {
        word: w.clone(),
        radius,
        pairs: 0,
        collisions: 0,
        non_additive: 0,
    };
    for x in &xs {
        let xw = x.mul(word);
        for y in &xs {
            let p = xw.mul(y);
            report.pairs += 1;
            if p.len() != x.len() + word.len() + y.len() {
                report.non_additive += 1;
            }
            if !seen.insert(p) {
                report.collisions += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub forward: WordGridReport,
    pub backward: WordGridReport,
    /// Basis elements `xw₁y` mapped to `xw₂y`.
    pub mapped: usize,
    /// Images hit twice, or preimages recovered incorrectly.
    pub failures: usize,
}

impl BijectionReport {
    pub fn holds(&self) -> bool {
        self.forward.holds() && self.backward.holds() && self.failures == 0
    }
}

/// Checks that `xw₁y ↦ xw₂y` is a well-defined bijection between the two
/// basis sets over the `F₂ ∩ Ball(r)` grid.
pub fn intertwiner_bijection_check(w1: &Element, w2: &Element, radius: usize, cap: usize) -> Result<BijectionReport> {
    let forward = free_bimodule_word_check(w1, radius, cap)?;
    let backward = free_bimodule_word_check(w2, radius, cap)?;
    let (a, b) = (boundary_check(w1)?, boundary_check(w2)?);
    let xs = f2_ball(radius, cap)?;
    let mut map: HashMap<Word<i64>, Word<i64>> = HashMap::new();
    let mut inverse: HashMap<Word<i64>, Word<i64>> = HashMap::new();
    let mut failures = 0;
    for x in &xs {
        for y in &xs {
            let src = x.mul(a).mul(y);
            let dst = x.mul(b).mul(y);
            if map.insert(src.clone(), dst.clone()).is_some_and(|old| old != dst) {
                failures += 1;
            }
            if inverse.insert(dst, src.clone()).is_some_and(|old| old != src) {
                failures += 1;
            }
        }
    }
    // Round trip through both maps.
    failures += map.iter().filter(|(s, d)| inverse.get(*d) != Some(*s)).count();
    Ok(BijectionReport {
        forward,
        backward,
        mapped: map.len(),
        failures,
    })
}
