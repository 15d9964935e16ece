//! Two-sided normalizers `N_G(H) = {g : gHg⁻¹ = H}` and the semigroup of
//! one-sided normalizers `ON_G(H) = {g : gHg⁻¹ ⊆ H}`.
//!
//! `gHg⁻¹ ⊆ H` is decided by a closed form per family and, independently, by
//! conjugating a sample of `H`-generators that is guaranteed to contain a
//! witness whenever one exists. The two must agree.

use rayon::prelude::*;
use serde::Serialize;

use super::oracle::{SubgroupKind, SubgroupOracle};
use crate::error::{Error, Result};
use crate::group::{Dihedral, Element, Family, GroupSpec, Word};

/// Number of consecutive generator indices sampled per window.
pub const SAMPLE_WINDOW: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizerVerdict {
    TwoSided,
    OneSidedOnly,
    NonNormalizing,
}

impl NormalizerVerdict {
    pub fn is_one_sided(self) -> bool {
        self != NormalizerVerdict::NonNormalizing
    }

    pub fn is_two_sided(self) -> bool {
        self == NormalizerVerdict::TwoSided
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizerClassification {
    pub verdict: NormalizerVerdict,
    /// For `NonNormalizing`: a generator `h` with `ghg⁻¹ ∉ H`.
    /// For `OneSidedOnly`: a generator `h` with `g⁻¹hg ∉ H`, so `h ∉ gHg⁻¹`.
    pub witness: Option<Element>,
}

/// `H`-generators whose conjugates by `g` decide `gHg⁻¹ ⊆ H`.
///
/// Exact (all generators) for finite groups and free factors. For `H_n` it is
/// `g_n … g_{n+7}` plus eight letters beyond every index occurring in `g`; for
/// the `ℤ ⋊ ℤ₂` family the flip plus the window letters.
pub fn generator_sample(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<Vec<Element>> {
    match (h.kind(), group.family(), g) {
        (SubgroupKind::Finite(set), Family::Finite(fg), _) => Ok(fg
            .greedy_generators(set.iter().copied())
            .into_iter()
            .map(Element::Finite)
            .collect()),
        (SubgroupKind::FreeFactor(letters), _, _) => {
            Ok(letters.iter().map(|&l| Element::Free(Word::letter(l))).collect())
        }
        (SubgroupKind::Hn(n), _, Element::FreeByZ { word, shift }) => {
            let top = word.letters().max().map_or(*n, |m| m - shift + 1).max(*n);
            let mut out: Vec<Element> = (top..top + SAMPLE_WINDOW).map(|i| Element::g(i, 1)).collect();
            out.extend((*n..n + SAMPLE_WINDOW).filter(|i| *i < top).map(|i| Element::g(i, 1)));
            Ok(out)
        }
        (SubgroupKind::Ex74H, Family::Ex74(window), Element::Ex74 { .. }) => {
            let mut out = vec![Element::Ex74 {
                word: Word::identity(),
                base: Dihedral::new(0, true),
            }];
            for n in window.indices() {
                for flip in [false, true] {
                    out.push(Element::Ex74 {
                        word: Word::letter(Dihedral::new(n, flip)),
                        base: Dihedral::IDENTITY,
                    });
                }
            }
            Ok(out)
        }
        (SubgroupKind::Product(h1, h2), Family::Product(g1, g2), Element::Product(x, y)) => {
            let mut out: Vec<Element> = generator_sample(g1, h1, x)?
                .into_iter()
                .map(|s| Element::pair(s, g2.identity()))
                .collect();
            out.extend(
                generator_sample(g2, h2, y)?
                    .into_iter()
                    .map(|s| Element::pair(g1.identity(), s)),
            );
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!(
            "no generator description or family rule for {h} (element {g})"
        ))),
    }
}

/// First sampled generator `s` with `g s g⁻¹ ∉ H`.
pub fn conjugation_witness(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<Option<Element>> {
    let g_inv = group.inv(g);
    for s in generator_sample(group, h, g)? {
        let c = group.mul(&group.mul(g, &s), &g_inv);
        if !h.contains(&c)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Closed-form test for `gHg⁻¹ ⊆ H`, where one exists.
fn closed_form(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<Option<bool>> {
    Ok(match (h.kind(), group.family(), g) {
        // Conjugating H_n by vφᵏ gives v·H_{n+k}·v⁻¹.
        (SubgroupKind::Hn(n), _, Element::FreeByZ { word, shift }) => {
            Some(*shift >= 0 && word.all_letters(|i| i >= *n))
        }
        // H is the preimage of {(0, m)}; conjugation by (n, m) sends the flip to (2n, 1).
        (SubgroupKind::Ex74H, _, Element::Ex74 { base, .. }) => Some(base.shift == 0),
        (SubgroupKind::Product(h1, h2), Family::Product(g1, g2), Element::Product(x, y)) => {
            match (closed_form(g1, h1, x)?, closed_form(g2, h2, y)?) {
                (Some(a), Some(b)) => Some(a && b),
                _ => None,
            }
        }
        _ => None,
    })
}

/// Decides `gHg⁻¹ ⊆ H`, returning a witness generator on failure.
fn conjugates_into(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<(bool, Option<Element>)> {
    let witness = conjugation_witness(group, h, g)?;
    let sampled = witness.is_none();
    if let Some(expected) = closed_form(group, h, g)? {
        if expected != sampled {
            return Err(Error::Disagreement {
                element: g.to_string(),
                detail: format!("closed form says {expected}, generator sample says {sampled}"),
            });
        }
    }
    Ok((sampled, witness))
}

pub fn classify_element(group: &GroupSpec, h: &SubgroupOracle, g: &Element) -> Result<NormalizerClassification> {
    group.validate(g)?;
    let (forward, witness) = conjugates_into(group, h, g)?;
    if !forward {
        return Ok(NormalizerClassification {
            verdict: NormalizerVerdict::NonNormalizing,
            witness,
        });
    }
    let (backward, witness) = conjugates_into(group, h, &group.inv(g))?;
    Ok(if backward {
        NormalizerClassification {
            verdict: NormalizerVerdict::TwoSided,
            witness: None,
        }
    } else {
        NormalizerClassification {
            verdict: NormalizerVerdict::OneSidedOnly,
            witness,
        }
    })
}

#[derive(Clone, Debug)]
pub struct NormalizerBallReport {
    pub radius: usize,
    pub entries: Vec<(Element, NormalizerClassification)>,
    /// Pairs `(a, b)` of one-sided normalizers with `|a| + |b| ≤ r` whose
    /// product was checked to be one-sided again.
    pub semigroup_pairs_checked: usize,
    pub semigroup_violation: Option<(Element, Element)>,
}

impl NormalizerBallReport {
    pub fn one_sided(&self) -> impl Iterator<Item = &Element> {
        self.entries
            .iter()
            .filter(|(_, c)| c.verdict.is_one_sided())
            .map(|(x, _)| x)
    }

    pub fn two_sided(&self) -> impl Iterator<Item = &Element> {
        self.entries
            .iter()
            .filter(|(_, c)| c.verdict.is_two_sided())
            .map(|(x, _)| x)
    }

    pub fn count(&self, verdict: NormalizerVerdict) -> usize {
        self.entries.iter().filter(|(_, c)| c.verdict == verdict).count()
    }
}

/// Classifies every element of `Ball(r)` and checks closure of the one-sided
/// set under products that stay inside the ball by length.
pub fn normalizer_ball_report(
    group: &GroupSpec,
    h: &SubgroupOracle,
    radius: usize,
    cap: usize,
) -> Result<NormalizerBallReport> {
    let ball = group.ball(radius, cap)?;
    let entries: Vec<(Element, NormalizerClassification)> = ball
        .elements()
        .par_iter()
        .map(|x| classify_element(group, h, x).map(|c| (x.clone(), c)))
        .collect::<Result<_>>()?;

    let mut by_length: Vec<Vec<usize>> = vec![Vec::new(); radius + 1];
    for (i, (_, c)) in entries.iter().enumerate() {
        if c.verdict.is_one_sided() {
            by_length[ball.lengths()[i]].push(i);
        }
    }
    let mut pairs = 0;
    let mut violation = None;
    'outer: for la in 1..=radius {
        for lb in 1..=radius - la {
            for &i in &by_length[la] {
                for &j in &by_length[lb] {
                    let p = group.mul(&entries[i].0, &entries[j].0);
                    let k = ball.position(&p).expect("product of lengths ≤ r lies in the ball");
                    pairs += 1;
                    if !entries[k].1.verdict.is_one_sided() {
                        violation = Some((entries[i].0.clone(), entries[j].0.clone()));
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(NormalizerBallReport {
        radius,
        entries,
        semigroup_pairs_checked: pairs,
        semigroup_violation: violation,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductCheck {
    pub radius: usize,
    pub checked: usize,
    pub one_sided: usize,
    pub two_sided: usize,
    /// Elements whose direct classification in the product differs from the
    /// conjunction of the component classifications.
    pub mismatches: Vec<(Element, NormalizerVerdict, NormalizerVerdict, NormalizerVerdict)>,
}

impl ProductCheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Verifies on `Ball(r)` of `G₁ × G₂` that `(g₁, g₂)` is a one-sided
/// (two-sided) normalizer of `H₁ × H₂` iff both components are.
///
/// The product side is decided by conjugating product generators `(s, e)`,
/// `(e, s)` directly, never by consulting the component verdicts.
pub fn product_normalizer_check(
    left: (&GroupSpec, &SubgroupOracle),
    right: (&GroupSpec, &SubgroupOracle),
    radius: usize,
    cap: usize,
) -> Result<ProductCheck> {
    let group = GroupSpec::product(left.0.clone(), right.0.clone());
    let h = SubgroupOracle::product(&group, left.1.clone(), right.1.clone())?;
    let ball = group.ball(radius, cap)?;
    let rows: Vec<(Element, NormalizerVerdict, NormalizerVerdict, NormalizerVerdict)> = ball
        .elements()
        .par_iter()
        .map(|x| -> Result<_> {
            let Element::Product(a, b) = x else {
                unreachable!("product ball")
            };
            let forward = conjugation_witness(&group, &h, x)?.is_none();
            let backward = conjugation_witness(&group, &h, &group.inv(x))?.is_none();
            let direct = match (forward, backward) {
                (false, _) => NormalizerVerdict::NonNormalizing,
                (true, true) => NormalizerVerdict::TwoSided,
                (true, false) => NormalizerVerdict::OneSidedOnly,
            };
            let c1 = classify_element(left.0, left.1, a)?.verdict;
            let c2 = classify_element(right.0, right.1, b)?.verdict;
            Ok((x.clone(), direct, c1, c2))
        })
        .collect::<Result<_>>()?;
    let mut check = ProductCheck {
        radius,
        checked: rows.len(),
        one_sided: 0,
        two_sided: 0,
        mismatches: Vec::new(),
    };
    for (x, direct, c1, c2) in rows {
        let expected = if c1.is_two_sided() && c2.is_two_sided() {
            NormalizerVerdict::TwoSided
        } else if c1.is_one_sided() && c2.is_one_sided() {
            NormalizerVerdict::OneSidedOnly
        } else {
            NormalizerVerdict::NonNormalizing
        };
        check.one_sided += direct.is_one_sided() as usize;
        check.two_sided += direct.is_two_sided() as usize;
        if direct != expected {
            check.mismatches.push((x, direct, c1, c2));
        }
    }
    Ok(check)
}
