//! Exact normal forms and multiplication for the supported group families.
//!
//! * `Finite`: a validated multiplication table.
//! * `Free`: `F_n` on letters `0..n` (printed `a, b, c, …`) or `F_∞` on
//!   integer letters.
//! * `FreeByZ`: `F_∞ ⋊ ℤ`, where the generator `φ` of `ℤ` shifts letters
//!   `g_i ↦ g_{i+1}`. Elements are `(w, k)` meaning `w·φᵏ`, and
//!   `(v,n)(w,m) = (v·φⁿ(w), n+m)`.
//! * `Ex74`: `F_∞ ⋊ D_∞` with `D_∞ = ℤ ⋊ ℤ₂`; letters are indexed by `D_∞`
//!   and `s ∈ D_∞` acts by `g_t ↦ g_{st}`.
//! * `Product`: direct products of the above.

mod ball;
pub mod finite;
pub mod word;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use ball::{Ball, DEFAULT_ELEMENT_CAP};
pub use finite::FiniteGroup;
pub use word::{Letter, Word};

use crate::error::{Error, Result};

/// An element `(shift, flip)` of `ℤ ⋊ ℤ₂`, where the flip acts on `ℤ` by
/// negation: `(n₁,m₁)(n₂,m₂) = (n₁ + (−1)^{m₁} n₂, m₁ + m₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dihedral {
    pub shift: i64,
    pub flip: bool,
}

impl std::ops::Mul for Dihedral {
    type Output = Dihedral;

    fn mul(self, other: Dihedral) -> Dihedral {
        let n = if self.flip { -other.shift } else { other.shift };
        Dihedral {
            shift: self.shift + n,
            flip: self.flip ^ other.flip,
        }
    }
}

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral { shift: 0, flip: false };

    pub const fn new(shift: i64, flip: bool) -> Self {
        Dihedral { shift, flip }
    }

    pub fn inverse(self) -> Dihedral {
        if self.flip {
            self
        } else {
            Dihedral {
                shift: -self.shift,
                flip: false,
            }
        }
    }
}

impl fmt::Display for Dihedral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.shift, self.flip as u8)
    }
}

/// Inclusive range of generator indices that ball enumeration may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexWindow {
    pub lo: i64,
    pub hi: i64,
}

impl IndexWindow {
    pub const DEFAULT: IndexWindow = IndexWindow { lo: -5, hi: 5 };

    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Definition(format!("empty index window {lo}..{hi}")));
        }
        Ok(IndexWindow { lo, hi })
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl Default for IndexWindow {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Alphabet of a free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `F_n` on letters `0..n`.
    Rank(usize),
    /// `F_∞` on all integers; balls use the window.
    Integers(IndexWindow),
}

/// A canonical group element. Representations are unique: two elements are
/// equal as group elements iff they compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Element {
    Finite(usize),
    Free(Word<i64>),
    FreeByZ { word: Word<i64>, shift: i64 },
    Ex74 { word: Word<Dihedral>, base: Dihedral },
    Product(Box<Element>, Box<Element>),
}

impl Element {
    pub fn pair(a: Element, b: Element) -> Element {
        Element::Product(Box::new(a), Box::new(b))
    }

    /// `φᵏ` in `F_∞ ⋊ ℤ`.
    pub fn phi(k: i64) -> Element {
        Element::FreeByZ {
            word: Word::identity(),
            shift: k,
        }
    }

    /// `g_i^e` in `F_∞ ⋊ ℤ`.
    pub fn g(i: i64, e: i64) -> Element {
        Element::FreeByZ {
            word: Word::power(i, e),
            shift: 0,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Element::Finite(_) => "finite",
            Element::Free(_) => "free",
            Element::FreeByZ { .. } => "free_by_z",
            Element::Ex74 { .. } => "ex74",
            Element::Product(..) => "product",
        }
    }

    /// The `ℤ`-part of an `Ex74` element, which names its left `H`-coset.
    pub fn ex74_shift(&self) -> Option<i64> {
        match self {
            Element::Ex74 { base, .. } => Some(base.shift),
            _ => None,
        }
    }
}

fn letter_name(i: i64) -> String {
    if (0..26).contains(&i) {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

fn fmt_word<L>(f: &mut fmt::Formatter<'_>, w: &Word<L>, name: impl Fn(L) -> String) -> fmt::Result
where
    L: Letter,
{
    if w.is_identity() {
        return write!(f, "e");
    }
    for (i, &(l, e)) in w.syllables().iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{}", name(l))?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Finite(i) => write!(f, "#{i}"),
            Element::Free(w) => fmt_word(f, w, letter_name),
            Element::FreeByZ { word, shift } => {
                fmt_word(f, word, |i| format!("g{i}"))?;
                write!(f, " φ^{shift}")
            }
            Element::Ex74 { word, base } => {
                fmt_word(f, word, |t| format!("g{t}"))?;
                write!(f, " · {base}")
            }
            Element::Product(a, b) => write!(f, "[{a} ; {b}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Finite(Arc<FiniteGroup>),
    Free(Alphabet),
    FreeByZ(IndexWindow),
    Ex74(IndexWindow),
    Product(Arc<GroupSpec>, Arc<GroupSpec>),
}

/// A group together with the ordered generating set used for balls.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    family: Family,
    generating_set: Vec<Element>,
}

impl GroupSpec {
    pub fn finite(g: FiniteGroup) -> Self {
        let g = Arc::new(g);
        let mut gens: Vec<Element> = Vec::new();
        for &s in g.generators() {
            for x in [s, g.inv(s)] {
                if !gens.contains(&Element::Finite(x)) {
                    gens.push(Element::Finite(x));
                }
            }
        }
        GroupSpec {
            family: Family::Finite(g),
            generating_set: gens,
        }
    }

    /// `F_n` with generating set `a, a⁻¹, b, b⁻¹, …`.
    pub fn free(rank: usize) -> Self {
        let gens = (0..rank as i64)
            .flat_map(|i| [Word::power(i, 1), Word::power(i, -1)])
            .map(Element::Free)
            .collect();
        GroupSpec {
            family: Family::Free(Alphabet::Rank(rank)),
            generating_set: gens,
        }
    }

    /// `F_∞` with balls restricted to letters in `window`.
    pub fn free_infinite(window: IndexWindow) -> Self {
        let gens = window
            .indices()
            .flat_map(|i| [Word::power(i, 1), Word::power(i, -1)])
            .map(Element::Free)
            .collect();
        GroupSpec {
            family: Family::Free(Alphabet::Integers(window)),
            generating_set: gens,
        }
    }

    /// `F_∞ ⋊ ℤ` with generating set `g_lo^{±1}, …, g_hi^{±1}, φ^{±1}`.
    pub fn free_by_z(window: IndexWindow) -> Self {
        let mut gens: Vec<Element> = window
            .indices()
            .flat_map(|i| [Element::g(i, 1), Element::g(i, -1)])
            .collect();
        gens.push(Element::phi(1));
        gens.push(Element::phi(-1));
        GroupSpec {
            family: Family::FreeByZ(window),
            generating_set: gens,
        }
    }

    /// `F_∞ ⋊ D_∞` with letters `g_t^{±1}` for `t = (n, m)`, `n` in the
    /// window, followed by `τ^{±1} = (1,0)^{±1}` and `σ = (0,1)`.
    pub fn ex74(window: IndexWindow) -> Self {
        let mut gens: Vec<Element> = Vec::new();
        for n in window.indices() {
            for flip in [false, true] {
                let t = Dihedral::new(n, flip);
                for e in [1, -1] {
                    gens.push(Element::Ex74 {
                        word: Word::power(t, e),
                        base: Dihedral::IDENTITY,
                    });
                }
            }
        }
        for base in [
            Dihedral::new(1, false),
            Dihedral::new(-1, false),
            Dihedral::new(0, true),
        ] {
            gens.push(Element::Ex74 {
                word: Word::identity(),
                base,
            });
        }
        GroupSpec {
            family: Family::Ex74(window),
            generating_set: gens,
        }
    }

    /// Direct product; generating set is `(s, e)` for the left generators
    /// followed by `(e, s)` for the right ones.
    pub fn product(left: GroupSpec, right: GroupSpec) -> Self {
        let (le, re) = (left.identity(), right.identity());
        let mut gens: Vec<Element> = left
            .generating_set
            .iter()
            .map(|s| Element::pair(s.clone(), re.clone()))
            .collect();
        gens.extend(
            right
                .generating_set
                .iter()
                .map(|s| Element::pair(le.clone(), s.clone())),
        );
        GroupSpec {
            family: Family::Product(Arc::new(left), Arc::new(right)),
            generating_set: gens,
        }
    }

    /// Replaces the generating set. Every entry must be a valid element; the
    /// caller is responsible for it generating the group.
    pub fn with_generating_set(mut self, gens: Vec<Element>) -> Result<Self> {
        for g in &gens {
            self.validate(g)?;
        }
        self.generating_set = gens;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Finite(_) => "finite",
            Family::Free(_) => "free",
            Family::FreeByZ(_) => "free_by_z",
            Family::Ex74(_) => "ex74",
            Family::Product(..) => "product",
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match &self.family {
            Family::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn components(&self) -> Option<(&GroupSpec, &GroupSpec)> {
        match &self.family {
            Family::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn generating_set(&self) -> &[Element] {
        &self.generating_set
    }

    pub fn identity(&self) -> Element {
        match &self.family {
            Family::Finite(g) => Element::Finite(g.identity()),
            Family::Free(_) => Element::Free(Word::identity()),
            Family::FreeByZ(_) => Element::phi(0),
            Family::Ex74(_) => Element::Ex74 {
                word: Word::identity(),
                base: Dihedral::IDENTITY,
            },
            Family::Product(a, b) => Element::pair(a.identity(), b.identity()),
        }
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    /// Checks that `x` belongs to this family and is in normal form.
    pub fn validate(&self, x: &Element) -> Result<()> {
        let mismatch = || Error::FamilyMismatch {
            family: self.family_name(),
            element: x.to_string(),
        };
        let reduced = |w: &Word<i64>| Word::from_reduced(w.syllables().to_vec()).is_some();
        match (&self.family, x) {
            (Family::Finite(g), Element::Finite(i)) => {
                if *i < g.order() {
                    Ok(())
                } else {
                    Err(Error::NotNormalForm(format!("index {i} ≥ order {}", g.order())))
                }
            }
            (Family::Free(alpha), Element::Free(w)) => {
                if !reduced(w) {
                    return Err(Error::NotNormalForm(x.to_string()));
                }
                match alpha {
                    Alphabet::Rank(n) if !w.all_letters(|l| (0..*n as i64).contains(&l)) => {
                        Err(Error::NotNormalForm(format!("{x} uses a letter outside rank {n}")))
                    }
                    _ => Ok(()),
                }
            }
            (Family::FreeByZ(_), Element::FreeByZ { word, .. }) => {
                if reduced(word) {
                    Ok(())
                } else {
                    Err(Error::NotNormalForm(x.to_string()))
                }
            }
            (Family::Ex74(_), Element::Ex74 { word, .. }) => {
                if Word::from_reduced(word.syllables().to_vec()).is_some() {
                    Ok(())
                } else {
                    Err(Error::NotNormalForm(x.to_string()))
                }
            }
            (Family::Product(a, b), Element::Product(x1, x2)) => {
                a.validate(x1)?;
                b.validate(x2)
            }
            _ => Err(mismatch()),
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.validate(a)?;
        Ok(self.inv(a))
    }

    /// `g·x·g⁻¹`.
    pub fn conjugate(&self, g: &Element, x: &Element) -> Result<Element> {
        self.validate(g)?;
        self.validate(x)?;
        Ok(self.conj(g, x))
    }

    /// Product of two already-validated elements.
    ///
    /// # Panics
    ///
    /// If either argument belongs to another family. Public entry points
    /// validate first; internal callers only pass elements built by `self`.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&self.family, a, b) {
            (Family::Finite(g), Element::Finite(x), Element::Finite(y)) => Element::Finite(g.mul(*x, *y)),
            (Family::Free(_), Element::Free(v), Element::Free(w)) => Element::Free(v.mul(w)),
            (Family::FreeByZ(_), Element::FreeByZ { word: v, shift: n }, Element::FreeByZ { word: w, shift: m }) => {
                let mut word = v.clone();
                if *n == 0 {
                    word.extend(w);
                } else {
                    word.extend(&w.map_letters(|i| i + n));
                }
                Element::FreeByZ { word, shift: n + m }
            }
            (Family::Ex74(_), Element::Ex74 { word: v, base: s }, Element::Ex74 { word: w, base: t }) => {
                let mut word = v.clone();
                word.extend(&w.map_letters(|u| *s * u));
                Element::Ex74 { word, base: *s * *t }
            }
            (Family::Product(ga, gb), Element::Product(a1, a2), Element::Product(b1, b2)) => {
                Element::pair(ga.mul(a1, b1), gb.mul(a2, b2))
            }
            _ => panic!("family mismatch: {} in {} family", a, self.family_name()),
        }
    }

    /// Inverse of an already-validated element.
    pub fn inv(&self, a: &Element) -> Element {
        match (&self.family, a) {
            (Family::Finite(g), Element::Finite(x)) => Element::Finite(g.inv(*x)),
            (Family::Free(_), Element::Free(w)) => Element::Free(w.inverse()),
            (Family::FreeByZ(_), Element::FreeByZ { word, shift }) => {
                let k = *shift;
                Element::FreeByZ {
                    word: word.inverse().map_letters(|i| i - k),
                    shift: -k,
                }
            }
            (Family::Ex74(_), Element::Ex74 { word, base }) => {
                let s = base.inverse();
                Element::Ex74 {
                    word: word.inverse().map_letters(|u| s * u),
                    base: s,
                }
            }
            (Family::Product(ga, gb), Element::Product(x, y)) => Element::pair(ga.inv(x), gb.inv(y)),
            _ => panic!("family mismatch: {} in {} family", a, self.family_name()),
        }
    }

    pub fn conj(&self, g: &Element, x: &Element) -> Element {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    /// Word length of `x` in the family's standard letters. For finite groups
    /// this is `None`; balls record their own lengths.
    pub fn letter_length(&self, x: &Element) -> Option<u64> {
        match x {
            Element::Free(w) => Some(w.len()),
            _ => None,
        }
    }

    /// Human-readable label; finite elements use the group's labels.
    pub fn label(&self, x: &Element) -> String {
        match (&self.family, x) {
            (Family::Finite(g), Element::Finite(i)) if *i < g.order() => g.label(*i).to_string(),
            (Family::Product(ga, gb), Element::Product(a, b)) => {
                format!("[{} ; {}]", ga.label(a), gb.label(b))
            }
            _ => x.to_string(),
        }
    }

    pub fn ball(&self, radius: usize, cap: usize) -> Result<Ball> {
        Ball::enumerate(self, radius, cap)
    }
}

/// Freely reduces a raw letter/exponent list into an element of a free group.
pub fn reduce_word<I: IntoIterator<Item = (i64, i64)>>(raw: I) -> Element {
    Element::Free(Word::reduce(raw))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fbz() -> GroupSpec {
        GroupSpec::free_by_z(IndexWindow::DEFAULT)
    }

    fn fz(word: &[(i64, i64)], shift: i64) -> Element {
        Element::FreeByZ {
            word: Word::reduce(word.iter().copied()),
            shift,
        }
    }

    #[test]
    fn shift_law_moves_letters() {
        let g = fbz();
        let p = g.multiply(&fz(&[(0, 1)], 1), &fz(&[(0, 1)], 0)).unwrap();
        assert_eq!(p, fz(&[(0, 1), (1, 1)], 1));
    }

    #[test]
    fn identity_is_neutral_everywhere() {
        let groups = [
            GroupSpec::free(2),
            fbz(),
            GroupSpec::ex74(IndexWindow::new(-1, 1).unwrap()),
            GroupSpec::finite(FiniteGroup::cyclic(4)),
            GroupSpec::product(GroupSpec::free(2), fbz()),
        ];
        for g in &groups {
            for s in g.generating_set() {
                assert_eq!(&g.multiply(s, &g.identity()).unwrap(), s);
                assert_eq!(&g.multiply(&g.identity(), s).unwrap(), s);
            }
        }
    }

    #[test]
    fn dihedral_flip_negates_shift() {
        let g = GroupSpec::ex74(IndexWindow::new(-1, 1).unwrap());
        let flip = Element::Ex74 {
            word: Word::identity(),
            base: Dihedral::new(0, true),
        };
        let three = Element::Ex74 {
            word: Word::identity(),
            base: Dihedral::new(3, false),
        };
        let p = g.multiply(&flip, &three).unwrap();
        assert_eq!(
            p,
            Element::Ex74 {
                word: Word::identity(),
                base: Dihedral::new(-3, true)
            }
        );
    }

    #[test]
    fn free_inverse_reverses() {
        let g = GroupSpec::free(2);
        let x = reduce_word([(0, 1), (1, -1)]);
        assert_eq!(g.inverse(&x).unwrap(), reduce_word([(1, 1), (0, -1)]));
    }

    #[test]
    fn free_by_z_inverse() {
        let g = fbz();
        let x = fz(&[(2, 1)], 1);
        let inv = g.inverse(&x).unwrap();
        assert_eq!(inv, fz(&[(1, -1)], -1));
        assert!(g.is_identity(&g.mul(&x, &inv)));
        assert!(g.is_identity(&g.mul(&inv, &x)));
    }

    #[test]
    fn finite_inverse_of_identity() {
        let g = GroupSpec::finite(FiniteGroup::cyclic(5));
        assert_eq!(g.inverse(&g.identity()).unwrap(), g.identity());
        assert_eq!(g.inverse(&Element::Finite(2)).unwrap(), Element::Finite(3));
    }

    #[test]
    fn conjugating_by_phi_shifts_index() {
        let g = fbz();
        assert_eq!(
            g.conjugate(&Element::phi(1), &Element::g(5, 1)).unwrap(),
            Element::g(6, 1)
        );
        let x = Element::g(3, -2);
        assert_eq!(g.conjugate(&g.identity(), &x).unwrap(), x);
    }

    #[test]
    fn family_mismatch_is_an_error() {
        let g = GroupSpec::free(2);
        let err = g.multiply(&Element::Finite(0), &g.identity()).unwrap_err();
        assert!(matches!(err, Error::FamilyMismatch { .. }));
        let err = g.multiply(&reduce_word([(5, 1)]), &g.identity()).unwrap_err();
        assert!(matches!(err, Error::NotNormalForm(_)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(reduce_word([(0, 2), (2, -1)]).to_string(), "a^2 c^-1");
        assert_eq!(fz(&[(-1, 1)], 2).to_string(), "g-1 φ^2");
    }
}
