//! Reduced words in a free group, stored as syllables `(letter, exponent)`.

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

/// A free generator label. Integers for `F_n` and `F_∞`, elements of the
/// infinite dihedral group for the `F_∞ ⋊ (ℤ ⋊ ℤ₂)` family.
pub trait Letter: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync + 'static {}

impl<T: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync + 'static> Letter for T {}

/// A fully reduced word: no zero exponents, no two adjacent syllables on the
/// same letter. Every constructor maintains this, so structural equality is
/// group equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word<L> {
    syllables: Vec<(L, i64)>,
}

impl<L> Default for Word<L> {
    fn default() -> Self {
        Word { syllables: Vec::new() }
    }
}

impl<L: Letter> Word<L> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letter(l: L) -> Self {
        Word {
            syllables: vec![(l, 1)],
        }
    }

    pub fn power(l: L, e: i64) -> Self {
        let mut w = Self::identity();
        w.push(l, e);
        w
    }

    /// Freely reduces an arbitrary letter/exponent sequence.
    pub fn reduce<I: IntoIterator<Item = (L, i64)>>(raw: I) -> Self {
        let mut w = Self::identity();
        for (l, e) in raw {
            w.push(l, e);
        }
        w
    }

    /// Rebuilds a word from syllables that are claimed to be reduced.
    /// Returns `None` if the claim is false.
    pub fn from_reduced(syllables: Vec<(L, i64)>) -> Option<Self> {
        let ok = syllables.iter().all(|&(_, e)| e != 0) && syllables.windows(2).all(|p| p[0].0 != p[1].0);
        ok.then_some(Word { syllables })
    }

    /// Appends `l^e` on the right, cancelling against the tail.
    pub fn push(&mut self, l: L, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, exp)) if *last == l => {
                *exp += e;
                if *exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((l, e)),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn extend(&mut self, other: &Self) {
        for &(l, e) in &other.syllables {
            self.push(l, e);
        }
    }

    pub fn inverse(&self) -> Self {
        Word {
            syllables: self.syllables.iter().rev().map(|&(l, e)| (l, -e)).collect(),
        }
    }

    /// Applies an injective relabelling of the generators. Injectivity keeps
    /// the word reduced.
    pub fn map_letters(&self, f: impl Fn(L) -> L) -> Self {
        Word {
            syllables: self.syllables.iter().map(|&(l, e)| (f(l), e)).collect(),
        }
    }

    pub fn syllables(&self) -> &[(L, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Word length in letters, i.e. the sum of absolute exponents.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = L> + '_ {
        self.syllables.iter().map(|&(l, _)| l)
    }

    pub fn all_letters(&self, pred: impl Fn(L) -> bool) -> bool {
        self.syllables.iter().all(|&(l, _)| pred(l))
    }

    pub fn first(&self) -> Option<(L, i64)> {
        self.syllables.first().copied()
    }

    pub fn last(&self) -> Option<(L, i64)> {
        self.syllables.last().copied()
    }

    /// Splits off the longest suffix whose letters satisfy `pred`.
    pub fn split_suffix(&self, pred: impl Fn(L) -> bool) -> (Self, Self) {
        let cut = self.syllables.iter().rposition(|&(l, _)| !pred(l)).map_or(0, |i| i + 1);
        (
            Word {
                syllables: self.syllables[..cut].to_vec(),
            },
            Word {
                syllables: self.syllables[cut..].to_vec(),
            },
        )
    }

    /// Splits off the longest prefix whose letters satisfy `pred`.
    pub fn split_prefix(&self, pred: impl Fn(L) -> bool) -> (Self, Self) {
        let cut = self
            .syllables
            .iter()
            .position(|&(l, _)| !pred(l))
            .unwrap_or(self.syllables.len());
        (
            Word {
                syllables: self.syllables[..cut].to_vec(),
            },
            Word {
                syllables: self.syllables[cut..].to_vec(),
            },
        )
    }
}

impl<L: Letter> fmt::Debug for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.syllables)
    }
}
