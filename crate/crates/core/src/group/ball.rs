use std::collections::HashMap;

use super::{Element, GroupSpec};
use crate::error::{Error, Result};

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// All elements of word length at most `radius` with respect to the ordered
/// generating set, in shortlex order of their shortlex-least spelling.
///
/// Breadth-first search that scans each level in order and tries generators
/// in order discovers elements in exactly that order.
#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    elements: Vec<Element>,
    lengths: Vec<usize>,
    index: HashMap<Element, usize>,
    /// `level_ends[r]` is the number of elements of length `≤ r`.
    level_ends: Vec<usize>,
}

impl Ball {
    pub(super) fn enumerate(group: &GroupSpec, radius: usize, cap: usize) -> Result<Ball> {
        let e = group.identity();
        let mut elements = vec![e.clone()];
        let mut lengths = vec![0];
        let mut index = HashMap::from([(e, 0usize)]);
        let mut level_ends = vec![1];
        let mut start = 0;
        for r in 1..=radius {
            let end = elements.len();
            for i in start..end {
                for s in group.generating_set() {
                    let y = group.mul(&elements[i], s);
                    if !index.contains_key(&y) {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        index.insert(y.clone(), elements.len());
                        elements.push(y);
                        lengths.push(r);
                    }
                }
            }
            start = end;
            level_ends.push(elements.len());
        }
        Ok(Ball {
            radius,
            elements,
            lengths,
            index,
            level_ends,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Word length of `x`, if it lies in the ball.
    pub fn length(&self, x: &Element) -> Option<usize> {
        self.position(x).map(|i| self.lengths[i])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Elements of length at most `r` (a prefix of [`Ball::elements`]).
    pub fn within(&self, r: usize) -> &[Element] {
        let r = r.min(self.radius);
        &self.elements[..self.level_ends[r]]
    }

    /// Elements of length exactly `r`.
    pub fn sphere(&self, r: usize) -> &[Element] {
        if r > self.radius {
            return &[];
        }
        let lo = if r == 0 { 0 } else { self.level_ends[r - 1] };
        &self.elements[lo..self.level_ends[r]]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter()
    }
}
