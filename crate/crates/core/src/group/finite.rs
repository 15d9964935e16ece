//! Finite groups given by a multiplication table over indices `0..n`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Above this order the O(n³) associativity scan is skipped; tables built by
/// [`FiniteGroup::from_permutations`] or [`FiniteGroup::direct_product`] are
/// valid by construction.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 200;

/// Largest order accepted when closing permutation generators.
pub const MAX_FINITE_ORDER: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table (rows `a`, columns `b`, entry `ab`).
    pub fn from_table(rows: Vec<Vec<usize>>, identity: usize, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > MAX_FINITE_ORDER {
            return Err(Error::InvalidTable(format!("order {n} exceeds {MAX_FINITE_ORDER}")));
        }
        if identity >= n {
            return Err(Error::InvalidTable(format!("identity {identity} out of range")));
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {a} has length {}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry {x} out of range in row {a}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidTable(format!("row {a} repeats {x}")));
                }
                table.push(x as u32);
            }
        }
        for a in 0..n {
            if table[identity * n + a] as usize != a || table[a * n + identity] as usize != a {
                return Err(Error::InvalidTable(format!(
                    "{identity} is not a two-sided identity for {a}"
                )));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a * n + b] as usize == identity)
                .ok_or_else(|| Error::InvalidTable(format!("{a} has no right inverse")))?;
            if table[b * n + a] as usize != identity {
                return Err(Error::InvalidTable(format!("{a} has no two-sided inverse")));
            }
            inverses[a] = b;
        }
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b] as usize;
                    for c in 0..n {
                        let bc = table[b * n + c] as usize;
                        if table[ab * n + c] != table[a * n + bc] {
                            return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => return Err(Error::InvalidTable(format!("{} labels for {n} elements", l.len()))),
            None => (0..n).map(|i| format!("#{i}")).collect(),
        };
        let mut g = FiniteGroup {
            order: n,
            table,
            identity,
            inverses,
            labels,
            generators: Vec::new(),
        };
        g.generators = g.greedy_generators(0..n);
        Ok(g)
    }

    /// Closes a list of permutations (images of `0..degree`) into a group.
    /// Index 0 is the identity; the remaining indices follow breadth-first
    /// discovery under right multiplication by the generators, in order.
    /// Composition is right-to-left: `(στ)(x) = σ(τ(x))`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for p in generators {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Definition(format!("{p:?} is not a permutation of 0..{degree}")));
            }
        }
        let compose = |s: &[usize], t: &[usize]| -> Vec<usize> { t.iter().map(|&x| s[x]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in generators {
                let p = compose(&elems[i], s);
                if !index.contains_key(&p) {
                    if elems.len() >= MAX_FINITE_ORDER {
                        return Err(Error::CapExceeded { cap: MAX_FINITE_ORDER });
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                table[a * n + b] = index[&compose(pa, pb)] as u32;
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("permutation group"))
            .collect();
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        let gens = generators.iter().map(|s| index[s]).filter(|&g| g != 0).collect();
        Ok(FiniteGroup {
            order: n,
            table,
            identity: 0,
            inverses,
            labels,
            generators: gens,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let inverses = (0..n).map(|a| (n - a) % n).collect();
        let labels = (0..n).map(|a| a.to_string()).collect();
        let generators = if n > 1 { vec![1] } else { vec![] };
        FiniteGroup {
            order: n,
            table,
            identity: 0,
            inverses,
            labels,
            generators,
        }
    }

    /// `(a₁, a₂) ↦ a₁·|B| + a₂`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            let (x1, x2) = (x / nb, x % nb);
            for y in 0..n {
                let (y1, y2) = (y / nb, y % nb);
                table[x * n + y] = (a.mul(x1, y1) * nb + b.mul(x2, y2)) as u32;
            }
        }
        let inverses = (0..n).map(|x| a.inv(x / nb) * nb + b.inv(x % nb)).collect();
        let labels = (0..n)
            .map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb]))
            .collect();
        let mut generators: Vec<usize> = a.generators.iter().map(|&g| g * nb + b.identity).collect();
        generators.extend(b.generators.iter().map(|&g| a.identity * nb + g));
        FiniteGroup {
            order: n,
            table,
            identity: a.identity * nb + b.identity,
            inverses,
            labels,
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// A generating set, as element indices (identity excluded).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted index set.
    pub fn closure(&self, gens: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &s in &gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.into_iter().collect()
    }

    /// Picks generators from `candidates` until their closure stops growing.
    pub fn greedy_generators(&self, candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = BTreeSet::from([self.identity]);
        for c in candidates {
            if !current.contains(&c) {
                gens.push(c);
                current = self.closure(gens.iter().copied());
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.identity)
            && set.iter().all(|&a| a < self.order)
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, set: &BTreeSet<usize>) -> bool {
        set.iter()
            .all(|&x| (0..self.order).all(|g| set.contains(&self.conj(g, x))))
    }

    /// Conjugacy classes. Class 0 is `{e}`; classes are ordered by their
    /// smallest index and each class is sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let conjugators: Vec<usize> = if self.generators.is_empty() {
            vec![self.identity]
        } else {
            self.generators.clone()
        };
        let mut starts: Vec<usize> = vec![self.identity];
        starts.extend((0..self.order).filter(|&x| x != self.identity));
        for x in starts {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = classes.len();
            class_of[x] = c;
            let mut orbit = vec![x];
            let mut i = 0;
            while i < orbit.len() {
                let y = orbit[i];
                for &g in &conjugators {
                    let z = self.conj(g, y);
                    if class_of[z] == usize::MAX {
                        class_of[z] = c;
                        orbit.push(z);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        classes
    }
}

/// 1-based cycle notation, e.g. `(12)(34)`; points above 9 are comma separated.
pub fn cycle_notation(p: &[usize]) -> String {
    let sep = if p.len() > 9 { "," } else { "" };
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        let _ = write!(out, "({})", cycle.join(sep));
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// Parses 1-based cycle notation over `degree` points: `(12)(345)`, `(1,2)`
/// or `e` for the identity.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (0..degree).collect();
    let s = s.trim();
    if s == "e" || s == "()" || s.is_empty() {
        return Ok(p);
    }
    let bad = || Error::Definition(format!("cannot parse cycle notation {s:?}"));
    let mut rest = s;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let end = body.find(')').ok_or_else(bad)?;
        let inner = &body[..end];
        let points: Vec<usize> = if inner.contains(',') || inner.contains(' ') {
            inner
                .split([',', ' '])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            inner
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        if points.iter().any(|&x| x == 0 || x > degree) {
            return Err(bad());
        }
        cycles.push(points.into_iter().map(|x| x - 1).collect());
        rest = body[end + 1..].trim_start();
    }
    // Rightmost cycle acts first.
    for cycle in cycles.iter().rev() {
        let mut step: Vec<usize> = (0..degree).collect();
        for (i, &x) in cycle.iter().enumerate() {
            step[x] = cycle[(i + 1) % cycle.len()];
        }
        p = p.iter().map(|&x| step[x]).collect();
    }
    Ok(p)
}
