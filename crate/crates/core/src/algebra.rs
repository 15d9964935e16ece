//! The group algebra `ℂG` of a finite group: convolution, trace, minimal
//! central idempotents, commutator subgroup and the fixed-point inclusion
//! verdicts.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub const DEFAULT_SEED: u64 = 0x5eed;
/// Largest order handled by [`minimal_central_idempotents`] by default.
pub const DEFAULT_MAX_ALGEBRA_ORDER: usize = 5000;
/// Largest order for which normal subgroups are enumerated by default.
pub const DEFAULT_MAX_NORMAL_ORDER: usize = 200;
pub const DEFAULT_MAX_NORMAL_SUBGROUPS: usize = 1000;
/// Eigenvalues closer than this are treated as one eigenvalue.
pub const EIGEN_GAP: f64 = 1e-7;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const TRACE_TOLERANCE: f64 = 1e-6;
pub const MAX_SPLIT_ATTEMPTS: u32 = 5;

/// `Σ_g a(g) u_g`, stored densely by element index.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    coefficients: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn zero(order: usize) -> Self {
        AlgebraElement {
            coefficients: vec![Complex64::new(0.0, 0.0); order],
        }
    }

    pub fn delta(order: usize, g: usize) -> Self {
        let mut a = Self::zero(order);
        a.coefficients[g] = Complex64::new(1.0, 0.0);
        a
    }

    pub fn from_coefficients(coefficients: Vec<Complex64>) -> Self {
        AlgebraElement { coefficients }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a + b)
            .collect();
        AlgebraElement { coefficients }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        AlgebraElement {
            coefficients: self.coefficients.iter().map(|a| a * s).collect(),
        }
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_size(g: &FiniteGroup, a: &AlgebraElement) -> Result<()> {
    if a.len() != g.order() {
        return Err(Error::Precondition(format!(
            "algebra element of length {} for a group of order {}",
            a.len(),
            g.order()
        )));
    }
    Ok(())
}

/// `(ab)(g) = Σ_h a(h) b(h⁻¹g)`.
pub fn convolve(g: &FiniteGroup, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    check_size(g, a)?;
    check_size(g, b)?;
    let mut out = AlgebraElement::zero(g.order());
    for (x, &ax) in a.coefficients.iter().enumerate() {
        if ax == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (y, &by) in b.coefficients.iter().enumerate() {
            out.coefficients[g.mul(x, y)] += ax * by;
        }
    }
    Ok(out)
}

/// `a*(g) = conj(a(g⁻¹))`.
pub fn star(g: &FiniteGroup, a: &AlgebraElement) -> Result<AlgebraElement> {
    check_size(g, a)?;
    let coefficients = (0..g.order()).map(|x| a.coefficients[g.inv(x)].conj()).collect();
    Ok(AlgebraElement { coefficients })
}

/// `Tr(a) = |G|·a(e)`, so `Tr(1) = |G|` and `Tr(u_g) = 0` for `g ≠ e`.
pub fn trace(g: &FiniteGroup, a: &AlgebraElement) -> Result<Complex64> {
    check_size(g, a)?;
    Ok(a.coefficients[g.identity()] * g.order() as f64)
}

/// `e_N = (1/|G|) Σ_g u_g`.
pub fn e_n(g: &FiniteGroup) -> AlgebraElement {
    let c = Complex64::new(1.0 / g.order() as f64, 0.0);
    AlgebraElement {
        coefficients: vec![c; g.order()],
    }
}

/// Conjugacy classes with their class-algebra structure constants
/// `C_i C_j = Σ_k a[i][j][k] C_k`.
#[derive(Clone, Debug)]
pub struct ClassAlgebra {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Class of the inverses of class `i`.
    pub inverse_class: Vec<usize>,
    constants: Vec<u64>,
}

impl ClassAlgebra {
    pub fn new(g: &FiniteGroup) -> Self {
        let classes = g.conjugacy_classes();
        let k = classes.len();
        let mut class_of = vec![0; g.order()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        let inverse_class = classes.iter().map(|c| class_of[g.inv(c[0])]).collect();
        let mut constants = vec![0u64; k * k * k];
        for (kk, c) in classes.iter().enumerate() {
            let z = c[0];
            for x in 0..g.order() {
                let y = g.mul(g.inv(x), z);
                constants[(class_of[x] * k + class_of[y]) * k + kk] += 1;
            }
        }
        ClassAlgebra {
            classes,
            class_of,
            inverse_class,
            constants,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.len();
        self.constants[(i * n + j) * n + k]
    }

    /// Product of two central elements given by class coefficients.
    pub fn mul(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &xi) in x.iter().enumerate().take(n) {
            for (j, &yj) in y.iter().enumerate().take(n) {
                let xy = xi * yj;
                if xy == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    let a = self.constant(i, j, k);
                    if a != 0 {
                        *o += xy * a as f64;
                    }
                }
            }
        }
        out
    }

    /// Expands class coefficients into a full group-algebra element.
    pub fn expand(&self, x: &[Complex64]) -> AlgebraElement {
        AlgebraElement {
            coefficients: self.class_of.iter().map(|&c| x[c]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CentralIdempotent {
    /// Coefficient on each conjugacy class (constant on the class).
    pub class_coefficients: Vec<Complex64>,
    pub element: AlgebraElement,
    pub trace: f64,
    /// `d` with `trace ≈ d²`: the dimension of the matching irreducible
    /// representation.
    pub dimension: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentReport {
    pub idempotents: Vec<CentralIdempotent>,
    pub seed: u64,
    pub attempts: u32,
    /// `max ‖eᵢeᵢ − eᵢ‖_∞`.
    pub idempotency_residual: f64,
    /// `max_{i≠j} ‖eᵢeⱼ‖_∞`.
    pub orthogonality_residual: f64,
    /// `‖Σ eᵢ − 1‖_∞`.
    pub completeness_residual: f64,
    /// `max ‖eᵢ* − eᵢ‖_∞`.
    pub self_adjoint_residual: f64,
    /// `|Σ Tr(eᵢ) − |G||`.
    pub trace_sum_residual: f64,
}

impl IdempotentReport {
    pub fn traces(&self) -> Vec<f64> {
        self.idempotents.iter().map(|e| e.trace).collect()
    }

    pub fn dimensions(&self) -> Vec<u32> {
        self.idempotents.iter().map(|e| e.dimension).collect()
    }

    pub fn residuals_ok(&self) -> bool {
        self.idempotency_residual <= RESIDUAL_TOLERANCE
            && self.orthogonality_residual <= RESIDUAL_TOLERANCE
            && self.completeness_residual <= RESIDUAL_TOLERANCE
            && self.self_adjoint_residual <= RESIDUAL_TOLERANCE
            && self.trace_sum_residual <= TRACE_TOLERANCE
    }
}

/// Splits the center of `ℂG` with a random self-adjoint central element.
///
/// Multiplication by `c = Σ c_C C` is a Hermitian operator on the center in
/// the orthonormal basis `C/√|C|`; its eigenvectors are the minimal central
/// idempotents up to scale. Coefficients are complex with
/// `c_{C⁻¹} = conj(c_C)`: real ones cannot separate complex-conjugate
/// characters. A run whose eigenvalue clusters (gap [`EIGEN_GAP`]) do not
/// match the class count is retried with the next seed.
pub fn minimal_central_idempotents(g: &FiniteGroup, seed: u64, max_order: usize) -> Result<IdempotentReport> {
    if g.order() > max_order {
        return Err(Error::CapExceeded { cap: max_order });
    }
    let algebra = ClassAlgebra::new(g);
    let mut last = String::new();
    for attempt in 0..MAX_SPLIT_ATTEMPTS {
        match split_once(g, &algebra, seed.wrapping_add(attempt as u64)) {
            Ok(idempotents) => return Ok(finish(g, &algebra, idempotents, seed, attempt + 1)),
            Err(detail) => last = detail,
        }
    }
    Err(Error::Splitting {
        attempts: MAX_SPLIT_ATTEMPTS,
        detail: last,
    })
}

fn split_once(
    g: &FiniteGroup,
    algebra: &ClassAlgebra,
    seed: u64,
) -> std::result::Result<Vec<CentralIdempotent>, String> {
    let k = algebra.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..k {
        let j = algebra.inverse_class[i];
        if j < i {
            continue;
        }
        let re = rng.random_range(-1.0..1.0);
        let im = if j == i { 0.0 } else { rng.random_range(-1.0..1.0) };
        c[i] = Complex64::new(re, im);
        c[j] = c[i].conj();
    }
    let size: Vec<f64> = algebra.classes.iter().map(|c| (c.len() as f64).sqrt()).collect();
    let mut m = DMatrix::<Complex64>::zeros(k, k);
    for (i, ci) in c.iter().enumerate() {
        for j in 0..k {
            for kk in 0..k {
                let a = algebra.constant(i, j, kk);
                if a != 0 {
                    m[(kk, j)] += ci * (a as f64 * size[kk] / size[j]);
                }
            }
        }
    }
    let hermitian = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eigen = SymmetricEigen::new(hermitian);
    let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    if values.windows(2).any(|w| w[1] - w[0] < EIGEN_GAP) {
        return Err(format!(
            "eigenvalues of the random central element are not separated (seed {seed})"
        ));
    }
    let mut out = Vec::with_capacity(k);
    for col in 0..k {
        let v = eigen.eigenvectors.column(col);
        let scale = v[0].conj();
        let coeffs: Vec<Complex64> = (0..k).map(|i| scale * v[i] / size[i]).collect();
        let trace = coeffs[0].re * g.order() as f64;
        let d = trace.sqrt().round();
        if d < 1.0 || (trace - d * d).abs() > TRACE_TOLERANCE {
            return Err(format!("trace {trace} is not a perfect square (seed {seed})"));
        }
        out.push(CentralIdempotent {
            element: algebra.expand(&coeffs),
            class_coefficients: coeffs,
            trace,
            dimension: d as u32,
        });
    }
    Ok(out)
}

fn rounded(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

fn finish(
    g: &FiniteGroup,
    algebra: &ClassAlgebra,
    mut idempotents: Vec<CentralIdempotent>,
    seed: u64,
    attempts: u32,
) -> IdempotentReport {
    idempotents.sort_by(|a, b| {
        a.dimension.cmp(&b.dimension).then_with(|| {
            let key = |e: &CentralIdempotent| -> Vec<(i64, i64)> {
                e.class_coefficients
                    .iter()
                    .map(|z| (rounded(z.re), rounded(z.im)))
                    .collect()
            };
            key(a)
                .cmp(&key(b))
                .then(a.trace.partial_cmp(&b.trace).unwrap_or(Ordering::Equal))
        })
    });
    let k = algebra.len();
    let diff = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let zero = vec![Complex64::new(0.0, 0.0); k];
    let mut idempotency = 0.0f64;
    let mut orthogonality = 0.0f64;
    let mut self_adjoint = 0.0f64;
    let mut sum = zero.clone();
    for (i, e) in idempotents.iter().enumerate() {
        let x = &e.class_coefficients;
        idempotency = idempotency.max(diff(&algebra.mul(x, x), x));
        let adj: Vec<Complex64> = (0..k).map(|c| x[algebra.inverse_class[c]].conj()).collect();
        self_adjoint = self_adjoint.max(diff(&adj, x));
        for f in &idempotents[i + 1..] {
            orthogonality = orthogonality.max(diff(&algebra.mul(x, &f.class_coefficients), &zero));
        }
        for (s, v) in sum.iter_mut().zip(x) {
            *s += v;
        }
    }
    let mut one = zero;
    one[0] = Complex64::new(1.0, 0.0);
    let trace_sum: f64 = idempotents.iter().map(|e| e.trace).sum();
    IdempotentReport {
        completeness_residual: diff(&sum, &one),
        idempotents,
        seed,
        attempts,
        idempotency_residual: idempotency,
        orthogonality_residual: orthogonality,
        self_adjoint_residual: self_adjoint,
        trace_sum_residual: (trace_sum - g.order() as f64).abs(),
    }
}

/// Subgroup generated by all commutators `g⁻¹h⁻¹gh`.
pub fn commutator_closure(g: &FiniteGroup) -> BTreeSet<usize> {
    let mut commutators: Vec<usize> = Vec::new();
    let mut seen = vec![false; g.order()];
    for x in 0..g.order() {
        for y in 0..g.order() {
            let c = g.commutator(x, y);
            if !std::mem::replace(&mut seen[c], true) {
                commutators.push(c);
            }
        }
    }
    g.closure(commutators)
}

/// Normal subgroups of `g`, found as closures of unions of conjugacy
/// classes, ordered by size then contents.
pub fn normal_subgroups(g: &FiniteGroup, max_subgroups: usize) -> Result<Vec<BTreeSet<usize>>> {
    let classes = g.conjugacy_classes();
    let trivial = BTreeSet::from([g.identity()]);
    let mut found = vec![trivial.clone()];
    let mut seen = HashSet::from([trivial]);
    let mut i = 0;
    while i < found.len() {
        let base = found[i].clone();
        for c in &classes {
            if base.contains(&c[0]) {
                continue;
            }
            let n = g.closure(base.iter().chain(c).copied());
            if seen.insert(n.clone()) {
                if found.len() >= max_subgroups {
                    return Err(Error::CapExceeded { cap: max_subgroups });
                }
                found.push(n);
            }
        }
        i += 1;
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found)
}

/// Whether `G/N` is abelian, checked on the quotient: cosets are named by
/// their smallest element and `xN·yN` is compared with `yN·xN`.
pub fn quotient_is_abelian(g: &FiniteGroup, n: &BTreeSet<usize>) -> bool {
    let coset = |x: usize| n.iter().map(|&h| g.mul(x, h)).min().expect("subgroup");
    let mut reps: Vec<usize> = (0..g.order()).map(coset).collect();
    reps.sort_unstable();
    reps.dedup();
    reps.iter()
        .all(|&x| reps.iter().all(|&y| coset(g.mul(x, y)) == coset(g.mul(y, x))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorSubgroupReport {
    pub commutator_subgroup: BTreeSet<usize>,
    /// `None` when the group is above the enumeration limit.
    pub normal_subgroups_with_abelian_quotient: Option<Vec<BTreeSet<usize>>>,
    /// Whether the intersection of those subgroups equals the commutator
    /// closure.
    pub intersection_matches: Option<bool>,
    pub is_normal: bool,
}

pub fn commutator_subgroup(
    g: &FiniteGroup,
    max_order: usize,
    max_subgroups: usize,
) -> Result<CommutatorSubgroupReport> {
    let k = commutator_closure(g);
    let is_normal = g.is_normal(&k);
    if g.order() > max_order {
        return Ok(CommutatorSubgroupReport {
            commutator_subgroup: k,
            normal_subgroups_with_abelian_quotient: None,
            intersection_matches: None,
            is_normal,
        });
    }
    let abelian: Vec<BTreeSet<usize>> = normal_subgroups(g, max_subgroups)?
        .into_iter()
        .filter(|n| quotient_is_abelian(g, n))
        .collect();
    let intersection = abelian
        .iter()
        .fold((0..g.order()).collect::<BTreeSet<usize>>(), |acc, n| {
            acc.intersection(n).copied().collect()
        });
    Ok(CommutatorSubgroupReport {
        intersection_matches: Some(intersection == k),
        commutator_subgroup: k,
        normal_subgroups_with_abelian_quotient: Some(abelian),
        is_normal,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InclusionVerdict {
    Regular,
    Singular,
    /// Neither: the normalizers generate the fixed points of `[G,G]`.
    Intermediate,
    /// `G = {e}`: the inclusion is an equality.
    Trivial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointReport {
    pub order: usize,
    pub commutator: CommutatorSubgroupReport,
    pub idempotents: IdempotentReport,
    pub abelian: bool,
    /// All minimal central idempotents have trace 1.
    pub regular: bool,
    /// `[G,G] = G`.
    pub singular: bool,
    pub verdict: InclusionVerdict,
}

impl FixedPointReport {
    pub fn regular_matches_abelian(&self) -> bool {
        self.regular == self.abelian
    }

    /// `[G : [G,G]]`: the index of the fixed points of `G` inside the algebra
    /// generated by their normalizers.
    pub fn abelianization_order(&self) -> usize {
        self.order / self.commutator.commutator_subgroup.len()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AlgebraCaps {
    pub max_algebra_order: usize,
    pub max_normal_order: usize,
    pub max_normal_subgroups: usize,
}

impl Default for AlgebraCaps {
    fn default() -> Self {
        AlgebraCaps {
            max_algebra_order: DEFAULT_MAX_ALGEBRA_ORDER,
            max_normal_order: DEFAULT_MAX_NORMAL_ORDER,
            max_normal_subgroups: DEFAULT_MAX_NORMAL_SUBGROUPS,
        }
    }
}

pub fn fixed_point_inclusion_report(g: &FiniteGroup, seed: u64, caps: AlgebraCaps) -> Result<FixedPointReport> {
    let commutator = commutator_subgroup(g, caps.max_normal_order, caps.max_normal_subgroups)?;
    let idempotents = minimal_central_idempotents(g, seed, caps.max_algebra_order)?;
    let regular = idempotents.idempotents.iter().all(|e| e.dimension == 1);
    let singular = commutator.commutator_subgroup.len() == g.order();
    let verdict = match (regular, singular) {
        (true, true) => InclusionVerdict::Trivial,
        (true, false) => InclusionVerdict::Regular,
        (false, true) => InclusionVerdict::Singular,
        (false, false) => InclusionVerdict::Intermediate,
    };
    Ok(FixedPointReport {
        order: g.order(),
        abelian: g.is_abelian(),
        commutator,
        idempotents,
        regular,
        singular,
        verdict,
    })
}
