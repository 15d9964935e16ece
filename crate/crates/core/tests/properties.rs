use std::collections::BTreeSet;
use std::sync::LazyLock;

use num_complex::Complex64;
use proptest::prelude::*;

use normcoset::algebra::{self, AlgebraElement};
use normcoset::bimodule;
use normcoset::catalog::{self, Pair};
use normcoset::subgroup::{self, NormalizerVerdict};
use normcoset::{Ball, Element, GroupSpec, IndexWindow, Word, DEFAULT_ELEMENT_CAP};

const CAP: usize = DEFAULT_ELEMENT_CAP;

fn small_window() -> IndexWindow {
    IndexWindow::new(-1, 1).unwrap()
}

/// One group per family with its radius-2 ball.
static FAMILIES: LazyLock<Vec<(GroupSpec, Ball)>> = LazyLock::new(|| {
    let groups = vec![
        catalog::finite_group("S4").unwrap(),
        GroupSpec::free(2),
        GroupSpec::free_infinite(small_window()),
        GroupSpec::free_by_z(small_window()),
        GroupSpec::ex74(small_window()),
        GroupSpec::product(GroupSpec::free(2), catalog::finite_group("S3").unwrap()),
    ];
    groups
        .into_iter()
        .map(|g| {
            let b = g.ball(2, CAP).unwrap();
            (g, b)
        })
        .collect()
});

type PairFixture = (Pair, Vec<Element>, Vec<Element>);

/// Pairs with an exact left-coset id, with `Ball(3)` and its `H`-part.
static PAIRS: LazyLock<Vec<PairFixture>> = LazyLock::new(|| {
    [
        ("Hn", Some("1")),
        ("Hn", Some("-2")),
        ("F2-in-F3", None),
        ("a-in-F2", None),
        ("Ex74", None),
        ("S4", Some("D4")),
        ("A5", Some("A4")),
    ]
    .iter()
    .map(|(n, s)| {
        let p = catalog::pair(n, *s).unwrap();
        let ball = p.group.ball(3, CAP).unwrap();
        let hs = p.subgroup.filter(ball.iter()).unwrap();
        (p, ball.elements().to_vec(), hs)
    })
    .collect()
});

fn pick<T>(items: &[T], i: prop::sample::Index) -> &T {
    &items[i.index(items.len())]
}

#[derive(Clone, Copy, Debug)]
enum Token {
    Letter(i64, i64),
    Phi(i64),
}

fn tokens(x: &Element) -> Vec<Token> {
    let Element::FreeByZ { word, shift } = x else {
        panic!("not in F_∞ ⋊ ℤ")
    };
    let mut out = Vec::new();
    for &(l, e) in word.syllables() {
        for _ in 0..e.abs() {
            out.push(Token::Letter(l, e.signum()));
        }
    }
    for _ in 0..shift.abs() {
        out.push(Token::Phi(shift.signum()));
    }
    out
}

/// Moves every `φ` to the right one letter at a time using `φ g_i = g_{i+1} φ`
/// and cancels adjacent inverse letters.
fn evaluate(tokens: &[Token]) -> (Vec<(i64, i64)>, i64) {
    let mut letters: Vec<(i64, i64)> = Vec::new();
    let mut shift = 0;
    for t in tokens {
        match *t {
            Token::Phi(d) => shift += d,
            Token::Letter(i, e) => {
                let l = (i + shift, e);
                if letters.last() == Some(&(l.0, -l.1)) {
                    letters.pop();
                } else {
                    letters.push(l);
                }
            }
        }
    }
    (letters, shift)
}

fn unit_letters(w: &Word<i64>) -> Vec<(i64, i64)> {
    w.syllables()
        .iter()
        .flat_map(|&(l, e)| std::iter::repeat_n((l, e.signum()), e.unsigned_abs() as usize))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn free_by_z_law_matches_letter_evaluator(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        static BALL: LazyLock<(GroupSpec, Ball)> = LazyLock::new(|| {
            let g = GroupSpec::free_by_z(IndexWindow::new(-3, 3).unwrap());
            let b = g.ball(3, CAP).unwrap();
            (g, b)
        });
        let (g, ball) = &*BALL;
        let (x, y) = (pick(ball.elements(), i), pick(ball.elements(), j));
        let Element::FreeByZ { word, shift } = g.mul(x, y) else { unreachable!() };
        let mut raw = tokens(x);
        raw.extend(tokens(y));
        let (letters, k) = evaluate(&raw);
        prop_assert_eq!(unit_letters(&word), letters);
        prop_assert_eq!(shift, k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn associativity_on_balls(
        f in 0..6usize,
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        k in any::<prop::sample::Index>(),
    ) {
        let (g, ball) = &FAMILIES[f];
        let (x, y, z) = (pick(ball.elements(), i), pick(ball.elements(), j), pick(ball.elements(), k));
        prop_assert_eq!(g.mul(&g.mul(x, y), z), g.mul(x, &g.mul(y, z)));
    }

    #[test]
    fn normal_form_round_trip(f in 0..6usize, i in any::<prop::sample::Index>()) {
        let (g, ball) = &FAMILIES[f];
        let x = pick(ball.elements(), i);
        let e = g.identity();
        prop_assert_eq!(&g.mul(x, &g.inv(x)), &e);
        prop_assert_eq!(&g.mul(&g.inv(x), x), &e);
        prop_assert_eq!(&g.mul(&e, x), x);
        prop_assert_eq!(&g.inv(&g.inv(x)), x);
        prop_assert!(g.validate(x).is_ok());
    }

    #[test]
    fn membership_closure(p in 0..7usize, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (pair, _, hs) = &PAIRS[p];
        let (a, b) = (pick(hs, i), pick(hs, j));
        prop_assert!(pair.subgroup.contains(&pair.group.mul(a, b)).unwrap());
        prop_assert!(pair.subgroup.contains(&pair.group.inv(a)).unwrap());
    }

    #[test]
    fn left_coset_id_is_well_defined(p in 0..7usize, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (pair, gs, hs) = &PAIRS[p];
        let (g, h) = (pick(gs, i), pick(hs, j));
        let id = bimodule::left_coset_id(&pair.group, &pair.subgroup, g).unwrap();
        let moved = bimodule::left_coset_id(&pair.group, &pair.subgroup, &pair.group.mul(g, h)).unwrap();
        prop_assert_eq!(&id, &moved);
        // The id is itself in gH.
        let back = pair.group.mul(&pair.group.inv(g), &id.0);
        prop_assert!(pair.subgroup.contains(&back).unwrap());
    }

    #[test]
    fn left_coset_ids_separate(p in 0..7usize, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (pair, gs, _) = &PAIRS[p];
        let (a, b) = (pick(gs, i), pick(gs, j));
        let same = pair.subgroup.contains(&pair.group.mul(&pair.group.inv(a), b)).unwrap();
        let ia = bimodule::left_coset_id(&pair.group, &pair.subgroup, a).unwrap();
        let ib = bimodule::left_coset_id(&pair.group, &pair.subgroup, b).unwrap();
        prop_assert_eq!(same, ia == ib);
    }

    #[test]
    fn double_coset_key_is_invariant(
        p in 0..7usize,
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        k in any::<prop::sample::Index>(),
    ) {
        let (pair, gs, hs) = &PAIRS[p];
        let (g, h1, h2) = (pick(gs, i), pick(hs, j), pick(hs, k));
        let key = bimodule::double_coset_key(&pair.group, &pair.subgroup, g).unwrap();
        let moved = pair.group.mul(&pair.group.mul(h1, g), h2);
        prop_assert_eq!(key, bimodule::double_coset_key(&pair.group, &pair.subgroup, &moved).unwrap());
    }

    #[test]
    fn classification_is_consistent(p in 0..7usize, i in any::<prop::sample::Index>()) {
        let (pair, gs, _) = &PAIRS[p];
        let g = pick(gs, i);
        let c = subgroup::classify_element(&pair.group, &pair.subgroup, g).unwrap();
        let ci = subgroup::classify_element(&pair.group, &pair.subgroup, &pair.group.inv(g)).unwrap();
        // N ⊆ ON, and g ∈ N iff g and g⁻¹ are both in ON.
        prop_assert!(!c.verdict.is_two_sided() || c.verdict.is_one_sided());
        prop_assert_eq!(c.verdict.is_two_sided(), c.verdict.is_one_sided() && ci.verdict.is_one_sided());
        prop_assert_eq!(c.verdict.is_two_sided(), ci.verdict.is_two_sided());
        match c.verdict {
            NormalizerVerdict::NonNormalizing => {
                let w = c.witness.clone().expect("witness");
                prop_assert!(pair.subgroup.contains(&w).unwrap());
                prop_assert!(!pair.subgroup.contains(&pair.group.conj(g, &w)).unwrap());
            }
            NormalizerVerdict::OneSidedOnly => {
                let w = c.witness.clone().expect("witness");
                prop_assert!(!pair.subgroup.contains(&pair.group.conj(&pair.group.inv(g), &w)).unwrap());
            }
            NormalizerVerdict::TwoSided => prop_assert!(c.witness.is_none()),
        }
    }
}

#[test]
fn balls_grow_and_are_inverse_closed() {
    let groups = [
        catalog::finite_group("A5").unwrap(),
        GroupSpec::free(2),
        GroupSpec::free_infinite(small_window()),
        GroupSpec::free_by_z(small_window()),
        GroupSpec::ex74(small_window()),
    ];
    for g in &groups {
        let mut previous: Option<BTreeSet<Element>> = None;
        for r in 0..=5 {
            let ball = g.ball(r, CAP).unwrap();
            let set: BTreeSet<Element> = ball.iter().cloned().collect();
            assert_eq!(set.len(), ball.len(), "{} radius {r}: duplicates", g.family_name());
            for x in &set {
                assert!(set.contains(&g.inv(x)), "{} radius {r}: {x}", g.family_name());
            }
            if let Some(prev) = &previous {
                assert!(prev.is_subset(&set));
                // Elements at distance exactly r are products of something at
                // distance r-1 with a generator.
                for x in ball.sphere(r) {
                    assert!(g.generating_set().iter().any(|s| prev.contains(&g.mul(x, s))));
                }
            }
            previous = Some(set);
        }
    }
}

#[test]
fn ball_cap_is_a_hard_error() {
    assert!(matches!(
        GroupSpec::free(3).ball(6, 1000),
        Err(normcoset::Error::CapExceeded { .. })
    ));
}

fn brute_convolution(g: &normcoset::FiniteGroup, a: &AlgebraElement, b: &AlgebraElement) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); g.order()];
    for y in 0..g.order() {
        for z in 0..g.order() {
            out[g.mul(y, z)] += a.coefficients()[y] * b.coefficients()[z];
        }
    }
    out
}

fn integer_element(order: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((-5i32..=5, -5i32..=5), order).prop_map(|v| {
        AlgebraElement::from_coefficients(v.into_iter().map(|(a, b)| Complex64::new(a as f64, b as f64)).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn convolution_matches_double_sum((a, b) in (integer_element(24), integer_element(24))) {
        let g = catalog::finite_group_raw("S4").unwrap();
        let fast = algebra::convolve(&g, &a, &b).unwrap();
        let brute = brute_convolution(&g, &a, &b);
        prop_assert_eq!(fast.coefficients(), brute.as_slice());
    }

    #[test]
    fn star_reverses_products((a, b) in (integer_element(8), integer_element(8))) {
        let g = catalog::finite_group_raw("Q8").unwrap();
        let ab = algebra::convolve(&g, &a, &b).unwrap();
        let lhs = algebra::star(&g, &ab).unwrap();
        let rhs = algebra::convolve(&g, &algebra::star(&g, &b).unwrap(), &algebra::star(&g, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs.coefficients(), rhs.coefficients());
        let twice = algebra::star(&g, &algebra::star(&g, &a).unwrap()).unwrap();
        prop_assert_eq!(twice.coefficients(), a.coefficients());
    }
}

#[test]
fn s3_convolution_example() {
    let g = catalog::finite_group_raw("S3").unwrap();
    let t = g.find_label("(12)").unwrap();
    let r = g.find_label("(123)").unwrap();
    let a = AlgebraElement::delta(6, t).add(&AlgebraElement::delta(6, g.identity()));
    let b = AlgebraElement::delta(6, r);
    let ab = algebra::convolve(&g, &a, &b).unwrap();
    assert_eq!(ab.coefficients(), brute_convolution(&g, &a, &b).as_slice());
    let mut expected = vec![Complex64::new(0.0, 0.0); 6];
    expected[r] = Complex64::new(1.0, 0.0);
    expected[g.mul(t, r)] = Complex64::new(1.0, 0.0);
    assert_eq!(ab.coefficients(), expected.as_slice());
}

#[test]
fn h_conjugates_match_double_loop() {
    for (pair, _, _) in PAIRS.iter() {
        let ball = pair.group.ball(3, CAP).unwrap();
        let hs: Vec<&Element> = ball.iter().filter(|k| pair.subgroup.contains(k).unwrap()).collect();
        for g in ball.within(1) {
            let mut expected = BTreeSet::new();
            for k in &hs {
                expected.insert(pair.group.mul(&pair.group.mul(k, g), &pair.group.inv(k)));
            }
            let r = subgroup::h_conjugates(&pair.group, &pair.subgroup, g, 3, CAP).unwrap();
            assert_eq!(r.conjugates, expected, "{}: {}", pair.name, pair.group.label(g));
        }
    }
}

#[test]
fn finite_total_trace_is_the_index() {
    for name in ["S3", "Q8", "D4", "A4", "S4"] {
        let g = catalog::finite_group(name).unwrap();
        let order = g.as_finite().unwrap().order();
        for sub in catalog::named_subgroups(name) {
            let h = catalog::finite_subgroup(&g, sub).unwrap();
            let normcoset::SubgroupKind::Finite(set) = h.kind() else {
                unreachable!()
            };
            let d = bimodule::full_ball_decomposition(&g, &h, order, CAP).unwrap();
            assert!(d.disjoint);
            assert_eq!(d.total_trace, Some((order / set.len()) as u64), "{name}/{sub}");
        }
    }
}
