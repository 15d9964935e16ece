//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! pass/fail table is always printed.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use normcoset::algebra::{self, AlgebraCaps, AlgebraElement};
use normcoset::bimodule::{self, DoubleCosetVerdict};
use normcoset::catalog;
use normcoset::subgroup;
use normcoset::{Element, FiniteGroup, DEFAULT_ELEMENT_CAP};

const CAP: usize = DEFAULT_ELEMENT_CAP;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: normcoset::Error) -> String {
    e.to_string()
}

/// One-sided normalizers of `H_0` at radius 4 are `{vφᵏ : v ∈ H_0, k ≥ 0}`,
/// two-sided ones are `H_0`.
fn normalizers_of_h0() -> Outcome {
    let pair = catalog::pair("Hn", Some("0")).map_err(err)?;
    let report = subgroup::normalizer_ball_report(&pair.group, &pair.subgroup, 4, CAP).map_err(err)?;
    let mut wrong = 0;
    let (mut on, mut n) = (0, 0);
    for (x, c) in &report.entries {
        let Element::FreeByZ { word, shift } = x else {
            return Err(format!("unexpected element {x}"));
        };
        let in_h0 = word.letters().all(|l| l >= 0);
        let expect_on = in_h0 && *shift >= 0;
        let expect_n = in_h0 && *shift == 0;
        on += expect_on as usize;
        n += expect_n as usize;
        if c.verdict.is_one_sided() != expect_on || c.verdict.is_two_sided() != expect_n {
            wrong += 1;
        }
    }
    check(wrong == 0, || format!("{wrong} misclassified"))?;
    check(report.semigroup_violation.is_none(), || {
        "one-sided set not closed".into()
    })?;
    Ok(format!(
        "ball {}, |ON| = {on}, |N| = {n}, 0 misclassified",
        report.entries.len()
    ))
}

/// `[G,G]` equals the intersection of normal subgroups with abelian quotient.
fn commutator_catalog() -> Outcome {
    let mut checked = Vec::new();
    for name in catalog::FINITE_GROUPS {
        let g = catalog::finite_group_raw(name).map_err(err)?;
        if g.order() > 60 {
            continue;
        }
        let k = commutator_oracle(&g);
        let normals = algebra::normal_subgroups(&g, algebra::DEFAULT_MAX_NORMAL_SUBGROUPS).map_err(err)?;
        let all: BTreeSet<usize> = (0..g.order()).collect();
        let meet = normals
            .iter()
            .filter(|n| abelian_quotient_oracle(&g, n))
            .fold(all, |acc, n| acc.intersection(n).copied().collect());
        check(meet == k, || {
            format!("{name}: intersection {} vs [G,G] {}", meet.len(), k.len())
        })?;
        let lib = algebra::commutator_subgroup(
            &g,
            algebra::DEFAULT_MAX_NORMAL_ORDER,
            algebra::DEFAULT_MAX_NORMAL_SUBGROUPS,
        )
        .map_err(err)?;
        check(
            lib.commutator_subgroup == k && lib.intersection_matches == Some(true),
            || format!("{name}: library commutator report disagrees"),
        )?;
        checked.push(*name);
    }
    for (name, sub) in [("S3", "A3"), ("A4", "V4"), ("A5", "whole")] {
        let g = catalog::finite_group(name).map_err(err)?;
        let fg = g.as_finite().unwrap();
        let expected = match catalog::finite_subgroup(&g, sub).map_err(err)?.kind() {
            normcoset::SubgroupKind::Finite(s) => s.clone(),
            _ => unreachable!(),
        };
        check(commutator_oracle(fg) == expected, || {
            format!("[{name},{name}] is not {sub}")
        })?;
    }
    Ok(format!("{} groups; S3 -> A3, A4 -> V4, A5 -> A5", checked.len()))
}

fn commutator_oracle(g: &FiniteGroup) -> BTreeSet<usize> {
    let n = g.order();
    let mut set: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    for x in 0..n {
        for y in 0..n {
            set.insert(g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y)));
        }
    }
    loop {
        let products: Vec<usize> = set
            .iter()
            .flat_map(|&a| set.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.mul(a, b))
            .collect();
        let before = set.len();
        set.extend(products);
        if set.len() == before {
            return set;
        }
    }
}

fn abelian_quotient_oracle(g: &FiniteGroup, n: &BTreeSet<usize>) -> bool {
    (0..g.order()).all(|x| (0..g.order()).all(|y| n.contains(&g.commutator(x, y))))
}

/// Minimal central idempotents: traces, squares, residuals and the
/// regular/singular verdicts.
fn idempotent_traces() -> Outcome {
    let mut summary = Vec::new();
    for name in catalog::FINITE_GROUPS {
        let g = catalog::finite_group_raw(name).map_err(err)?;
        let r =
            algebra::fixed_point_inclusion_report(&g, algebra::DEFAULT_SEED, AlgebraCaps::default()).map_err(err)?;
        let traces = r.idempotents.traces();
        let total: f64 = traces.iter().sum();
        check((total - g.order() as f64).abs() <= 1e-6, || {
            format!("{name}: Σ Tr = {total}")
        })?;
        for t in &traces {
            let d = t.sqrt().round();
            check((t - d * d).abs() <= 1e-6, || {
                format!("{name}: trace {t} is not a square")
            })?;
        }
        let i = &r.idempotents;
        check(
            i.idempotency_residual <= 1e-9 && i.orthogonality_residual <= 1e-9,
            || {
                format!(
                    "{name}: residuals {} / {}",
                    i.idempotency_residual, i.orthogonality_residual
                )
            },
        )?;
        check(i.residuals_ok(), || format!("{name}: residuals out of tolerance"))?;
        check(r.regular == g.is_abelian(), || format!("{name}: regular ≠ abelian"))?;
        let singular = commutator_oracle(&g).len() == g.order();
        check(r.singular == singular, || format!("{name}: singular ≠ perfect"))?;
        if *name == "A5" || *name == "A5xA5" {
            check(r.singular, || format!("{name} not singular"))?;
        }
        summary.push(format!("{name}:{}", traces.len()));
    }
    Ok(format!("classes {}", summary.join(" ")))
}

/// Every double coset off `H` in `F_∞ ⋊ D_∞` has exactly the left cosets with
/// `ℤ`-parts `n` and `-n`.
fn ex74_double_cosets() -> Outcome {
    let pair = catalog::pair("Ex74", None).map_err(err)?;
    let d = bimodule::full_ball_decomposition(&pair.group, &pair.subgroup, 4, CAP).map_err(err)?;
    check(d.disjoint, || "left coset ids shared between classes".into())?;
    let members: usize = d.classes.iter().map(|c| c.ball_members).sum();
    check(members == d.ball_size, || {
        format!("classes cover {members} of {}", d.ball_size)
    })?;
    let mut off_h = 0;
    for c in &d.classes {
        let rep = &c.report.representative;
        if pair.subgroup.contains(rep).map_err(err)? {
            continue;
        }
        off_h += 1;
        let n = rep.ex74_shift().unwrap();
        check(
            matches!(c.report.verdict, DoubleCosetVerdict::ExactlyN { n: 2, .. }),
            || format!("{}: {:?}", pair.group.label(rep), c.report.verdict),
        )?;
        let ids: BTreeSet<i64> = c
            .report
            .left_cosets_found
            .iter()
            .map(|id| id.0.ex74_shift().unwrap())
            .collect();
        check(ids == BTreeSet::from([n, -n]), || {
            format!("{}: ids {ids:?}", pair.group.label(rep))
        })?;
    }
    check(off_h > 0, || "no classes off H".into())?;
    Ok(format!(
        "ball {}, {off_h} classes off H, all ExactlyN(2), disjoint",
        d.ball_size
    ))
}

/// `(x, y) ↦ xwy` on the `F₂` ball is injective without cancellation, and
/// the basis bijections hold in both directions.
fn free_word_grids() -> Outcome {
    let words = [
        ("c", Element::Free(normcoset::Word::power(2, 1))),
        ("c^2", Element::Free(normcoset::Word::power(2, 2))),
        ("c a c^-1", normcoset::reduce_word([(2, 1), (0, 1), (2, -1)])),
    ];
    let mut pairs_at_3 = 0;
    let mut pairs = 0;
    for radius in [3, 4] {
        for (name, w) in &words {
            let r = bimodule::free_bimodule_word_check(w, radius, CAP).map_err(err)?;
            check(r.holds(), || format!("{name} at radius {radius}: {r:?}"))?;
            pairs += r.pairs;
            if radius == 3 {
                pairs_at_3 += r.pairs;
            }
        }
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                let b = bimodule::intertwiner_bijection_check(&words[i].1, &words[j].1, radius, CAP).map_err(err)?;
                check(b.holds(), || {
                    format!("{} -> {} at radius {radius}", words[i].0, words[j].0)
                })?;
            }
        }
    }
    check(pairs >= 10_000, || format!("only {pairs} pairs"))?;
    Ok(format!(
        "{pairs_at_3} pairs at radius 3, {pairs} over radii 3 and 4, 0 collisions"
    ))
}

/// Product classification equals the conjunction of component verdicts.
fn product_shadow() -> Outcome {
    let mut lines = Vec::new();
    let hn = catalog::pair("Hn", Some("1")).map_err(err)?;
    let c = subgroup::product_normalizer_check((&hn.group, &hn.subgroup), (&hn.group, &hn.subgroup), 2, CAP)
        .map_err(err)?;
    check(c.holds(), || format!("Hn x Hn: {} mismatches", c.mismatches.len()))?;
    lines.push(format!("Hn x Hn {}", c.checked));
    for (g1, h1, g2, h2) in [
        ("S3", "A3", "Z4", "Z2"),
        ("S3", "C2", "S4", "D4"),
        ("Q8", "Z4", "A4", "A3"),
    ] {
        let a = catalog::pair(g1, Some(h1)).map_err(err)?;
        let b = catalog::pair(g2, Some(h2)).map_err(err)?;
        let whole = a.group.as_finite().unwrap().order() * b.group.as_finite().unwrap().order();
        let radius = a.group.as_finite().unwrap().order() + b.group.as_finite().unwrap().order();
        let c = subgroup::product_normalizer_check((&a.group, &a.subgroup), (&b.group, &b.subgroup), radius, CAP)
            .map_err(err)?;
        check(c.checked == whole, || {
            format!("{g1}x{g2}: ball {} of {whole}", c.checked)
        })?;
        check(c.holds(), || {
            format!("{g1}/{h1} x {g2}/{h2}: {} mismatches", c.mismatches.len())
        })?;
        lines.push(format!("{g1}x{g2} {}", c.checked));
    }
    Ok(format!("exhaustive, 0 mismatches ({})", lines.join(", ")))
}

/// Oracle equivalence suites.
fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // Convolution against the double sum over all (y, z) with yz = x.
    let groups: Vec<FiniteGroup> = ["S3", "Q8", "D4", "A4", "S4"]
        .iter()
        .map(|n| catalog::finite_group_raw(n))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for t in 0..100 {
        let g = &groups[t % groups.len()];
        let rand_el = |rng: &mut ChaCha8Rng| {
            AlgebraElement::from_coefficients(
                (0..g.order())
                    .map(|_| Complex64::new(rng.random_range(-9..=9) as f64, rng.random_range(-9..=9) as f64))
                    .collect(),
            )
        };
        let (a, b) = (rand_el(&mut rng), rand_el(&mut rng));
        let mut brute = vec![Complex64::new(0.0, 0.0); g.order()];
        for y in 0..g.order() {
            for z in 0..g.order() {
                brute[g.mul(y, z)] += a.coefficients()[y] * b.coefficients()[z];
            }
        }
        let fast = algebra::convolve(g, &a, &b).map_err(err)?;
        check(fast.coefficients() == brute.as_slice(), || {
            format!("convolution pair {t}")
        })?;
    }

    // h_conjugates against k g k⁻¹ over the radius-3 ball.
    let mut conj_checked = 0;
    for (name, sel) in [
        ("Hn", Some("0")),
        ("F2-in-F3", None),
        ("Ex74", None),
        ("S4", Some("D4")),
    ] {
        let pair = catalog::pair(name, sel).map_err(err)?;
        let ball = pair.group.ball(3, CAP).map_err(err)?;
        let hs: Vec<&Element> = ball.iter().filter(|k| pair.subgroup.contains(k).unwrap()).collect();
        for _ in 0..10 {
            let g = &ball.elements()[rng.random_range(0..ball.len().min(200))];
            let mut expected = BTreeSet::new();
            for k in &hs {
                expected.insert(pair.group.mul(&pair.group.mul(k, g), &pair.group.inv(k)));
            }
            let r = subgroup::h_conjugates(&pair.group, &pair.subgroup, g, 3, CAP).map_err(err)?;
            check(r.conjugates == expected, || {
                format!("{name}: conjugates of {}", pair.group.label(g))
            })?;
            conj_checked += 1;
        }
    }

    // gH = g'H whenever g' = gh.
    let pairs: Vec<catalog::Pair> = [
        ("Hn", Some("1")),
        ("F2-in-F3", None),
        ("Ex74", None),
        ("S4", Some("D4")),
        ("A5", Some("A4")),
    ]
    .iter()
    .map(|(n, s)| catalog::pair(n, *s))
    .collect::<Result<_, _>>()
    .map_err(err)?;
    let balls: Vec<(Vec<Element>, Vec<Element>)> = pairs
        .iter()
        .map(|p| {
            let b = p.group.ball(3, CAP).unwrap();
            let hs = p.subgroup.filter(b.iter()).unwrap();
            (b.elements().to_vec(), hs)
        })
        .collect();
    for t in 0..500 {
        let i = t % pairs.len();
        let (p, (gs, hs)) = (&pairs[i], &balls[i]);
        let g = &gs[rng.random_range(0..gs.len())];
        let h = &hs[rng.random_range(0..hs.len())];
        let a = bimodule::left_coset_id(&p.group, &p.subgroup, g).map_err(err)?;
        let b = bimodule::left_coset_id(&p.group, &p.subgroup, &p.group.mul(g, h)).map_err(err)?;
        check(a == b, || format!("{}: {} vs {}", p.name, a, b))?;
    }

    // Total trace of the exhaustive decomposition is the index.
    let mut finite_pairs = 0;
    for name in catalog::FINITE_GROUPS {
        let g = catalog::finite_group(name).map_err(err)?;
        let order = g.as_finite().unwrap().order();
        if order > 120 {
            continue;
        }
        let diameter = (0..=order)
            .find(|&r| g.ball(r, CAP).unwrap().len() == order)
            .unwrap()
            .max(1);
        for sub in catalog::named_subgroups(name).into_iter().chain(["trivial", "whole"]) {
            let h = catalog::finite_subgroup(&g, sub).map_err(err)?;
            let normcoset::SubgroupKind::Finite(set) = h.kind() else {
                unreachable!()
            };
            let d = bimodule::full_ball_decomposition(&g, &h, diameter, CAP).map_err(err)?;
            let index = (order / set.len()) as u64;
            check(d.total_trace == Some(index), || {
                format!("{name}/{sub}: {:?} vs {index}", d.total_trace)
            })?;
            finite_pairs += 1;
        }
    }
    Ok(format!(
        "100 convolutions, {conj_checked} conjugate sets, 500 coset pairs, {finite_pairs} finite traces"
    ))
}

/// Two `verify-paper` runs with the same seed give identical bytes.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_normcoset"))
            .args(["verify-paper", "--seed", "17", "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        check(status.status.success(), || {
            format!("run {i} exited with {}", status.status)
        })?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    check(outputs[0] == outputs[1], || "reports differ".into())?;
    Ok(format!("{} bytes, identical", outputs[0].len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    // libtest passes flags such as `--nocapture`; a filter argument selects
    // criteria by number.
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria = [
        Criterion {
            id: 1,
            name: "one-sided normalizers of H_0",
            limit: Duration::from_secs(60),
            run: normalizers_of_h0,
        },
        Criterion {
            id: 2,
            name: "commutator subgroup catalog",
            limit: Duration::from_secs(30),
            run: commutator_catalog,
        },
        Criterion {
            id: 3,
            name: "central idempotent traces",
            limit: Duration::from_secs(60),
            run: idempotent_traces,
        },
        Criterion {
            id: 4,
            name: "dihedral double cosets",
            limit: Duration::from_secs(60),
            run: ex74_double_cosets,
        },
        Criterion {
            id: 5,
            name: "free bimodule words",
            limit: Duration::from_secs(30),
            run: free_word_grids,
        },
        Criterion {
            id: 6,
            name: "product classification",
            limit: Duration::from_secs(60),
            run: product_shadow,
        },
        Criterion {
            id: 7,
            name: "oracle property suites",
            limit: Duration::from_secs(120),
            run: property_suites,
        },
        Criterion {
            id: 8,
            name: "verify-paper determinism",
            limit: Duration::from_secs(300),
            run: determinism,
        },
    ];
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "criterion {} {:<32} {} {:>7.2}s  {detail}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
