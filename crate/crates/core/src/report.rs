//! JSON reports and the reproduction driver for the worked examples.
//!
//! Reports are `serde_json::Value`s whose object keys are sorted, so a report
//! depends only on its inputs.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{self, AlgebraCaps, FixedPointReport};
use crate::bimodule::{self, Decomposition, DoubleCosetReport, DoubleCosetVerdict};
use crate::catalog::{self, Pair};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupSpec, Word};
use crate::subgroup::{
    classify_element, irreducibility_check, normalizer_ball_report, product_normalizer_check, Irreducibility,
    NormalizerVerdict, ProductCheck, SubgroupOracle,
};

/// Example ids understood by [`verify_examples`], in run order.
pub const EXAMPLE_IDS: &[&str] = &["6.3", "7.3", "7.4", "5.4-catalog", "4.x-product"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleResult {
    pub id: String,
    pub pass: bool,
    /// Some check could not reach a verdict at the requested radius.
    pub inconclusive: bool,
    pub details: Value,
}

fn labels(group: &GroupSpec, xs: impl IntoIterator<Item = Element>) -> Vec<String> {
    xs.into_iter().map(|x| group.label(&x)).collect()
}

fn finite_labels(g: &FiniteGroup, set: &BTreeSet<usize>) -> Vec<String> {
    set.iter().map(|&x| g.label(x).to_string()).collect()
}

pub fn irreducibility_json(group: &GroupSpec, verdict: &Irreducibility) -> Value {
    match verdict {
        Irreducibility::Irreducible { checked, rules } => {
            json!({ "verdict": verdict.name(), "checked": checked, "rules": rules })
        }
        Irreducibility::NotIrreducible { witness, conjugates } => json!({
            "verdict": verdict.name(),
            "witness": group.label(witness),
            "conjugates": labels(group, conjugates.iter().cloned()),
        }),
        Irreducibility::Inconclusive { radius } => json!({ "verdict": verdict.name(), "radius": radius }),
    }
}

fn verdict_name(v: NormalizerVerdict) -> &'static str {
    match v {
        NormalizerVerdict::TwoSided => "two_sided",
        NormalizerVerdict::OneSidedOnly => "one_sided_only",
        NormalizerVerdict::NonNormalizing => "non_normalizing",
    }
}

/// Report for the `normalizers` command. The flag is true when some verdict
/// is inconclusive.
pub fn normalizers_report(pair: &Pair, radius: usize, cap: usize) -> Result<(Value, bool)> {
    let (g, h) = (&pair.group, &pair.subgroup);
    let report = normalizer_ball_report(g, h, radius, cap)?;
    let elements: Vec<Value> = report
        .entries
        .iter()
        .map(|(x, c)| {
            json!({
                "element": g.label(x),
                "verdict": verdict_name(c.verdict),
                "witness": c.witness.as_ref().map(|w| g.label(w)),
            })
        })
        .collect();
    let irreducibility = if radius >= 1 {
        Some(irreducibility_check(g, h, radius, cap)?)
    } else {
        None
    };
    let inconclusive = matches!(irreducibility, Some(Irreducibility::Inconclusive { .. }));
    Ok((
        json!({
            "command": "normalizers",
            "group": pair.name,
            "subgroup": h.to_string(),
            "radius": radius,
            "ball_size": report.entries.len(),
            "summary": {
                "two_sided": report.count(NormalizerVerdict::TwoSided),
                "one_sided_only": report.count(NormalizerVerdict::OneSidedOnly),
                "non_normalizing": report.count(NormalizerVerdict::NonNormalizing),
            },
            "semigroup": {
                "pairs_checked": report.semigroup_pairs_checked,
                "closed": report.semigroup_violation.is_none(),
            },
            "irreducibility": irreducibility.as_ref().map(|v| irreducibility_json(g, v)),
            "inconclusive": inconclusive,
            "elements": elements,
        }),
        inconclusive,
    ))
}

pub fn double_coset_json(group: &GroupSpec, r: &DoubleCosetReport) -> Value {
    let verdict = match &r.verdict {
        DoubleCosetVerdict::ExactlyN { n, rule } => json!({ "kind": "exactly_n", "n": n, "rule": rule }),
        DoubleCosetVerdict::AtLeast { count } => json!({ "kind": "at_least", "count": count }),
        DoubleCosetVerdict::ApparentlyInfinite { rule, .. } => json!({ "kind": "apparently_infinite", "rule": rule }),
    };
    let (radii, counts): (Vec<usize>, Vec<usize>) = r.counts.iter().map(|(a, b)| (*a, *b)).unzip();
    json!({
        "representative": group.label(&r.representative),
        "key": group.label(&r.key),
        "verdict": verdict,
        "trace": r.trace,
        "left_coset_ids": r.left_cosets_found.iter().map(|id| group.label(&id.0)).collect::<Vec<_>>(),
        "evidence": { "radii": radii, "counts": counts },
    })
}

fn decomposition_json(group: &GroupSpec, d: &Decomposition) -> Value {
    json!({
        "radius": d.radius,
        "ball_size": d.ball_size,
        "disjoint": d.disjoint,
        "total_trace": d.total_trace,
        "classes": d.classes.iter().map(|c| {
            let mut v = double_coset_json(group, &c.report);
            v["ball_members"] = json!(c.ball_members);
            v
        }).collect::<Vec<_>>(),
    })
}

fn decomposition_inconclusive(d: &Decomposition) -> bool {
    d.classes
        .iter()
        .any(|c| matches!(c.report.verdict, DoubleCosetVerdict::AtLeast { .. }))
}

/// Report for the `bimodules` command.
pub fn bimodules_report(pair: &Pair, radius: usize, cap: usize) -> Result<(Value, bool)> {
    let (g, h) = (&pair.group, &pair.subgroup);
    let d = bimodule::full_ball_decomposition(g, h, radius, cap)?;
    let inconclusive = decomposition_inconclusive(&d);
    let index = match (g.as_finite(), h.kind()) {
        (Some(_), crate::SubgroupKind::Finite(_)) => Some(bimodule::finite_index_trace_total(g, h)?),
        _ => None,
    };
    let mut v = decomposition_json(g, &d);
    v["command"] = json!("bimodules");
    v["group"] = json!(pair.name);
    v["subgroup"] = json!(h.to_string());
    v["index"] = json!(index);
    v["finite_trace_classes"] = json!(d.classes.iter().filter(|c| c.report.trace.is_some()).count());
    v["inconclusive"] = json!(inconclusive);
    Ok((v, inconclusive))
}

fn fixed_point_json(name: &str, g: &FiniteGroup, r: &FixedPointReport) -> Value {
    let idempotents: Vec<Value> = r
        .idempotents
        .idempotents
        .iter()
        .map(|e| {
            json!({
                "trace": e.trace,
                "dimension": e.dimension,
                "class_coefficients": e.class_coefficients.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let k = &r.commutator.commutator_subgroup;
    json!({
        "command": "group-algebra",
        "group": name,
        "order": r.order,
        "seed": r.idempotents.seed,
        "split_attempts": r.idempotents.attempts,
        "idempotents": idempotents,
        "dimensions": r.idempotents.dimensions(),
        "residuals": {
            "idempotency": r.idempotents.idempotency_residual,
            "orthogonality": r.idempotents.orthogonality_residual,
            "completeness": r.idempotents.completeness_residual,
            "self_adjoint": r.idempotents.self_adjoint_residual,
            "trace_sum": r.idempotents.trace_sum_residual,
        },
        "commutator_subgroup": finite_labels(g, k),
        "commutator_order": k.len(),
        "commutator_is_normal": r.commutator.is_normal,
        "normal_subgroups_with_abelian_quotient": r.commutator.normal_subgroups_with_abelian_quotient.as_ref().map(
            |ns| ns.iter().map(|n| finite_labels(g, n)).collect::<Vec<_>>()
        ),
        "intersection_matches": r.commutator.intersection_matches,
        "abelian": r.abelian,
        "regular": r.regular,
        "singular": r.singular,
        "regular_matches_abelian": r.regular_matches_abelian(),
        "verdict": r.verdict,
        "normalizer_algebra": format!(
            "fixed points of [G,G] (order {}, index {})",
            k.len(),
            r.abelianization_order()
        ),
    })
}

/// Report for the `group-algebra` command.
pub fn group_algebra_report(name: &str, group: &GroupSpec, seed: u64, caps: AlgebraCaps) -> Result<Value> {
    let g = group
        .as_finite()
        .ok_or_else(|| Error::Unsupported("group algebra of an infinite group".into()))?;
    let r = algebra::fixed_point_inclusion_report(g, seed, caps)?;
    Ok(fixed_point_json(name, g, &r))
}

/// Settings for [`verify_examples`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Overrides every example's default radius.
    pub radius: Option<usize>,
    pub seed: u64,
    pub cap: usize,
    pub caps: AlgebraCaps,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            radius: None,
            seed: algebra::DEFAULT_SEED,
            cap: crate::group::DEFAULT_ELEMENT_CAP,
            caps: AlgebraCaps::default(),
        }
    }
}

/// Runs the named examples (all of [`EXAMPLE_IDS`] when empty).
pub fn verify_examples(ids: &[String], config: VerifyConfig) -> Result<Vec<ExampleResult>> {
    let ids: Vec<String> = if ids.is_empty() {
        EXAMPLE_IDS.iter().map(|s| s.to_string()).collect()
    } else {
        ids.to_vec()
    };
    if let Some(bad) = ids.iter().find(|id| !EXAMPLE_IDS.contains(&id.as_str())) {
        return Err(Error::UnknownName(format!(
            "example {bad:?}; known: {}",
            EXAMPLE_IDS.join(", ")
        )));
    }
    ids.iter().map(|id| verify_example(id, config)).collect()
}

pub fn verify_example(id: &str, config: VerifyConfig) -> Result<ExampleResult> {
    let (pass, inconclusive, details) = match id {
        "6.3" => example_shift(config.radius.unwrap_or(4), config.cap)?,
        "7.3" => example_free(config.radius, config.cap)?,
        "7.4" => example_dihedral(config.radius.unwrap_or(4), config.cap)?,
        "5.4-catalog" => example_catalog(config.seed, config.caps)?,
        "4.x-product" => example_product(config.radius.unwrap_or(2), config.cap)?,
        _ => return Err(Error::UnknownName(format!("example {id:?}"))),
    };
    Ok(ExampleResult {
        id: id.to_string(),
        pass: pass && !inconclusive,
        inconclusive,
        details,
    })
}

/// `H_0 ⊆ F_∞ ⋊ ℤ`: one-sided normalizers are `vφᵏ` with `v ∈ H_0`, `k ≥ 0`;
/// the normalizer is `H_0`.
fn example_shift(radius: usize, cap: usize) -> Result<(bool, bool, Value)> {
    let pair = catalog::pair("Hn", Some("0"))?;
    let (g, h) = (&pair.group, &pair.subgroup);
    let report = normalizer_ball_report(g, h, radius, cap)?;
    let mut one_sided_errors = 0;
    let mut two_sided_errors = 0;
    let mut inverse_errors = 0;
    for (x, c) in &report.entries {
        let Element::FreeByZ { word, shift } = x else {
            unreachable!("free-by-Z ball")
        };
        let in_h0 = word.all_letters(|i| i >= 0);
        one_sided_errors += (c.verdict.is_one_sided() != (in_h0 && *shift >= 0)) as usize;
        two_sided_errors += (c.verdict.is_two_sided() != (in_h0 && *shift == 0)) as usize;
        let inv = classify_element(g, h, &g.inv(x))?.verdict;
        let consistent = match c.verdict {
            NormalizerVerdict::TwoSided => inv == NormalizerVerdict::TwoSided,
            NormalizerVerdict::OneSidedOnly => !inv.is_one_sided(),
            NormalizerVerdict::NonNormalizing => inv != NormalizerVerdict::TwoSided,
        };
        inverse_errors += (!consistent) as usize;
    }
    let phi = classify_element(g, h, &Element::phi(1))?;
    let below = classify_element(g, h, &Element::g(-1, 1))?;
    let shifted = g.conj(&Element::phi(1), &Element::g(5, 1)) == Element::g(6, 1);
    let irreducible = irreducibility_check(g, h, radius.min(3), cap)?;
    let inconclusive = radius == 0 || matches!(irreducible, Irreducibility::Inconclusive { .. });
    let pass = one_sided_errors == 0
        && two_sided_errors == 0
        && inverse_errors == 0
        && report.semigroup_violation.is_none()
        && phi.verdict == NormalizerVerdict::OneSidedOnly
        && below.verdict == NormalizerVerdict::NonNormalizing
        && below.witness.is_some()
        && shifted
        && irreducible.is_irreducible();
    Ok((
        pass,
        inconclusive,
        json!({
            "radius": radius,
            "ball_size": report.entries.len(),
            "one_sided": report.one_sided().count(),
            "two_sided": report.two_sided().count(),
            "one_sided_misclassified": one_sided_errors,
            "two_sided_misclassified": two_sided_errors,
            "inverse_inconsistencies": inverse_errors,
            "semigroup_pairs_checked": report.semigroup_pairs_checked,
            "semigroup_closed": report.semigroup_violation.is_none(),
            "phi": verdict_name(phi.verdict),
            "g_minus_1": { "verdict": verdict_name(below.verdict), "witness": below.witness.map(|w| g.label(&w)) },
            "phi_g5_phi_inverse_is_g6": shifted,
            "irreducibility": irreducibility_json(g, &irreducible),
        }),
    ))
}

fn f3(raw: &[(i64, i64)]) -> Element {
    Element::Free(Word::reduce(raw.iter().copied()))
}

/// `F₂ ⊆ F₃`: words `xwy` with `w` bounded by powers of `c` never cancel, and
/// no double coset off `H` is a finite union of left cosets.
fn example_free(radius: Option<usize>, cap: usize) -> Result<(bool, bool, Value)> {
    const C: i64 = bimodule::LETTER_C;
    let grid_radii: Vec<usize> = match radius {
        Some(r) => vec![r],
        None => vec![3, 4],
    };
    let words = [f3(&[(C, 1)]), f3(&[(C, 2)]), f3(&[(C, 1), (0, 1), (C, -1)])];
    let mut grids = Vec::new();
    let mut pass = true;
    let mut pairs = 0;
    for &r in &grid_radii {
        for w in &words {
            let rep = bimodule::free_bimodule_word_check(w, r, cap)?;
            pass &= rep.holds();
            pairs += rep.pairs;
            grids.push(json!({
                "word": w.to_string(), "radius": r, "pairs": rep.pairs,
                "collisions": rep.collisions, "non_additive": rep.non_additive,
            }));
        }
    }
    let r0 = grid_radii[0];
    let mut bijections = Vec::new();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let rep = bimodule::intertwiner_bijection_check(&words[a], &words[b], r0, cap)?;
        pass &= rep.holds();
        bijections.push(json!({
            "from": words[a].to_string(), "to": words[b].to_string(), "radius": r0,
            "mapped": rep.mapped, "failures": rep.failures,
        }));
    }
    let decomposition_radius = radius.unwrap_or(3);
    let pair = catalog::pair("F2-in-F3", None)?;
    let (g, h) = (&pair.group, &pair.subgroup);
    let (decomposition, inconclusive) = if decomposition_radius == 0 {
        (Value::Null, true)
    } else {
        let d = bimodule::full_ball_decomposition(g, h, decomposition_radius, cap)?;
        let off_h_finite = d.classes.iter().skip(1).filter(|c| c.report.trace.is_some()).count();
        pass &= d.disjoint && d.classes[0].report.trace == Some(1) && off_h_finite == 0;
        let inconclusive = decomposition_inconclusive(&d);
        (
            json!({
                "radius": d.radius,
                "classes": d.classes.len(),
                "disjoint": d.disjoint,
                "finite_trace_classes_off_h": off_h_finite,
                "apparently_infinite": d.classes.iter().filter(|c| matches!(c.report.verdict, DoubleCosetVerdict::ApparentlyInfinite { .. })).count(),
            }),
            inconclusive,
        )
    };
    let irreducible = irreducibility_check(g, h, decomposition_radius.min(3), cap)?;
    pass &= irreducible.is_irreducible();
    let inconclusive = inconclusive || matches!(irreducible, Irreducibility::Inconclusive { .. });
    Ok((
        pass,
        inconclusive,
        json!({
            "grids": grids,
            "grid_pairs": pairs,
            "bijections": bijections,
            "decomposition": decomposition,
            "irreducibility": irreducibility_json(g, &irreducible),
        }),
    ))
}

/// `H = ⟨F_∞, ℤ₂⟩ ⊆ F_∞ ⋊ (ℤ ⋊ ℤ₂)`: every double coset off `H` is the two
/// left cosets with `ℤ`-part `±n`.
fn example_dihedral(radius: usize, cap: usize) -> Result<(bool, bool, Value)> {
    let pair = catalog::pair("Ex74", None)?;
    let (g, h) = (&pair.group, &pair.subgroup);
    if radius == 0 {
        return Ok((false, true, json!({ "radius": 0 })));
    }
    let d = bimodule::full_ball_decomposition(g, h, radius, cap)?;
    let mut bad_classes = Vec::new();
    let mut shifts = Vec::new();
    for c in d.classes.iter().skip(1) {
        let n = c.report.key.ex74_shift().expect("ex74 key");
        let ids: BTreeSet<i64> = c
            .report
            .left_cosets_found
            .iter()
            .map(|id| id.0.ex74_shift().unwrap())
            .collect();
        let ok = c.report.trace == Some(2) && ids == BTreeSet::from([n, -n]);
        if !ok {
            bad_classes.push(g.label(&c.report.representative));
        }
        shifts.push(n);
    }
    let base_ok = d.classes[0].report.trace == Some(1);
    let irreducible = irreducibility_check(g, h, radius.min(3), cap)?;
    let pass = bad_classes.is_empty() && base_ok && d.disjoint && irreducible.is_irreducible();
    Ok((
        pass,
        false,
        json!({
            "radius": radius,
            "ball_size": d.ball_size,
            "classes": d.classes.len(),
            "shifts": shifts,
            "trace_two_classes": d.classes.iter().filter(|c| c.report.trace == Some(2)).count(),
            "misclassified": bad_classes,
            "disjoint": d.disjoint,
            "irreducibility": irreducibility_json(g, &irreducible),
        }),
    ))
}

/// Commutator subgroups, central idempotents and fixed-point verdicts for the
/// built-in finite groups.
fn example_catalog(seed: u64, caps: AlgebraCaps) -> Result<(bool, bool, Value)> {
    let mut pass = true;
    let mut rows = Vec::new();
    for name in catalog::FINITE_GROUPS {
        let g = catalog::finite_group_raw(name)?;
        let r = algebra::fixed_point_inclusion_report(&g, seed, caps)?;
        let eq_ok = g.order() > 60 || r.commutator.intersection_matches == Some(true);
        let traces_ok = r.idempotents.residuals_ok();
        let verdict_ok = r.regular_matches_abelian() && r.commutator.is_normal;
        let ok = eq_ok && traces_ok && verdict_ok;
        pass &= ok;
        rows.push(json!({
            "group": name,
            "order": g.order(),
            "commutator_order": r.commutator.commutator_subgroup.len(),
            "intersection_matches": r.commutator.intersection_matches,
            "dimensions": r.idempotents.dimensions(),
            "residuals_ok": traces_ok,
            "abelian": r.abelian,
            "verdict": r.verdict,
            "pass": ok,
        }));
    }
    let expect = |name: &str, order: usize, verdict: &str| {
        rows.iter()
            .any(|row| row["group"] == name && row["commutator_order"] == order && row["verdict"] == verdict)
    };
    let named = [
        ("S3", 3, "intermediate"),
        ("A4", 4, "intermediate"),
        ("A5", 60, "singular"),
        ("A5xA5", 3600, "singular"),
        ("Z4", 1, "regular"),
        ("Z2xZ2", 1, "regular"),
    ];
    let named_ok: Vec<Value> = named
        .iter()
        .map(|(g, k, v)| {
            let ok = expect(g, *k, v);
            pass &= ok;
            json!({ "group": g, "commutator_order": k, "verdict": v, "pass": ok })
        })
        .collect();
    Ok((pass, false, json!({ "groups": rows, "expected": named_ok })))
}

fn product_json(name: &str, c: &ProductCheck) -> Value {
    json!({
        "pair": name,
        "radius": c.radius,
        "checked": c.checked,
        "one_sided": c.one_sided,
        "two_sided": c.two_sided,
        "mismatches": c.mismatches.len(),
    })
}

/// Classification in a direct product is the conjunction of the component
/// classifications.
fn example_product(radius: usize, cap: usize) -> Result<(bool, bool, Value)> {
    let hn = catalog::pair("Hn", Some("0"))?;
    let mut pass = true;
    let mut checks = Vec::new();
    let c = product_normalizer_check((&hn.group, &hn.subgroup), (&hn.group, &hn.subgroup), radius, cap)?;
    pass &= c.holds();
    checks.push(product_json("Hn-x-Hn", &c));
    let finite_pairs = [
        (("S3", "A3"), ("Z4", "Z2")),
        (("S3", "C2"), ("S4", "D4")),
        (("Q8", "Z4"), ("A4", "A3")),
    ];
    for ((g1, h1), (g2, h2)) in finite_pairs {
        let a = catalog::pair(g1, Some(h1))?;
        let b = catalog::pair(g2, Some(h2))?;
        let (n1, n2) = (
            a.group.as_finite().unwrap().order(),
            b.group.as_finite().unwrap().order(),
        );
        let c = product_normalizer_check((&a.group, &a.subgroup), (&b.group, &b.subgroup), n1 + n2, cap)?;
        let exhaustive = c.checked == n1 * n2;
        pass &= c.holds() && exhaustive;
        let mut v = product_json(&format!("{g1}/{h1}-x-{g2}/{h2}"), &c);
        v["exhaustive"] = json!(exhaustive);
        checks.push(v);
    }
    let product = GroupSpec::product(hn.group.clone(), hn.group.clone());
    let ph = SubgroupOracle::product(&product, hn.subgroup.clone(), hn.subgroup.clone())?;
    let e = classify_element(&product, &ph, &product.identity())?.verdict;
    let phi_e = classify_element(&product, &ph, &Element::pair(Element::phi(1), hn.group.identity()))?.verdict;
    pass &= e == NormalizerVerdict::TwoSided && phi_e == NormalizerVerdict::OneSidedOnly;
    Ok((
        pass,
        radius == 0,
        json!({
            "checks": checks,
            "identity": verdict_name(e),
            "phi_identity": verdict_name(phi_e),
        }),
    ))
}

/// The whole `verify-paper` document.
pub fn verify_report(results: &[ExampleResult], config: VerifyConfig) -> Value {
    json!({
        "command": "verify-paper",
        "seed": config.seed,
        "radius": config.radius,
        "all_pass": results.iter().all(|r| r.pass),
        "inconclusive": results.iter().any(|r| r.inconclusive),
        "examples": results,
    })
}
