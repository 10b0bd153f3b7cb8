//! The acceptance suite shared by the `verify` subcommand and the test target.
//!
//! Each criterion yields a deterministic JSON detail block; timing and worker
//! counts never enter it, so runs can be compared byte for byte.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::cayley;
use crate::classify::{self, rs_routes};
use crate::constants::{self, ln_ratio, LogScaled};
use crate::degrees::{self, PathMethod};
use crate::escape::{self, Action, EscapeError, EscapeInstance};
use crate::gf::Field;
use crate::groups::{self, Family, GroupSpec, TorusSpec};
use crate::growth::{self, GenSet, GrowthError, Target};
use crate::matrix::Mat;
use crate::report::{self, obj};
use crate::rng;
use crate::torus_lab::{self, CertMode};
use crate::varieties::{Poly, VarietySpec};

/// Run seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;
/// Relative slack allowed between exact and log-space constants.
pub const CONSTANT_REL_SLACK: f64 = 1e-9;
/// Largest group materialized by the suite.
pub const GROUP_CAP: usize = 1_000_000;
/// Generating sets per group in the growth campaign.
pub const GROWTH_SETS: usize = 200;
/// Random large subsets of `SL_2(F_11)` in the product-theorem check.
pub const NP_SETS: usize = 50;
/// Escape instances per group with verified orbit noncontainment.
pub const ESCAPE_INSTANCES: usize = 100;
/// Sampled elements per group in the orbit-stabilizer check.
pub const CLASS_SAMPLES: usize = 100;

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "order_oracle"),
    (2, "degree_oracle"),
    (3, "classification_oracle"),
    (4, "growth_properties"),
    (5, "escape_envelope"),
    (6, "torus_rank_certificates"),
    (7, "constants_suite"),
    (8, "saturation_counting"),
    (9, "determinism"),
];

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub detail: Value,
}

impl CriterionReport {
    pub fn to_json(&self) -> Value {
        obj([
            ("id", report::int(self.id)),
            ("name", Value::String(self.name.into())),
            ("passed", Value::Bool(self.passed)),
            ("summary", Value::String(self.summary.clone())),
            ("detail", self.detail.clone()),
        ])
    }

    /// One line such as `PASS 1 order_oracle: ...`.
    pub fn line(&self) -> String {
        format!(
            "{} {} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.summary
        )
    }
}

struct Outcome {
    passed: bool,
    summary: String,
    detail: Value,
}

type Check = Result<Outcome, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn field(q: u64) -> Result<Field, String> {
    Field::of_order(q).map_err(err)
}

fn spec(family: Family, n: u32) -> Result<GroupSpec, String> {
    GroupSpec::new(family, n).map_err(err)
}

fn materialize(spec: &GroupSpec, f: &Field) -> Result<Vec<Mat>, String> {
    groups::materialize(spec, f, GROUP_CAP).map_err(err)
}

fn order_oracle() -> Check {
    let cases = [
        (Family::Sl, 2, 3, 24u64),
        (Family::Sl, 2, 5, 120),
        (Family::Sl, 2, 7, 336),
        (Family::Sl, 3, 5, 372_000),
        (Family::Sp, 2, 3, 51_840),
    ];
    let mut rows = Vec::new();
    let mut passed = true;
    for (family, n, q, expected) in cases {
        let s = spec(family, n)?;
        let f = field(q)?;
        let formula = groups::group_order(&s, q).map_err(err)?;
        let enumerated = materialize(&s, &f)?.len() as u64;
        let ok = formula == BigUint::from(expected) && enumerated == expected;
        passed &= ok;
        rows.push(obj([
            ("group", Value::String(format!("{}(F_{q})", s.label()))),
            ("formula", report::big(&formula)),
            ("enumerated", report::int(enumerated)),
            ("expected", report::int(expected)),
            ("agree", Value::Bool(ok)),
        ]));
    }
    Ok(Outcome {
        passed,
        summary: format!("{} groups, formula = enumeration = expected", rows.len()),
        detail: Value::Array(rows),
    })
}

fn degree_oracle() -> Check {
    let mut passed = true;
    let mut paths = Vec::new();
    for k in 2..=10u32 {
        let a = degrees::path_count(k, PathMethod::Enumerate).map_err(err)?.exact;
        let b = degrees::path_count(k, PathMethod::Determinant).map_err(err)?.exact;
        passed &= a == b;
        paths.push(obj([
            ("k", report::int(k)),
            ("enumerated", report::big(&a)),
            ("determinant", report::big(&b)),
        ]));
    }
    for (k, v) in [(2u32, 1u32), (3, 2), (4, 5)] {
        passed &= degrees::path_count(k, PathMethod::Determinant).map_err(err)?.exact == BigUint::from(v);
    }
    let mut groups_rows = Vec::new();
    let families = [
        (Family::Sl, 2..=12u32),
        (Family::SoEven, 4..=6),
        (Family::SoOdd, 3..=5),
        (Family::Sp, 2..=6),
    ];
    for (family, range) in families {
        for n in range {
            let s = spec(family, n)?;
            let exact = degrees::exact_group_degree(&s).map_err(err)?;
            let bound = degrees::table_degree_bound(&s)
                .exact_int()
                .ok_or("table bound is not an exact integer")?;
            let ok = exact <= bound;
            passed &= ok;
            groups_rows.push(obj([
                ("group", Value::String(s.label())),
                ("exact", report::big(&exact)),
                ("table_bound", report::big(&bound)),
                ("within", Value::Bool(ok)),
            ]));
        }
    }
    Ok(Outcome {
        passed,
        summary: format!(
            "P(k) routes agree for 2..=10; {} groups within table bounds",
            groups_rows.len()
        ),
        detail: obj([("paths", Value::Array(paths)), ("groups", Value::Array(groups_rows))]),
    })
}

fn classification_oracle(seed: u64) -> Check {
    let mut rng = rng::stream(seed, 3);
    let mut passed = true;
    let mut rows = Vec::new();
    for (family, n, q) in [
        (Family::Sl, 2, 3u64),
        (Family::Sl, 2, 5),
        (Family::Sl, 2, 7),
        (Family::Sp, 2, 3),
    ] {
        let s = spec(family, n)?;
        let f = field(q)?;
        let universe = materialize(&s, &f)?;
        let gens = groups::symmetrize(&groups::standard_generators(&s, &f).map_err(err)?, &f);
        let mut class_sizes = std::collections::BTreeMap::new();
        for _ in 0..CLASS_SAMPLES {
            let g = universe.choose(&mut rng).expect("nonempty");
            let (class, cent) = classify::orbit_stabilizer(g, &universe, &gens, &f, GROUP_CAP).map_err(err)?;
            *class_sizes.entry(class).or_insert(0u64) += u64::from(class * cent == universe.len());
        }
        let disagreements = universe.iter().filter(|g| !rs_routes(g, &f).agree()).count();
        passed &= disagreements == 0;
        let nonrs = classify::count_nonrs(&universe, &f) as u64;
        let nonrs_expected = (family == Family::Sl).then_some(2 * q * q);
        if let Some(e) = nonrs_expected {
            passed &= nonrs == e;
        }
        rows.push(obj([
            ("group", Value::String(format!("{}(F_{q})", s.label()))),
            ("order", report::int(universe.len() as u64)),
            ("samples", report::int(CLASS_SAMPLES as u64)),
            (
                "class_sizes_seen",
                Value::Array(class_sizes.keys().map(|&c| report::int(c as u64)).collect()),
            ),
            ("rs_route_disagreements", report::int(disagreements as u64)),
            ("non_rs", report::int(nonrs)),
            ("non_rs_expected", nonrs_expected.map_or(Value::Null, report::int)),
        ]));
    }
    Ok(Outcome {
        passed,
        summary: "orbit-stabilizer exact on all samples; non-rs counts 2q²; rs routes agree".into(),
        detail: Value::Array(rows),
    })
}

fn growth_properties(seed: u64) -> Check {
    let mut rng = rng::stream(seed, 4);
    let mut passed = true;
    let mut rows = Vec::new();
    for (family, n, q) in [(Family::Sl, 2, 7u64), (Family::Sp, 2, 3)] {
        let s = spec(family, n)?;
        let f = field(q)?;
        let all = materialize(&s, &f)?;
        let (mut sets, mut ruzsa_fail, mut olson_fail, mut skipped) = (0usize, 0u64, 0u64, 0u64);
        while sets < GROWTH_SETS {
            let draws = rng.gen_range(2..=3);
            let a = GenSet::random(&s, &f, draws, Some(&all), &mut rng).map_err(err)?;
            let olson = match growth::olson_check(&a, GROUP_CAP) {
                Ok(o) => o,
                Err(GrowthError::NotGenerating { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(err(e)),
            };
            olson_fail += u64::from(!olson.holds());
            for k in 4..=6 {
                ruzsa_fail += u64::from(!growth::ruzsa_check(&a, k, GROUP_CAP).map_err(err)?.holds);
            }
            sets += 1;
        }
        passed &= ruzsa_fail == 0 && olson_fail == 0;
        rows.push(obj([
            ("group", Value::String(format!("{}(F_{q})", s.label()))),
            ("generating_sets", report::int(sets as u64)),
            ("non_generating_skipped", report::int(skipped)),
            ("ruzsa_violations", report::int(ruzsa_fail)),
            ("olson_violations", report::int(olson_fail)),
        ]));
    }
    let s = spec(Family::Sl, 2)?;
    let f = field(11)?;
    let all = materialize(&s, &f)?;
    let threshold = growth::np_threshold(&s, &f)
        .map_err(err)?
        .to_usize()
        .ok_or("threshold overflow")?;
    let mut np_fail = 0u64;
    let mut sizes = Vec::new();
    for _ in 0..NP_SETS {
        let size = rng.gen_range(threshold..=threshold + 100);
        let pool: Vec<Mat> = all.choose_multiple(&mut rng, size).cloned().collect();
        match growth::np_check(&s, &f, &pool) {
            Ok(r) if r.applicable && r.a3 == Some(r.group_order) => {}
            _ => np_fail += 1,
        }
        sizes.push(size);
    }
    passed &= np_fail == 0;
    rows.push(obj([
        ("group", Value::String("SL_2(F_11)".into())),
        ("threshold", report::int(threshold as u64)),
        ("sets", report::int(NP_SETS as u64)),
        ("min_size", report::int(*sizes.iter().min().unwrap_or(&0) as u64)),
        ("max_size", report::int(*sizes.iter().max().unwrap_or(&0) as u64)),
        ("product_violations", report::int(np_fail)),
    ]));
    Ok(Outcome {
        passed,
        summary: format!("{GROWTH_SETS} sets per group, zero violations; {NP_SETS} large sets with A³ = G"),
        detail: Value::Array(rows),
    })
}

fn random_poly(degree: u32, f: &Field, rng: &mut ChaCha8Rng) -> Poly {
    let mut monomials = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                for d in 0..=degree - a - b - c {
                    monomials.push(vec![a, b, c, d]);
                }
            }
        }
    }
    loop {
        let terms = monomials
            .iter()
            .filter_map(|e| {
                let c = rng.gen_range(0..f.q());
                (c != 0 && rng.gen_bool(0.5)).then(|| (e.clone(), c))
            })
            .collect();
        let p = Poly::from_terms(4, terms, f).expect("arity 4");
        if p.degree() == degree {
            return p;
        }
    }
}

fn generating_pair(all: &[Mat], f: &Field, rng: &mut ChaCha8Rng) -> Result<Vec<Mat>, String> {
    loop {
        let raw: Vec<Mat> = (0..2).map(|_| all.choose(rng).expect("nonempty").clone()).collect();
        let gens = groups::symmetrize(&raw, f);
        if cayley::closure(&gens, f, GROUP_CAP).map_err(err)?.len() == all.len() {
            return Ok(gens);
        }
    }
}

fn escape_envelope(seed: u64) -> Check {
    let mut rng = rng::stream(seed, 5);
    let mut passed = true;
    let mut rows = Vec::new();
    for q in [7u64, 11] {
        let s = spec(Family::Sl, 2)?;
        let f = field(q)?;
        let all = materialize(&s, &f)?;
        let (mut verified, mut contained, mut over_bound, mut over_shitov, mut route_mismatch) =
            (0, 0u64, 0u64, 0u64, 0u64);
        let mut max_k = [0usize; 2];
        let mut shitov_runs = 0u64;
        while verified < ESCAPE_INSTANCES {
            let gens = generating_pair(&all, &f, &mut rng)?;
            let degree = rng.gen_range(1..=2u32);
            let poly = random_poly(degree, &f, &mut rng);
            let variety = VarietySpec::new(4, vec![poly], 3, u64::from(degree)).map_err(err)?;
            let point: Vec<u32> = (0..4).map(|_| rng.gen_range(0..f.q())).collect();
            let action = if rng.gen_bool(0.5) {
                Action::LeftMultiplication
            } else {
                Action::Conjugation
            };
            let inst = EscapeInstance::new(gens, variety, point, action, &f).map_err(err)?;
            let escapes = all.iter().any(|g| inst.escaping_poly(g, &f).is_some());
            match escape::escape_point(&inst, &f, GROUP_CAP) {
                Ok(c) if escapes => {
                    verified += 1;
                    let witness_ok = inst.escaping_poly(&c.witness, &f).is_some();
                    over_bound += u64::from(!c.within_bound || !witness_ok);
                    let slot = &mut max_k[degree as usize - 1];
                    *slot = (*slot).max(c.k_found);
                    if action == Action::LeftMultiplication {
                        shitov_runs += 1;
                        let direct = escape::shitov_escape(&inst, false, &f, GROUP_CAP).map_err(err)?;
                        let lin = escape::shitov_escape(&inst, true, &f, GROUP_CAP).map_err(err)?;
                        over_shitov += u64::from(!direct.within_shitov || !direct.within_envelope);
                        route_mismatch += u64::from(direct.certificate.k_found != lin.certificate.k_found);
                    }
                }
                Err(EscapeError::NoEscapeWithinBall {
                    orbit_contained: true, ..
                }) if !escapes => contained += 1,
                other => return Err(format!("orbit scan and search disagree: {other:?}")),
            }
        }
        passed &= over_bound == 0 && over_shitov == 0 && route_mismatch == 0;
        rows.push(obj([
            ("group", Value::String(format!("SL_2(F_{q})"))),
            ("verified_instances", report::int(verified as u64)),
            ("orbit_contained_skipped", report::int(contained)),
            ("over_escape_bound", report::int(over_bound)),
            ("max_k_linear", report::int(max_k[0] as u64)),
            ("max_k_quadratic", report::int(max_k[1] as u64)),
            ("bound_linear", escape::escape_bound(3, 1).sum.to_json()),
            ("bound_quadratic", escape::escape_bound(3, 2).sum.to_json()),
            ("shitov_instances", report::int(shitov_runs)),
            ("over_shitov_bound", report::int(over_shitov)),
            ("linearization_mismatches", report::int(route_mismatch)),
        ]));
    }
    Ok(Outcome {
        passed,
        summary: format!("{ESCAPE_INSTANCES} verified instances per group within both envelopes"),
        detail: Value::Array(rows),
    })
}

type TorusCase = (Family, u32, u64, u64, Vec<Vec<i64>>);

fn torus_rank_certificates(seed: u64) -> Check {
    let cases: [TorusCase; 3] = [
        (
            Family::Sp,
            2,
            3,
            5,
            vec![vec![0, 1], vec![1, 1], vec![1, 2], vec![2, 1]],
        ),
        (
            Family::SoOdd,
            3,
            3,
            11,
            vec![vec![0, 0, 1], vec![1, 0, 1], vec![1, 2, 1], vec![2, 1, 1]],
        ),
        (
            Family::SoEven,
            4,
            3,
            11,
            vec![vec![0, 0, 0, 1], vec![1, 0, 0, 1], vec![1, 1, 2, 1]],
        ),
    ];
    let mut passed = true;
    let mut rows = Vec::new();
    for (family, n, q_lie, q_adj, etas) in cases {
        let s = spec(family, n)?;
        for eta in etas {
            for (mode, q) in [(CertMode::LieBracket, q_lie), (CertMode::Adjoint, q_adj)] {
                let f = field(q)?;
                let t = TorusSpec::canonical(&s, eta.clone()).map_err(err)?;
                let case = sp_case(&s, &eta, &f);
                match torus_lab::rank_certificate(&t, &f, mode, seed) {
                    Ok(c) => {
                        let ok = c.achieved_rank == (s.ell as usize + 1) * t.dim();
                        passed &= ok;
                        rows.push(obj([
                            ("group", Value::String(s.label())),
                            ("q", report::int(q)),
                            ("eta", Value::Array(eta.iter().map(|&e| report::int(e)).collect())),
                            ("mode", Value::String(mode.name().into())),
                            ("case", case.map_or(Value::Null, |c| Value::String(c.into()))),
                            ("explicit", report::int(c.explicit_count as u64)),
                            ("target_rank", report::int(c.target_rank as u64)),
                            ("achieved_rank", report::int(c.achieved_rank as u64)),
                            ("hypotheses", c.hypotheses.as_ref().map_or(Value::Null, |h| h.to_json())),
                        ]));
                    }
                    Err(e) => {
                        passed = false;
                        rows.push(obj([
                            ("group", Value::String(s.label())),
                            ("eta", Value::Array(eta.iter().map(|&e| report::int(e)).collect())),
                            ("mode", Value::String(mode.name().into())),
                            ("error", Value::String(e.to_string())),
                        ]));
                    }
                }
            }
        }
    }
    let sp_cases: std::collections::BTreeSet<String> = rows
        .iter()
        .filter(|r| r["mode"] == "lie_bracket")
        .filter_map(|r| r["case"].as_str().map(String::from))
        .collect();
    passed &= sp_cases.len() == 2;
    Ok(Outcome {
        passed,
        summary: format!(
            "{} certificates at full rank; symplectic cases {:?}",
            rows.len(),
            sp_cases
        ),
        detail: Value::Array(rows),
    })
}

fn sp_case(s: &GroupSpec, eta: &[i64], f: &Field) -> Option<&'static str> {
    (s.family == Family::Sp).then(|| {
        let total = eta.iter().fold(0, |acc, &e| f.add(acc, f.from_int(e)));
        if total != 0 {
            "sum_nonzero"
        } else {
            "sum_zero"
        }
    })
}

fn agrees(x: &LogScaled) -> Option<bool> {
    let exact = x.exact()?;
    Some((ln_ratio(exact) - x.ln()).abs() <= CONSTANT_REL_SLACK * x.ln().abs().max(1.0))
}

fn constants_suite() -> Check {
    let proof = constants::proof_inequality_suite(64);
    let appendix = constants::appendix_suite(4);
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    let mut tally = |x: &LogScaled| match agrees(x) {
        Some(ok) => {
            checked += 1;
            mismatches += u64::from(!ok);
        }
        None => mismatches += 1,
    };
    for r in 1..=2u32 {
        for t in [1u64, 5, 1000] {
            let c = constants::clg_constants(r, t);
            tally(&c.c1);
            tally(&c.c2);
            if r >= 2 {
                let c = constants::torus_constants(r, t).map_err(err)?;
                tally(&c.c1);
                tally(&c.c2);
                tally(&c.c1_full);
            }
            for pair in constants::growth_pairs(r, t) {
                tally(&pair.m);
            }
        }
        tally(&constants::diameter_exponent(r).q_threshold);
    }
    let passed = proof.passed() && appendix.passed() && mismatches == 0;
    Ok(Outcome {
        passed,
        summary: format!(
            "proof inequalities (r ≤ 64) {}, appendix chains (r ≤ 4) {}, {checked} exact/log pairs agree",
            if proof.passed() { "pass" } else { "fail" },
            if appendix.passed() { "pass" } else { "fail" },
        ),
        detail: obj([
            ("proof_inequalities", proof.to_json()),
            ("appendix", appendix.to_json()),
            ("exact_log_pairs", report::int(checked)),
            ("exact_log_mismatches", report::int(mismatches)),
            ("relative_slack", report::real(CONSTANT_REL_SLACK)),
        ]),
    })
}

fn saturation_counting() -> Check {
    let s = spec(Family::Sl, 2)?;
    let f = field(5)?;
    let a = GenSet::standard(&s, &f).map_err(err)?;
    let t = growth::diameter(&a, GROUP_CAP).map_err(err)?;
    let order = a.group_order();
    let g = Mat::diag(&[2, 3]);
    let class_size = classify::conjugacy_class(&g, a.elements(), &f, GROUP_CAP)
        .map_err(err)?
        .len() as u64;
    let torus_size = groups::torus_points(&TorusSpec::maximal(&s), &f, GROUP_CAP)
        .map_err(err)?
        .len() as u64;
    let class = growth::intersect_count(&a, t, &Target::Class(g), GROUP_CAP).map_err(err)?;
    let torus = growth::intersect_count(&a, t, &Target::Torus(TorusSpec::maximal(&s)), GROUP_CAP).map_err(err)?;
    let ln_g = (order as f64).ln();
    let class_exponent = (class_size as f64).ln() / ln_g;
    let torus_exponent = (torus_size as f64).ln() / ln_g;
    let passed = class.count == 30
        && torus.count == 4
        && class.count == class_size
        && torus.count == torus_size
        && class.ball_size == order
        && class.measured_exponent == Some(class_exponent)
        && torus.measured_exponent == Some(torus_exponent);
    Ok(Outcome {
        passed,
        summary: format!(
            "|A^{t} ∩ Cl| = {}, |A^{t} ∩ T| = {}, exponents {:.6} and {:.6}",
            class.count, torus.count, class_exponent, torus_exponent
        ),
        detail: obj([
            ("saturation_radius", report::int(t as u64)),
            ("group_order", report::int(order)),
            ("class", class.to_json()),
            ("class_size", report::int(class_size)),
            ("class_exponent", report::real(class_exponent)),
            ("torus", torus.to_json()),
            ("torus_size", report::int(torus_size)),
            ("torus_exponent", report::real(torus_exponent)),
        ]),
    })
}

fn run_one(id: u8, seed: u64) -> Check {
    match id {
        1 => order_oracle(),
        2 => degree_oracle(),
        3 => classification_oracle(seed),
        4 => growth_properties(seed),
        5 => escape_envelope(seed),
        6 => torus_rank_certificates(seed),
        7 => constants_suite(),
        8 => saturation_counting(),
        _ => Err(format!("unknown criterion {id}")),
    }
}

fn name_of(id: u8) -> &'static str {
    CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1)
}

fn finish(id: u8, check: Check) -> CriterionReport {
    match check {
        Ok(o) => CriterionReport {
            id,
            name: name_of(id),
            passed: o.passed,
            summary: o.summary,
            detail: o.detail,
        },
        Err(e) => CriterionReport {
            id,
            name: name_of(id),
            passed: false,
            summary: format!("error: {e}"),
            detail: obj([("error", Value::String(e))]),
        },
    }
}

/// Runs one of the content criteria `1..=8`.
pub fn run_criterion(id: u8, seed: u64) -> CriterionReport {
    finish(id, run_one(id, seed))
}

fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(err)?;
    Ok(pool.install(job))
}

fn serialize(reports: &[CriterionReport]) -> Vec<String> {
    reports.iter().map(|r| report::to_json(&r.to_json())).collect()
}

/// Reruns `baseline`'s criteria with 1 and 8 workers and compares bytes.
pub fn determinism(baseline: &[CriterionReport], seed: u64) -> CriterionReport {
    let ids: Vec<u8> = baseline.iter().map(|r| r.id).collect();
    let rerun = |workers: usize| {
        with_workers(workers, || {
            ids.iter().map(|&id| run_criterion(id, seed)).collect::<Vec<_>>()
        })
    };
    let check = (|| {
        let base = serialize(baseline);
        let one = serialize(&rerun(1)?);
        let eight = serialize(&rerun(8)?);
        let differing: Vec<Value> = ids
            .iter()
            .enumerate()
            .filter(|&(i, _)| base[i] != one[i] || base[i] != eight[i])
            .map(|(_, &id)| report::int(id))
            .collect();
        Ok(Outcome {
            passed: differing.is_empty(),
            summary: format!(
                "{} sub-reports compared across 3 runs (default, 1, 8 workers)",
                ids.len()
            ),
            detail: obj([
                ("compared", Value::Array(ids.iter().map(|&i| report::int(i)).collect())),
                ("differing", Value::Array(differing)),
            ]),
        })
    })();
    finish(9, check)
}

/// Every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    let mut out: Vec<CriterionReport> = (1..=8).map(|id| run_criterion(id, seed)).collect();
    let det = determinism(&out, seed);
    out.push(det);
    out
}

/// The full suite as one report.
pub fn suite_json(reports: &[CriterionReport], seed: u64) -> Value {
    obj([
        ("profile", Value::String("desk".into())),
        ("seed", report::int(seed)),
        ("group_cap", report::int(GROUP_CAP as u64)),
        ("passed", Value::Bool(reports.iter().all(|r| r.passed))),
        (
            "criteria",
            Value::Array(reports.iter().map(CriterionReport::to_json).collect()),
        ),
    ])
}
