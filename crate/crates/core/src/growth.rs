//! Ball sizes, diameters, growth inequalities, the product-set threshold, the
//! growth dichotomy and intersection counts against classes, tori and the
//! non-regular-semisimple locus.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashSet;
use serde_json::Value;
use thiserror::Error;

use crate::cayley::{Ball, BallError};
use crate::classify::{self, ClassifyError};
use crate::constants::{self, GrowthPair, LogScaled};
use crate::gf::Field;
use crate::groups::{self, GroupError, GroupSpec, TorusSpec};
use crate::matrix::Mat;
use crate::report::{self, obj};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("the set generates a subgroup of order {closure}, the group has order {order}")]
    NotGenerating { closure: u64, order: u64 },
    #[error("element {0} is not in the group")]
    NotMember(String),
    #[error("set lacks the identity")]
    MissingIdentity,
    #[error("set is not closed under inverses")]
    NotSymmetric,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// Symmetric set containing the identity, inside a fixed group.
#[derive(Clone, Debug)]
pub struct GenSet {
    pub spec: GroupSpec,
    pub field: Field,
    elements: Vec<Mat>,
}

impl GenSet {
    /// Validates membership, identity and inverse closure.
    pub fn new(spec: &GroupSpec, f: &Field, elements: Vec<Mat>) -> Result<Self, GrowthError> {
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        for g in &elements {
            if !groups::is_member(g, spec, f)? {
                return Err(GrowthError::NotMember(g.format(f)));
            }
        }
        if !elements.iter().any(Mat::is_identity) {
            return Err(GrowthError::MissingIdentity);
        }
        let set: FxHashSet<&Mat> = elements.iter().collect();
        if elements
            .iter()
            .any(|g| g.inverse(f).is_none_or(|gi| !set.contains(&gi)))
        {
            return Err(GrowthError::NotSymmetric);
        }
        Ok(GenSet {
            spec: spec.clone(),
            field: f.clone(),
            elements,
        })
    }

    /// Adds inverses and the identity.
    pub fn symmetric_closure(spec: &GroupSpec, f: &Field, raw: &[Mat]) -> Result<Self, GrowthError> {
        let mut all = groups::symmetrize(raw, f);
        all.push(Mat::identity(spec.size));
        Self::new(spec, f, all)
    }

    pub fn whole_group(spec: &GroupSpec, f: &Field, cap: usize) -> Result<Self, GrowthError> {
        Ok(GenSet {
            spec: spec.clone(),
            field: f.clone(),
            elements: groups::materialize(spec, f, cap)?,
        })
    }

    /// Symmetrized standard generators together with the identity.
    pub fn standard(spec: &GroupSpec, f: &Field) -> Result<Self, GrowthError> {
        Self::symmetric_closure(spec, f, &groups::standard_generators(spec, f)?)
    }

    /// `s` draws, from `universe` when given and otherwise from the group
    /// sampler, closed under inverses with the identity added.
    pub fn random<R: Rng>(
        spec: &GroupSpec,
        f: &Field,
        s: usize,
        universe: Option<&[Mat]>,
        rng: &mut R,
    ) -> Result<Self, GrowthError> {
        let draws: Vec<Mat> = (0..s)
            .map(|_| match universe {
                Some(u) => u.choose(rng).expect("nonempty universe").clone(),
                None => groups::random_element(spec, f, rng),
            })
            .collect();
        Self::symmetric_closure(spec, f, &draws)
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn group_order(&self) -> u64 {
        groups::group_order(&self.spec, self.field.q() as u64)
            .ok()
            .and_then(|o| o.to_u64())
            .unwrap_or(u64::MAX)
    }

    pub fn ball(&self, cap: usize) -> Result<Ball, GrowthError> {
        Ok(Ball::new(&self.elements, &self.field, cap)?)
    }
}

/// `|A^1|, |A^2|, …` up to a horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSeries {
    pub sizes: Vec<u64>,
    /// First `t` with `A^t = G`.
    pub saturated_at: Option<usize>,
    /// First `t` with `A^t = A^{t+1}`, if reached.
    pub stable_at: Option<usize>,
    pub group_order: u64,
}

impl BallSeries {
    pub fn generating(&self) -> Option<bool> {
        match (self.saturated_at, self.stable_at) {
            (Some(_), _) => Some(true),
            (None, Some(_)) => Some(false),
            _ => None,
        }
    }

    /// Strict growth until the sizes stop changing, constant afterwards.
    pub fn is_consistent(&self) -> bool {
        let stop = self.sizes.windows(2).position(|w| w[0] == w[1]);
        match stop {
            None => self.sizes.windows(2).all(|w| w[0] < w[1]),
            Some(i) => {
                self.sizes[..=i].windows(2).all(|w| w[0] < w[1]) && self.sizes[i..].iter().all(|&s| s == self.sizes[i])
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let opt = |x: Option<usize>| x.map_or(Value::Null, |t| report::int(t as u64));
        obj([
            (
                "sizes",
                Value::Array(self.sizes.iter().map(|&s| report::int(s)).collect()),
            ),
            ("saturated_at", opt(self.saturated_at)),
            ("stable_at", opt(self.stable_at)),
            ("group_order", report::int(self.group_order)),
            ("generating", self.generating().map_or(Value::Null, Value::Bool)),
        ])
    }
}

pub fn ball_series(a: &GenSet, t_max: usize, cap: usize) -> Result<BallSeries, GrowthError> {
    let mut ball = a.ball(cap)?;
    ball.grow_to(t_max + 1)?;
    let sizes: Vec<u64> = (1..=t_max).map(|t| ball.size_at(t) as u64).collect();
    let order = a.group_order();
    let saturated_at = sizes.iter().position(|&s| s == order).map(|i| i + 1);
    let stable_at = (1..=t_max).find(|&t| ball.size_at(t) == ball.size_at(t + 1));
    Ok(BallSeries {
        sizes,
        saturated_at,
        stable_at,
        group_order: order,
    })
}

fn closed_ball(a: &GenSet, cap: usize) -> Result<Ball, GrowthError> {
    let mut ball = a.ball(cap)?;
    ball.close()?;
    let order = a.group_order();
    if ball.len() as u64 != order {
        return Err(GrowthError::NotGenerating {
            closure: ball.len() as u64,
            order,
        });
    }
    Ok(ball)
}

/// Smallest `m` with `A^m = G`.
pub fn diameter(a: &GenSet, cap: usize) -> Result<usize, GrowthError> {
    let ball = closed_ball(a, cap)?;
    Ok(ball.diameter().expect("closed").max(1))
}

/// Whether `diam ≤ (ln|G|)^{exponent}`, compared in log space.
pub fn diameter_within_main_bound(diam: usize, order: u64, rank: u32) -> bool {
    let e = constants::diameter_exponent(rank).exponent;
    (diam as f64).ln() <= e * (order as f64).ln().ln()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuzsaReport {
    pub k: u32,
    pub a1: u64,
    pub a3: u64,
    pub ak: u64,
    pub holds: bool,
}

impl RuzsaReport {
    pub fn to_json(&self) -> Value {
        obj([
            ("k", report::int(self.k)),
            ("a1", report::int(self.a1)),
            ("a3", report::int(self.a3)),
            ("ak", report::int(self.ak)),
            ("holds", Value::Bool(self.holds)),
        ])
    }
}

/// `|A^k|/|A| ≤ (|A³|/|A|)^{k−2}`, cleared of denominators.
pub fn ruzsa_holds(a1: u64, a3: u64, ak: u64, k: u32) -> bool {
    let lhs = BigUint::from(ak) * BigUint::from(a1).pow(k - 3);
    let rhs = BigUint::from(a3).pow(k - 2);
    lhs <= rhs
}

pub fn ruzsa_check(a: &GenSet, k: u32, cap: usize) -> Result<RuzsaReport, GrowthError> {
    if k < 3 {
        return Err(GrowthError::BadParameter(format!("k = {k} < 3")));
    }
    let mut ball = a.ball(cap)?;
    ball.grow_to(k as usize)?;
    let (a1, a3, ak) = (
        ball.size_at(1) as u64,
        ball.size_at(3) as u64,
        ball.size_at(k as usize) as u64,
    );
    Ok(RuzsaReport {
        k,
        a1,
        a3,
        ak,
        holds: ruzsa_holds(a1, a3, ak, k),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OlsonReport {
    pub a1: u64,
    pub a3: u64,
    pub group_order: u64,
    pub covers: bool,
    pub doubles: bool,
}

impl OlsonReport {
    pub fn holds(&self) -> bool {
        self.covers || self.doubles
    }

    pub fn to_json(&self) -> Value {
        obj([
            ("a1", report::int(self.a1)),
            ("a3", report::int(self.a3)),
            ("group_order", report::int(self.group_order)),
            ("a3_is_group", Value::Bool(self.covers)),
            ("a3_doubles", Value::Bool(self.doubles)),
            ("holds", Value::Bool(self.holds())),
        ])
    }
}

/// Either `A³ = G` or `|A³| ≥ 2|A|`.
pub fn olson_check(a: &GenSet, cap: usize) -> Result<OlsonReport, GrowthError> {
    let ball = closed_ball(a, cap)?;
    let (a1, a3) = (ball.size_at(1) as u64, ball.size_at(3) as u64);
    let order = a.group_order();
    Ok(OlsonReport {
        a1,
        a3,
        group_order: order,
        covers: a3 == order,
        doubles: a3 >= 2 * a1,
    })
}

/// `⌈(4/3)·q^{dim − r/3}⌉`, as the least `n` with `27n³ ≥ 64·q^{3dim − r}`.
pub fn np_threshold(spec: &GroupSpec, f: &Field) -> Result<BigUint, GrowthError> {
    let q = f.q() as u64;
    if q <= 9 {
        return Err(GrowthError::HypothesisFailed(format!("q = {q} ≤ 9")));
    }
    if f.p() == 2 {
        return Err(GrowthError::HypothesisFailed("characteristic 2".into()));
    }
    let target = BigUint::from(64u32) * BigUint::from(q).pow(3 * spec.dim - spec.rank);
    let mut n = (&target / 27u32).cbrt();
    while BigUint::from(27u32) * n.pow(3) < target {
        n += 1u32;
    }
    while !n.is_zero() && BigUint::from(27u32) * (&n - 1u32).pow(3) >= target {
        n -= 1u32;
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NpReport {
    pub size: u64,
    pub threshold: BigUint,
    pub applicable: bool,
    pub a3: Option<u64>,
    pub group_order: u64,
}

impl NpReport {
    pub fn to_json(&self) -> Value {
        obj([
            ("size", report::int(self.size)),
            ("threshold", report::big(&self.threshold)),
            ("applicable", Value::Bool(self.applicable)),
            ("a3", self.a3.map_or(Value::Null, report::int)),
            ("group_order", report::int(self.group_order)),
            (
                "notice",
                if self.applicable {
                    Value::Null
                } else {
                    Value::String("set below threshold; check skipped".into())
                },
            ),
        ])
    }
}

/// Product set `X·Y`.
pub fn product_set(x: &FxHashSet<Mat>, y: &[Mat], f: &Field) -> FxHashSet<Mat> {
    let mut out = FxHashSet::default();
    for a in x {
        for b in y {
            out.insert(a.mul(b, f));
        }
    }
    out
}

/// For `|A|` at or above the threshold, asserts `A³ = G`; the set need not be symmetric.
pub fn np_check(spec: &GroupSpec, f: &Field, set: &[Mat]) -> Result<NpReport, GrowthError> {
    let threshold = np_threshold(spec, f)?;
    let mut uniq: Vec<Mat> = set.to_vec();
    uniq.sort();
    uniq.dedup();
    let order = groups::group_order(spec, f.q() as u64)?
        .to_u64()
        .ok_or_else(|| GrowthError::BadParameter("group order exceeds u64".into()))?;
    let size = uniq.len() as u64;
    if BigUint::from(size) < threshold {
        return Ok(NpReport {
            size,
            threshold,
            applicable: false,
            a3: None,
            group_order: order,
        });
    }
    let a: FxHashSet<Mat> = uniq.iter().cloned().collect();
    let a3 = product_set(&product_set(&a, &uniq, f), &uniq, f).len() as u64;
    if a3 != order {
        return Err(GrowthError::TheoremViolation(format!(
            "|A| = {size} ≥ {threshold} but |A³| = {a3} < {order}"
        )));
    }
    Ok(NpReport {
        size,
        threshold,
        applicable: true,
        a3: Some(a3),
        group_order: order,
    })
}

/// Sets intersected with balls.
#[derive(Clone, Debug)]
pub enum Target {
    Class(Mat),
    Torus(TorusSpec),
    TorusNonrs(TorusSpec),
    NonRs,
}

impl Target {
    /// Parses `class:<matrix>`, `torus:<eta csv>`, `torus_nonrs:<eta csv>` or
    /// `nonrs`; an empty η means the maximal torus.
    pub fn parse(s: &str, spec: &GroupSpec, f: &Field) -> Result<Self, GrowthError> {
        let bad = || GrowthError::BadParameter(format!("unknown target {s:?}"));
        if s == "nonrs" {
            return Ok(Target::NonRs);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let torus = |arg: &str| -> Result<TorusSpec, GrowthError> {
            if arg.is_empty() || arg == "max" {
                return Ok(TorusSpec::maximal(spec));
            }
            let eta = arg
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            Ok(TorusSpec::canonical(spec, eta)?)
        };
        match kind {
            "class" => Ok(Target::Class(
                Mat::parse_square(arg, f).map_err(|e| GrowthError::BadParameter(e.to_string()))?,
            )),
            "torus" => Ok(Target::Torus(torus(arg)?)),
            "torus_nonrs" => Ok(Target::TorusNonrs(torus(arg)?)),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Target::Class(_) => "class",
            Target::Torus(_) => "torus",
            Target::TorusNonrs(_) => "torus_nonrs",
            Target::NonRs => "nonrs",
        }
    }
}

/// Membership oracle for a target.
pub struct TargetSet {
    members: Option<FxHashSet<Mat>>,
    field: Field,
}

impl TargetSet {
    pub fn build(target: &Target, spec: &GroupSpec, f: &Field, cap: usize) -> Result<Self, GrowthError> {
        let members = match target {
            Target::Class(g) => {
                let gens = groups::symmetrize(&groups::standard_generators(spec, f)?, f);
                Some(classify::conjugacy_class(g, &gens, f, cap)?.into_iter().collect())
            }
            Target::Torus(t) => Some(groups::torus_points(t, f, cap)?.into_iter().collect()),
            Target::TorusNonrs(t) => Some(
                groups::torus_points(t, f, cap)?
                    .into_iter()
                    .filter(|m| !classify::is_regular_semisimple(m, f))
                    .collect(),
            ),
            Target::NonRs => None,
        };
        Ok(TargetSet {
            members,
            field: f.clone(),
        })
    }

    pub fn contains(&self, g: &Mat) -> bool {
        match &self.members {
            Some(s) => s.contains(g),
            None => !classify::is_regular_semisimple(g, &self.field),
        }
    }

    /// Size of the target when it was enumerated.
    pub fn size(&self) -> Option<usize> {
        self.members.as_ref().map(FxHashSet::len)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectReport {
    pub target: &'static str,
    pub t: usize,
    pub ball_size: u64,
    pub count: u64,
    /// `ln count / ln |A^t|`.
    pub measured_exponent: Option<f64>,
    /// `dim V / dim G` of the estimate that applies.
    pub estimate_exponent: Option<f64>,
    /// `C₁·|A^{C₂}|^{exponent}`.
    pub bound: Option<LogScaled>,
    pub bound_holds: Option<bool>,
}

impl IntersectReport {
    pub fn to_json(&self) -> Value {
        let opt_real = |x: Option<f64>| x.map_or(Value::Null, report::real);
        obj([
            ("target", Value::String(self.target.into())),
            ("t", report::int(self.t as u64)),
            ("ball_size", report::int(self.ball_size)),
            ("count", report::int(self.count)),
            ("measured_exponent", opt_real(self.measured_exponent)),
            ("estimate_exponent", opt_real(self.estimate_exponent)),
            ("bound", self.bound.as_ref().map_or(Value::Null, LogScaled::to_json)),
            ("bound_holds", self.bound_holds.map_or(Value::Null, Value::Bool)),
        ])
    }
}

/// The dimensional estimate that applies to a target: `(C₁, C₂, exponent)`.
fn estimate(target: &Target, spec: &GroupSpec, f: &Field, t: u64) -> Option<(LogScaled, LogScaled, f64)> {
    let r = spec.rank;
    let ell = spec.ell as f64;
    match target {
        Target::Class(g) if classify::is_regular_semisimple(g, f) => {
            let c = constants::clg_constants(r, t);
            Some((c.c1, c.c2, 1.0 - 1.0 / ell))
        }
        Target::Torus(_) => {
            let c = constants::torus_constants(r, t).ok()?;
            Some((c.c1, c.c2, 1.0 / (ell + 1.0)))
        }
        Target::TorusNonrs(_) => {
            let c = constants::torus_constants(r, t).ok()?;
            Some((c.c1_full, c.c2, 1.0 / (ell + 1.0)))
        }
        _ => None,
    }
}

/// Exact `|A^t ∩ target|`, with the dimensional estimate where one applies.
pub fn intersect_count(a: &GenSet, t: usize, target: &Target, cap: usize) -> Result<IntersectReport, GrowthError> {
    let set = TargetSet::build(target, &a.spec, &a.field, cap)?;
    let mut ball = a.ball(cap)?;
    ball.close()?;
    let count = ball.elements_within(t).filter(|g| set.contains(g)).count() as u64;
    let ball_size = ball.size_at(t) as u64;
    let measured_exponent = (ball_size > 1 && count > 0).then(|| (count as f64).ln() / (ball_size as f64).ln());
    let est = estimate(target, &a.spec, &a.field, t as u64);
    let (bound, bound_holds, estimate_exponent) = match est {
        Some((c1, c2, e)) => {
            let radius = ball.diameter().expect("closed") as f64;
            let big_ball = if c2.ln() >= radius.ln() {
                ball.len()
            } else {
                ball.size_at(c2.ln().exp().floor() as usize)
            };
            let b = LogScaled::from_ln(c1.ln() + e * (big_ball as f64).ln());
            let holds = LogScaled::from_u64(count).le(&b).is_holds();
            (Some(b), Some(holds), Some(e))
        }
        None => (None, None, None),
    };
    Ok(IntersectReport {
        target: target.name(),
        t,
        ball_size,
        count,
        measured_exponent,
        estimate_exponent,
        bound,
        bound_holds,
    })
}

/// Rows `(t, |A^t|, |A^t ∩ target|)` for `t = 1..=t_max`.
pub fn growth_table(
    a: &GenSet,
    t_max: usize,
    target: Option<&Target>,
    cap: usize,
) -> Result<Vec<(usize, u64, Option<u64>)>, GrowthError> {
    let set = target
        .map(|tg| TargetSet::build(tg, &a.spec, &a.field, cap))
        .transpose()?;
    let mut ball = a.ball(cap)?;
    ball.grow_to(t_max)?;
    let mut running = 0u64;
    let mut rows = Vec::with_capacity(t_max);
    if let Some(s) = &set {
        running += ball.layer(0).iter().filter(|g| s.contains(g)).count() as u64;
    }
    for t in 1..=t_max {
        if let Some(s) = &set {
            running += ball.layer(t).iter().filter(|g| s.contains(g)).count() as u64;
        }
        rows.push((t, ball.size_at(t) as u64, set.as_ref().map(|_| running)));
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairOutcome {
    pub m: LogScaled,
    pub eps: Ratio<u64>,
    /// `|A^m| ≥ |A^l|^{1+ε}`.
    pub grows: bool,
    /// `A^{3m} = G`.
    pub saturates: bool,
}

impl PairOutcome {
    pub fn holds(&self) -> bool {
        self.grows || self.saturates
    }

    pub fn branch(&self) -> &'static str {
        match (self.grows, self.saturates) {
            (true, true) => "both",
            (true, false) => "growth",
            (false, true) => "saturation",
            (false, false) => "none",
        }
    }

    pub fn to_json(&self) -> Value {
        obj([
            ("m", self.m.to_json()),
            (
                "eps",
                Value::String(format!("{}/{}", self.eps.numer(), self.eps.denom())),
            ),
            ("grows", Value::Bool(self.grows)),
            ("saturates", Value::Bool(self.saturates)),
            ("branch", Value::String(self.branch().into())),
        ])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyReport {
    pub l: u64,
    pub diameter: usize,
    pub ball_l: u64,
    pub group_order: u64,
    pub pairs: Vec<PairOutcome>,
}

impl DichotomyReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(PairOutcome::holds)
    }

    pub fn to_json(&self) -> Value {
        obj([
            ("l", report::int(self.l)),
            ("diameter", report::int(self.diameter as u64)),
            ("ball_l", report::int(self.ball_l)),
            ("group_order", report::int(self.group_order)),
            (
                "pairs",
                Value::Array(self.pairs.iter().map(PairOutcome::to_json).collect()),
            ),
            ("holds", Value::Bool(self.holds())),
        ])
    }
}

/// `x ≥ y^{1+ε}` exactly, as `x^{den} ≥ y^{den+num}`.
fn at_least_power(x: u64, y: u64, eps: Ratio<u64>) -> bool {
    let (num, den) = (*eps.numer() as u32, *eps.denom() as u32);
    BigUint::from(x).pow(den) >= BigUint::from(y).pow(den + num)
}

/// Both growth pairs against the measured balls; `m(l)` stays in log space.
pub fn growth_dichotomy_check(a: &GenSet, l: u64, cap: usize) -> Result<DichotomyReport, GrowthError> {
    let ball = closed_ball(a, cap)?;
    let diam = ball.diameter().expect("closed").max(1);
    let order = a.group_order();
    let ball_l = ball.size_at(l as usize) as u64;
    let pairs: Vec<PairOutcome> = constants::growth_pairs(a.spec.rank, l)
        .into_iter()
        .map(|GrowthPair { m, eps }| {
            let ln_diam = (diam as f64).ln();
            let covers = m.ln() >= ln_diam;
            let ball_m = if covers {
                order
            } else {
                ball.size_at(m.ln().exp().floor() as usize) as u64
            };
            PairOutcome {
                grows: at_least_power(ball_m, ball_l, eps),
                saturates: (3.0f64).ln() + m.ln() >= ln_diam,
                m,
                eps,
            }
        })
        .collect();
    Ok(DichotomyReport {
        l,
        diameter: diam,
        ball_l,
        group_order: order,
        pairs,
    })
}

/// `|A^a·A^b| = |A^{a+b}|` as sets.
pub fn layers_compose(a: &GenSet, s: usize, u: usize, cap: usize) -> Result<bool, GrowthError> {
    let mut ball = a.ball(cap)?;
    ball.grow_to(s + u)?;
    let left: FxHashSet<Mat> = ball.elements_within(s).cloned().collect();
    let right: Vec<Mat> = ball.elements_within(u).cloned().collect();
    let prod = product_set(&left, &right, &a.field);
    let direct: FxHashSet<Mat> = ball.elements_within(s + u).cloned().collect();
    Ok(prod == direct)
}
