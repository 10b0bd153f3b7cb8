//! Explicit constants in log space, with exact big-integer values where small.
//!
//! [`LogScaled`] carries a natural logarithm and, when affordable, the exact
//! value. [`Tower`] handles values whose logarithm itself overflows. The
//! suites at the bottom replay every closing inequality numerically.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use thiserror::Error;

use crate::groups::{Family, GroupSpec};
use crate::report::{self, obj};

/// Relative band inside which comparisons refuse to decide.
pub const COMPARE_SLACK: f64 = 1e-6;
/// Required agreement between a stored logarithm and its exact value.
pub const EXACT_AGREEMENT: f64 = 1e-9;
/// Exact values above this many bits are dropped.
pub const EXACT_BITS_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstError {
    #[error("rank {0} is below 2; the rank-one torus case is settled directly (W = {{±Id}})")]
    RankTooSmall(u32),
    #[error("inequality {name} failed at {params}")]
    InequalityFailed { name: String, params: String },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
}

pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits") as f64;
    top.ln() + shift as f64 * LN_2
}

pub fn ln_ratio(x: &BigRational) -> f64 {
    ln_biguint(&x.numer().abs().to_biguint().expect("nonnegative"))
        - ln_biguint(&x.denom().to_biguint().expect("positive"))
}

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    xs.iter().fold(f64::NEG_INFINITY, |acc, &x| log_add_exp(acc, x))
}

/// Outcome of checking an inequality under the slack policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn is_holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    fn from_exact(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// Compares reals, returning `None` inside the relative slack band.
pub fn compare_reals(a: f64, b: f64) -> Option<Ordering> {
    if a == b {
        return None;
    }
    if a.is_infinite() || b.is_infinite() {
        return a.partial_cmp(&b);
    }
    let tol = COMPARE_SLACK * a.abs().max(b.abs());
    if (a - b).abs() <= tol {
        None
    } else {
        a.partial_cmp(&b)
    }
}

/// Verdict for `a < b` (or `a ≤ b`; equality is never decided in floating point).
pub fn real_below(a: f64, b: f64) -> Verdict {
    match compare_reals(a, b) {
        Some(Ordering::Less) => Verdict::Holds,
        Some(_) => Verdict::Fails,
        None => Verdict::Indeterminate,
    }
}

fn relative_margin(a: f64, b: f64) -> f64 {
    if a.is_infinite() && a < 0.0 {
        return 1.0;
    }
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (b - a) / scale
    }
}

/// A nonnegative quantity stored through its natural logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct LogScaled {
    ln: f64,
    exact: Option<BigRational>,
}

impl LogScaled {
    pub fn from_ln(ln: f64) -> Self {
        LogScaled { ln, exact: None }
    }

    /// Stores `ln` and, if small enough, `exact`. Both are supplied by the caller
    /// so that they can be checked against each other.
    pub fn with_exact(ln: f64, exact: BigRational) -> Self {
        let bits = exact.numer().bits() + exact.denom().bits();
        LogScaled {
            ln,
            exact: (bits <= EXACT_BITS_CAP).then_some(exact),
        }
    }

    pub fn from_int(x: BigUint) -> Self {
        let ln = ln_biguint(&x);
        Self::with_exact(ln, BigRational::from_integer(BigInt::from(x)))
    }

    pub fn from_u64(x: u64) -> Self {
        Self::from_int(BigUint::from(x))
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn exact_int(&self) -> Option<BigUint> {
        self.exact
            .as_ref()
            .filter(|x| x.is_integer())
            .and_then(|x| x.to_integer().to_biguint())
    }

    pub fn drop_exact(mut self) -> Self {
        self.exact = None;
        self
    }

    pub fn mul(&self, other: &LogScaled) -> LogScaled {
        let ln = self.ln + other.ln;
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Self::with_exact(ln, a * b),
            _ => Self::from_ln(ln),
        }
    }

    pub fn add(&self, other: &LogScaled) -> LogScaled {
        let ln = log_add_exp(self.ln, other.ln);
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Self::with_exact(ln, a + b),
            _ => Self::from_ln(ln),
        }
    }

    pub fn pow(&self, e: u32) -> LogScaled {
        let ln = self.ln * e as f64;
        match &self.exact {
            Some(a) if (a.numer().bits() + a.denom().bits()) * e as u64 <= EXACT_BITS_CAP => {
                Self::with_exact(ln, num_traits::pow(a.clone(), e as usize))
            }
            _ => Self::from_ln(ln),
        }
    }

    /// Verdict for `self ≤ other`; exact when both sides carry exact values.
    pub fn le(&self, other: &LogScaled) -> Verdict {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Verdict::from_exact(a <= b),
            _ => real_below(self.ln, other.ln),
        }
    }

    /// Whether the stored logarithm matches the exact value.
    pub fn consistent(&self) -> bool {
        match &self.exact {
            None => true,
            Some(x) => (ln_ratio(x) - self.ln).abs() <= EXACT_AGREEMENT * self.ln.abs().max(1.0),
        }
    }

    pub fn to_json(&self) -> Value {
        let exact = match &self.exact {
            None => Value::Null,
            Some(x) if x.is_integer() => report::big_signed(&x.to_integer()),
            Some(x) => Value::String(format!("{}/{}", x.numer(), x.denom())),
        };
        obj([("ln", report::real(self.ln)), ("exact", exact)])
    }
}

/// `exp` applied `height` times to `top`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tower {
    height: u32,
    top: f64,
}

/// Above this, `exp(top)` would overflow.
const TOWER_LIFT: f64 = 709.0;

impl Tower {
    pub fn new(height: u32, top: f64) -> Self {
        Tower { height, top }.normalized()
    }

    pub fn from_ln(ln: f64) -> Self {
        Self::new(1, ln)
    }

    /// From `ln ln x`.
    pub fn from_lnln(lnln: f64) -> Self {
        Self::new(2, lnln)
    }

    pub fn height(&self) -> u32 {
        self.height
    }
    pub fn top(&self) -> f64 {
        self.top
    }

    fn normalized(mut self) -> Self {
        while self.height > 0 && self.top <= TOWER_LIFT {
            self.top = self.top.exp();
            self.height -= 1;
        }
        self
    }

    /// Heights are aligned first; equal heights compare tops under the slack band.
    pub fn compare(&self, other: &Tower) -> Option<Ordering> {
        match self.height.cmp(&other.height) {
            Ordering::Equal => compare_reals(self.top, other.top),
            ord => Some(ord),
        }
    }

    pub fn to_json(&self) -> Value {
        obj([("height", report::int(self.height)), ("top", report::real(self.top))])
    }
}

fn pow_big(base: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), e as usize)
}

fn rat(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ln_2r(r: u32) -> f64 {
    (2.0 * r as f64).ln()
}

/// Exact mode threshold for the per-theorem constants.
const EXACT_RANK_MAX: u32 = 3;

#[derive(Clone, Debug)]
pub struct ClgConstants {
    pub c1: LogScaled,
    pub c2: LogScaled,
}

/// Conjugacy-class estimate: `C₁ = (2r)^{38r²}`, `C₂ = (2r)^{21r²} + 2t`.
pub fn clg_constants(r: u32, t: u64) -> ClgConstants {
    let (rf, two_r) = (r as f64, 2 * r as u64);
    let c1_ln = 38.0 * rf * rf * ln_2r(r);
    let c2_ln = log_add_exp(21.0 * rf * rf * ln_2r(r), (2.0 * t as f64).ln());
    if r <= EXACT_RANK_MAX {
        let r2 = (r * r) as u64;
        ClgConstants {
            c1: LogScaled::with_exact(c1_ln, rat(pow_big(two_r, 38 * r2))),
            c2: LogScaled::with_exact(c2_ln, rat(pow_big(two_r, 21 * r2) + 2 * t)),
        }
    } else {
        ClgConstants {
            c1: LogScaled::from_ln(c1_ln),
            c2: LogScaled::from_ln(c2_ln),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TorusConstants {
    pub c1: LogScaled,
    pub c2: LogScaled,
    pub c1_full: LogScaled,
}

/// Torus estimate: `C₁ = (2r)^{19r²}/(r(r+1))`, `C₂ = (2r)^{45r³−1}t`, and the
/// non-regular-semisimple variant `r(r+1)·C₁`.
pub fn torus_constants(r: u32, t: u64) -> Result<TorusConstants, ConstError> {
    if r < 2 {
        return Err(ConstError::RankTooSmall(r));
    }
    let rf = r as f64;
    let full_ln = 19.0 * rf * rf * ln_2r(r);
    let c1_ln = full_ln - (rf * (rf + 1.0)).ln();
    let c2_ln = (45.0 * rf * rf * rf - 1.0) * ln_2r(r) + (t as f64).ln();
    if r <= EXACT_RANK_MAX {
        let two_r = 2 * r as u64;
        let full = pow_big(two_r, 19 * (r * r) as u64);
        let c1 = BigRational::new(BigInt::from(full.clone()), BigInt::from((r as u64) * (r as u64 + 1)));
        let c2 = pow_big(two_r, 45 * (r as u64).pow(3) - 1) * t;
        Ok(TorusConstants {
            c1: LogScaled::with_exact(c1_ln, c1),
            c2: LogScaled::with_exact(c2_ln, rat(c2)),
            c1_full: LogScaled::with_exact(full_ln, rat(full)),
        })
    } else {
        Ok(TorusConstants {
            c1: LogScaled::from_ln(c1_ln),
            c2: LogScaled::from_ln(c2_ln),
            c1_full: LogScaled::from_ln(full_ln),
        })
    }
}

#[derive(Clone, Debug)]
pub struct GrowthPair {
    pub m: LogScaled,
    pub eps: Ratio<u64>,
}

/// The two growth pairs `((2r)^{45r³}l, 1/(40r))` and `((2r)^{22r²}+8l, 1/(88r²))`.
pub fn growth_pairs(r: u32, l: u64) -> [GrowthPair; 2] {
    let rf = r as f64;
    let m1_ln = 45.0 * rf.powi(3) * ln_2r(r) + (l as f64).ln();
    let m2_ln = log_add_exp(22.0 * rf * rf * ln_2r(r), (8.0 * l as f64).ln());
    let eps1 = Ratio::new(1, 40 * r as u64);
    let eps2 = Ratio::new(1, 88 * (r as u64).pow(2));
    if r <= EXACT_RANK_MAX {
        let two_r = 2 * r as u64;
        let m1 = pow_big(two_r, 45 * (r as u64).pow(3)) * l;
        let m2 = pow_big(two_r, 22 * (r as u64).pow(2)) + 8 * l;
        [
            GrowthPair {
                m: LogScaled::with_exact(m1_ln, rat(m1)),
                eps: eps1,
            },
            GrowthPair {
                m: LogScaled::with_exact(m2_ln, rat(m2)),
                eps: eps2,
            },
        ]
    } else {
        [
            GrowthPair {
                m: LogScaled::from_ln(m1_ln),
                eps: eps1,
            },
            GrowthPair {
                m: LogScaled::from_ln(m2_ln),
                eps: eps2,
            },
        ]
    }
}

#[derive(Clone, Debug)]
pub struct DiameterExponent {
    pub exponent: f64,
    pub q_threshold: LogScaled,
}

/// `1947·r⁴·ln(2r)` and `e^{6r ln 2r} = (2r)^{6r}`.
pub fn diameter_exponent(r: u32) -> DiameterExponent {
    let rf = r as f64;
    let exponent = 1947.0 * rf.powi(4) * ln_2r(r);
    let ln = 6.0 * rf * ln_2r(r);
    DiameterExponent {
        exponent,
        q_threshold: LogScaled::with_exact(ln, rat(pow_big(2 * r as u64, 6 * r as u64))),
    }
}

/// Aggregated outcome of one named inequality over a parameter grid.
#[derive(Clone, Debug)]
pub struct Tally {
    pub name: String,
    pub evaluated: u64,
    pub fails: u64,
    pub indeterminate: u64,
    worst_margin: f64,
    worst: Option<(String, String, String)>,
    first_bad: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.to_string(),
            evaluated: 0,
            fails: 0,
            indeterminate: 0,
            worst_margin: f64::INFINITY,
            worst: None,
            first_bad: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.evaluated > 0 && self.fails == 0 && self.indeterminate == 0
    }

    pub fn to_json(&self) -> Value {
        let worst = match &self.worst {
            None => Value::Null,
            Some((p, l, r)) => obj([
                ("params", Value::String(p.clone())),
                ("lhs", Value::String(l.clone())),
                ("rhs", Value::String(r.clone())),
                ("relative_margin", report::real(self.worst_margin)),
            ]),
        };
        obj([
            ("name", Value::String(self.name.clone())),
            ("evaluated", report::int(self.evaluated)),
            ("fails", report::int(self.fails)),
            ("indeterminate", report::int(self.indeterminate)),
            ("tightest", worst),
            (
                "first_failure",
                self.first_bad.clone().map_or(Value::Null, Value::String),
            ),
        ])
    }
}

/// Collection of tallies keyed by check name, in insertion order.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub tallies: Vec<Tally>,
}

impl SuiteReport {
    fn tally(&mut self, name: &str) -> &mut Tally {
        if let Some(i) = self.tallies.iter().position(|t| t.name == name) {
            &mut self.tallies[i]
        } else {
            self.tallies.push(Tally::new(name));
            self.tallies.last_mut().expect("just pushed")
        }
    }

    /// Records `lhs ≤ rhs` (or `<`), both given as reals for the margin.
    fn record(&mut self, name: &str, params: String, verdict: Verdict, lhs: f64, rhs: f64) {
        let t = self.tally(name);
        t.evaluated += 1;
        match verdict {
            Verdict::Holds => {}
            Verdict::Fails => t.fails += 1,
            Verdict::Indeterminate => t.indeterminate += 1,
        }
        if verdict != Verdict::Holds && t.first_bad.is_none() {
            t.first_bad = Some(params.clone());
        }
        let margin = relative_margin(lhs, rhs);
        if margin < t.worst_margin || t.worst.is_none() {
            t.worst_margin = margin;
            t.worst = Some((params, report::fmt_real(lhs), report::fmt_real(rhs)));
        }
    }

    fn real(&mut self, name: &str, params: String, lhs: f64, rhs: f64) {
        self.record(name, params, real_below(lhs, rhs), lhs, rhs);
    }

    fn exact(&mut self, name: &str, params: String, holds: bool, lhs: f64, rhs: f64) {
        self.record(name, params, Verdict::from_exact(holds), lhs, rhs);
    }

    pub fn passed(&self) -> bool {
        self.tallies.iter().all(Tally::passed)
    }

    pub fn check(&self) -> Result<(), ConstError> {
        match self.tallies.iter().find(|t| !t.passed()) {
            None => Ok(()),
            Some(t) => Err(ConstError::InequalityFailed {
                name: t.name.clone(),
                params: t.first_bad.clone().unwrap_or_else(|| "no evaluations".into()),
            }),
        }
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.tallies.extend(other.tallies);
    }

    pub fn to_json(&self) -> Value {
        obj([
            ("passed", Value::Bool(self.passed())),
            (
                "checks",
                Value::Array(self.tallies.iter().map(Tally::to_json).collect()),
            ),
        ])
    }
}

fn families_at_rank(r: u32) -> Vec<GroupSpec> {
    Family::ALL
        .iter()
        .filter_map(|&f| GroupSpec::of_rank(f, r).ok())
        .collect()
}

type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

fn qf(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Number of synthetic step sequences replayed per rank.
const REPLAY_SEQUENCES: usize = 8;
const REPLAY_STEPS: usize = 40;

/// Replays the closing inequalities of the growth and diameter argument for
/// every `1 ≤ r ≤ r_max` and every family admissible at that rank.
pub fn proof_inequality_suite(r_max: u32) -> SuiteReport {
    let mut s = SuiteReport::default();
    let (ln2, ln3) = (LN_2, 3f64.ln());
    for r in 1..=r_max {
        let rf = r as f64;
        let p = format!("r={r}");
        let r_i = r as i128;

        // ε₁ step: 45/(1947r) < 48/(1947r) < (1/r)ln(41/40) ≤ ln(1+1/(40r)).
        s.exact(
            "eps1_lower_45_48",
            p.clone(),
            45 < 48,
            45.0 / (1947.0 * rf),
            48.0 / (1947.0 * rf),
        );
        s.real(
            "eps1_lower_48_log",
            p.clone(),
            48.0 / (1947.0 * rf),
            (1.0 + 1.0 / 40.0f64).ln() / rf,
        );
        if r == 1 {
            // Both sides are the same expression at r = 1.
            let v = (1.0 + 1.0 / 40.0f64).ln();
            s.exact("eps1_log_concavity", p.clone(), true, v, v);
        } else {
            s.real(
                "eps1_log_concavity",
                p.clone(),
                (1.0 + 1.0 / 40.0f64).ln() / rf,
                (1.0 / (40.0 * rf)).ln_1p(),
            );
        }

        // ε₂ step: (22 + ln1.0001/(r²ln2r))/(1947r²) < 22.0002/(1947r²) < ln(1+1/(88r²)).
        let r2 = rf * rf;
        s.real(
            "eps2_lower_22",
            p.clone(),
            (22.0 + 1.0001f64.ln() / (r2 * ln_2r(r))) / (1947.0 * r2),
            22.0002 / (1947.0 * r2),
        );
        s.real(
            "eps2_lower_log",
            p.clone(),
            22.0002 / (1947.0 * r2),
            (1.0 / (88.0 * r2)).ln_1p(),
        );
        // m₂(l) ≤ ((2r)^{22r²}+8)l < 1.0001(2r)^{22r²}l ⟸ 8 < 0.0001(2r)^{22r²}.
        let big = pow_big(2 * r as u64, 22 * (r as u64).pow(2));
        s.exact(
            "m2_relaxation",
            p.clone(),
            BigUint::from(80_000u32) < big,
            80_000f64.ln(),
            ln_biguint(&big),
        );

        // Exponent identities and their consequences, per family ℓ.
        for spec in families_at_rank(r) {
            let l = spec.ell as i128;
            let pf = format!("r={r} family={} ell={l}", spec.family.name());
            let one = Q::one();
            let a = q(l * l + 6 * l - 1, 6 * l * l * (l + 1));
            let b = q(5 * l - 1, l * (l + 1) * (6 * l - 1));
            let lhs1 = (one - q(1, l)) * (one - q(1, 6 * l)) + q(1, l + 1);
            s.exact("identity_case1", pf.clone(), lhs1 == one - a, qf(lhs1), qf(one - a));
            let lhs2 = one - q(1, l) + q(1, l + 1) / (one - q(1, 6 * l));
            s.exact("identity_case2", pf.clone(), lhs2 == one - b, qf(lhs2), qf(one - b));
            let inv_a = one / (one - a);
            s.exact(
                "inverse_exceeds_case1",
                pf.clone(),
                inv_a > one + a,
                qf(one + a),
                qf(inv_a),
            );
            s.exact(
                "case1_exponent_12r",
                pf.clone(),
                a >= q(1, 12 * r_i),
                1.0 / (12.0 * rf),
                qf(a),
            );
            let inv_b = one / (one - b);
            s.exact(
                "inverse_exceeds_case2",
                pf.clone(),
                inv_b > one + b,
                qf(one + b),
                qf(inv_b),
            );
            s.exact(
                "case2_exponent_15r2",
                pf.clone(),
                b >= q(1, 15 * r_i * r_i),
                1.0 / (15.0 * r2),
                qf(b),
            );
            if l >= 3 {
                let g = q(l - 1, 8 * r_i * (2 * l - 1));
                s.exact(
                    "case2a_exponent_20r",
                    pf.clone(),
                    g >= q(1, 20 * r_i),
                    1.0 / (20.0 * rf),
                    qf(g),
                );
            }
            let h = q(1, 3 * l - 1);
            s.exact(
                "np_exponent_8r",
                pf.clone(),
                h >= q(1, 8 * r_i),
                1.0 / (8.0 * rf),
                qf(h),
            );
            let lf = l as f64;
            s.real(
                "np_constant_two_thirds",
                pf.clone(),
                2.0 / 3.0,
                0.75f64.powf(3.0 * lf / (3.0 * lf - 1.0)),
            );

            // Third η display: ((2ℓ−1)/ℓ)(ln2/ln3)(20r²/(38r²+r+2)) > 0.512.
            let eta3 = (2.0 * lf - 1.0) / lf * (ln2 / ln3) * (20.0 * r2 / (38.0 * r2 + rf + 2.0));
            s.real("eta_case2a_0512", pf.clone(), 0.512, eta3);
            // log(r!·2^{r+2}·(2r)^{38r²}) ≤ (38r²+r+2)·log(2r) ⟸ r!·2^{r+2} ≤ (2r)^{r+2}.
            let fact: BigUint = (1..=r as u64).map(BigUint::from).product();
            let lhs = fact * pow_big(2, r as u64 + 2);
            let rhs = pow_big(2 * r as u64, r as u64 + 2);
            s.exact(
                "eta_case2a_denominator",
                pf.clone(),
                lhs <= rhs,
                ln_biguint(&lhs),
                ln_biguint(&rhs),
            );
        }

        // First η display: ln2/((1+1/(12r))ln3)·43/57 > 0.439.
        let eta1 = ln2 / ((1.0 + 1.0 / (12.0 * rf)) * ln3) * 43.0 / 57.0;
        s.real("eta_case1_0439", p.clone(), 0.439, eta1);
        // log((2r)^{45r³}/3) ≥ 43r³log(2r) ⟸ 2r³log(2r) ≥ log 3.
        s.real("eta_case1_numerator", p.clone(), ln3, 2.0 * rf.powi(3) * ln_2r(r));
        // ε = η/(12r(1+η)) with η > 0.439r exceeds 1/(40r).
        let e1 = q(439, 1000) * q(r_i, 1);
        let eps1 = e1 / (q(12 * r_i, 1) * (Q::one() + e1));
        s.exact(
            "eps_case1_40r",
            p.clone(),
            eps1 > q(1, 40 * r_i),
            1.0 / (40.0 * rf),
            qf(eps1),
        );

        let eta2 = ln2 / ((1.0 + 1.0 / (15.0 * r2)) * ln3) * 20.0 / 57.0;
        s.real("eta_case1b_0207", p.clone(), 0.207, eta2);
        s.real("eta_case1b_numerator", p.clone(), ln3, 2.0 * r2 * ln_2r(r));
        let e2 = q(207, 1000);
        let eps2 = e2 / (q(15 * r_i * r_i, 1) * (Q::one() + e2));
        s.exact(
            "eps_case1b_88r2",
            p.clone(),
            eps2 > q(1, 88 * r_i * r_i),
            1.0 / (88.0 * r2),
            qf(eps2),
        );

        let e3 = q(512, 1000);
        let eps3 = e3 / (q(20 * r_i, 1) * (Q::one() + e3));
        s.exact(
            "eps_case2a_60r",
            p.clone(),
            eps3 > q(1, 60 * r_i),
            1.0 / (60.0 * rf),
            qf(eps3),
        );

        replay_exponent_recursion(&mut s, r);

        // Closing step with |A| ≥ 3: ln3 + 45r³ln2r < 1947r⁴ln(2r)·lnln3.
        let x = diameter_exponent(r).exponent;
        s.real(
            "final_diameter_step",
            p.clone(),
            ln3 + 45.0 * rf.powi(3) * ln_2r(r),
            x * ln3.ln(),
        );
    }
    s.merge(derivation_suite(r_max));
    s
}

/// Replays `log l_j ≤ 1947r⁴ln(2r)·ln(1+c_j)` along synthetic step sequences.
fn replay_exponent_recursion(s: &mut SuiteReport, r: u32) {
    let rf = r as f64;
    let x = diameter_exponent(r).exponent;
    let eps = [1.0 / (40.0 * rf), 1.0 / (88.0 * rf * rf)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + r as u64);
    for seq in 0..REPLAY_SEQUENCES {
        let steps: Vec<usize> = (0..REPLAY_STEPS)
            .map(|j| match seq {
                0 => 0,
                1 => 1,
                2 => j % 2,
                3 => usize::from(j % 3 == 0),
                _ => rng.gen_range(0..2),
            })
            .collect();
        let (mut log_l, mut log_1c) = (0.0f64, 0.0f64);
        for (j, &i) in steps.iter().enumerate() {
            log_l = if i == 0 {
                45.0 * rf.powi(3) * ln_2r(r) + log_l
            } else {
                log_add_exp(22.0 * rf * rf * ln_2r(r), 8f64.ln() + log_l)
            };
            log_1c += eps[i].ln_1p();
            s.real(
                "exponent_recursion_replay",
                format!("r={r} sequence={seq} step={}", j + 1),
                log_l,
                x * log_1c,
            );
        }
    }
}

/// Closed-form degree of a conjugacy class, `2^{3r²}·r^{2r}`.
fn cl_degree_closed(r: u32) -> BigUint {
    pow_big(2, 3 * (r as u64).pow(2)) * pow_big(r as u64, 2 * r as u64)
}

fn ln_cl_degree_closed(r: u32) -> f64 {
    let rf = r as f64;
    3.0 * rf * rf * LN_2 + 2.0 * rf * rf.ln()
}

/// Exact-comparison limit for the derivation checks.
const DERIVATION_EXACT_RANK: u32 = 6;

/// Intermediate bounds that assemble the per-theorem constants.
pub fn derivation_suite(r_max: u32) -> SuiteReport {
    let mut s = SuiteReport::default();
    for r in 1..=r_max {
        let rf = r as f64;
        for spec in families_at_rank(r) {
            let (n, l, dim) = (spec.size as u64, spec.ell as u64, spec.dim as u64);
            let (nf, lf, dimf) = (n as f64, l as f64, dim as f64);
            let p = format!("r={r} family={}", spec.family.name());

            // Fibre size: deg(V)^ℓ·N^{N²(ℓ−1)} ≤ (2r)^{17r³}.
            let lhs_ln = lf * ln_cl_degree_closed(r) + nf * nf * (lf - 1.0) * nf.ln();
            let rhs_ln = 17.0 * rf.powi(3) * ln_2r(r);
            if r <= DERIVATION_EXACT_RANK {
                let lhs = num_traits::pow(cl_degree_closed(r), l as usize) * pow_big(n, n * n * (l - 1));
                let rhs = pow_big(2 * r as u64, 17 * (r as u64).pow(3));
                s.exact("fibre_size", p.clone(), lhs <= rhs, lhs_ln, rhs_ln);
            } else {
                s.real("fibre_size", p.clone(), lhs_ln, rhs_ln);
            }

            // Escape budget: (1+1/(D−1))·D^{N²} < (1/4)(2r)^{21r²}, D = N(ℓ−1)dim.
            let d = n * (l - 1) * dim;
            let lhs_ln = (d as f64).ln() * (nf * nf + 1.0) - ((d - 1) as f64).ln();
            let rhs_ln = 21.0 * rf * rf * ln_2r(r) - 4f64.ln();
            if r <= DERIVATION_EXACT_RANK {
                let lhs = pow_big(d, n * n + 1) * 4u32;
                let rhs = pow_big(2 * r as u64, 21 * (r as u64).pow(2)) * (d - 1);
                s.exact("class_escape_budget", p.clone(), lhs < rhs, lhs_ln, rhs_ln);
            } else {
                s.real("class_escape_budget", p.clone(), lhs_ln, rhs_ln);
            }

            // C₁ assembly: (m+1)(2r)^{17r³/ℓ} ≤ (2r)^{38r²} with m+1 ≤ (1/4)(2r)^{21r²}+1.
            let m1 = log_add_exp(rhs_ln, 0.0);
            s.real(
                "class_c1_assembly",
                p.clone(),
                m1 + 17.0 * rf.powi(3) / lf * ln_2r(r),
                38.0 * rf * rf * ln_2r(r),
            );

            if r >= 2 {
                let ln_m =
                    (6.0f64 / 5.0).ln() + nf * nf * (lf + 1.0) * (0.5 * (nf - 1.0) * lf * (lf - 1.0) * (rf - 1.0)).ln();
                let ln_k = 1.5f64.ln() + nf * nf * lf * (nf * (rf - 1.0)).ln();
                let ln_m1 = log_add_exp(ln_m, 0.0);
                // C₂ = (ℓ+1)(m+1)t + 2kℓ ≤ (2r)^{45r³−1}t, tight at t = 1.
                let c2 = log_add_exp((lf + 1.0).ln() + ln_m1, (2.0 * lf).ln() + ln_k);
                s.real("torus_c2_assembly", p.clone(), c2, (45.0 * rf.powi(3) - 1.0) * ln_2r(r));
                // (m+1)^{1/(ℓ+1)}·2deg(G)·(ℓ+1)^{N²/(ℓ+1)} < (2r)^{19r²}/(r(r+1)).
                let c1 = ln_m1 / (lf + 1.0) + LN_2 + spec.deg_bound.ln() + nf * nf / (lf + 1.0) * (lf + 1.0).ln();
                s.real(
                    "torus_c1_assembly",
                    p.clone(),
                    c1,
                    19.0 * rf * rf * ln_2r(r) - (rf * (rf + 1.0)).ln(),
                );
            }
            let _ = dimf;
        }
    }
    s
}

/// Exponent `e(d) = (d+1)(2r²+r−d/2)`, always an integer.
pub fn appendix_e(r: u32, d: u64) -> u64 {
    let s = 2 * (r as u64).pow(2) + r as u64;
    (d + 1) * s - d * (d + 1) / 2
}

/// `k = 2(2r+1)^{(2r+1)²}`.
pub fn appendix_k(r: u32) -> BigUint {
    let b = 2 * r as u64 + 1;
    pow_big(b, b * b) * 2u32
}

/// `f(x, y) = Σ_{j=1}^{y} 2^{jx}`.
pub fn appendix_f(x: u64, y: u64) -> BigUint {
    (1..=y).map(|j| pow_big(2, j * x)).sum()
}

/// `C₂(d,t) = (2^{e(d)}−1)k + 2^{e(d)}t`.
pub fn appendix_c2(r: u32, d: u64, t: &BigUint) -> BigUint {
    let p = pow_big(2, appendix_e(r, d));
    (&p - 1u32) * appendix_k(r) + p * t
}

/// `t_0 = t_1 = t`, `t_{m+1} = k + 2t_m`.
pub fn appendix_t(r: u32, m: u64, t: &BigUint) -> BigUint {
    if m == 0 {
        return t.clone();
    }
    let p = pow_big(2, m - 1);
    (&p - 1u32) * appendix_k(r) + p * t
}

/// `C₄(m) = (2^{e(d−1)+m−1}−1)k + 2^{e(d−1)+m−1}t`.
pub fn appendix_c4(r: u32, d: u64, m: u64, t: &BigUint) -> BigUint {
    let p = pow_big(2, appendix_e(r, d - 1) + m - 1);
    (&p - 1u32) * appendix_k(r) + p * t
}

/// Iterated logarithms of the appendix quantities for one parameter set.
struct AppendixLogs {
    c1: f64,
    c1_prev: f64,
    delta: f64,
    c3: f64,
}

fn appendix_logs(r: u32, n: u64, d: u64, m: u64, deg: u64) -> AppendixLogs {
    let x = 2 * (r as u64).pow(2) + r as u64 - 2;
    let ln_d = (deg as f64).ln();
    let lnln_d = if deg == 1 { f64::NEG_INFINITY } else { ln_d.ln() };
    // a = ln(2^{2N²+2}·D²)
    let a = (2.0 * (n * n) as f64 + 2.0) * LN_2 + 2.0 * ln_d;
    let c1 = 14.0 * (d * (r as u64).pow(4)) as f64 * LN_2 + (2.0 * deg as f64).ln().ln();
    let ln_f_next = ln_biguint(&appendix_f(x, m + 1));
    let delta = log_add_exp(ln_f_next + a.ln(), (x * (m + 1)) as f64 * LN_2 + lnln_d);
    let c1_prev = 14.0 * ((d - 1) * (r as u64).pow(4)) as f64 * LN_2 + log_add_exp(LN_2.ln(), LN_2 + delta);
    let c3 = if m == 0 {
        f64::NEG_INFINITY
    } else {
        ln_biguint(&appendix_f(x, m)) + (m as f64 * a + ln_d).ln()
    };
    AppendixLogs { c1, c1_prev, delta, c3 }
}

const APPENDIX_DEGREES: [u64; 5] = [1, 2, 7, 1000, 1 << 20];
const APPENDIX_TS: [u64; 3] = [1, 5, 1000];

/// Verifies the Appendix recursion's closing conditions for every `r ≤ r_max`,
/// admissible family, `1 ≤ d < dim`, and `0 ≤ M ≤ 2r²+r−d`.
pub fn appendix_suite(r_max: u32) -> SuiteReport {
    let mut s = SuiteReport::default();
    for r in 1..=r_max {
        let big_s = 2 * (r as u64).pow(2) + r as u64;
        for spec in families_at_rank(r) {
            let n = spec.size as u64;
            let dim = spec.dim as u64;
            for d in 1..dim {
                for m in 0..=big_s - d {
                    for &deg in &APPENDIX_DEGREES {
                        let p = format!("r={r} family={} d={d} M={m} D={deg}", spec.family.name());
                        let lg = appendix_logs(r, n, d, m, deg);
                        let mp1 = ((m + 1) as f64).ln();
                        let now = log_add_exp(LN_2 + lg.delta, lg.c1_prev);
                        s.real_le("c1_exit_now", p.clone(), now, lg.c1);
                        let late = log_sum_exp(&[3f64.ln() + lg.delta, lg.c1_prev, lg.c3]) - mp1;
                        s.real_le("c1_exit_late", p.clone(), late, lg.c1);
                        s.real_le("c1_exit_recursion", p.clone(), lg.c3 - mp1, lg.c1);
                        let chain = log_add_exp(4f64.ln() + lg.delta, lg.c1_prev);
                        s.real_le("c1_chain_delta4", p.clone(), chain, lg.c1);
                        s.real_le("c1_chain_tail", p.clone(), lg.c3 - mp1, lg.delta);
                    }
                    for &t in &APPENDIX_TS {
                        let t = BigUint::from(t);
                        let p = format!("r={r} family={} d={d} M={m} t={t}", spec.family.name());
                        let c2 = appendix_c2(r, d, &t);
                        let c2_prev = appendix_c2(r, d - 1, &appendix_t(r, m, &t));
                        let c4 = appendix_c4(r, d, m, &t);
                        let tm = appendix_t(r, m, &t);
                        let (l2, lp, l4, lt) =
                            (ln_biguint(&c2), ln_biguint(&c2_prev), ln_biguint(&c4), ln_biguint(&tm));
                        s.exact("c2_exit_now", p.clone(), c2 >= c2_prev, lp, l2);
                        s.exact("c2_exit_late", p.clone(), c2 >= c2_prev && c2 >= c4, lp.max(l4), l2);
                        s.exact("c2_exit_recursion", p.clone(), c2 >= tm && c2 >= c4, lt.max(l4), l2);
                        let c4_next = appendix_c4(r, d, m + 1, &t);
                        s.exact(
                            "c4_step_dominates",
                            p.clone(),
                            c4_next >= c2_prev,
                            lp,
                            ln_biguint(&c4_next),
                        );
                        if m >= 1 {
                            s.exact("c4_step_identity", p.clone(), c4 == c2_prev, l4, lp);
                        }
                    }
                }
            }
            // Final relaxations at d = dim − 1.
            let p = format!("r={r} family={}", spec.family.name());
            let r4 = (r as u64).pow(4);
            let e1 = 14 * (dim - 1) * r4;
            let e2 = 14 * (big_s - 1) * r4;
            let e3 = 32 * (r as u64).pow(6);
            s.exact(
                "c1_final_exponent",
                p.clone(),
                e1 <= e2 && e2 <= e3,
                e1 as f64,
                e3 as f64,
            );
            for &t in &APPENDIX_TS {
                let t = BigUint::from(t);
                let pt = format!("{p} t={t}");
                let c2 = appendix_c2(r, dim - 1, &t);
                let mid = pow_big(2, big_s * (big_s + 1) / 2) * (appendix_k(r) + &t);
                let fin = pow_big(2, 6 * r4) * (pow_big(2 * r as u64, 16 * (r as u64).pow(2)) + &t);
                s.exact(
                    "c2_final_middle",
                    pt.clone(),
                    c2 <= mid,
                    ln_biguint(&c2),
                    ln_biguint(&mid),
                );
                s.exact("c2_final_bound", pt, mid <= fin, ln_biguint(&mid), ln_biguint(&fin));
            }
        }
    }
    s
}

impl SuiteReport {
    fn real_le(&mut self, name: &str, params: String, lhs: f64, rhs: f64) {
        self.real(name, params, lhs, rhs);
    }
}

/// Values of the appendix constants at one parameter point.
pub fn appendix_constants(r: u32, d: u64, deg: u64, t: u64) -> Result<Value, ConstError> {
    let big_s = 2 * (r as u64).pow(2) + r as u64;
    if r == 0 || deg == 0 || d >= big_s {
        return Err(ConstError::BadParameter(format!(
            "need r ≥ 1, D ≥ 1, 0 ≤ d < 2r²+r; got r={r} d={d} D={deg}"
        )));
    }
    let tb = BigUint::from(t);
    let n = 2 * r as u64 + 1;
    let x = big_s - 2;
    let mut per_m = Vec::new();
    if d >= 1 {
        for m in 0..=big_s - d {
            let lg = appendix_logs(r, n, d, m, deg);
            per_m.push(obj([
                ("M", report::int(m)),
                ("f", report::big(&appendix_f(x, m))),
                ("t_M", report::big(&appendix_t(r, m, &tb))),
                ("C4", report::big(&appendix_c4(r, d, m, &tb))),
                ("C3", Tower::from_lnln(lg.c3).to_json()),
                ("Delta", Tower::from_lnln(lg.delta).to_json()),
            ]));
        }
    }
    let c1_lnln = 14.0 * (d * (r as u64).pow(4)) as f64 * LN_2 + (2.0 * deg as f64).ln().ln();
    Ok(obj([
        ("r", report::int(r)),
        ("d", report::int(d)),
        ("D", report::int(deg)),
        ("t", report::int(t)),
        ("e_d", report::int(appendix_e(r, d))),
        ("k", report::big(&appendix_k(r))),
        ("C1", Tower::from_lnln(c1_lnln).to_json()),
        ("C2", report::big(&appendix_c2(r, d, &tb))),
        ("matrix_size_used", report::int(n)),
        ("per_M", Value::Array(per_m)),
    ]))
}

/// Leading-term evaluation of the large-rank replacement constants.
#[derive(Clone, Debug)]
pub struct Asymptotics {
    pub eta: f64,
    pub eps2_coefficient: f64,
    pub limit: f64,
    pub coefficient_step1: f64,
    pub coefficient_step2: f64,
}

pub fn asymptotic_constants(r: u32) -> Asymptotics {
    let rf = r as f64;
    let eta = 4.0 * LN_2 / (9.0 * 3f64.ln());
    let eps2_coefficient = 5.0 * eta / (24.0 * (1.0 + eta));
    // Coefficient c with c·r⁴·ln r·ln(1+ε) covering each step's log-increment.
    let coefficient_step1 = 32.0 / (rf * (1.0 / (12.0 * rf)).ln_1p());
    let coefficient_step2 = 16.0 / (rf * rf * (eps2_coefficient / (rf * rf)).ln_1p());
    Asymptotics {
        eta,
        eps2_coefficient,
        limit: 384.0,
        coefficient_step1,
        coefficient_step2,
    }
}

impl Asymptotics {
    pub fn to_json(&self, r: u32, t: u64) -> Value {
        let rf = r as f64;
        let lr = rf.ln();
        obj([
            ("r", report::int(r)),
            ("eta", report::real(self.eta)),
            ("eps2_coefficient", report::real(self.eps2_coefficient)),
            ("limit", report::int(384)),
            ("implied_coefficient_step1", report::real(self.coefficient_step1)),
            ("implied_coefficient_step2", report::real(self.coefficient_step2)),
            (
                "implied_coefficient",
                report::real(self.coefficient_step1.max(self.coefficient_step2)),
            ),
            ("ln_class_c1", report::real(20.0 * rf * rf * lr)),
            (
                "ln_class_c2",
                report::real(log_add_exp(16.0 * rf * rf * lr, (2.0 * t as f64).ln())),
            ),
            ("ln_torus_c1", report::real(16.0 * rf * rf * lr)),
            ("ln_torus_c2", report::real(32.0 * rf.powi(3) * lr + (t as f64).ln())),
            ("ln_q_threshold", report::real(2.0 * rf * lr)),
            ("eps1", report::real(1.0 / (12.0 * rf))),
            ("eps2", report::real(self.eps2_coefficient / (rf * rf))),
        ])
    }
}

/// Greatest common divisor helper shared with the torus module.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn clg_examples() {
        let c = clg_constants(2, 1);
        assert!(close(c.c1.ln(), 152.0 * 4f64.ln(), 1e-12));
        assert!(close(c.c1.ln(), 210.72, 1e-4));
        assert_eq!(c.c2.exact_int().unwrap(), pow_big(4, 84) + 2u32);
        let c = clg_constants(1, 1);
        assert_eq!(c.c1.exact_int().unwrap(), pow_big(2, 38));
        assert_eq!(c.c2.exact_int().unwrap(), pow_big(2, 21) + 2u32);
    }

    #[test]
    fn torus_examples() {
        let c = torus_constants(2, 1).unwrap();
        assert!(close(c.c2.ln(), 359.0 * 4f64.ln(), 1e-12));
        assert!(close(c.c2.ln(), 497.7, 1e-4));
        assert_eq!(c.c1_full.exact_int().unwrap(), pow_big(4, 76));
        assert_eq!(torus_constants(1, 1).unwrap_err(), ConstError::RankTooSmall(1));
    }

    #[test]
    fn growth_pair_examples() {
        let [p1, p2] = growth_pairs(2, 1);
        assert!(close(p1.m.ln(), 360.0 * 4f64.ln(), 1e-12));
        assert!(close(p1.m.ln(), 499.1, 1e-4));
        assert_eq!(p1.eps, Ratio::new(1, 80));
        assert_eq!(p2.m.exact_int().unwrap(), pow_big(2, 176) + 8u32);
        assert_eq!(p2.eps, Ratio::new(1, 352));
        let [p1, _] = growth_pairs(1, 5);
        assert_eq!(p1.m.exact_int().unwrap(), pow_big(2, 45) * 5u32);
        assert_eq!(p1.eps, Ratio::new(1, 40));
    }

    #[test]
    fn diameter_examples() {
        let d = diameter_exponent(2);
        assert!(close(d.exponent, 43186.7, 1e-4));
        assert_eq!(d.q_threshold.exact_int().unwrap(), BigUint::from(16_777_216u32));
        assert!(close(diameter_exponent(1).exponent, 1349.6, 1e-4));
    }

    #[test]
    fn exact_and_log_agree_for_small_rank() {
        for r in 1..=3 {
            for t in [1u64, 2, 17, 1000] {
                let c = clg_constants(r, t);
                assert!(c.c1.consistent() && c.c2.consistent());
                for p in growth_pairs(r, t) {
                    assert!(p.m.consistent());
                }
                if r >= 2 {
                    let c = torus_constants(r, t).unwrap();
                    assert!(c.c1.consistent() && c.c2.consistent() && c.c1_full.consistent());
                }
            }
            assert!(diameter_exponent(r).q_threshold.consistent());
        }
    }

    #[test]
    fn constants_are_monotone() {
        for r in 1..20 {
            let (a, b) = (clg_constants(r, 1), clg_constants(r + 1, 1));
            assert!(a.c1.ln() < b.c1.ln() && a.c2.ln() < b.c2.ln());
            assert!(clg_constants(r, 1).c2.ln() <= clg_constants(r, 2).c2.ln());
            if r <= EXACT_RANK_MAX {
                assert_eq!(clg_constants(r, 1).c2.le(&clg_constants(r, 2).c2), Verdict::Holds);
            }
            assert!(diameter_exponent(r).exponent < diameter_exponent(r + 1).exponent);
            let (a, b) = (growth_pairs(r, 1), growth_pairs(r + 1, 1));
            assert!(a[0].m.ln() < b[0].m.ln() && a[1].m.ln() < b[1].m.ln());
            if r >= 2 {
                let (a, b) = (torus_constants(r, 1).unwrap(), torus_constants(r + 1, 1).unwrap());
                assert!(a.c1.ln() < b.c1.ln() && a.c2.ln() < b.c2.ln());
            }
        }
    }

    #[test]
    fn slack_band_refuses_close_calls() {
        assert_eq!(real_below(1.0, 1.0 + 1e-9), Verdict::Indeterminate);
        assert_eq!(real_below(1.0, 1.1), Verdict::Holds);
        assert_eq!(real_below(1.1, 1.0), Verdict::Fails);
        let a = LogScaled::from_u64(10);
        let b = LogScaled::from_u64(10);
        assert_eq!(a.le(&b), Verdict::Holds);
        assert_eq!(a.clone().drop_exact().le(&b.drop_exact()), Verdict::Indeterminate);
    }

    #[test]
    fn towers_align_heights() {
        let small = Tower::from_ln(700.0);
        assert_eq!(small.height(), 0);
        let big = Tower::from_lnln(50.0);
        assert_eq!(big.height(), 1);
        assert_eq!(small.compare(&big), Some(Ordering::Less));
        let bigger = Tower::from_lnln(800.0);
        assert_eq!(bigger.height(), 2);
        assert_eq!(big.compare(&bigger), Some(Ordering::Less));
        assert_eq!(bigger.compare(&Tower::from_lnln(800.0)), None);
    }

    #[test]
    fn ln_of_huge_integers() {
        let x = pow_big(3, 5000);
        assert!(close(ln_biguint(&x), 5000.0 * 3f64.ln(), 1e-14));
    }

    #[test]
    fn appendix_examples() {
        assert_eq!(appendix_e(2, 1), 19);
        assert_eq!(appendix_k(2), pow_big(5, 25) * 2u32);
        assert_eq!(appendix_f(3, 2), BigUint::from(72u32));
        // t₀ = t₁ = t, t_{m+1} = k + 2t_m.
        let t = BigUint::from(7u32);
        assert_eq!(appendix_t(2, 1, &t), t);
        for m in 1..6 {
            assert_eq!(appendix_t(2, m + 1, &t), appendix_k(2) + appendix_t(2, m, &t) * 2u32);
        }
    }

    #[test]
    fn rational_identity_at_ell_four() {
        let l = 4i128;
        let one = Q::one();
        let lhs = (one - q(1, l)) * (one - q(1, 6 * l)) + q(1, l + 1);
        assert_eq!(lhs, one - q(l * l + 6 * l - 1, 6 * l * l * (l + 1)));
    }

    #[test]
    fn proof_suite_small() {
        let s = proof_inequality_suite(8);
        assert!(s.passed(), "{}", report::to_json_pretty(&s.to_json()));
    }

    #[test]
    fn appendix_suite_rank_two() {
        let s = appendix_suite(2);
        assert!(s.passed(), "{}", report::to_json_pretty(&s.to_json()));
    }

    #[test]
    fn asymptotic_values() {
        let a = asymptotic_constants(8);
        assert!(close(a.eta, 0.28047, 1e-4));
        assert!(close(a.eps2_coefficient, 0.04565, 1e-3));
        assert_eq!(a.limit, 384.0);
        let far = asymptotic_constants(100_000);
        assert!(close(far.coefficient_step1, 384.0, 1e-3));
    }
}
