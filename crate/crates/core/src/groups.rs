//! Classical matrix groups: parameters, membership, orders, Lie algebras,
//! canonical tori, Weyl data and the Cayley map.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

use crate::cayley::{self, BallError};
use crate::constants::LogScaled;
use crate::gf::{Field, GfError};
use crate::matrix::{self, Mat, MatrixError};
use crate::report::{self, obj};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{family}_{n} is not an admissible classical group")]
    InadmissibleFamilyParameter { family: &'static str, n: u32 },
    #[error("characteristic {0} is not supported (need an odd prime)")]
    BadCharacteristic(u32),
    #[error("expected a {expected}x{expected} matrix, found {found}x{found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("Id + x is singular")]
    SingularShift,
    #[error("operation not available for {0}")]
    FamilyNotSupported(&'static str),
    #[error("bad torus character: {0}")]
    BadEta(String),
    #[error("predicted order {predicted} exceeds the cap {cap}")]
    GroupTooLarge { predicted: BigUint, cap: usize },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("malformed group description: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ball(#[from] BallError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Sl,
    SoEven,
    SoOdd,
    Sp,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Sl, Family::SoEven, Family::SoOdd, Family::Sp];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sl => "SL",
            Family::SoEven => "SOeven",
            Family::SoOdd => "SOodd",
            Family::Sp => "Sp",
        }
    }

    pub fn parse(s: &str) -> Result<Family, GroupError> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Family::Sl),
            "soeven" | "so_even" | "so-even" => Ok(Family::SoEven),
            "soodd" | "so_odd" | "so-odd" => Ok(Family::SoOdd),
            "sp" => Ok(Family::Sp),
            _ => Err(GroupError::UnknownFamily(s.to_string())),
        }
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::SoEven | Family::SoOdd)
    }

    fn min_parameter(self) -> u32 {
        match self {
            Family::Sl => 2,
            Family::SoEven => 4,
            Family::SoOdd => 3,
            Family::Sp => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of the parameter table.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub family: Family,
    pub n: u32,
    pub rank: u32,
    pub size: usize,
    pub dim: u32,
    pub ell: u32,
    pub deg_bound: LogScaled,
}

impl GroupSpec {
    pub fn new(family: Family, n: u32) -> Result<Self, GroupError> {
        if n < family.min_parameter() {
            return Err(GroupError::InadmissibleFamilyParameter {
                family: family.name(),
                n,
            });
        }
        Ok(Self::toy(family, n))
    }

    /// Same table row without the admissibility check; used for small
    /// analogues such as `SO_3` and `Sp_2`.
    pub fn toy(family: Family, n: u32) -> Self {
        let (rank, size) = match family {
            Family::Sl => (n - 1, n as usize),
            Family::SoEven | Family::Sp => (n, 2 * n as usize),
            Family::SoOdd => (n, 2 * n as usize + 1),
        };
        let r = rank;
        let dim = match family {
            Family::Sl => r * r + 2 * r,
            Family::SoEven => 2 * r * r - r,
            Family::SoOdd | Family::Sp => 2 * r * r + r,
        };
        let two_pow = |e: u32| LogScaled::from_int(BigUint::one() << e);
        let deg_bound = match family {
            Family::Sl => LogScaled::from_u64(n as u64),
            Family::SoEven => two_pow(2 * r * r - 1),
            Family::SoOdd => two_pow(2 * r * r + 2 * r),
            Family::Sp => two_pow(2 * r * r),
        };
        GroupSpec {
            family,
            n,
            rank,
            size,
            dim,
            ell: dim.checked_div(rank).unwrap_or(0),
            deg_bound,
        }
    }

    /// The admissible group of the given family and rank.
    pub fn of_rank(family: Family, r: u32) -> Result<Self, GroupError> {
        let n = match family {
            Family::Sl => r + 1,
            _ => r,
        };
        Self::new(family, n)
    }

    /// Conventional name such as `Sp_4` or `SO_7`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Sl => format!("SL_{}", self.size),
            Family::SoEven | Family::SoOdd => format!("SO_{}", self.size),
            Family::Sp => format!("Sp_{}", self.size),
        }
    }

    pub fn positive_roots(&self) -> u32 {
        (self.dim - self.rank) / 2
    }

    /// Number of torus coordinates `a_i` (the diagonal entries for SL).
    pub fn torus_coords(&self) -> usize {
        match self.family {
            Family::Sl => self.size,
            _ => self.rank as usize,
        }
    }

    pub fn to_json(&self) -> Value {
        obj([
            ("family", Value::String(self.family.name().into())),
            ("n", report::int(self.n)),
            ("r", report::int(self.rank)),
            ("N", report::int(self.size as u64)),
            ("dim", report::int(self.dim)),
            ("ell", report::int(self.ell)),
            ("deg_bound", self.deg_bound.to_json()),
        ])
    }
}

/// Parses `family:n:q[:modulus]`, the modulus as ':'-free comma list low degree first.
pub fn parse_group(s: &str) -> Result<(GroupSpec, Field), GroupError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() < 3 || parts.len() > 4 {
        return Err(GroupError::Parse(s.to_string()));
    }
    let family = Family::parse(parts[0])?;
    let n: u32 = parts[1].parse().map_err(|_| GroupError::Parse(s.to_string()))?;
    let q: u64 = parts[2].parse().map_err(|_| GroupError::Parse(s.to_string()))?;
    let spec = GroupSpec::new(family, n)?;
    let field = match parts.get(3) {
        None => Field::of_order(q)?,
        Some(m) => {
            let (p, e) = crate::gf::prime_power(q).ok_or(GfError::NonPrimeCharacteristic(q))?;
            let coeffs = m
                .split(',')
                .map(|c| c.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GroupError::Parse(s.to_string()))?;
            Field::new(p, e, Some(&coeffs))?
        }
    };
    Ok((spec, field))
}

fn require_odd(f: &Field) -> Result<(), GroupError> {
    if f.p() == 2 {
        Err(GroupError::BadCharacteristic(2))
    } else {
        Ok(())
    }
}

fn require_odd_q(q: u64) -> Result<(), GroupError> {
    match crate::gf::prime_power(q) {
        Some((p, _)) if p > 2 => Ok(()),
        Some((p, _)) => Err(GroupError::BadCharacteristic(p as u32)),
        None => Err(GfError::NonPrimeCharacteristic(q).into()),
    }
}

fn check_shape(m: &Mat, spec: &GroupSpec) -> Result<(), GroupError> {
    if m.n() != spec.size {
        return Err(GroupError::ShapeMismatch {
            expected: spec.size,
            found: m.n(),
        });
    }
    Ok(())
}

/// `Ω = ((0, Id), (−Id, 0))` of size `2n`.
pub fn omega(n: usize, f: &Field) -> Mat {
    let mut m = Mat::zero(2 * n);
    let minus = f.neg(1);
    for i in 0..n {
        m.set(i, n + i, 1);
        m.set(n + i, i, minus);
    }
    m
}

/// Whether `m` satisfies the defining equations of the group.
pub fn is_member(m: &Mat, spec: &GroupSpec, f: &Field) -> Result<bool, GroupError> {
    check_shape(m, spec)?;
    Ok(match spec.family {
        Family::Sl => m.det(f) == 1,
        Family::SoEven | Family::SoOdd => m.det(f) == 1 && m.transpose().mul(m, f).is_identity(),
        Family::Sp => {
            let w = omega(spec.size / 2, f);
            m.transpose().mul(&w, f).mul(m, f) == w
        }
    })
}

/// Whether `m` lies in the Lie algebra of the group.
pub fn is_lie_member(m: &Mat, spec: &GroupSpec, f: &Field) -> Result<bool, GroupError> {
    check_shape(m, spec)?;
    Ok(match spec.family {
        Family::Sl => m.trace(f) == 0,
        Family::SoEven | Family::SoOdd => m.transpose() == m.neg(f),
        Family::Sp => {
            let w = omega(spec.size / 2, f);
            m.transpose().mul(&w, f).add(&w.mul(m, f), f) == Mat::zero(spec.size)
        }
    })
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `|G(F_q)|` from the product formulas.
pub fn group_order(spec: &GroupSpec, q: u64) -> Result<BigUint, GroupError> {
    require_odd_q(q)?;
    let r = spec.rank as usize;
    let qb = big(q);
    let qp = |e: usize| num_traits::pow(qb.clone(), e);
    let order = match spec.family {
        Family::Sl => {
            let prod: BigUint = (0..=r).map(|i| qp(r + 1) - qp(i)).product();
            let (quot, rem) = prod.div_rem(&big(q - 1));
            assert!(rem.is_zero(), "order formula division is exact");
            quot
        }
        Family::SoEven => {
            let prod: BigUint = (1..r).map(|i| qp(2 * i) - 1u32).product();
            qp(r * (r - 1)) * (qp(r) - 1u32) * prod
        }
        Family::SoOdd | Family::Sp => {
            let prod: BigUint = (1..=r).map(|i| qp(2 * i) - 1u32).product();
            qp(r * r) * prod
        }
    };
    Ok(order)
}

/// `|g(F_q)| = q^dim`.
pub fn lie_algebra_count(spec: &GroupSpec, q: u64) -> Result<BigUint, GroupError> {
    require_odd_q(q)?;
    Ok(num_traits::pow(big(q), spec.dim as usize))
}

/// Basis of the Lie algebra as matrices, built from its linear conditions.
pub fn lie_basis(spec: &GroupSpec, f: &Field) -> Vec<Mat> {
    let n = spec.size;
    let unit = |i: usize, j: usize, c: u32| {
        let mut m = Mat::zero(n);
        m.set(i, j, c);
        m
    };
    let minus = f.neg(1);
    let mut out = Vec::new();
    match spec.family {
        Family::Sl => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(unit(i, j, 1));
                    }
                }
            }
            for i in 0..n - 1 {
                let mut m = unit(i, i, 1);
                m.set(n - 1, n - 1, minus);
                out.push(m);
            }
        }
        Family::SoEven | Family::SoOdd => {
            for i in 0..n {
                for j in i + 1..n {
                    let mut m = unit(i, j, 1);
                    m.set(j, i, minus);
                    out.push(m);
                }
            }
        }
        Family::Sp => {
            let h = n / 2;
            for i in 0..h {
                for j in 0..h {
                    let mut m = unit(i, j, 1);
                    m.set(h + j, h + i, minus);
                    out.push(m);
                }
            }
            for i in 0..h {
                for j in i..h {
                    let mut b = unit(i, h + j, 1);
                    b.set(j, h + i, 1);
                    out.push(b);
                    let mut c = unit(h + i, j, 1);
                    c.set(h + j, i, 1);
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Uniform random Lie algebra element.
pub fn random_lie_element<R: Rng>(spec: &GroupSpec, f: &Field, rng: &mut R) -> Mat {
    let mut acc = Mat::zero(spec.size);
    for b in lie_basis(spec, f) {
        let c = rng.gen_range(0..f.q());
        if c != 0 {
            acc = acc.add(&b.scale(c, f), f);
        }
    }
    acc
}

/// The Cayley map `x ↦ (Id − x)(Id + x)⁻¹`; it is its own inverse.
pub fn cayley_map(x: &Mat, spec: &GroupSpec, f: &Field) -> Result<Mat, GroupError> {
    if spec.family == Family::Sl {
        return Err(GroupError::FamilyNotSupported("SL"));
    }
    check_shape(x, spec)?;
    let id = Mat::identity(spec.size);
    let shift_inv = id.add(x, f).inverse(f).ok_or(GroupError::SingularShift)?;
    Ok(id.sub(x, f).mul(&shift_inv, f))
}

/// Random group element: uniform for SL, a Cayley image otherwise.
pub fn random_element<R: Rng>(spec: &GroupSpec, f: &Field, rng: &mut R) -> Mat {
    let n = spec.size;
    match spec.family {
        Family::Sl => loop {
            let m = Mat::from_codes(n, (0..n * n).map(|_| rng.gen_range(0..f.q())).collect()).expect("square");
            let d = m.det(f);
            if d != 0 {
                let s = f.inv(d).expect("nonzero");
                let mut m = m;
                for j in 0..n {
                    let v = f.mul(m.get(0, j), s);
                    m.set(0, j, v);
                }
                return m;
            }
        },
        _ => loop {
            let x = random_lie_element(spec, f, rng);
            if let Ok(g) = cayley_map(&x, spec, f) {
                return g;
            }
        },
    }
}

/// A generating set of root-subgroup elements, without inverses or identity.
pub fn standard_generators(spec: &GroupSpec, f: &Field) -> Result<Vec<Mat>, GroupError> {
    require_odd(f)?;
    let n = spec.size;
    let basis: Vec<u32> = (0..f.e()).map(|k| f.p().pow(k)).collect();
    let id = Mat::identity(n);
    let mut out = Vec::new();
    match spec.family {
        Family::Sl => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        for &t in &basis {
                            let mut m = id.clone();
                            m.set(i, j, t);
                            out.push(m);
                        }
                    }
                }
            }
        }
        Family::Sp => {
            let h = n / 2;
            for i in 0..h {
                for j in i..h {
                    for &t in &basis {
                        let mut upper = id.clone();
                        upper.set(i, h + j, t);
                        upper.set(j, h + i, t);
                        out.push(upper);
                        let mut lower = id.clone();
                        lower.set(h + i, j, t);
                        lower.set(h + j, i, t);
                        out.push(lower);
                    }
                }
            }
            for i in 0..h {
                for j in 0..h {
                    if i != j {
                        for &t in &basis {
                            let mut m = id.clone();
                            m.set(i, j, t);
                            m.set(h + j, h + i, f.neg(t));
                            out.push(m);
                        }
                    }
                }
            }
        }
        Family::SoEven | Family::SoOdd => {
            for i in 0..n.saturating_sub(2) {
                for t in 1..f.q() {
                    let mut x = Mat::zero(n);
                    for (a, b) in [(i, i + 1), (i + 1, i + 2)] {
                        x.set(a, b, t);
                        x.set(b, a, f.neg(t));
                    }
                    if let Ok(g) = cayley_map(&x, spec, f) {
                        out.push(g);
                    }
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for t in 1..f.q() {
                        let mut x = Mat::zero(n);
                        x.set(i, j, t);
                        x.set(j, i, f.neg(t));
                        if let Ok(g) = cayley_map(&x, spec, f) {
                            out.push(g);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Closes `gens` under inverses and adds the identity.
pub fn symmetrize(gens: &[Mat], f: &Field) -> Vec<Mat> {
    let mut out: Vec<Mat> = Vec::with_capacity(2 * gens.len() + 1);
    out.push(Mat::identity(gens.first().map_or(1, Mat::n)));
    for g in gens {
        out.push(g.clone());
        out.push(g.inverse(f).expect("group elements are invertible"));
    }
    out.sort();
    out.dedup();
    out
}

/// All elements of `G(F_q)`, refusing when the predicted order exceeds `cap`.
pub fn materialize(spec: &GroupSpec, f: &Field, cap: usize) -> Result<Vec<Mat>, GroupError> {
    let predicted = group_order(spec, f.q() as u64)?;
    if predicted > big(cap as u64) {
        return Err(GroupError::GroupTooLarge { predicted, cap });
    }
    let gens = symmetrize(&standard_generators(spec, f)?, f);
    Ok(cayley::closure(&gens, f, cap)?)
}

/// Order of the Weyl group.
pub fn weyl_order(spec: &GroupSpec) -> BigUint {
    let r = spec.rank as u64;
    let fact = |k: u64| -> BigUint { (1..=k).map(big).product() };
    match spec.family {
        Family::Sl => fact(r + 1),
        Family::SoEven => (BigUint::one() << (r.saturating_sub(1))) * fact(r),
        Family::SoOdd | Family::Sp => (BigUint::one() << r) * fact(r),
    }
}

/// `⌈(q−1)^{dim−r} / (r!·2^r)⌉`.
pub fn torus_conjugate_count_bound(spec: &GroupSpec, q: u64) -> Result<BigUint, GroupError> {
    require_odd_q(q)?;
    let r = spec.rank as u64;
    let num = num_traits::pow(big(q - 1), (spec.dim - spec.rank) as usize);
    let den: BigUint = (1..=r).map(big).product::<BigUint>() << r;
    Ok(num.div_ceil(&den))
}

/// Exact number of conjugates of the diagonal torus in a materialized SL group.
pub fn split_torus_conjugates(spec: &GroupSpec, f: &Field, universe: &[Mat]) -> Result<(BigUint, BigUint), GroupError> {
    if spec.family != Family::Sl {
        return Err(GroupError::FamilyNotSupported(spec.family.name()));
    }
    let reg = regular_diagonal(spec.size, f)
        .ok_or_else(|| GroupError::BadEta("field too small for a regular diagonal element".into()))?;
    let is_diag = |m: &Mat| (0..m.n()).all(|i| (0..m.n()).all(|j| i == j || m.get(i, j) == 0));
    let normalizer = universe
        .iter()
        .filter(|g| {
            let gi = g.inverse(f).expect("invertible");
            is_diag(&reg.conjugate_by(g, &gi, f))
        })
        .count();
    let order = big(universe.len() as u64);
    Ok((order.clone() / big(normalizer as u64), big(normalizer as u64)))
}

/// A diagonal determinant-one matrix with distinct entries, when one exists.
fn regular_diagonal(n: usize, f: &Field) -> Option<Mat> {
    let g = f.primitive_element();
    let mut entries: Vec<u32> = (1..n as u64).map(|k| f.pow(g, k)).collect();
    let prod = entries.iter().fold(1, |a, &b| f.mul(a, b));
    entries.push(f.inv(prod).ok()?);
    let mut sorted = entries.clone();
    sorted.sort();
    sorted.dedup();
    (sorted.len() == n).then(|| Mat::diag(&entries))
}

/// Which theorem's hypotheses to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Main,
    Torus,
    EscapePoint,
}

impl Theorem {
    pub fn parse(s: &str) -> Option<Theorem> {
        match s {
            "main" => Some(Theorem::Main),
            "torus" => Some(Theorem::Torus),
            "escape_point" | "escape-point" => Some(Theorem::EscapePoint),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub holds: bool,
    pub threshold: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn to_json(&self) -> Value {
        obj([
            ("passed", Value::Bool(self.passed())),
            (
                "checks",
                Value::Array(
                    self.checks
                        .iter()
                        .map(|c| {
                            obj([
                                ("name", Value::String(c.name.into())),
                                ("holds", Value::Bool(c.holds)),
                                ("threshold", Value::String(c.threshold.clone())),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

/// Checks the characteristic and field-size hypotheses of a theorem.
pub fn hypotheses_ok(spec: &GroupSpec, q: u64, theorem: Theorem) -> HypothesisReport {
    let p = crate::gf::prime_power(q).map_or(0, |(p, _)| p);
    let r = spec.rank as u64;
    let mut checks = Vec::new();
    let large_q = |checks: &mut Vec<HypothesisCheck>| {
        let threshold = num_traits::pow(big(2 * r), 6 * r as usize);
        checks.push(HypothesisCheck {
            name: "q_at_least_exp_6r_log_2r",
            holds: big(q) >= threshold,
            threshold: threshold.to_string(),
        });
    };
    match theorem {
        Theorem::Main | Theorem::Torus => {
            checks.push(HypothesisCheck {
                name: "char_exceeds_N",
                holds: p > spec.size as u64,
                threshold: spec.size.to_string(),
            });
            if theorem == Theorem::Torus {
                checks.push(HypothesisCheck {
                    name: "rank_at_least_2",
                    holds: r >= 2,
                    threshold: "2".into(),
                });
            }
            large_q(&mut checks);
        }
        Theorem::EscapePoint => {
            checks.push(HypothesisCheck {
                name: "char_exceeds_2",
                holds: p > 2,
                threshold: "2".into(),
            });
            let t = 20 * r * r * r;
            checks.push(HypothesisCheck {
                name: "q_at_least_20r3",
                holds: q >= t,
                threshold: t.to_string(),
            });
        }
    }
    HypothesisReport { checks }
}

/// A torus given by the canonical maximal torus, optionally cut by `Σ ηᵢaᵢ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSpec {
    pub spec: GroupSpec,
    pub eta: Vec<i64>,
}

impl TorusSpec {
    pub fn maximal(spec: &GroupSpec) -> Self {
        TorusSpec {
            spec: spec.clone(),
            eta: Vec::new(),
        }
    }

    pub fn canonical(spec: &GroupSpec, eta: Vec<i64>) -> Result<Self, GroupError> {
        let n = spec.torus_coords();
        if eta.len() != n {
            return Err(GroupError::BadEta(format!("expected {n} entries, got {}", eta.len())));
        }
        if eta[n - 1] == 0 {
            return Err(GroupError::BadEta("last entry must be nonzero".into()));
        }
        Ok(TorusSpec {
            spec: spec.clone(),
            eta,
        })
    }

    pub fn is_maximal(&self) -> bool {
        self.eta.is_empty()
    }

    /// Expected dimension of the torus Lie algebra.
    pub fn dim(&self) -> usize {
        self.spec.rank as usize - usize::from(!self.is_maximal())
    }
}

/// Torus Lie algebra element with coordinates `a`.
pub fn torus_lie_element(spec: &GroupSpec, a: &[u32], f: &Field) -> Mat {
    let n = spec.size;
    let mut m = Mat::zero(n);
    match spec.family {
        Family::Sl => {
            for (i, &x) in a.iter().enumerate() {
                m.set(i, i, x);
            }
        }
        Family::SoEven | Family::SoOdd => {
            for (i, &x) in a.iter().enumerate() {
                m.set(2 * i, 2 * i + 1, x);
                m.set(2 * i + 1, 2 * i, f.neg(x));
            }
        }
        Family::Sp => {
            let h = n / 2;
            for (i, &x) in a.iter().enumerate() {
                m.set(i, i, x);
                m.set(h + i, h + i, f.neg(x));
            }
        }
    }
    m
}

/// Coordinate vectors spanning the torus Lie algebra.
pub fn torus_coordinate_basis(t: &TorusSpec, f: &Field) -> Result<Vec<Vec<u32>>, GroupError> {
    let spec = &t.spec;
    let k = spec.torus_coords();
    let mut rows = Vec::new();
    if spec.family == Family::Sl {
        rows.push(vec![1u32; k]);
    }
    if !t.is_maximal() {
        rows.push(t.eta.iter().map(|&e| f.from_int(e)).collect());
    }
    let basis = matrix::null_space(&rows, k, f);
    if basis.len() != t.dim() {
        return Err(GroupError::BadEta(format!(
            "character {:?} degenerates modulo {}",
            t.eta,
            f.p()
        )));
    }
    Ok(basis)
}

/// Basis of the torus Lie algebra as matrices.
pub fn canonical_torus_lie_basis(t: &TorusSpec, f: &Field) -> Result<Vec<Mat>, GroupError> {
    Ok(torus_coordinate_basis(t, f)?
        .iter()
        .map(|a| torus_lie_element(&t.spec, a, f))
        .collect())
}

/// The `F_q`-points of the canonical maximal torus.
pub fn maximal_torus_points(spec: &GroupSpec, f: &Field, cap: usize) -> Result<Vec<Mat>, GroupError> {
    let q = f.q() as usize;
    let r = spec.rank as usize;
    let units: Vec<u32> = (1..f.q()).collect();
    let rotations: Vec<(u32, u32)> = (0..f.q())
        .flat_map(|c| (0..f.q()).map(move |s| (c, s)))
        .filter(|&(c, s)| f.add(f.mul(c, c), f.mul(s, s)) == 1)
        .collect();
    let per_coord = if spec.family.is_orthogonal() {
        rotations.len()
    } else {
        q - 1
    };
    let free = r;
    let predicted = num_traits::pow(big(per_coord as u64), free);
    if predicted > big(cap as u64) {
        return Err(GroupError::GroupTooLarge { predicted, cap });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; free];
    loop {
        let n = spec.size;
        let m = match spec.family {
            Family::Sl => {
                let xs: Vec<u32> = idx.iter().map(|&i| units[i]).collect();
                let prod = xs.iter().fold(1, |a, &b| f.mul(a, b));
                let mut d = xs;
                d.push(f.inv(prod).expect("unit"));
                Mat::diag(&d)
            }
            Family::Sp => {
                let h = n / 2;
                let mut d = vec![0u32; n];
                for (i, &k) in idx.iter().enumerate() {
                    d[i] = units[k];
                    d[h + i] = f.inv(units[k]).expect("unit");
                }
                Mat::diag(&d)
            }
            Family::SoEven | Family::SoOdd => {
                let mut m = Mat::identity(n);
                for (i, &k) in idx.iter().enumerate() {
                    let (c, s) = rotations[k];
                    m.set(2 * i, 2 * i, c);
                    m.set(2 * i, 2 * i + 1, s);
                    m.set(2 * i + 1, 2 * i, f.neg(s));
                    m.set(2 * i + 1, 2 * i + 1, c);
                }
                m
            }
        };
        out.push(m);
        let mut pos = 0;
        loop {
            if pos == free {
                out.sort();
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < per_coord {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Points of the maximal torus: `(q−1)^r` in the split case, and the rotation
/// count `q − χ(−1)` per block for the orthogonal families.
pub fn torus_point_counts(spec: &GroupSpec, q: u64) -> Result<(BigUint, BigUint), GroupError> {
    require_odd_q(q)?;
    let f = Field::of_order(q)?;
    let split = num_traits::pow(big(q - 1), spec.rank as usize);
    let actual = if spec.family.is_orthogonal() {
        let chi = if f.is_square(f.neg(1))? { 1 } else { -1i64 };
        num_traits::pow(big((q as i64 - chi) as u64), spec.rank as usize)
    } else {
        split.clone()
    };
    Ok((split, actual))
}

/// Points of the canonical torus cut out by the character `Π xᵢ^{ηᵢ} = 1`.
pub fn torus_points(t: &TorusSpec, f: &Field, cap: usize) -> Result<Vec<Mat>, GroupError> {
    let all = maximal_torus_points(&t.spec, f, cap)?;
    if t.is_maximal() {
        return Ok(all);
    }
    if t.spec.family.is_orthogonal() {
        return Err(GroupError::FamilyNotSupported(t.spec.family.name()));
    }
    Ok(all
        .into_iter()
        .filter(|m| {
            let val = t.eta.iter().enumerate().fold(1u32, |acc, (i, &e)| {
                let x = m.get(i, i);
                let p = if e >= 0 {
                    f.pow(x, e as u64)
                } else {
                    f.pow(f.inv(x).expect("unit"), e.unsigned_abs())
                };
                f.mul(acc, p)
            });
            val == 1
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn table_rows() {
        let sp4 = GroupSpec::new(Family::Sp, 2).unwrap();
        assert_eq!((sp4.rank, sp4.size, sp4.dim, sp4.ell), (2, 4, 10, 5));
        assert_eq!(sp4.deg_bound.exact_int().unwrap(), BigUint::from(256u32));
        let sl3 = GroupSpec::new(Family::Sl, 3).unwrap();
        assert_eq!((sl3.rank, sl3.size, sl3.dim, sl3.ell), (2, 3, 8, 4));
        assert_eq!(sl3.deg_bound.exact_int().unwrap(), BigUint::from(3u32));
        assert!(matches!(
            GroupSpec::new(Family::SoEven, 3),
            Err(GroupError::InadmissibleFamilyParameter { .. })
        ));
        assert!(GroupSpec::new(Family::Sp, 1).is_err());
        for r in 1..12 {
            for fam in Family::ALL {
                if let Ok(s) = GroupSpec::of_rank(fam, r) {
                    assert_eq!(s.rank, r);
                    assert_eq!(s.dim, s.rank * s.ell);
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let f = fp(5);
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        assert!(is_member(&Mat::from_ints(2, &[2, 0, 0, 3], &f).unwrap(), &sl2, &f).unwrap());
        assert!(!is_member(&Mat::from_ints(2, &[2, 0, 0, 2], &f).unwrap(), &sl2, &f).unwrap());
        let sp4 = GroupSpec::new(Family::Sp, 2).unwrap();
        assert!(is_member(&Mat::identity(4), &sp4, &f).unwrap());
        assert!(matches!(
            is_member(&Mat::identity(3), &sp4, &f),
            Err(GroupError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn order_examples() {
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        assert_eq!(group_order(&sl2, 5).unwrap(), BigUint::from(120u32));
        let sl3 = GroupSpec::new(Family::Sl, 3).unwrap();
        assert_eq!(group_order(&sl3, 5).unwrap(), BigUint::from(372_000u32));
        let sp4 = GroupSpec::new(Family::Sp, 2).unwrap();
        assert_eq!(group_order(&sp4, 3).unwrap(), BigUint::from(51_840u32));
        assert_eq!(group_order(&sp4, 4), Err(GroupError::BadCharacteristic(2)));
    }

    #[test]
    fn sl2_order_by_brute_force() {
        for p in [3u64, 5, 7] {
            let f = fp(p);
            let q = p as u32;
            let mut count = 0u64;
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        for d in 0..q {
                            if f.sub(f.mul(a, d), f.mul(b, c)) == 1 {
                                count += 1;
                            }
                        }
                    }
                }
            }
            let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
            assert_eq!(group_order(&sl2, p).unwrap(), BigUint::from(count));
        }
    }

    #[test]
    fn toy_orders_by_closure() {
        let f = fp(5);
        let so3 = GroupSpec::toy(Family::SoOdd, 1);
        let all = materialize(&so3, &f, 10_000).unwrap();
        assert_eq!(BigUint::from(all.len()), group_order(&so3, 5).unwrap());
        let sp2 = GroupSpec::toy(Family::Sp, 1);
        let all = materialize(&sp2, &f, 10_000).unwrap();
        assert_eq!(all.len(), 120);
    }

    #[test]
    fn lie_counts_by_enumeration() {
        let f = fp(3);
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        let mut count = 0;
        for code in 0..81u32 {
            let e: Vec<u32> = (0..4).map(|i| (code / 3u32.pow(i)) % 3).collect();
            let m = Mat::from_codes(2, e).unwrap();
            if is_lie_member(&m, &sl2, &f).unwrap() {
                count += 1;
            }
        }
        assert_eq!(BigUint::from(count as u32), lie_algebra_count(&sl2, 3).unwrap());
        let sp4 = GroupSpec::new(Family::Sp, 2).unwrap();
        assert_eq!(lie_basis(&sp4, &f).len(), 10);
        let so7 = GroupSpec::new(Family::SoOdd, 3).unwrap();
        assert_eq!(lie_basis(&so7, &fp(5)).len(), 21);
        assert_eq!(
            lie_algebra_count(&so7, 5).unwrap(),
            num_traits::pow(BigUint::from(5u32), 21)
        );
        let so3 = GroupSpec::toy(Family::SoOdd, 1);
        let mut count = 0;
        for code in 0..3u32.pow(9) {
            let e: Vec<u32> = (0..9).map(|i| (code / 3u32.pow(i)) % 3).collect();
            if is_lie_member(&Mat::from_codes(3, e).unwrap(), &so3, &f).unwrap() {
                count += 1;
            }
        }
        assert_eq!(count, 27);
    }

    #[test]
    fn lie_bases_are_in_algebra_and_independent() {
        for (fam, n) in [
            (Family::Sl, 3),
            (Family::Sp, 2),
            (Family::SoOdd, 3),
            (Family::SoEven, 4),
        ] {
            let spec = GroupSpec::new(fam, n).unwrap();
            let f = fp(7);
            let b = lie_basis(&spec, &f);
            assert_eq!(b.len(), spec.dim as usize);
            for m in &b {
                assert!(is_lie_member(m, &spec, &f).unwrap());
            }
            let rows: Vec<Vec<u32>> = b.iter().map(|m| m.codes().to_vec()).collect();
            assert_eq!(matrix::rank(&rows, &f), spec.dim as usize);
        }
    }

    #[test]
    fn cayley_examples() {
        let f = fp(5);
        let so3 = GroupSpec::toy(Family::SoOdd, 1);
        assert!(cayley_map(&Mat::zero(3), &so3, &f).unwrap().is_identity());
        let mut x = Mat::zero(3);
        x.set(0, 1, 1);
        x.set(1, 0, 4);
        let m = cayley_map(&x, &so3, &f).unwrap();
        assert!(m.transpose().mul(&m, &f).is_identity());
        assert_eq!(m.det(&f), 1);
        assert_eq!(cayley_map(&m, &so3, &f).unwrap(), x);
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        assert_eq!(
            cayley_map(&Mat::zero(2), &sl2, &f),
            Err(GroupError::FamilyNotSupported("SL"))
        );
        let minus_id = Mat::identity(3).neg(&f);
        assert_eq!(cayley_map(&minus_id, &so3, &f), Err(GroupError::SingularShift));
    }

    #[test]
    fn cayley_is_an_involution_into_the_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (fam, n, p) in [(Family::Sp, 2, 5), (Family::SoOdd, 3, 7), (Family::SoEven, 4, 5)] {
            let spec = GroupSpec::new(fam, n).unwrap();
            let f = fp(p);
            let mut done = 0;
            while done < 1000 {
                let x = random_lie_element(&spec, &f, &mut rng);
                let Ok(g) = cayley_map(&x, &spec, &f) else { continue };
                assert!(is_member(&g, &spec, &f).unwrap());
                assert_eq!(cayley_map(&g, &spec, &f).unwrap(), x);
                done += 1;
            }
        }
    }

    /// `|X(F_q)| = q^dim − |(g ∩ Z)(F_q)|` equals the number of group points off `Z`.
    #[test]
    fn cayley_domain_count_so3() {
        let f = fp(5);
        let so3 = GroupSpec::toy(Family::SoOdd, 1);
        let id = Mat::identity(3);
        let lie: Vec<Mat> = (0..125u32)
            .map(|c| {
                let (a, b, d) = (c % 5, (c / 5) % 5, c / 25);
                Mat::from_codes(3, vec![0, a, b, f.neg(a), 0, d, f.neg(b), f.neg(d), 0]).unwrap()
            })
            .collect();
        let in_z = lie.iter().filter(|x| id.add(x, &f).det(&f) == 0).count();
        let group = materialize(&so3, &f, 10_000).unwrap();
        let off_z = group.iter().filter(|g| id.add(g, &f).det(&f) != 0).count();
        assert_eq!(125 - in_z, off_z);
    }

    #[test]
    fn closure_under_products_and_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [5u64, 7] {
            let f = fp(p);
            for (fam, n) in [
                (Family::Sl, 3),
                (Family::Sp, 2),
                (Family::SoOdd, 3),
                (Family::SoEven, 4),
            ] {
                let spec = GroupSpec::new(fam, n).unwrap();
                for _ in 0..1000 {
                    let a = random_element(&spec, &f, &mut rng);
                    let b = random_element(&spec, &f, &mut rng);
                    assert!(is_member(&a.mul(&b, &f), &spec, &f).unwrap());
                    assert!(is_member(&a.inverse(&f).unwrap(), &spec, &f).unwrap());
                }
            }
        }
    }

    #[test]
    fn standard_generators_are_members() {
        for (fam, n, p) in [(Family::Sl, 3, 5), (Family::Sp, 2, 3), (Family::SoOdd, 3, 5)] {
            let spec = GroupSpec::new(fam, n).unwrap();
            let f = fp(p);
            for g in standard_generators(&spec, &f).unwrap() {
                assert!(is_member(&g, &spec, &f).unwrap());
            }
        }
        let f9 = Field::of_order(9).unwrap();
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        let all = materialize(&sl2, &f9, 10_000).unwrap();
        assert_eq!(all.len(), 720);
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(
            weyl_order(&GroupSpec::new(Family::Sl, 4).unwrap()),
            BigUint::from(24u32)
        );
        assert_eq!(
            weyl_order(&GroupSpec::new(Family::SoEven, 4).unwrap()),
            BigUint::from(192u32)
        );
        assert_eq!(weyl_order(&GroupSpec::new(Family::Sp, 2).unwrap()), BigUint::from(8u32));
    }

    #[test]
    fn weyl_sanity_ratio_for_split_sl() {
        for (n, q) in [(2u32, 5u64), (2, 7), (3, 5), (4, 3)] {
            let spec = GroupSpec::new(Family::Sl, n).unwrap();
            let denom = num_traits::pow(BigUint::from(q - 1), spec.rank as usize)
                * num_traits::pow(BigUint::from(q), spec.positive_roots() as usize);
            let order = group_order(&spec, q).unwrap();
            assert!((&order % &denom).is_zero());
        }
    }

    #[test]
    fn torus_conjugate_bounds() {
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        assert_eq!(torus_conjugate_count_bound(&sl2, 7).unwrap(), BigUint::from(18u32));
        assert_eq!(torus_conjugate_count_bound(&sl2, 5).unwrap(), BigUint::from(8u32));
        let sp4 = GroupSpec::new(Family::Sp, 2).unwrap();
        assert_eq!(torus_conjugate_count_bound(&sp4, 3).unwrap(), BigUint::from(32u32));
        let f = fp(7);
        let all = materialize(&sl2, &f, 10_000).unwrap();
        let (count, normalizer) = split_torus_conjugates(&sl2, &f, &all).unwrap();
        assert_eq!(count, BigUint::from(28u32));
        assert_eq!(normalizer, BigUint::from(12u32));
    }

    #[test]
    fn hypothesis_examples() {
        let sp4 = GroupSpec::new(Family::Sp, 2).unwrap();
        let rep = hypotheses_ok(&sp4, 5, Theorem::Main);
        assert!(rep.checks[0].holds);
        assert!(!rep.passed());
        assert_eq!(rep.checks[1].threshold, "16777216");
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        assert!(hypotheses_ok(&sl2, 101, Theorem::EscapePoint).passed());
        let sl3 = GroupSpec::new(Family::Sl, 3).unwrap();
        let rep = hypotheses_ok(&sl3, 3, Theorem::Main);
        assert!(!rep.checks[0].holds);
    }

    #[test]
    fn torus_basis_examples() {
        let f = fp(7);
        let sl3 = GroupSpec::new(Family::Sl, 3).unwrap();
        let b = canonical_torus_lie_basis(&TorusSpec::maximal(&sl3), &f).unwrap();
        assert_eq!(b.len(), 2);
        for m in &b {
            assert_eq!(m.trace(&f), 0);
        }
        let sp4 = GroupSpec::new(Family::Sp, 2).unwrap();
        let t = TorusSpec::canonical(&sp4, vec![0, 1]).unwrap();
        let b = canonical_torus_lie_basis(&t, &f).unwrap();
        assert_eq!(b, vec![Mat::diag(&[1, 0, 6, 0])]);
        assert!(matches!(
            TorusSpec::canonical(&sp4, vec![1, 0]),
            Err(GroupError::BadEta(_))
        ));
    }

    #[test]
    fn torus_points_and_counts() {
        let f = fp(5);
        let sl2 = GroupSpec::new(Family::Sl, 2).unwrap();
        assert_eq!(maximal_torus_points(&sl2, &f, 1000).unwrap().len(), 4);
        let so3 = GroupSpec::toy(Family::SoOdd, 1);
        let pts = maximal_torus_points(&so3, &f, 1000).unwrap();
        assert_eq!(pts.len(), 4);
        for m in &pts {
            assert!(is_member(m, &so3, &f).unwrap());
        }
        let (split, actual) = torus_point_counts(&so3, 7).unwrap();
        assert_eq!((split, actual), (BigUint::from(6u32), BigUint::from(8u32)));
        let sl3 = GroupSpec::new(Family::Sl, 3).unwrap();
        let t = TorusSpec::canonical(&sl3, vec![1, -1, 1]).unwrap();
        let pts = torus_points(&t, &f, 1000).unwrap();
        assert!(pts.iter().all(|m| f.mul(m.get(0, 0), m.get(2, 2)) == m.get(1, 1)));
    }

    #[test]
    fn parse_group_strings() {
        let (spec, f) = parse_group("Sp:2:7").unwrap();
        assert_eq!((spec.family, spec.size, f.q()), (Family::Sp, 4, 7));
        let (_, f) = parse_group("SL:2:9:1,0,1").unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert!(parse_group("SO:3:5").is_err());
    }
}
