//! Multivariate polynomials over finite fields, variety records, exhaustive
//! point counts and degree budgets.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

use crate::constants::LogScaled;
use crate::gf::Field;
use crate::report::{self, obj};

/// Default limit on `q^ambient` for exhaustive scans.
pub const DEFAULT_SCAN_CAP: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error("point has {found} coordinates, polynomial has {expected} variables")]
    ArityMismatch { expected: usize, found: usize },
    #[error("ambient dimensions differ: {0} and {1}")]
    AmbientMismatch(usize, usize),
    #[error("q^{ambient} exceeds the scan cap {cap}")]
    AmbientTooLarge { ambient: usize, cap: u64 },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("inconsistent variety: {0}")]
    Inconsistent(String),
    #[error("empty list of varieties")]
    Empty,
}

/// Polynomial as sorted `(exponents, coefficient)` terms with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: Vec<(Vec<u32>, u32)>,
}

impl Poly {
    /// Merges repeated monomials and drops zero coefficients.
    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, u32)>, f: &Field) -> Result<Self, VarietyError> {
        let mut terms = terms;
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != nvars) {
            return Err(VarietyError::ArityMismatch {
                expected: nvars,
                found: e.len(),
            });
        }
        terms.sort();
        let mut merged: Vec<(Vec<u32>, u32)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = f.add(*lc, c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        Ok(Poly { nvars, terms: merged })
    }

    /// Parses `c*x1^a*x2^b` terms joined by `+` and `-`.
    pub fn parse(s: &str, nvars: usize, f: &Field) -> Result<Self, VarietyError> {
        let err = |m: &str| VarietyError::Parse(format!("{m} in {s:?}"));
        let cleaned: String = s.replace('−', "-").chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(err("empty input"));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for ch in cleaned.chars() {
            if ch == '+' || ch == '-' {
                if !cur.is_empty() {
                    pieces.push((negative, std::mem::take(&mut cur)));
                } else if !pieces.is_empty() || negative {
                    return Err(err("dangling sign"));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err("trailing sign"));
        }
        pieces.push((negative, cur));
        let mut terms = Vec::new();
        for (neg, body) in pieces {
            let mut coeff: i64 = if neg { -1 } else { 1 };
            let mut exps = vec![0u32; nvars];
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err("bad variable index"))?;
                    if idx == 0 || idx > nvars {
                        return Err(err("variable index out of range"));
                    }
                    exps[idx - 1] += pow;
                } else {
                    let c: i64 = factor.parse().map_err(|_| err("bad coefficient"))?;
                    coeff = coeff.checked_mul(c).ok_or_else(|| err("coefficient overflow"))?;
                }
            }
            terms.push((exps, f.from_int(coeff)));
        }
        Self::from_terms(nvars, terms, f)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, point: &[u32], f: &Field) -> Result<u32, VarietyError> {
        if point.len() != self.nvars {
            return Err(VarietyError::ArityMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(self.eval_unchecked(point, f))
    }

    fn eval_unchecked(&self, point: &[u32], f: &Field) -> u32 {
        self.terms.iter().fold(0, |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(point)
                .filter(|(&a, _)| a > 0)
                .fold(*c, |m, (&a, &x)| f.mul(m, f.pow(x, a as u64)));
            f.add(acc, mono)
        })
    }

    pub fn format(&self, f: &Field) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push('+');
            }
            out.push_str(&f.format(*c));
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(out, "*x{}", i + 1).unwrap(),
                    _ => write!(out, "*x{}^{}", i + 1, a).unwrap(),
                }
            }
        }
        out
    }
}

/// Zero set of a polynomial list, with caller-declared dimension and degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    pub ambient: usize,
    pub polys: Vec<Poly>,
    pub declared_dim: usize,
    pub declared_deg: u64,
}

impl VarietySpec {
    pub fn new(ambient: usize, polys: Vec<Poly>, declared_dim: usize, declared_deg: u64) -> Result<Self, VarietyError> {
        if let Some(p) = polys.iter().find(|p| p.nvars != ambient) {
            return Err(VarietyError::AmbientMismatch(ambient, p.nvars));
        }
        if declared_dim > ambient {
            return Err(VarietyError::Inconsistent(format!(
                "dimension {declared_dim} exceeds ambient {ambient}"
            )));
        }
        if declared_deg == 0 {
            return Err(VarietyError::Inconsistent("degree must be at least 1".into()));
        }
        let budget = polynomial_budget(&polys);
        if BigUint::from(declared_deg) > budget {
            return Err(VarietyError::Inconsistent(format!(
                "degree {declared_deg} exceeds the product of polynomial degrees {budget}"
            )));
        }
        Ok(VarietySpec {
            ambient,
            polys,
            declared_dim,
            declared_deg,
        })
    }

    /// Reads a header `ambient=m dim=d deg=D` followed by one polynomial per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str, f: &Field) -> Result<Self, VarietyError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| VarietyError::Parse("missing header".into()))?;
        let (mut ambient, mut dim, mut deg) = (None, None, None);
        for item in header.split_whitespace() {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| VarietyError::Parse(format!("bad header item {item:?}")))?;
            let v: u64 = v
                .parse()
                .map_err(|_| VarietyError::Parse(format!("bad header value {item:?}")))?;
            match k {
                "ambient" => ambient = Some(v as usize),
                "dim" => dim = Some(v as usize),
                "deg" => deg = Some(v),
                _ => return Err(VarietyError::Parse(format!("unknown header key {k:?}"))),
            }
        }
        let missing = |k: &str| VarietyError::Parse(format!("header lacks {k}"));
        let ambient = ambient.ok_or_else(|| missing("ambient"))?;
        let dim = dim.ok_or_else(|| missing("dim"))?;
        let deg = deg.ok_or_else(|| missing("deg"))?;
        let polys = lines
            .map(|l| Poly::parse(l, ambient, f))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ambient, polys, dim, deg)
    }

    /// `D·q^d`.
    pub fn point_bound(&self, q: u64) -> BigUint {
        BigUint::from(self.declared_deg) * BigUint::from(q).pow(self.declared_dim as u32)
    }

    pub fn contains(&self, point: &[u32], f: &Field) -> bool {
        self.polys.iter().all(|p| p.eval_unchecked(point, f) == 0)
    }
}

/// `∏ deg Pᵢ` over the non-constant polynomials; 1 for none.
pub fn polynomial_budget(polys: &[Poly]) -> BigUint {
    polys
        .iter()
        .map(Poly::degree)
        .filter(|&d| d > 0)
        .fold(BigUint::from(1u32), |acc, d| acc * d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCount {
    pub count: u64,
    pub bound: BigUint,
    pub holds: bool,
}

impl PointCount {
    pub fn to_json(&self) -> Value {
        obj([
            ("count", report::int(self.count)),
            ("bound", report::big(&self.bound)),
            ("holds", Value::Bool(self.holds)),
        ])
    }
}

/// Exact `|V(F_q)|` by scanning `F_q^m` in odometer order.
pub fn point_count(v: &VarietySpec, f: &Field, cap: u64) -> Result<PointCount, VarietyError> {
    let q = f.q() as u64;
    let total = (q as u128).checked_pow(v.ambient as u32).filter(|&t| t <= cap as u128);
    let total = total.ok_or(VarietyError::AmbientTooLarge {
        ambient: v.ambient,
        cap,
    })? as u64;
    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK);
    let count: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut point = vec![0u32; v.ambient];
            let mut rem = start;
            for x in point.iter_mut() {
                *x = (rem % q) as u32;
                rem /= q;
            }
            let mut hits = 0u64;
            for _ in start..end {
                hits += u64::from(v.contains(&point, f));
                for x in point.iter_mut() {
                    *x += 1;
                    if u64::from(*x) < q {
                        break;
                    }
                    *x = 0;
                }
            }
            hits
        })
        .sum();
    let bound = v.point_bound(q);
    Ok(PointCount {
        count,
        holds: BigUint::from(count) <= bound,
        bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BezoutOp {
    Union,
    Intersect,
    Product,
}

impl BezoutOp {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "union" => Some(BezoutOp::Union),
            "intersect" => Some(BezoutOp::Intersect),
            "product" => Some(BezoutOp::Product),
            _ => None,
        }
    }
}

/// Degree budget of a union, intersection or product of varieties.
pub fn bezout_degree(parts: &[VarietySpec], op: BezoutOp) -> Result<LogScaled, VarietyError> {
    let first = parts.first().ok_or(VarietyError::Empty)?;
    if op != BezoutOp::Product {
        if let Some(p) = parts.iter().find(|p| p.ambient != first.ambient) {
            return Err(VarietyError::AmbientMismatch(first.ambient, p.ambient));
        }
    }
    let degs = parts.iter().map(|p| LogScaled::from_u64(p.declared_deg));
    Ok(match op {
        BezoutOp::Union => degs.reduce(|a, b| a.add(&b)),
        BezoutOp::Intersect | BezoutOp::Product => degs.reduce(|a, b| a.mul(&b)),
    }
    .expect("nonempty"))
}

/// `D·deg(f)^{dim f(V)}`.
pub fn image_degree_bound(deg: u64, map_degree: u64, image_dim: u32) -> LogScaled {
    LogScaled::from_u64(deg).mul(&LogScaled::from_u64(map_degree).pow(image_dim))
}

/// `D^{d+1}`.
pub fn intersection_chain_budget(d: u32, deg: u64) -> LogScaled {
    LogScaled::from_u64(deg).pow(d + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn variety(ambient: usize, polys: &[&str], dim: usize, deg: u64, f: &Field) -> VarietySpec {
        let polys = polys.iter().map(|s| Poly::parse(s, ambient, f).unwrap()).collect();
        VarietySpec::new(ambient, polys, dim, deg).unwrap()
    }

    fn exact(l: &LogScaled) -> u64 {
        l.exact_int().unwrap().try_into().unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f5 = fp(5);
        let p = Poly::parse("x1*x2 - 1", 2, &f5).unwrap();
        assert_eq!(p.evaluate(&[2, 3], &f5).unwrap(), 0);
        let det = Poly::parse("x1*x4 - x2*x3 - 1", 4, &f5).unwrap();
        assert_eq!(det.evaluate(&[1, 0, 0, 1], &f5).unwrap(), 0);
        let f7 = fp(7);
        let c = Poly::parse("x1^2 + x2^2 - 1", 2, &f7).unwrap();
        assert_eq!(c.evaluate(&[1, 1], &f7).unwrap(), 1);
        assert!(matches!(
            c.evaluate(&[1], &f7),
            Err(VarietyError::ArityMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn parser_round_trips_and_merges() {
        let f = fp(7);
        let p = Poly::parse("3*x1^2*x2 - x2*x1^2 + 2 + x1 − 9", 2, &f).unwrap();
        assert_eq!(p.degree(), 3);
        let again = Poly::parse(&p.format(&f), 2, &f).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.terms().len(), 2);
        assert!(Poly::parse("x1 - x3", 2, &f).is_err());
        assert!(Poly::parse("x1 +", 2, &f).is_err());
        assert!(Poly::parse("x1 - x1", 2, &f).unwrap().is_zero());
    }

    #[test]
    fn point_count_examples() {
        let f5 = fp(5);
        let hyp = variety(2, &["x1*x2 - 1"], 1, 2, &f5);
        let c = point_count(&hyp, &f5, DEFAULT_SCAN_CAP).unwrap();
        assert_eq!((c.count, c.bound.clone(), c.holds), (4, 10u32.into(), true));
        let f7 = fp(7);
        let line = variety(2, &["x1"], 1, 1, &f7);
        let c = point_count(&line, &f7, DEFAULT_SCAN_CAP).unwrap();
        assert_eq!((c.count, c.bound.clone()), (7, 7u32.into()));
        let circle = variety(2, &["x1^2 + x2^2 - 1"], 1, 2, &f5);
        assert_eq!(point_count(&circle, &f5, DEFAULT_SCAN_CAP).unwrap().count, 4);
        let big = variety(4, &["x1"], 3, 1, &f7);
        assert!(matches!(
            point_count(&big, &f7, 1000),
            Err(VarietyError::AmbientTooLarge { .. })
        ));
    }

    #[test]
    fn sl2_point_count_by_scan() {
        let f = fp(5);
        let v = variety(4, &["x1*x4 - x2*x3 - 1"], 3, 2, &f);
        assert_eq!(point_count(&v, &f, DEFAULT_SCAN_CAP).unwrap().count, 120);
    }

    #[test]
    fn file_format() {
        let f = fp(5);
        let v = VarietySpec::parse("# hyperbola\nambient=2 dim=1 deg=2\nx1*x2 - 1\n", &f).unwrap();
        assert_eq!(v.polys.len(), 1);
        assert!(VarietySpec::parse("ambient=2 dim=3 deg=1\n", &f).is_err());
        assert!(VarietySpec::parse("ambient=2 dim=1 deg=3\nx1*x2 - 1\n", &f).is_err());
        assert!(VarietySpec::parse("dim=1 deg=1\nx1\n", &f).is_err());
    }

    #[test]
    fn bezout_examples() {
        let f = fp(5);
        let a = variety(2, &["x1*x2 - 1"], 1, 2, &f);
        let b = variety(2, &["x1^3 - x2"], 1, 3, &f);
        assert_eq!(
            exact(&bezout_degree(&[a.clone(), b.clone()], BezoutOp::Intersect).unwrap()),
            6
        );
        assert_eq!(
            exact(&bezout_degree(&[a.clone(), b.clone()], BezoutOp::Union).unwrap()),
            5
        );
        assert_eq!(exact(&bezout_degree(&[a.clone(), b], BezoutOp::Product).unwrap()), 6);
        let c = variety(3, &["x1"], 2, 1, &f);
        assert!(bezout_degree(&[a, c], BezoutOp::Union).is_err());
    }

    #[test]
    fn image_and_chain_budgets() {
        assert_eq!(exact(&image_degree_bound(3, 1, 7)), 3);
        assert_eq!(exact(&image_degree_bound(2, 2, 3)), 16);
        assert_eq!(exact(&image_degree_bound(5, 4, 0)), 5);
        assert_eq!(exact(&intersection_chain_budget(2, 3)), 27);
        assert_eq!(exact(&intersection_chain_budget(0, 7)), 7);
        assert_eq!(exact(&intersection_chain_budget(3, 1)), 1);
    }

    fn random_poly(rng: &mut ChaCha8Rng, m: usize, f: &Field) -> Poly {
        loop {
            let nterms = rng.gen_range(1..=4);
            let terms = (0..nterms)
                .map(|_| {
                    let e: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
                    (e, rng.gen_range(1..f.q()))
                })
                .collect();
            let p = Poly::from_terms(m, terms, f).unwrap();
            if p.degree() > 0 {
                return p;
            }
        }
    }

    /// Hypersurfaces and their intersections satisfy `|V| ≤ D·q^{m−1}`.
    #[test]
    fn random_point_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        for q in [3u64, 5, 7] {
            let f = fp(q);
            for m in 1..=3 {
                for _ in 0..8 {
                    let p = random_poly(&mut rng, m, &f);
                    let d = u64::from(p.degree());
                    let v = VarietySpec::new(m, vec![p.clone()], m - 1, d).unwrap();
                    let c1 = point_count(&v, &f, DEFAULT_SCAN_CAP).unwrap();
                    assert!(c1.holds);
                    let p2 = random_poly(&mut rng, m, &f);
                    let d2 = d * u64::from(p2.degree());
                    let w = VarietySpec::new(m, vec![p, p2], m - 1, d2).unwrap();
                    let c2 = point_count(&w, &f, DEFAULT_SCAN_CAP).unwrap();
                    assert!(c2.holds);
                    assert!(c2.count <= c1.count);
                    assert!(BigUint::from(c2.count) <= v.point_bound(q));
                    checked += 2;
                }
            }
        }
        assert!(checked >= 50);
    }

    #[test]
    fn scan_is_schedule_independent() {
        let f = fp(7);
        let v = variety(3, &["x1^2 + x2*x3 - 1"], 2, 2, &f);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| point_count(&v, &f, DEFAULT_SCAN_CAP).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
