//! Characteristic polynomials, discriminants, regular semisimplicity,
//! centralizers, conjugacy classes and the non-regular-semisimple subtorus
//! catalogue.

use rustc_hash::FxHashSet;
use serde_json::Value;
use thiserror::Error;

use crate::gf::Field;
use crate::groups::{Family, GroupSpec};
use crate::matrix::Mat;
use crate::report::{self, obj};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("group of order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("torus of {size} points exceeds the cap {cap}")]
    TorusTooLarge { size: usize, cap: usize },
    #[error("orbit-stabilizer failed: |Cl| = {class}, |C| = {centralizer}, |G| = {order}")]
    OrbitStabilizer {
        class: usize,
        centralizer: usize,
        order: usize,
    },
}

/// Univariate polynomials over a field, coefficients low degree first.
pub mod upoly {
    use crate::gf::Field;
    use crate::matrix::Mat;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn derivative(a: &[u32], f: &Field) -> Vec<u32> {
        let d: Vec<u32> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        trim(d)
    }

    pub fn mul(a: &[u32], b: &[u32], f: &Field) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(a: &[u32], b: &[u32], f: &Field) -> Vec<u32> {
        let db = degree(b).expect("nonzero divisor");
        let lead_inv = f.inv(b[db]).expect("nonzero lead");
        let mut r = trim(a.to_vec());
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = f.mul(r[dr], lead_inv);
            for (i, &bc) in b[..=db].iter().enumerate() {
                let k = dr - db + i;
                r[k] = f.sub(r[k], f.mul(c, bc));
            }
            r = trim(r);
        }
        r
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &[u32], b: &[u32], f: &Field) -> Vec<u32> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while degree(&y).is_some() {
            let r = rem(&x, &y, f);
            x = y;
            y = r;
        }
        match degree(&x) {
            None => Vec::new(),
            Some(d) => {
                let inv = f.inv(x[d]).expect("nonzero");
                x.iter().map(|&c| f.mul(c, inv)).collect()
            }
        }
    }

    /// Resultant via the Sylvester matrix, using the formal degrees `len − 1`.
    pub fn resultant(a: &[u32], b: &[u32], f: &Field) -> u32 {
        let (m, k) = (a.len() - 1, b.len() - 1);
        let size = m + k;
        if size == 0 {
            return 1;
        }
        let mut s = Mat::zero(size);
        for row in 0..k {
            for (i, &c) in a.iter().rev().enumerate() {
                s.set(row, row + i, c);
            }
        }
        for row in 0..m {
            for (i, &c) in b.iter().rev().enumerate() {
                s.set(k + row, row + i, c);
            }
        }
        s.det(f)
    }

    /// Discriminant of a monic polynomial of degree `m ≥ 1`.
    pub fn discriminant(p: &[u32], f: &Field) -> u32 {
        let m = p.len() - 1;
        let mut d: Vec<u32> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        d.resize(m, 0);
        let res = resultant(p, &d, f);
        if (m * (m - 1) / 2) % 2 == 1 {
            f.neg(res)
        } else {
            res
        }
    }

    /// Whether some monic `g` of degree `1..=deg/2` has `g²` dividing `p`,
    /// by exhaustive trial.
    pub fn has_square_factor(p: &[u32], f: &Field) -> bool {
        let deg = degree(p).unwrap_or(0);
        let q = f.q() as u64;
        for d in 1..=deg / 2 {
            let count = q.pow(d as u32);
            for code in 0..count {
                let mut g: Vec<u32> = (0..d).map(|i| ((code / q.pow(i as u32)) % q) as u32).collect();
                g.push(1);
                let g2 = mul(&g, &g, f);
                if degree(&rem(p, &g2, f)).is_none() {
                    return true;
                }
            }
        }
        false
    }

    pub fn format(p: &[u32], f: &Field) -> String {
        p.iter().map(|&c| f.format(c)).collect::<Vec<_>>().join(",")
    }
}

/// Characteristic polynomial `det(t·Id − g)` and its discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyData {
    pub coeffs: Vec<u32>,
    pub disc: u32,
}

pub fn char_poly(g: &Mat, f: &Field) -> CharPolyData {
    let coeffs = g.char_poly(f);
    let disc = upoly::discriminant(&coeffs, f);
    CharPolyData { coeffs, disc }
}

pub fn is_regular_semisimple(g: &Mat, f: &Field) -> bool {
    char_poly(g, f).disc != 0
}

/// Regular-semisimplicity decided three ways: discriminant, `gcd(p, p′)`,
/// and exhaustive square-factor trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RsRoutes {
    pub by_discriminant: bool,
    pub by_gcd: bool,
    pub by_square_trial: bool,
}

impl RsRoutes {
    pub fn agree(&self) -> bool {
        self.by_discriminant == self.by_gcd && self.by_gcd == self.by_square_trial
    }
}

pub fn rs_routes(g: &Mat, f: &Field) -> RsRoutes {
    let cp = char_poly(g, f);
    let d = upoly::derivative(&cp.coeffs, f);
    let gcd = upoly::gcd(&cp.coeffs, &d, f);
    RsRoutes {
        by_discriminant: cp.disc != 0,
        by_gcd: upoly::degree(&gcd) == Some(0),
        by_square_trial: !upoly::has_square_factor(&cp.coeffs, f),
    }
}

/// JSON record for one element.
pub fn element_record(g: &Mat, f: &Field) -> Value {
    let cp = char_poly(g, f);
    obj([
        ("matrix", Value::String(g.format(f))),
        ("charpoly", Value::String(upoly::format(&cp.coeffs, f))),
        ("disc", Value::String(f.format(cp.disc))),
        ("regular_semisimple", Value::Bool(cp.disc != 0)),
    ])
}

/// `{x ∈ universe : gx = xg}`.
pub fn centralizer(g: &Mat, universe: &[Mat], f: &Field, cap: usize) -> Result<Vec<Mat>, ClassifyError> {
    if universe.len() > cap {
        return Err(ClassifyError::GroupTooLarge {
            order: universe.len(),
            cap,
        });
    }
    Ok(universe
        .iter()
        .filter(|x| g.mul(x, f) == x.mul(g, f))
        .cloned()
        .collect())
}

/// Orbit of `g` under conjugation by `gens`, found by breadth-first search.
pub fn conjugacy_class(g: &Mat, gens: &[Mat], f: &Field, cap: usize) -> Result<Vec<Mat>, ClassifyError> {
    let pairs: Vec<(Mat, Mat)> = gens
        .iter()
        .map(|a| (a.clone(), a.inverse(f).expect("invertible")))
        .collect();
    let mut seen: FxHashSet<Mat> = FxHashSet::default();
    seen.insert(g.clone());
    let mut frontier = vec![g.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for (a, ai) in &pairs {
                let y = x.conjugate_by(a, ai, f);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if seen.len() > cap {
            return Err(ClassifyError::GroupTooLarge { order: seen.len(), cap });
        }
        frontier = next;
    }
    let mut out: Vec<Mat> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Class and centralizer sizes, with `|Cl(g)|·|C(g)| = |G|` enforced.
pub fn orbit_stabilizer(
    g: &Mat,
    universe: &[Mat],
    gens: &[Mat],
    f: &Field,
    cap: usize,
) -> Result<(usize, usize), ClassifyError> {
    let class = conjugacy_class(g, gens, f, cap)?.len();
    let cent = centralizer(g, universe, f, cap)?.len();
    if class * cent != universe.len() {
        return Err(ClassifyError::OrbitStabilizer {
            class,
            centralizer: cent,
            order: universe.len(),
        });
    }
    Ok((class, cent))
}

/// Number of elements that are not regular semisimple.
pub fn count_nonrs(universe: &[Mat], f: &Field) -> usize {
    universe.iter().filter(|g| !is_regular_semisimple(g, f)).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationKind {
    Equal,
    ProductOne,
    SumOfSquaresOne,
    EqualsOne,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Equal => "equal",
            RelationKind::ProductOne => "product_one",
            RelationKind::SumOfSquaresOne => "sum_of_squares_one",
            RelationKind::EqualsOne => "equals_one",
        }
    }
}

/// Polynomial relation cutting out a subtorus; `j == i` for single-index kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubtorusRelation {
    pub kind: RelationKind,
    pub i: usize,
    pub j: usize,
}

impl SubtorusRelation {
    /// Evaluates the relation on torus coordinates `x`.
    pub fn holds(&self, x: &[u32], f: &Field) -> bool {
        let (a, b) = (x[self.i], x[self.j]);
        match self.kind {
            RelationKind::Equal => a == b,
            RelationKind::ProductOne => f.mul(a, b) == 1,
            RelationKind::SumOfSquaresOne => f.add(f.mul(a, a), f.mul(b, b)) == 1,
            RelationKind::EqualsOne => a == 1,
        }
    }

    pub fn to_json(&self) -> Value {
        obj([
            ("kind", Value::String(self.kind.name().into())),
            ("i", report::int(self.i as u64 + 1)),
            ("j", report::int(self.j as u64 + 1)),
        ])
    }
}

/// Relations whose union contains the non-regular-semisimple torus points.
///
/// Self-pairs (`i = j`) of the product relation are included: they are the
/// collisions `xᵢ = xᵢ⁻¹`.
pub fn nonrs_subtori(spec: &GroupSpec) -> Vec<SubtorusRelation> {
    let k = spec.torus_coords();
    let rel = |kind, i, j| SubtorusRelation { kind, i, j };
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            out.push(rel(RelationKind::Equal, i, j));
        }
    }
    match spec.family {
        Family::Sl => {}
        Family::Sp => {
            for i in 0..k {
                for j in i..k {
                    out.push(rel(RelationKind::ProductOne, i, j));
                }
            }
        }
        Family::SoEven | Family::SoOdd => {
            for i in 0..k {
                for j in i + 1..k {
                    out.push(rel(RelationKind::SumOfSquaresOne, i, j));
                }
                out.push(rel(RelationKind::ProductOne, i, i));
            }
            if spec.family == Family::SoOdd {
                for i in 0..k {
                    out.push(rel(RelationKind::EqualsOne, i, i));
                }
            }
        }
    }
    out
}

/// Catalogue as JSON; `inclusive_self_pairs` marks the `i = j` product relations.
pub fn catalogue_to_json(spec: &GroupSpec) -> Value {
    let rels = nonrs_subtori(spec);
    obj([
        ("group", Value::String(spec.label())),
        ("count", report::int(rels.len() as u64)),
        ("bound", report::int(u64::from(spec.rank) * (u64::from(spec.rank) + 1))),
        ("inclusive_self_pairs", Value::Bool(spec.family != Family::Sl)),
        (
            "relations",
            Value::Array(rels.iter().map(SubtorusRelation::to_json).collect()),
        ),
    ])
}

/// Catalogue coordinates of a torus point: the diagonal entries used by the relations.
pub fn torus_coordinates(spec: &GroupSpec, m: &Mat) -> Vec<u32> {
    match spec.family {
        Family::Sl => (0..spec.size).map(|i| m.get(i, i)).collect(),
        Family::Sp => (0..spec.rank as usize).map(|i| m.get(i, i)).collect(),
        Family::SoEven | Family::SoOdd => (0..spec.rank as usize).map(|i| m.get(2 * i, 2 * i)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonRsTorusCount {
    /// Points with vanishing discriminant.
    pub exact: usize,
    /// Points satisfying at least one catalogue relation.
    pub catalogue: usize,
    /// Whether every non-rs point satisfies a relation.
    pub covered: bool,
    pub relations: usize,
}

/// Counts non-regular-semisimple points of an enumerated torus, directly and
/// through the relation catalogue.
pub fn count_nonrs_in_torus(
    spec: &GroupSpec,
    f: &Field,
    torus: &[Mat],
    cap: usize,
) -> Result<NonRsTorusCount, ClassifyError> {
    if torus.len() > cap {
        return Err(ClassifyError::TorusTooLarge { size: torus.len(), cap });
    }
    let rels = nonrs_subtori(spec);
    let (mut exact, mut catalogue, mut covered) = (0, 0, true);
    for m in torus {
        let x = torus_coordinates(spec, m);
        let hit = rels.iter().any(|r| r.holds(&x, f));
        let nonrs = !is_regular_semisimple(m, f);
        exact += usize::from(nonrs);
        catalogue += usize::from(hit);
        covered &= hit || !nonrs;
    }
    Ok(NonRsTorusCount {
        exact,
        catalogue,
        covered,
        relations: rels.len(),
    })
}
