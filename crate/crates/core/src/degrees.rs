//! Degrees of the classical groups through counts of vertex-disjoint lattice
//! paths, and the conjugacy-class degree bound.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

use crate::constants::LogScaled;
use crate::groups::{Family, GroupSpec};
use crate::report::{self, obj};

pub const MAX_ENUMERATE_K: u32 = 12;
pub const MAX_DETERMINANT_K: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error("k = {k} is outside 2..={max} for the {method} method")]
    KTooLarge { k: u32, max: u32, method: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMethod {
    Enumerate,
    Determinant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCountResult {
    pub k: u32,
    pub exact: BigUint,
    /// `∏ binom(2(k−2i), k−2i)`, the count without the disjointness condition.
    pub product_bound: BigUint,
}

/// Start `(2i−k, 0)` and end `(0, k−2i)` of path `i`, for `i = 1..=⌊k/2⌋`.
fn endpoints(k: u32) -> Vec<((i32, i32), (i32, i32))> {
    let k = k as i32;
    (1..=k / 2).map(|i| ((2 * i - k, 0), (0, k - 2 * i))).collect()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Monotone unit-step paths between two lattice points.
fn monotone_paths(from: (i32, i32), to: (i32, i32)) -> BigUint {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    if dx < 0 || dy < 0 {
        return BigUint::zero();
    }
    binomial((dx + dy) as u64, dx as u64)
}

pub fn product_bound(k: u32) -> BigUint {
    endpoints(k)
        .iter()
        .map(|&(s, e)| monotone_paths(s, e))
        .fold(BigUint::one(), |a, b| a * b)
}

/// Grid of occupied lattice points in `[−k, 0] × [0, k]`.
#[derive(Clone)]
struct Occupied {
    side: i32,
    cells: Vec<bool>,
}

impl Occupied {
    fn new(k: u32) -> Self {
        let side = k as i32 + 1;
        Occupied {
            side,
            cells: vec![false; (side * side) as usize],
        }
    }

    fn index(&self, (x, y): (i32, i32)) -> usize {
        ((x + self.side - 1) * self.side + y) as usize
    }

    fn get(&self, p: (i32, i32)) -> bool {
        self.cells[self.index(p)]
    }

    fn set(&mut self, p: (i32, i32), v: bool) {
        let i = self.index(p);
        self.cells[i] = v;
    }
}

/// Paths avoiding `occ`, counted by dynamic programming over the grid.
fn count_avoiding(from: (i32, i32), to: (i32, i32), occ: &Occupied) -> u128 {
    let (w, h) = ((to.0 - from.0) as usize + 1, (to.1 - from.1) as usize + 1);
    let mut row = vec![0u128; h];
    for dx in 0..w {
        for dy in 0..h {
            let p = (from.0 + dx as i32, from.1 + dy as i32);
            row[dy] = if occ.get(p) {
                0
            } else if dx == 0 && dy == 0 {
                1
            } else {
                let below = if dy > 0 { row[dy - 1] } else { 0 };
                row[dy] + below
            };
        }
    }
    row[h - 1]
}

type Point = (i32, i32);

/// Depth-first placement of `paths[idx..]`, innermost first; the outermost
/// path is counted by dynamic programming.
fn place(paths: &[(Point, Point)], idx: usize, occ: &mut Occupied) -> u128 {
    if idx == 0 {
        let (s, e) = paths[0];
        return count_avoiding(s, e, occ);
    }
    let (s, e) = paths[idx];
    if occ.get(s) {
        return 0;
    }
    let mut total = 0;
    let mut trail = vec![s];
    occ.set(s, true);
    walk(paths, idx, e, &mut trail, occ, &mut total);
    occ.set(s, false);
    total
}

fn walk(
    paths: &[(Point, Point)],
    idx: usize,
    end: (i32, i32),
    trail: &mut Vec<(i32, i32)>,
    occ: &mut Occupied,
    total: &mut u128,
) {
    let cur = *trail.last().expect("nonempty trail");
    if cur == end {
        *total += place(paths, idx - 1, occ);
        return;
    }
    for next in [(cur.0 + 1, cur.1), (cur.0, cur.1 + 1)] {
        if next.0 > end.0 || next.1 > end.1 || occ.get(next) {
            continue;
        }
        occ.set(next, true);
        trail.push(next);
        walk(paths, idx, end, trail, occ, total);
        trail.pop();
        occ.set(next, false);
    }
}

/// Vertex-disjoint tuples by explicit enumeration.
fn enumerate_count(k: u32) -> BigUint {
    let paths = endpoints(k);
    let m = paths.len();
    if m == 1 {
        return BigUint::from(count_avoiding(paths[0].0, paths[0].1, &Occupied::new(k)));
    }
    let (s, e) = paths[m - 1];
    let mut firsts = Vec::new();
    collect_paths(s, e, &mut vec![s], &mut firsts);
    let total: u128 = firsts
        .par_iter()
        .map(|path| {
            let mut occ = Occupied::new(k);
            for &p in path {
                occ.set(p, true);
            }
            place(&paths, m - 2, &mut occ)
        })
        .sum();
    BigUint::from(total)
}

fn collect_paths(cur: (i32, i32), end: (i32, i32), trail: &mut Vec<(i32, i32)>, out: &mut Vec<Vec<(i32, i32)>>) {
    if cur == end {
        out.push(trail.clone());
        return;
    }
    for next in [(cur.0 + 1, cur.1), (cur.0, cur.1 + 1)] {
        if next.0 <= end.0 && next.1 <= end.1 {
            trail.push(next);
            collect_paths(next, end, trail, out);
            trail.pop();
        }
    }
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        if a[c][c].is_zero() {
            match (c + 1..n).find(|&r| !a[r][c].is_zero()) {
                Some(r) => {
                    a.swap(c, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in c + 1..n {
            for j in c + 1..n {
                a[i][j] = (&a[i][j] * &a[c][c] - &a[i][c] * &a[c][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Lindström–Gessel–Viennot determinant of start-to-end path counts.
fn determinant_count(k: u32) -> BigUint {
    let paths = endpoints(k);
    let m: Vec<Vec<BigInt>> = paths
        .iter()
        .map(|&(s, _)| paths.iter().map(|&(_, e)| BigInt::from(monotone_paths(s, e))).collect())
        .collect();
    let d = bareiss_det(m);
    assert!(!d.is_negative(), "path determinant is nonnegative");
    d.to_biguint().expect("nonnegative")
}

pub fn path_count(k: u32, method: PathMethod) -> Result<PathCountResult, DegreeError> {
    let (max, name) = match method {
        PathMethod::Enumerate => (MAX_ENUMERATE_K, "enumerate"),
        PathMethod::Determinant => (MAX_DETERMINANT_K, "determinant"),
    };
    if !(2..=max).contains(&k) {
        return Err(DegreeError::KTooLarge { k, max, method: name });
    }
    let exact = match method {
        PathMethod::Enumerate => enumerate_count(k),
        PathMethod::Determinant => determinant_count(k),
    };
    Ok(PathCountResult {
        k,
        exact,
        product_bound: product_bound(k),
    })
}

/// Exact degree: `n` for `SL_n`, `2^{N−1}P(N)` for `SO_N`, `P(N+1)` for `Sp_N`.
pub fn exact_group_degree(spec: &GroupSpec) -> Result<BigUint, DegreeError> {
    let n = spec.size as u32;
    Ok(match spec.family {
        Family::Sl => BigUint::from(n),
        Family::SoEven | Family::SoOdd => (BigUint::one() << (n - 1)) * path_count(n, PathMethod::Determinant)?.exact,
        Family::Sp => path_count(n + 1, PathMethod::Determinant)?.exact,
    })
}

/// Closed-form bound from the parameter table.
pub fn table_degree_bound(spec: &GroupSpec) -> LogScaled {
    spec.deg_bound.clone()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassDegreeBound {
    /// `(N−1)!·deg(G)`, with the exact degree where computable and the table bound otherwise.
    pub factorial_form: LogScaled,
    /// `2^{3r²}·r^{2r}`.
    pub closed_form: LogScaled,
}

impl ClassDegreeBound {
    pub fn to_json(&self) -> Value {
        obj([
            ("factorial_form", self.factorial_form.to_json()),
            ("closed_form", self.closed_form.to_json()),
        ])
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |a, i| a * i)
}

pub fn cl_degree_bound(spec: &GroupSpec) -> ClassDegreeBound {
    let deg = match exact_group_degree(spec) {
        Ok(d) => LogScaled::from_int(d),
        Err(_) => table_degree_bound(spec),
    };
    let fact = LogScaled::from_int(factorial(spec.size as u64 - 1));
    let r = spec.rank;
    let closed = LogScaled::from_int(BigUint::one() << (3 * r * r)).mul(&LogScaled::from_u64(r as u64).pow(2 * r));
    ClassDegreeBound {
        factorial_form: fact.mul(&deg),
        closed_form: closed,
    }
}

/// `{family, n, exact, table_bound}`.
pub fn degree_report(spec: &GroupSpec) -> Value {
    let exact = match exact_group_degree(spec) {
        Ok(d) => report::big(&d),
        Err(_) => Value::Null,
    };
    let bound = table_degree_bound(spec);
    obj([
        ("family", Value::String(spec.family.name().into())),
        ("n", report::int(spec.n)),
        ("exact", exact),
        (
            "table_bound",
            bound.exact_int().map_or_else(|| bound.to_json(), |b| report::big(&b)),
        ),
    ])
}
