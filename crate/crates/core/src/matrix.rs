//! Dense square matrices over a [`Field`], stored row-major as field codes.
//!
//! The row-major code vector is the canonical encoding: equality, hashing,
//! ordering and serialization all go through it.

use std::cmp::Ordering;

use thiserror::Error;

use crate::gf::{Field, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    n: usize,
    data: Vec<u32>,
}

impl PartialOrd for Mat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.data.cmp(&other.data))
    }
}

impl Mat {
    pub fn from_codes(n: usize, data: Vec<u32>) -> Result<Self, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::ShapeMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Mat { n, data })
    }

    pub fn from_ints(n: usize, entries: &[i64], f: &Field) -> Result<Self, MatrixError> {
        Self::from_codes(n, entries.iter().map(|&x| f.from_int(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Mat {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diag(entries: &[u32]) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n);
        for (i, &x) in entries.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn codes(&self) -> &[u32] {
        &self.data
    }
    pub fn into_codes(self) -> Vec<u32> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn mul(&self, other: &Mat, f: &Field) -> Mat {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut out = vec![0u32; n * n];
        if f.is_prime_field() {
            let p = f.p() as u64;
            for i in 0..n {
                let row = &self.data[i * n..(i + 1) * n];
                for j in 0..n {
                    let mut acc = 0u64;
                    for (k, &a) in row.iter().enumerate() {
                        acc += a as u64 * other.data[k * n + j] as u64;
                    }
                    out[i * n + j] = (acc % p) as u32;
                }
            }
        } else {
            for i in 0..n {
                for k in 0..n {
                    let a = self.data[i * n + k];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let t = f.mul(a, other.data[k * n + j]);
                        out[i * n + j] = f.add(out[i * n + j], t);
                    }
                }
            }
        }
        Mat { n, data: out }
    }

    pub fn add(&self, other: &Mat, f: &Field) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat, f: &Field) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u32, f: &Field) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self, f: &Field) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j];
            }
        }
        Mat { n, data: out }
    }

    pub fn trace(&self, f: &Field) -> u32 {
        (0..self.n).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Commutator `self·other − other·self`.
    pub fn bracket(&self, other: &Mat, f: &Field) -> Mat {
        self.mul(other, f).sub(&other.mul(self, f), f)
    }

    pub fn conjugate_by(&self, g: &Mat, g_inv: &Mat, f: &Field) -> Mat {
        g.mul(self, f).mul(g_inv, f)
    }

    pub fn det(&self, f: &Field) -> u32 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(a[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let t = f.mul(factor, a[col * n + j]);
                    a[r * n + j] = f.sub(a[r * n + j], t);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Option<Mat> {
        let n = self.n;
        let w = 2 * n;
        let mut a = vec![0u32; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(&self.data[i * n..(i + 1) * n]);
            a[i * w + n + i] = 1;
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * w + col] != 0)?;
            if piv != col {
                for j in 0..w {
                    a.swap(piv * w + j, col * w + j);
                }
            }
            let inv = f.inv(a[col * w + col]).ok()?;
            for j in 0..w {
                a[col * w + j] = f.mul(a[col * w + j], inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * w + col];
                if factor == 0 {
                    continue;
                }
                for j in 0..w {
                    let t = f.mul(factor, a[col * w + j]);
                    a[r * w + j] = f.sub(a[r * w + j], t);
                }
            }
        }
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            out[i * n..(i + 1) * n].copy_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        Some(Mat { n, data: out })
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Mat, f: &Field) -> Mat {
        let (a, b) = (self.n, other.n);
        let n = a * b;
        let mut out = vec![0u32; n * n];
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k) * n + (j * b + l)] = f.mul(x, other.get(k, l));
                    }
                }
            }
        }
        Mat { n, data: out }
    }

    /// Characteristic polynomial det(t·I − self), monic, low degree first,
    /// by Berkowitz's division-free recurrence.
    pub fn char_poly(&self, f: &Field) -> Vec<u32> {
        let n = self.n;
        // Each step extends the coefficient vector (high degree first) for the
        // leading principal submatrix of size k+1.
        let mut poly: Vec<u32> = vec![1, f.neg(self.get(0, 0))];
        for k in 1..n {
            let a_kk = self.get(k, k);
            let row: Vec<u32> = (0..k).map(|j| self.get(k, j)).collect();
            let col: Vec<u32> = (0..k).map(|i| self.get(i, k)).collect();
            // Toeplitz column: 1, −a_kk, −R·C, −R·A·C, −R·A²·C, …
            let mut toeplitz = vec![1u32, f.neg(a_kk)];
            let mut v = col.clone();
            for _ in 0..k {
                let rv = row.iter().zip(&v).fold(0, |acc, (&r, &x)| f.add(acc, f.mul(r, x)));
                toeplitz.push(f.neg(rv));
                let mut next = vec![0u32; k];
                for (i, slot) in next.iter_mut().enumerate() {
                    *slot = (0..k).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])));
                }
                v = next;
            }
            let mut next = vec![0u32; k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = 0u32;
                for (j, &c) in poly.iter().enumerate() {
                    if i >= j {
                        acc = f.add(acc, f.mul(toeplitz[i - j], c));
                    }
                }
                *slot = acc;
            }
            poly = next;
        }
        poly.reverse();
        poly
    }

    /// ','-joined serialized entries, row-major.
    pub fn format(&self, f: &Field) -> String {
        self.data.iter().map(|&c| f.format(c)).collect::<Vec<_>>().join(",")
    }

    pub fn parse(n: usize, s: &str, f: &Field) -> Result<Mat, MatrixError> {
        let data: Vec<u32> = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| f.parse(t))
            .collect::<Result<_, _>>()?;
        Self::from_codes(n, data)
    }

    /// Infers N from the entry count.
    pub fn parse_square(s: &str, f: &Field) -> Result<Mat, MatrixError> {
        let count = s.split(',').filter(|t| !t.trim().is_empty()).count();
        let n = (count as f64).sqrt().round() as usize;
        Self::parse(n, s, f)
    }
}

/// Rank of the matrix with the given rows, by Gaussian elimination.
pub fn rank(rows: &[Vec<u32>], f: &Field) -> usize {
    let mut basis = RowEchelon::new(rows.first().map_or(0, Vec::len));
    for r in rows {
        basis.insert(r, f);
    }
    basis.rank()
}

/// Incrementally maintained reduced row basis.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    width: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl RowEchelon {
    pub fn new(width: usize) -> Self {
        RowEchelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32], f: &Field) -> Vec<u32> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        v
    }

    /// Whether `v` lies outside the current span.
    pub fn is_independent(&self, v: &[u32], f: &Field) -> bool {
        self.reduce(v, f).iter().any(|&x| x != 0)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32], f: &Field) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut v = self.reduce(v, f);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[pivot]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&v) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Null space basis of the `rows × width` system `rows · x = 0`.
pub fn null_space(rows: &[Vec<u32>], width: usize, f: &Field) -> Vec<Vec<u32>> {
    let mut ech = RowEchelon::new(width);
    for r in rows {
        ech.insert(r, f);
    }
    let pivots: Vec<usize> = ech.rows.iter().map(|(p, _)| *p).collect();
    let mut out = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0u32; width];
        x[free] = 1;
        for (pivot, row) in &ech.rows {
            x[*pivot] = f.neg(row[free]);
        }
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat(n: usize, f: &Field, rng: &mut ChaCha8Rng) -> Mat {
        Mat::from_codes(n, (0..n * n).map(|_| rng.gen_range(0..f.q())).collect()).unwrap()
    }

    /// Cofactor expansion, used as an independent determinant.
    fn det_cofactor(m: &Mat, f: &Field) -> u32 {
        let n = m.n();
        if n == 1 {
            return m.get(0, 0);
        }
        let mut acc = 0u32;
        for j in 0..n {
            let minor: Vec<u32> = (1..n)
                .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c)))
                .map(|(i, c)| m.get(i, c))
                .collect();
            let d = det_cofactor(&Mat::from_codes(n - 1, minor).unwrap(), f);
            let term = f.mul(m.get(0, j), d);
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn det_and_inverse_agree_with_cofactors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [5u64, 7, 9, 11] {
            let f = Field::of_order(q).unwrap();
            for n in 1..=4 {
                for _ in 0..40 {
                    let m = random_mat(n, &f, &mut rng);
                    let d = m.det(&f);
                    assert_eq!(d, det_cofactor(&m, &f));
                    match m.inverse(&f) {
                        Some(inv) => {
                            assert_ne!(d, 0);
                            assert!(m.mul(&inv, &f).is_identity());
                        }
                        None => assert_eq!(d, 0),
                    }
                }
            }
        }
    }

    #[test]
    fn char_poly_matches_det_of_shift_at_every_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [5u64, 7, 9] {
            let f = Field::of_order(q).unwrap();
            for n in 1..=5 {
                for _ in 0..20 {
                    let m = random_mat(n, &f, &mut rng);
                    let cp = m.char_poly(&f);
                    assert_eq!(cp.len(), n + 1);
                    assert_eq!(cp[n], 1);
                    for t in 0..f.q() {
                        let shifted = Mat::identity(n).scale(t, &f).sub(&m, &f);
                        let value = cp.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, t), c));
                        assert_eq!(value, shifted.det(&f));
                    }
                }
            }
        }
    }

    #[test]
    fn kron_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::prime(7).unwrap();
        for _ in 0..20 {
            let (a, b, c, d) = (
                random_mat(2, &f, &mut rng),
                random_mat(3, &f, &mut rng),
                random_mat(2, &f, &mut rng),
                random_mat(3, &f, &mut rng),
            );
            assert_eq!(
                a.kron(&b, &f).mul(&c.kron(&d, &f), &f),
                a.mul(&c, &f).kron(&b.mul(&d, &f), &f)
            );
        }
    }

    #[test]
    fn rank_and_null_space() {
        let f = Field::prime(5).unwrap();
        let rows = vec![vec![1, 2, 3], vec![0, 1, 4], vec![1, 3, 2]];
        assert_eq!(rank(&rows, &f), 2);
        let ns = null_space(&rows, 3, &f);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot = r.iter().zip(&ns[0]).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn serialization_round_trip() {
        let f = Field::of_order(9).unwrap();
        let m = Mat::from_codes(2, vec![0, 4, 7, 1]).unwrap();
        let s = m.format(&f);
        assert_eq!(Mat::parse_square(&s, &f).unwrap(), m);
    }
}
