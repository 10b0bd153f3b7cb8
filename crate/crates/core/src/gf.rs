//! Exact arithmetic in GF(p^e).
//!
//! Elements are carried as `u32` codes: the coefficient vector
//! `(c_0, …, c_{e-1})` of the reduced polynomial maps to `Σ c_i p^i`.
//! Hot loops work on raw codes; [`FieldElement`] is the checked wrapper.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 20;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("modulus must be monic of degree {expected} with coefficients below p")]
    BadModulus { expected: u32 },
    #[error("field GF({p}^{e}) exceeds the supported size (e ≤ 4, q ≤ 2^20)")]
    UnsupportedSize { p: u64, e: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero input")]
    ZeroInput,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut m, mut e) = (q, 0u32);
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Polynomials over GF(p), low degree first, used only for the modulus.
mod fp_poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let p64 = p as u64;
        let mut r = trim(a.to_vec());
        let b = trim(b.to_vec());
        let lead_inv = super::pow_mod(b[b.len() - 1] as u64, p64 - 2, p64);
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r[r.len() - 1] as u64 * lead_inv % p64;
            for (i, &bi) in b.iter().enumerate() {
                let sub = c * bi as u64 % p64;
                r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn eval(a: &[u32], x: u32, p: u32) -> u32 {
        let p = p as u64;
        a.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `index`.
fn monic_from_index(index: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(deg as usize + 1);
    let mut m = index;
    for _ in 0..deg {
        v.push((m % p as u64) as u32);
        m /= p as u64;
    }
    v.push(1);
    v
}

/// Irreducibility for degree ≤ 4: no roots and no monic factor of degree ≤ e/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() as u32 - 1;
    if deg <= 1 {
        return deg == 1;
    }
    if (0..p).any(|x| fp_poly::eval(f, x, p) == 0) {
        return false;
    }
    for d in 2..=deg / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let g = monic_from_index(idx, d, p);
            if fp_poly::rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// A validated finite field GF(p^e).
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}", self.p, self.e)?;
        if self.e > 1 {
            write!(f, " mod {:?}", self.modulus)?;
        }
        write!(f, ")")
    }
}

impl Field {
    /// Builds GF(p^e). Without a modulus, the least monic irreducible is chosen,
    /// ordering candidates by `Σ c_i p^i` over their lower coefficients.
    pub fn new(p: u64, e: u32, modulus: Option<&[u32]>) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        if e == 0 || e > MAX_DEGREE || p.checked_pow(e).is_none_or(|q| q > MAX_ORDER as u64) {
            return Err(GfError::UnsupportedSize { p, e });
        }
        let p = p as u32;
        let q = p.pow(e);
        let modulus = match (e, modulus) {
            (1, None) => vec![0, 1],
            (1, Some([])) => vec![0, 1],
            (_, Some(m)) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(GfError::BadModulus { expected: e });
                }
                if !is_irreducible(m, p) {
                    return Err(GfError::ReducibleModulus(m.to_vec(), p));
                }
                m.to_vec()
            }
            (_, None) => (0..(p as u64).pow(e))
                .map(|i| monic_from_index(i, e, p))
                .find(|m| is_irreducible(m, p))
                .expect("irreducible polynomials exist in every degree"),
        };
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if e > 1 {
            field.build_tables();
        }
        Ok(field)
    }

    /// Prime field GF(p).
    pub fn prime(p: u64) -> Result<Self, GfError> {
        Self::new(p, 1, None)
    }

    /// Field of order `q` with the canonical modulus.
    pub fn of_order(q: u64) -> Result<Self, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NonPrimeCharacteristic(q))?;
        Self::new(p, e, None)
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        for g in 2..self.q {
            let mut exp = Vec::with_capacity(n);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..n {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.mul_slow(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; self.q as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut m = a;
        for _ in 0..self.e {
            v.push(m % self.p);
            m /= self.p;
        }
        v
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.e as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut r = fp_poly::rem(&prod, &self.modulus, self.p);
        r.resize(self.e as usize, 0);
        self.undigits(&r)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Code of the integer `n` reduced into the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let (mut out, mut place) = (0u32, 1u32);
            for _ in 0..self.e {
                let s = (a % self.p + b % self.p) % self.p;
                out += s * place;
                place *= self.p;
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let mut m = a;
            let (mut out, mut place) = (0u32, 1u32);
            for _ in 0..self.e {
                let c = m % self.p;
                out += ((self.p - c) % self.p) * place;
                place *= self.p;
                m /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            (a as u64 * b as u64 % self.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
            self.exp[(s % (self.q as u64 - 1)) as usize]
        }
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Euler's criterion.
    pub fn is_square(&self, a: u32) -> Result<bool, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInput);
        }
        Ok(self.pow(a, (self.q as u64 - 1) / 2) == 1)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        if self.e > 1 {
            return self.exp[1];
        }
        let n = self.q as u64 - 1;
        let mut factors = Vec::new();
        let (mut m, mut d) = (n, 2u64);
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (1..self.q)
            .find(|&g| factors.iter().all(|&f| self.pow(g, n / f) != 1))
            .expect("cyclic multiplicative group")
    }

    /// ':'-joined coefficients, low degree first.
    pub fn format(&self, a: u32) -> String {
        if self.e == 1 {
            return a.to_string();
        }
        self.digits(a).iter().map(u32::to_string).collect::<Vec<_>>().join(":")
    }

    /// Accepts ':'-joined coefficients or a signed integer in the prime subfield.
    pub fn parse(&self, s: &str) -> Result<u32, GfError> {
        let s = s.trim();
        let bad = || GfError::Parse(s.to_string());
        if s.contains(':') {
            let d: Vec<u32> = s
                .split(':')
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            if d.len() > self.e as usize || d.iter().any(|&c| c >= self.p) {
                return Err(bad());
            }
            let mut d = d;
            d.resize(self.e as usize, 0);
            Ok(self.undigits(&d))
        } else {
            let n: i64 = s.parse().map_err(|_| bad())?;
            Ok(self.from_int(n))
        }
    }

    pub fn element(&self, code: u32) -> FieldElement<'_> {
        debug_assert!(code < self.q);
        FieldElement { field: self, code }
    }
}

/// A field element bound to its field.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Field,
    code: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl<'f> FieldElement<'f> {
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn field(&self) -> &'f Field {
        self.field
    }
    pub fn is_square(&self) -> Result<bool, GfError> {
        self.field.is_square(self.code)
    }

    pub fn arith(&self, other: &FieldElement<'_>, op: ArithOp) -> Result<FieldElement<'f>, GfError> {
        if !std::ptr::eq(self.field, other.field) && self.field != other.field {
            return Err(GfError::FieldMismatch);
        }
        let f = self.field;
        let (a, b) = (self.code, other.code);
        let code = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(FieldElement { field: f, code })
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.code == other.code
    }
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.code))
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_examples() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.div(3, 2).unwrap(), 4);
        assert!(f.is_square(4).unwrap());
        assert!(!f.is_square(2).unwrap());
        assert_eq!(f.is_square(0), Err(GfError::ZeroInput));
        let f7 = Field::prime(7).unwrap();
        assert!(!f7.is_square(6).unwrap());
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(Field::prime(4).unwrap_err(), GfError::NonPrimeCharacteristic(4));
    }

    #[test]
    fn gf9_with_x2_plus_1() {
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.q(), 9);
        let x = f.parse("0:1").unwrap();
        assert_eq!(f.format(f.mul(x, x)), "2:0");
        assert_eq!(f.format(f.add(2, x)), "2:1");
        // default modulus is the least one, which is x²+1 here
        assert_eq!(Field::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x² + 2 = (x+1)(x+2) over GF(3)
        assert!(matches!(
            Field::new(3, 2, Some(&[2, 0, 1])),
            Err(GfError::ReducibleModulus(..))
        ));
        // (x²+1)² over GF(3) has no roots but is reducible
        assert!(matches!(
            Field::new(3, 4, Some(&[1, 0, 2, 0, 1])),
            Err(GfError::ReducibleModulus(..))
        ));
    }

    #[test]
    fn checked_wrapper_detects_mismatch() {
        let f5 = Field::prime(5).unwrap();
        let f7 = Field::prime(7).unwrap();
        let a = f5.element(2);
        let b = f7.element(3);
        assert_eq!(a.arith(&b, ArithOp::Add).unwrap_err(), GfError::FieldMismatch);
        assert_eq!(
            a.arith(&f5.element(0), ArithOp::Div).unwrap_err(),
            GfError::DivisionByZero
        );
        assert_eq!(a.arith(&f5.element(3), ArithOp::Mul).unwrap().code(), 1);
    }

    fn small_fields() -> Vec<Field> {
        let mut out = Vec::new();
        for (p, e) in [
            (2, 1),
            (3, 1),
            (5, 1),
            (7, 1),
            (11, 1),
            (3, 2),
            (5, 2),
            (7, 2),
            (11, 2),
            (2, 4),
            (3, 3),
            (3, 4),
        ] {
            out.push(Field::new(p, e, None).unwrap());
        }
        out
    }

    #[test]
    fn multiplicative_order_exhaustive() {
        for f in small_fields() {
            assert!(f.q() <= 121);
            for a in 1..f.q() {
                assert_eq!(f.pow(a, f.q() as u64 - 1), 1, "{f:?} a={a}");
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn table_multiplication_matches_polynomial_reduction() {
        for f in small_fields().into_iter().filter(|f| f.e() > 1) {
            for a in 0..f.q() {
                for b in 0..f.q() {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn primitive_element_generates() {
        for f in small_fields() {
            let g = f.primitive_element();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..f.q() - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u32, f.q() - 1);
        }
    }

    proptest! {
        #[test]
        fn field_axioms(idx in 0usize..12, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let fields = small_fields();
            let f = &fields[idx];
            let (a, b, c) = (a % f.q(), b % f.q(), c % f.q());
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            let p = f.p() as u64;
            prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        }

        #[test]
        fn serialization_round_trips(idx in 0usize..12, a in any::<u32>()) {
            let fields = small_fields();
            let f = &fields[idx];
            let a = a % f.q();
            prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
    }
}
