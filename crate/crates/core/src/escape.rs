//! Escape from subvarieties: shortest words moving a point off a variety,
//! checked against the step bounds, and the tensor-power linearization.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::Value;
use thiserror::Error;

use crate::cayley::{Ball, BallError};
use crate::classify::is_regular_semisimple;
use crate::constants::LogScaled;
use crate::gf::Field;
use crate::matrix::Mat;
use crate::report::{self, obj};
use crate::varieties::{Poly, VarietySpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EscapeError {
    #[error("no escape within the ball of radius {radius} ({ball_size} elements scanned, whole group scanned: {orbit_contained})")]
    NoEscapeWithinBall {
        radius: usize,
        ball_size: usize,
        orbit_contained: bool,
    },
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error("generating set is not closed under inverses")]
    NotSymmetric,
    #[error("generating set lacks the identity")]
    MissingIdentity,
    #[error("point of length {found} does not fit the action on {n}×{n} matrices")]
    PointShape { found: usize, n: usize },
    #[error("variety ambient {ambient} does not match the point length {point}")]
    AmbientMismatch { ambient: usize, point: usize },
    #[error("polynomial of degree {degree} exceeds the linearization degree {target}")]
    NotHomogenizable { degree: u32, target: u32 },
    #[error("linearization needs a matrix point")]
    VectorPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    LeftMultiplication,
    Conjugation,
}

impl Action {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "left" | "left_multiplication" => Some(Action::LeftMultiplication),
            "conj" | "conjugation" => Some(Action::Conjugation),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::LeftMultiplication => "left_multiplication",
            Action::Conjugation => "conjugation",
        }
    }
}

/// Symmetric generating set with identity, a variety, a point and an action.
///
/// The point is a vector of length `N` (left multiplication only) or a
/// row-major `N×N` matrix of length `N²`; variable `xₖ` is coordinate `k`.
#[derive(Clone, Debug)]
pub struct EscapeInstance {
    pub generators: Vec<Mat>,
    pub variety: VarietySpec,
    pub point: Vec<u32>,
    pub action: Action,
}

impl EscapeInstance {
    pub fn new(
        generators: Vec<Mat>,
        variety: VarietySpec,
        point: Vec<u32>,
        action: Action,
        f: &Field,
    ) -> Result<Self, EscapeError> {
        let n = generators.first().map_or(0, Mat::n);
        if !generators.iter().any(Mat::is_identity) {
            return Err(EscapeError::MissingIdentity);
        }
        if generators
            .iter()
            .any(|g| g.inverse(f).is_none_or(|gi| !generators.contains(&gi)))
        {
            return Err(EscapeError::NotSymmetric);
        }
        let is_matrix = point.len() == n * n;
        if !(is_matrix || (point.len() == n && action == Action::LeftMultiplication)) {
            return Err(EscapeError::PointShape { found: point.len(), n });
        }
        if variety.ambient != point.len() {
            return Err(EscapeError::AmbientMismatch {
                ambient: variety.ambient,
                point: point.len(),
            });
        }
        Ok(EscapeInstance {
            generators,
            variety,
            point,
            action,
        })
    }

    fn n(&self) -> usize {
        self.generators[0].n()
    }

    /// `g·x` under the instance's action.
    pub fn act(&self, g: &Mat, f: &Field) -> Vec<u32> {
        let n = self.n();
        if self.point.len() == n {
            return (0..n)
                .map(|i| (0..n).fold(0, |acc, j| f.add(acc, f.mul(g.get(i, j), self.point[j]))))
                .collect();
        }
        let x = Mat::from_codes(n, self.point.clone()).expect("square point");
        let y = match self.action {
            Action::LeftMultiplication => g.mul(&x, f),
            Action::Conjugation => x.conjugate_by(g, &g.inverse(f).expect("invertible"), f),
        };
        y.into_codes()
    }

    /// Index of the first defining polynomial that is nonzero at `g·x`.
    pub fn escaping_poly(&self, g: &Mat, f: &Field) -> Option<usize> {
        let y = self.act(g, f);
        self.variety
            .polys
            .iter()
            .position(|p| p.evaluate(&y, f).expect("arity checked") != 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeCertificate {
    pub witness: Mat,
    pub k_found: usize,
    pub bound: LogScaled,
    pub within_bound: bool,
    /// Index of a polynomial that is nonzero at the moved point.
    pub escaping_poly: usize,
}

impl EscapeCertificate {
    pub fn to_json(&self, f: &Field) -> Value {
        obj([
            ("witness", Value::String(self.witness.format(f))),
            ("k_found", report::int(self.k_found as u64)),
            ("bound", self.bound.to_json()),
            ("within_bound", Value::Bool(self.within_bound)),
            ("escaping_poly", report::int(self.escaping_poly as u64 + 1)),
        ])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeBound {
    /// `∑_{d′=0}^{d} D^{d−d′+1}`.
    pub sum: LogScaled,
    /// `(1 + 1/(D−1))·D^{d+1}` for `D ≥ 2`, `d + 1` for `D = 1`.
    pub closed: LogScaled,
    /// `2·D^{d+1}` for `D ≥ 2`, `d + 1` for `D = 1`.
    pub doubled: LogScaled,
}

pub fn escape_bound(d: u32, deg: u64) -> EscapeBound {
    assert!(deg >= 1, "degree is at least 1");
    if deg == 1 {
        let v = LogScaled::from_u64(u64::from(d) + 1);
        return EscapeBound {
            sum: v.clone(),
            closed: v.clone(),
            doubled: v,
        };
    }
    let dd = LogScaled::from_u64(deg);
    let sum = (1..=d + 1)
        .map(|e| dd.pow(e))
        .reduce(|a, b| a.add(&b))
        .expect("nonempty");
    let top = dd.pow(d + 1);
    let factor = BigRational::new(BigUint::from(deg).into(), BigUint::from(deg - 1).into());
    let closed = top.mul(&LogScaled::with_exact((deg as f64 / (deg - 1) as f64).ln(), factor));
    let doubled = top.mul(&LogScaled::from_u64(2));
    EscapeBound { sum, closed, doubled }
}

/// Shortest witness, first in sorted order within its layer.
fn search<F>(gens: &[Mat], f: &Field, cap: usize, hit: F) -> Result<(Mat, usize), EscapeError>
where
    F: Fn(&Mat) -> bool,
{
    let mut ball = Ball::new(gens, f, cap)?;
    loop {
        let t = ball.radius();
        if let Some(g) = ball.layer(t).iter().find(|g| hit(g)) {
            return Ok((g.clone(), t));
        }
        if ball.is_closed() {
            return Err(EscapeError::NoEscapeWithinBall {
                radius: ball.diameter().unwrap_or(t),
                ball_size: ball.len(),
                orbit_contained: ball.is_closed(),
            });
        }
        ball.grow()?;
    }
}

/// Breadth-first search for `g ∈ A^k` with `g·x ∉ V(F_q)`.
pub fn escape_point(inst: &EscapeInstance, f: &Field, cap: usize) -> Result<EscapeCertificate, EscapeError> {
    let (witness, k) = search(&inst.generators, f, cap, |g| inst.escaping_poly(g, f).is_some())?;
    let bound = escape_bound(inst.variety.declared_dim as u32, inst.variety.declared_deg).sum;
    let within_bound = LogScaled::from_u64(k as u64).le(&bound).is_holds();
    let escaping_poly = inst.escaping_poly(&witness, f).expect("witness escapes");
    Ok(EscapeCertificate {
        witness,
        k_found: k,
        bound,
        within_bound,
        escaping_poly,
    })
}

/// Linear polynomial in the entries of an `N′×N′` matrix, `N′ = (N+1)^D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linearized {
    pub size: usize,
    pub poly: Poly,
}

/// Entry `(i, j)` of `ι(M)^{⊗D}` with `ι(M) = diag(1, M)`, as a flat index.
fn tensor_index(rows: &[usize], cols: &[usize], n1: usize) -> usize {
    let fold = |ix: &[usize]| ix.iter().fold(0, |acc, &i| acc * n1 + i);
    let size = n1.pow(rows.len() as u32);
    fold(rows) * size + fold(cols)
}

/// Rewrites `P` over `N×N` entries as a linear form in `ι(M)^{⊗D}`.
pub fn linearize(n: usize, deg: u32, p: &Poly, f: &Field) -> Result<Linearized, EscapeError> {
    if p.degree() > deg {
        return Err(EscapeError::NotHomogenizable {
            degree: p.degree(),
            target: deg,
        });
    }
    let n1 = n + 1;
    let size = n1.pow(deg);
    let mut terms = Vec::new();
    for (exps, c) in p.terms() {
        let mut rows = Vec::with_capacity(deg as usize);
        let mut cols = Vec::with_capacity(deg as usize);
        for (var, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                rows.push(var / n + 1);
                cols.push(var % n + 1);
            }
        }
        while rows.len() < deg as usize {
            rows.push(0);
            cols.push(0);
        }
        let mut e = vec![0u32; size * size];
        e[tensor_index(&rows, &cols, n1)] = 1;
        terms.push((e, *c));
    }
    let poly = Poly::from_terms(size * size, terms, f).expect("arity");
    Ok(Linearized { size, poly })
}

/// `ι(M)^{⊗D}`.
pub fn linearize_element(m: &Mat, deg: u32, f: &Field) -> Mat {
    let n = m.n();
    let mut iota = Mat::identity(n + 1);
    for i in 0..n {
        for j in 0..n {
            iota.set(i + 1, j + 1, m.get(i, j));
        }
    }
    (1..deg).fold(iota.clone(), |acc, _| acc.kron(&iota, f))
}

/// `11·D·(N+1)^D·ln N`.
pub fn shitov_bound(n: usize, deg: u32) -> f64 {
    11.0 * deg as f64 * ((n + 1) as f64).powi(deg as i32) * (n as f64).ln()
}

/// `2N′log₂N′ + 4N′`.
pub fn linear_envelope(size: usize) -> f64 {
    let s = size as f64;
    2.0 * s * s.log2() + 4.0 * s
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShitovCertificate {
    pub certificate: EscapeCertificate,
    pub degree: u32,
    pub linear_size: usize,
    pub shitov_bound: f64,
    pub envelope: f64,
    pub within_shitov: bool,
    pub within_envelope: bool,
}

impl ShitovCertificate {
    pub fn to_json(&self, f: &Field) -> Value {
        obj([
            ("certificate", self.certificate.to_json(f)),
            ("degree", report::int(self.degree)),
            ("linear_size", report::int(self.linear_size as u64)),
            ("shitov_bound", report::real(self.shitov_bound)),
            ("envelope", report::real(self.envelope)),
            ("within_shitov", Value::Bool(self.within_shitov)),
            ("within_envelope", Value::Bool(self.within_envelope)),
        ])
    }
}

/// Escape checked against the linearization bound; with `via_linearize` the
/// search runs on `ι(A)^{⊗D}` against the linearized variety.
pub fn shitov_escape(
    inst: &EscapeInstance,
    via_linearize: bool,
    f: &Field,
    cap: usize,
) -> Result<ShitovCertificate, EscapeError> {
    let n = inst.n();
    if inst.point.len() != n * n {
        return Err(EscapeError::VectorPoint);
    }
    let deg = inst.variety.polys.iter().map(Poly::degree).max().unwrap_or(1).max(1);
    let size = (n + 1).pow(deg);
    let certificate = if via_linearize {
        let polys = inst
            .variety
            .polys
            .iter()
            .map(|p| linearize(n, deg, p, f).map(|l| l.poly))
            .collect::<Result<Vec<_>, _>>()?;
        let lin_var = VarietySpec::new(size * size, polys, size * size - 1, 1).expect("linear variety");
        let x = Mat::from_codes(n, inst.point.clone()).expect("square");
        let lin_gens: Vec<Mat> = inst.generators.iter().map(|g| linearize_element(g, deg, f)).collect();
        let lin = EscapeInstance {
            generators: lin_gens,
            variety: lin_var,
            point: linearize_element(&x, deg, f).into_codes(),
            action: inst.action,
        };
        let (w, k) = search(&lin.generators, f, cap, |g| lin.escaping_poly(g, f).is_some())?;
        let witness = recover_preimage(&w, n, deg);
        let bound = escape_bound(inst.variety.declared_dim as u32, inst.variety.declared_deg).sum;
        let escaping_poly = inst.escaping_poly(&witness, f).expect("linearization preserves escape");
        EscapeCertificate {
            within_bound: LogScaled::from_u64(k as u64).le(&bound).is_holds(),
            witness,
            k_found: k,
            bound,
            escaping_poly,
        }
    } else {
        escape_point(inst, f, cap)?
    };
    let sb = shitov_bound(n, deg);
    let env = linear_envelope(size);
    let k = certificate.k_found as f64;
    Ok(ShitovCertificate {
        within_shitov: k < sb,
        within_envelope: deg > 1 || k <= env,
        certificate,
        degree: deg,
        linear_size: size,
        shitov_bound: sb,
        envelope: env,
    })
}

/// Reads `M` back from `ι(M)^{⊗D}`: entry `(i, j)` of `M` sits at tensor
/// position `((0,…,0,i+1),(0,…,0,j+1))`.
fn recover_preimage(w: &Mat, n: usize, deg: u32) -> Mat {
    let n1 = n + 1;
    let mut m = Mat::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut rows = vec![0; deg as usize];
            let mut cols = vec![0; deg as usize];
            rows[deg as usize - 1] = i + 1;
            cols[deg as usize - 1] = j + 1;
            let idx = tensor_index(&rows, &cols, n1);
            let size = w.n();
            m.set(i, j, w.get(idx / size, idx % size));
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct RsCertificate {
    pub witness: Mat,
    pub k_found: usize,
    /// `(2r)^{4r²+3r}`.
    pub bound: LogScaled,
    pub within_bound: bool,
}

impl RsCertificate {
    pub fn to_json(&self, f: &Field) -> Value {
        obj([
            ("witness", Value::String(self.witness.format(f))),
            ("k_found", report::int(self.k_found as u64)),
            ("bound", self.bound.to_json()),
            ("within_bound", Value::Bool(self.within_bound)),
        ])
    }
}

pub fn rs_bound(r: u32) -> LogScaled {
    LogScaled::from_u64(2 * u64::from(r)).pow(4 * r * r + 3 * r)
}

/// Shortest regular semisimple element of the ball of `gens`.
pub fn find_regular_semisimple(gens: &[Mat], rank: u32, f: &Field, cap: usize) -> Result<RsCertificate, EscapeError> {
    let (witness, k) = search(gens, f, cap, |g| is_regular_semisimple(g, f))?;
    let bound = rs_bound(rank);
    Ok(RsCertificate {
        within_bound: LogScaled::from_u64(k as u64).le(&bound).is_holds(),
        witness,
        k_found: k,
        bound,
    })
}

/// `BigUint` helper for exact sums in tests and reports.
pub fn escape_sum_exact(d: u32, deg: u64) -> BigUint {
    if deg == 1 {
        return BigUint::from(d + 1);
    }
    (1..=d + 1).fold(BigUint::from(0u32), |acc, e| acc + BigUint::from(deg).pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Verdict;
    use crate::groups;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn m(e: &[i64], f: &Field) -> Mat {
        Mat::from_ints(2, e, f).unwrap()
    }

    fn st_gens(f: &Field) -> Vec<Mat> {
        vec![
            Mat::identity(2),
            m(&[0, -1, 1, 0], f),
            m(&[0, 1, -1, 0], f),
            m(&[1, 1, 0, 1], f),
            m(&[1, -1, 0, 1], f),
        ]
    }

    fn tu_gens(f: &Field) -> Vec<Mat> {
        vec![
            Mat::identity(2),
            m(&[1, 1, 0, 1], f),
            m(&[1, -1, 0, 1], f),
            m(&[1, 0, 1, 1], f),
            m(&[1, 0, -1, 1], f),
        ]
    }

    fn linear_variety(poly: &str, f: &Field) -> VarietySpec {
        VarietySpec::new(4, vec![Poly::parse(poly, 4, f).unwrap()], 3, 1).unwrap()
    }

    fn exact(l: &LogScaled) -> u64 {
        l.exact_int().unwrap().try_into().unwrap()
    }

    #[test]
    fn bound_examples() {
        assert_eq!(exact(&escape_bound(5, 1).sum), 6);
        assert_eq!(exact(&escape_bound(1, 2).sum), 6);
        let b = escape_bound(2, 3);
        assert_eq!(exact(&b.sum), 39);
        assert_eq!(b.closed.exact().unwrap(), &BigRational::new(81.into(), 2.into()));
        assert_eq!(b.sum.le(&b.closed), Verdict::Holds);
        assert_eq!(b.closed.le(&b.doubled), Verdict::Holds);
        for d in 0..6 {
            for deg in 1..8 {
                let b = escape_bound(d, deg);
                assert_eq!(b.sum.exact_int().unwrap(), escape_sum_exact(d, deg));
                assert_eq!(b.sum.le(&b.closed), Verdict::Holds);
            }
        }
    }

    #[test]
    fn escape_example_sl2_f7() {
        let f = fp(7);
        let v = linear_variety("x2", &f);
        let id = Mat::identity(2).into_codes();
        let inst = EscapeInstance::new(st_gens(&f), v.clone(), id.clone(), Action::LeftMultiplication, &f).unwrap();
        let c = escape_point(&inst, &f, 10_000).unwrap();
        assert_eq!(c.k_found, 1);
        assert!(c.within_bound);
        assert_eq!(exact(&c.bound), 4);
        assert_eq!(c.witness, m(&[0, 1, -1, 0], &f));
        let t_only = vec![Mat::identity(2), m(&[1, 1, 0, 1], &f), m(&[1, -1, 0, 1], &f)];
        let inst = EscapeInstance::new(t_only, v, id, Action::LeftMultiplication, &f).unwrap();
        let c = escape_point(&inst, &f, 10_000).unwrap();
        assert_eq!((c.k_found, c.witness.clone()), (1, m(&[1, 1, 0, 1], &f)));
    }

    #[test]
    fn escape_fails_inside_group() {
        let f = fp(7);
        let v = VarietySpec::new(4, vec![Poly::parse("x1*x4 - x2*x3 - 1", 4, &f).unwrap()], 3, 2).unwrap();
        let inst = EscapeInstance::new(
            st_gens(&f),
            v,
            Mat::identity(2).into_codes(),
            Action::LeftMultiplication,
            &f,
        )
        .unwrap();
        match escape_point(&inst, &f, 10_000) {
            Err(EscapeError::NoEscapeWithinBall {
                ball_size,
                orbit_contained,
                ..
            }) => {
                assert!(orbit_contained);
                assert_eq!(ball_size, 336);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn instance_validation() {
        let f = fp(7);
        let v = linear_variety("x2", &f);
        let id = Mat::identity(2).into_codes();
        let gens = vec![Mat::identity(2), m(&[1, 1, 0, 1], &f)];
        assert_eq!(
            EscapeInstance::new(gens, v.clone(), id.clone(), Action::LeftMultiplication, &f).unwrap_err(),
            EscapeError::NotSymmetric
        );
        let gens = vec![m(&[1, 1, 0, 1], &f), m(&[1, -1, 0, 1], &f)];
        assert_eq!(
            EscapeInstance::new(gens, v, id, Action::LeftMultiplication, &f).unwrap_err(),
            EscapeError::MissingIdentity
        );
    }

    fn random_linear(rng: &mut ChaCha8Rng, f: &Field) -> Poly {
        loop {
            let mut terms: Vec<(Vec<u32>, u32)> = (0..4)
                .map(|i| {
                    let mut e = vec![0; 4];
                    e[i] = 1;
                    (e, rng.gen_range(0..f.q()))
                })
                .collect();
            terms.push((vec![0; 4], rng.gen_range(0..f.q())));
            let p = Poly::from_terms(4, terms, f).unwrap();
            if p.degree() == 1 {
                return p;
            }
        }
    }

    #[test]
    fn randomized_linear_campaign() {
        let f = fp(7);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let v = VarietySpec::new(4, vec![random_linear(&mut rng, &f)], 3, 1).unwrap();
            let inst = EscapeInstance::new(
                st_gens(&f),
                v,
                Mat::identity(2).into_codes(),
                Action::LeftMultiplication,
                &f,
            )
            .unwrap();
            let c = escape_point(&inst, &f, 10_000).unwrap();
            assert!(c.within_bound && c.k_found <= 4);
            assert!(inst.escaping_poly(&c.witness, &f).is_some());
        }
    }

    #[test]
    fn conjugation_and_vector_actions() {
        let f = fp(5);
        let gens = groups::symmetrize(&tu_gens(&f), &f);
        let x = m(&[2, 0, 0, 3], &f).into_codes();
        let v = linear_variety("x2", &f);
        let inst = EscapeInstance::new(gens.clone(), v, x, Action::Conjugation, &f).unwrap();
        let c = escape_point(&inst, &f, 10_000).unwrap();
        assert_eq!(c.k_found, 1);
        let vv = VarietySpec::new(2, vec![Poly::parse("x2", 2, &f).unwrap()], 1, 1).unwrap();
        let inst = EscapeInstance::new(gens, vv, vec![1, 0], Action::LeftMultiplication, &f).unwrap();
        let c = escape_point(&inst, &f, 10_000).unwrap();
        assert!(inst.act(&c.witness, &f)[1] != 0);
        assert_eq!(c.k_found, 1);
    }

    #[test]
    fn linearize_examples() {
        let f = fp(7);
        let lin = linearize(2, 1, &Poly::parse("3*x2 + x1 - 1", 4, &f).unwrap(), &f).unwrap();
        assert_eq!(lin.size, 3);
        assert_eq!(lin.poly.degree(), 1);
        let lin = linearize(2, 2, &Poly::parse("x1*x4", 4, &f).unwrap(), &f).unwrap();
        assert_eq!(lin.size, 9);
        assert_eq!(lin.poly.terms().len(), 1);
        let (e, c) = &lin.poly.terms()[0];
        assert_eq!(*c, 1);
        let pos = e.iter().position(|&a| a == 1).unwrap();
        assert_eq!(pos, tensor_index(&[1, 2], &[1, 2], 3));
        assert!(linearize(2, 1, &Poly::parse("x1*x4", 4, &f).unwrap(), &f).is_err());
        assert!((shitov_bound(2, 2) - 137.2).abs() < 0.05);
    }

    /// `P(M) = P′(ι(M)^{⊗D})` on random matrices.
    #[test]
    fn linearization_preserves_values() {
        let f = fp(11);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for deg in 1..=3u32 {
            for _ in 0..20 {
                let terms: Vec<(Vec<u32>, u32)> = (0..5)
                    .map(|_| {
                        let mut e = vec![0u32; 4];
                        for _ in 0..rng.gen_range(0..=deg) {
                            e[rng.gen_range(0..4)] += 1;
                        }
                        (e, rng.gen_range(0..11))
                    })
                    .collect();
                let p = Poly::from_terms(4, terms, &f).unwrap();
                let lin = linearize(2, deg, &p, &f).unwrap();
                let mm = Mat::from_codes(2, (0..4).map(|_| rng.gen_range(0..11)).collect()).unwrap();
                let big = linearize_element(&mm, deg, &f);
                assert_eq!(big.n(), lin.size);
                assert_eq!(
                    p.evaluate(mm.codes(), &f).unwrap(),
                    lin.poly.evaluate(big.codes(), &f).unwrap()
                );
                assert_eq!(recover_preimage(&big, 2, deg), mm);
            }
        }
    }

    #[test]
    fn shitov_campaign_sl2_f11() {
        let f = fp(11);
        let gens = groups::symmetrize(&tu_gens(&f), &f);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let v = VarietySpec::new(4, vec![random_linear(&mut rng, &f)], 3, 1).unwrap();
            let inst = EscapeInstance::new(
                gens.clone(),
                v,
                Mat::identity(2).into_codes(),
                Action::LeftMultiplication,
                &f,
            )
            .unwrap();
            let direct = shitov_escape(&inst, false, &f, 100_000).unwrap();
            let lin = shitov_escape(&inst, true, &f, 100_000).unwrap();
            assert!(direct.within_shitov && direct.within_envelope);
            assert_eq!(direct.certificate.k_found, lin.certificate.k_found);
            assert!(lin.within_shitov && lin.within_envelope);
        }
    }

    #[test]
    fn shitov_quadratic_via_linearization() {
        let f = fp(7);
        let gens = groups::symmetrize(&tu_gens(&f), &f);
        let v = VarietySpec::new(4, vec![Poly::parse("x1*x4 - 1", 4, &f).unwrap()], 3, 2).unwrap();
        let inst = EscapeInstance::new(gens, v, Mat::identity(2).into_codes(), Action::LeftMultiplication, &f).unwrap();
        let a = shitov_escape(&inst, false, &f, 100_000).unwrap();
        let b = shitov_escape(&inst, true, &f, 100_000).unwrap();
        assert_eq!(a.certificate.k_found, b.certificate.k_found);
        assert!(b.within_shitov);
    }

    #[test]
    fn identity_only_set_cannot_escape() {
        let f = fp(7);
        let v = linear_variety("x2", &f);
        let inst = EscapeInstance::new(
            vec![Mat::identity(2)],
            v,
            Mat::identity(2).into_codes(),
            Action::LeftMultiplication,
            &f,
        )
        .unwrap();
        assert!(matches!(
            shitov_escape(&inst, false, &f, 100).unwrap_err(),
            EscapeError::NoEscapeWithinBall { ball_size: 1, .. }
        ));
    }

    #[test]
    fn regular_semisimple_search() {
        let f5 = fp(5);
        let gens = groups::symmetrize(&[Mat::identity(2), m(&[2, 0, 0, 3], &f5)], &f5);
        assert_eq!(find_regular_semisimple(&gens, 1, &f5, 1000).unwrap().k_found, 1);
        let f7 = fp(7);
        let c = find_regular_semisimple(&tu_gens(&f7), 1, &f7, 1000).unwrap();
        assert_eq!(c.k_found, 2);
        assert!(c.within_bound);
        assert!(is_regular_semisimple(&c.witness, &f7));
        assert_eq!(exact(&rs_bound(1)), 128);
        assert!(tu_gens(&f7).iter().all(|g| !is_regular_semisimple(g, &f7)));
    }

    #[test]
    fn certificates_are_deterministic() {
        let f = fp(7);
        let v = linear_variety("x1 + 2*x3 - x4", &f);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    let inst = EscapeInstance::new(
                        tu_gens(&f),
                        v.clone(),
                        Mat::identity(2).into_codes(),
                        Action::LeftMultiplication,
                        &f,
                    )
                    .unwrap();
                    escape_point(&inst, &f, 10_000).unwrap()
                })
        };
        assert_eq!(run(1), run(4));
    }
}
