//! Linear independence of translates of a torus Lie algebra.
//!
//! For a non-maximal torus `t` of a classical Lie algebra `g` with
//! `ℓ = dim g / rank`, a certificate is a tuple `g₁, …, g_ℓ` such that
//! `t, [g₁, t], …, [g_ℓ, t]` (or `t, Ad_{g₁}(t), …`) are independent, each of
//! dimension `dim t`. Witnesses come from explicit block matrices where
//! available and from seeded random search inside an embedded subalgebra
//! otherwise; the final rank is always recomputed exactly.

use rand::Rng;
use serde_json::Value;
use thiserror::Error;

use crate::gf::Field;
use crate::groups::{self, Family, GroupError, GroupSpec, HypothesisReport, Theorem, TorusSpec};
use crate::matrix::{self, Mat, RowEchelon};
use crate::report::{self, obj};
use crate::rng;

/// Random draws tried for each free slot before restarting.
pub const DRAWS_PER_SLOT: usize = 64;
/// Full restarts of the random completion.
pub const MAX_ATTEMPTS: u64 = 8;

#[derive(Debug, Error, PartialEq)]
pub enum TorusLabError {
    #[error("bad character: {0}")]
    BadEta(String),
    #[error("character vector is zero")]
    ZeroEta,
    #[error("no explicit matrices for family {0}")]
    FamilyNotSupported(&'static str),
    #[error("the maximal torus has no independent translates: (ℓ+1)·r exceeds dim G")]
    MaximalTorus,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("rank {achieved} short of {target} after {attempts} attempts")]
    RankDeficient {
        achieved: usize,
        target: usize,
        attempts: u64,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How a witness moves the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertMode {
    /// `x ↦ [g, x]` for `g` in the Lie algebra.
    LieBracket,
    /// `x ↦ g x g⁻¹` for `g` in the group.
    Adjoint,
}

impl CertMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lie" | "lie_bracket" => Some(CertMode::LieBracket),
            "adjoint" | "ad" => Some(CertMode::Adjoint),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CertMode::LieBracket => "lie_bracket",
            CertMode::Adjoint => "adjoint",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndependenceCertificate {
    pub spec: GroupSpec,
    pub torus: TorusSpec,
    pub mode: CertMode,
    pub witnesses: Vec<Mat>,
    /// Leading witnesses that are fixed block matrices rather than random draws.
    pub explicit_count: usize,
    pub achieved_rank: usize,
    pub target_rank: usize,
    pub seed: u64,
    pub attempts: u64,
    pub hypotheses: Option<HypothesisReport>,
}

impl IndependenceCertificate {
    pub fn is_full(&self) -> bool {
        self.achieved_rank == self.target_rank
    }

    pub fn to_json(&self, f: &Field) -> Value {
        obj([
            ("group", Value::String(self.spec.label())),
            ("q", report::int(f.q())),
            (
                "eta",
                Value::Array(self.torus.eta.iter().map(|&e| report::int(e)).collect()),
            ),
            ("mode", Value::String(self.mode.name().into())),
            ("torus_dim", report::int(self.torus.dim() as u64)),
            ("ell", report::int(self.spec.ell)),
            ("target_rank", report::int(self.target_rank as u64)),
            ("achieved_rank", report::int(self.achieved_rank as u64)),
            ("explicit_count", report::int(self.explicit_count as u64)),
            ("seed", report::int(self.seed)),
            ("attempts", report::int(self.attempts)),
            (
                "witnesses",
                Value::Array(self.witnesses.iter().map(|w| Value::String(w.format(f))).collect()),
            ),
            (
                "hypotheses",
                self.hypotheses.as_ref().map_or(Value::Null, HypothesisReport::to_json),
            ),
        ])
    }
}

/// Divides out the largest power of `p` common to every entry.
pub fn character_reduce(eta: &[i64], p: u32) -> Result<Vec<i64>, TorusLabError> {
    if eta.iter().all(|&e| e == 0) {
        return Err(TorusLabError::ZeroEta);
    }
    let p = i64::from(p);
    let mut out = eta.to_vec();
    while out.iter().all(|&e| e % p == 0) {
        for e in &mut out {
            *e /= p;
        }
    }
    Ok(out)
}

fn require_nonmaximal(t: &TorusSpec) -> Result<(), TorusLabError> {
    if t.is_maximal() {
        Err(TorusLabError::MaximalTorus)
    } else {
        Ok(())
    }
}

fn lie_characteristic_ok(spec: &GroupSpec, f: &Field) -> Result<(), TorusLabError> {
    let p = f.p() as usize;
    if p == 2 || (2 * spec.size).is_multiple_of(p) {
        return Err(TorusLabError::HypothesisFailed(format!(
            "characteristic {p} divides 2N = {}",
            2 * spec.size
        )));
    }
    if spec.rank < 2 {
        return Err(TorusLabError::HypothesisFailed(format!(
            "rank {} is below 2",
            spec.rank
        )));
    }
    Ok(())
}

fn skew_pair(m: &mut Mat, row: usize, col: usize, f: &Field) {
    m.set(row, col, 1);
    m.set(col, row, f.neg(1));
}

/// Fixed witnesses for the orthogonal and symplectic families.
pub fn explicit_h_matrices(t: &TorusSpec, f: &Field) -> Result<Vec<Mat>, TorusLabError> {
    require_nonmaximal(t)?;
    let spec = &t.spec;
    if spec.family == Family::Sl {
        return Err(TorusLabError::FamilyNotSupported(spec.family.name()));
    }
    let eta: Vec<u32> = t.eta.iter().map(|&e| f.from_int(e)).collect();
    let n = spec.rank as usize;
    if eta.len() != n || eta[n - 1] == 0 {
        return Err(TorusLabError::BadEta(format!(
            "{:?} must have {n} entries with the last nonzero modulo {}",
            t.eta,
            f.p()
        )));
    }
    match spec.family {
        Family::Sl => unreachable!("handled above"),
        Family::SoEven => Ok(so_even_h(n, &eta, f)),
        Family::SoOdd => {
            let size = spec.size;
            let mut out: Vec<Mat> = so_even_h(n, &eta, f)
                .into_iter()
                .map(|h| embed_top_left(&h, size))
                .collect();
            for parity in [0, 1] {
                let mut h = Mat::zero(size);
                for k in (parity..2 * n).step_by(2) {
                    skew_pair(&mut h, k, 2 * n, f);
                }
                out.push(h);
            }
            Ok(out)
        }
        Family::Sp => Ok(sp_h(n, &eta, f)),
    }
}

fn so_even_h(n: usize, eta: &[u32], f: &Field) -> Vec<Mat> {
    let size = 2 * n;
    let (c1, c2) = (2 * n - 2, 2 * n - 1);
    let inner = 2 * n - 2;
    let mut h1 = Mat::zero(size);
    let mut h2 = Mat::zero(size);
    let mut h3 = Mat::zero(size);
    for k in (0..inner).step_by(2) {
        skew_pair(&mut h1, k, c1, f);
        skew_pair(&mut h2, k, c2, f);
    }
    for k in (1..inner).step_by(2) {
        skew_pair(&mut h3, k, c1, f);
    }
    if let Some(i0) = eta[..n - 1].iter().position(|&e| e != 0) {
        skew_pair(&mut h3, 2 * i0, c1, f);
    }
    vec![h1, h2, h3]
}

fn sp_h(n: usize, eta: &[u32], f: &Field) -> Vec<Mat> {
    let size = 2 * n;
    let last = n - 1;
    let minus = f.neg(1);
    let rest = eta[..last].iter().fold(0, |acc, &e| f.add(acc, e));
    let plus_case = f.add(eta[last], rest) != 0;
    let mut h1 = Mat::zero(size);
    let mut h2 = Mat::zero(size);
    let mut h3 = Mat::zero(size);
    for j in 0..last {
        h1.set(j, last, 1);
        h1.set(n + last, n + j, minus);
        h2.set(last, j, 1);
        h2.set(n + j, n + last, minus);
        h3.set(j, n + last, 1);
        h3.set(last, n + j, 1);
    }
    h3.set(last, n + last, 1);
    if !plus_case {
        h1.set(last, n + last, 1);
        h2.set(n + last, last, 1);
    }
    vec![h1, h2, h3]
}

fn embed_top_left(m: &Mat, size: usize) -> Mat {
    let mut out = Mat::zero(size);
    for i in 0..m.n() {
        for j in 0..m.n() {
            out.set(i, j, m.get(i, j));
        }
    }
    out
}

fn mask(m: &Mat, keep: &[bool]) -> Mat {
    let mut out = m.clone();
    for i in 0..m.n() {
        for j in 0..m.n() {
            if !keep[i] || !keep[j] {
                out.set(i, j, 0);
            }
        }
    }
    out
}

/// Indices kept by the embedded smaller algebra used for random slots.
fn subalgebra_support(spec: &GroupSpec) -> Vec<bool> {
    let size = spec.size;
    let n = spec.rank as usize;
    match spec.family {
        Family::Sl => vec![true; size],
        Family::SoEven | Family::SoOdd => (0..size).map(|i| i < 2 * n - 2).collect(),
        Family::Sp => (0..size).map(|i| i != n - 1 && i != 2 * n - 1).collect(),
    }
}

fn image(mode: CertMode, g: &Mat, ginv: Option<&Mat>, x: &Mat, f: &Field) -> Mat {
    match mode {
        CertMode::LieBracket => g.bracket(x, f),
        CertMode::Adjoint => g.mul(x, f).mul(ginv.expect("adjoint needs an inverse"), f),
    }
}

fn images(mode: CertMode, g: &Mat, basis: &[Mat], f: &Field) -> Vec<Vec<u32>> {
    let ginv = match mode {
        CertMode::Adjoint => Some(g.inverse(f).expect("group element")),
        CertMode::LieBracket => None,
    };
    basis
        .iter()
        .map(|b| image(mode, g, ginv.as_ref(), b, f).codes().to_vec())
        .collect()
}

fn try_extend(echelon: &RowEchelon, rows: &[Vec<u32>], f: &Field) -> Option<RowEchelon> {
    let mut next = echelon.clone();
    rows.iter().all(|r| next.insert(r, f)).then_some(next)
}

/// Stacks `t` and all witness images and returns the exact rank.
pub fn stacked_rank(mode: CertMode, basis: &[Mat], witnesses: &[Mat], f: &Field) -> usize {
    let mut rows: Vec<Vec<u32>> = basis.iter().map(|b| b.codes().to_vec()).collect();
    for g in witnesses {
        rows.extend(images(mode, g, basis, f));
    }
    matrix::rank(&rows, f)
}

/// Builds and certifies a witness tuple for a non-maximal torus.
pub fn rank_certificate(
    t: &TorusSpec,
    f: &Field,
    mode: CertMode,
    seed: u64,
) -> Result<IndependenceCertificate, TorusLabError> {
    require_nonmaximal(t)?;
    let spec = &t.spec;
    let reduced = TorusSpec::canonical(spec, character_reduce(&t.eta, f.p())?)?;
    let hypotheses = match mode {
        CertMode::LieBracket => {
            lie_characteristic_ok(spec, f)?;
            None
        }
        CertMode::Adjoint => {
            if spec.rank < 2 {
                return Err(TorusLabError::HypothesisFailed(format!(
                    "rank {} is below 2",
                    spec.rank
                )));
            }
            Some(groups::hypotheses_ok(spec, u64::from(f.q()), Theorem::Torus))
        }
    };
    let basis = groups::canonical_torus_lie_basis(&reduced, f)?;
    let dim = basis.len();
    let ell = spec.ell as usize;
    let target = (ell + 1) * dim;

    let explicit = match (mode, spec.family) {
        (CertMode::LieBracket, Family::SoEven | Family::SoOdd | Family::Sp) => explicit_h_matrices(&reduced, f)?,
        _ => Vec::new(),
    };
    let support = subalgebra_support(spec);
    let width = spec.size * spec.size;
    let mut base = RowEchelon::new(width);
    for b in &basis {
        base.insert(b.codes(), f);
    }
    for h in &explicit {
        base = try_extend(&base, &images(mode, h, &basis, f), f).ok_or(TorusLabError::RankDeficient {
            achieved: base.rank(),
            target,
            attempts: 0,
        })?;
    }

    let slots = ell - explicit.len();
    let mut best = base.rank();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng::stream(seed, attempt);
        let mut echelon = base.clone();
        let mut drawn = Vec::with_capacity(slots);
        'slots: for _ in 0..slots {
            for _ in 0..DRAWS_PER_SLOT {
                let g = match mode {
                    CertMode::LieBracket => mask(&groups::random_lie_element(spec, f, &mut rng), &support),
                    CertMode::Adjoint => groups::random_element(spec, f, &mut rng),
                };
                if let Some(next) = try_extend(&echelon, &images(mode, &g, &basis, f), f) {
                    echelon = next;
                    drawn.push(g);
                    continue 'slots;
                }
            }
            break;
        }
        best = best.max(echelon.rank());
        if drawn.len() == slots {
            let mut witnesses = explicit.clone();
            let explicit_count = witnesses.len();
            witnesses.extend(drawn);
            let achieved_rank = stacked_rank(mode, &basis, &witnesses, f);
            if achieved_rank != target {
                return Err(TorusLabError::RankDeficient {
                    achieved: achieved_rank,
                    target,
                    attempts: attempt + 1,
                });
            }
            return Ok(IndependenceCertificate {
                spec: spec.clone(),
                torus: reduced,
                mode,
                witnesses,
                explicit_count,
                achieved_rank,
                target_rank: target,
                seed,
                attempts: attempt + 1,
                hypotheses,
            });
        }
    }
    Err(TorusLabError::RankDeficient {
        achieved: best,
        target,
        attempts: MAX_ATTEMPTS,
    })
}

/// Reads the torus coordinates back out of `[h₁,t₁] + [h₂,t₂] + [h₃,t₃]`
/// for the even orthogonal torus cut out by `a_n = 0`.
pub fn so_even_reconstruct(x: &Mat, n: usize, f: &Field) -> [Vec<u32>; 3] {
    let (c1, c2) = (2 * n - 2, 2 * n - 1);
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..n - 1 {
        out[0].push(x.get(2 * i + 1, c1));
        out[1].push(x.get(2 * i + 1, c2));
        out[2].push(f.neg(x.get(2 * i, c1)));
    }
    out
}

/// Random point of the torus Lie algebra with the given coordinate basis.
pub fn random_torus_coords<R: Rng>(basis: &[Vec<u32>], f: &Field, rng: &mut R) -> Vec<u32> {
    let k = basis.first().map_or(0, Vec::len);
    let mut a = vec![0u32; k];
    for b in basis {
        let c = rng.gen_range(0..f.q());
        for (x, &y) in a.iter_mut().zip(b) {
            *x = f.add(*x, f.mul(c, y));
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(family: Family, n: u32, eta: Vec<i64>) -> TorusSpec {
        TorusSpec::canonical(&GroupSpec::toy(family, n), eta).unwrap()
    }

    #[test]
    fn character_reduce_examples() {
        assert_eq!(character_reduce(&[5, 10, 15], 5).unwrap(), vec![1, 2, 3]);
        assert_eq!(character_reduce(&[1, 2], 7).unwrap(), vec![1, 2]);
        assert_eq!(character_reduce(&[0, 0], 3), Err(TorusLabError::ZeroEta));
        assert_eq!(character_reduce(&[0, 75], 5).unwrap(), vec![0, 3]);
    }

    fn kernel(eta: &[i64], f: &Field) -> Vec<Vec<u32>> {
        let units: Vec<u32> = (1..f.q()).collect();
        let mut out = Vec::new();
        let k = eta.len();
        let mut idx = vec![0usize; k];
        loop {
            let x: Vec<u32> = idx.iter().map(|&i| units[i]).collect();
            let mut val = 1u32;
            for (&xi, &e) in x.iter().zip(eta) {
                let base = if e < 0 { f.inv(xi).unwrap() } else { xi };
                val = f.mul(val, f.pow(base, e.unsigned_abs()));
            }
            if val == 1 {
                out.push(x);
            }
            let mut c = 0;
            while c < k {
                idx[c] += 1;
                if idx[c] < units.len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
            if c == k {
                return out;
            }
        }
    }

    #[test]
    fn character_reduce_preserves_kernel() {
        for (q, eta) in [
            (5u32, vec![5i64, 10, 15]),
            (9, vec![3, -6]),
            (7, vec![14, 49]),
            (3, vec![9, 0]),
        ] {
            let f = Field::of_order(u64::from(q)).unwrap();
            let reduced = character_reduce(&eta, f.p()).unwrap();
            assert!(reduced.iter().any(|&e| e % i64::from(f.p()) != 0));
            assert_eq!(kernel(&eta, &f), kernel(&reduced, &f), "q={q} eta={eta:?}");
        }
    }

    #[test]
    fn explicit_matrices_lie_in_algebra_and_have_expected_support() {
        let f = Field::prime(11).unwrap();
        let t = torus(Family::SoOdd, 3, vec![0, 0, 1]);
        let hs = explicit_h_matrices(&t, &f).unwrap();
        assert_eq!(hs.len(), 5);
        for h in &hs[3..] {
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(h.get(i, j), 0);
                }
            }
        }
        for h in &hs {
            assert!(groups::is_lie_member(h, &t.spec, &f).unwrap());
        }
        let sp = torus(Family::Sp, 2, vec![0, 1]);
        let f7 = Field::prime(7).unwrap();
        let hs = explicit_h_matrices(&sp, &f7).unwrap();
        assert_eq!(hs.len(), 3);
        assert_eq!(
            hs[2].format(&f7),
            Mat::from_ints(4, &[0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0], &f7)
                .unwrap()
                .format(&f7)
        );
        for h in &hs {
            assert!(groups::is_lie_member(h, &sp.spec, &f7).unwrap());
        }
        let sl = torus(Family::Sl, 3, vec![1, 1, 1]);
        assert_eq!(
            explicit_h_matrices(&sl, &f7),
            Err(TorusLabError::FamilyNotSupported("SL"))
        );
    }

    #[test]
    fn sp_second_case_adds_corner_entries() {
        let f = Field::prime(7).unwrap();
        let t = torus(Family::Sp, 3, vec![1, 1, 5]);
        let hs = explicit_h_matrices(&t, &f).unwrap();
        assert_eq!(hs[0].get(2, 5), 1);
        assert_eq!(hs[1].get(5, 2), 1);
        let plus = torus(Family::Sp, 3, vec![1, 1, 1]);
        let hs = explicit_h_matrices(&plus, &f).unwrap();
        assert_eq!(hs[0].get(2, 5), 0);
        for h in &hs {
            assert!(groups::is_lie_member(h, &plus.spec, &f).unwrap());
        }
    }

    #[test]
    fn so_even_reconstruction_round_trip() {
        for (n, p) in [(2u32, 5u32), (3, 7), (4, 11)] {
            let f = Field::prime(u64::from(p)).unwrap();
            let mut eta = vec![0i64; n as usize];
            eta[n as usize - 1] = 1;
            let t = torus(Family::SoEven, n, eta);
            let hs = explicit_h_matrices(&t, &f).unwrap();
            let basis = groups::torus_coordinate_basis(&t, &f).unwrap();
            let mut rng = rng::stream(3, u64::from(n));
            for _ in 0..20 {
                let coords: Vec<Vec<u32>> = (0..3).map(|_| random_torus_coords(&basis, &f, &mut rng)).collect();
                let mut x = Mat::zero(t.spec.size);
                for (h, a) in hs.iter().zip(&coords) {
                    x = x.add(&h.bracket(&groups::torus_lie_element(&t.spec, a, &f), &f), &f);
                }
                let got = so_even_reconstruct(&x, n as usize, &f);
                for j in 0..3 {
                    assert_eq!(got[j], coords[j][..n as usize - 1].to_vec());
                }
            }
        }
    }

    #[test]
    fn sp4_rank_six() {
        let f = Field::prime(7).unwrap();
        let t = torus(Family::Sp, 2, vec![0, 1]);
        let cert = rank_certificate(&t, &f, CertMode::LieBracket, 1).unwrap();
        assert_eq!(cert.achieved_rank, 6);
        assert_eq!(cert.witnesses.len(), 5);
        assert_eq!(cert.explicit_count, 3);
    }

    #[test]
    fn so7_rank_sixteen() {
        let f = Field::prime(11).unwrap();
        let t = torus(Family::SoOdd, 3, vec![0, 0, 1]);
        let cert = rank_certificate(&t, &f, CertMode::LieBracket, 1).unwrap();
        assert_eq!(cert.achieved_rank, 16);
        assert_eq!(
            stacked_rank(
                cert.mode,
                &groups::canonical_torus_lie_basis(&t, &f).unwrap(),
                &cert.witnesses,
                &f
            ),
            16
        );
    }

    #[test]
    fn all_families_certify() {
        let cases = [
            (Family::Sl, 3u32, vec![1i64, 2, 3], 11u32),
            (Family::Sl, 4, vec![0, 1, 0, 1], 7),
            (Family::SoEven, 3, vec![1, 2, 1], 11),
            (Family::SoEven, 4, vec![0, 0, 0, 1], 11),
            (Family::SoOdd, 3, vec![1, 2, 1], 11),
            (Family::Sp, 3, vec![1, 1, 5], 7),
            (Family::Sp, 3, vec![2, 0, 1], 11),
        ];
        for (family, n, eta, p) in cases {
            let f = Field::prime(u64::from(p)).unwrap();
            let t = torus(family, n, eta);
            for mode in [CertMode::LieBracket, CertMode::Adjoint] {
                let cert = rank_certificate(&t, &f, mode, 5).unwrap();
                assert!(cert.is_full(), "{} {:?}", t.spec.label(), mode);
                assert_eq!(cert.witnesses.len(), t.spec.ell as usize);
                assert_eq!(cert.target_rank, (t.spec.ell as usize + 1) * t.dim());
            }
        }
    }

    #[test]
    fn certificates_are_reproducible() {
        let f = Field::prime(7).unwrap();
        let t = torus(Family::Sp, 2, vec![0, 1]);
        let a = rank_certificate(&t, &f, CertMode::Adjoint, 9).unwrap();
        let b = rank_certificate(&t, &f, CertMode::Adjoint, 9).unwrap();
        assert_eq!(a.witnesses, b.witnesses);
        assert!(!a.hypotheses.unwrap().passed());
    }

    #[test]
    fn rejects_maximal_torus_and_bad_characteristic() {
        let f = Field::prime(7).unwrap();
        let spec = GroupSpec::toy(Family::Sp, 2);
        let max = TorusSpec::maximal(&spec);
        assert_eq!(
            rank_certificate(&max, &f, CertMode::LieBracket, 0).unwrap_err(),
            TorusLabError::MaximalTorus
        );
        assert!((spec.ell + 1) * spec.rank > spec.dim);
        let so7 = torus(Family::SoOdd, 3, vec![0, 0, 1]);
        assert!(matches!(
            rank_certificate(&so7, &f, CertMode::LieBracket, 0),
            Err(TorusLabError::HypothesisFailed(_))
        ));
    }
}
