//! Brute-force point counts over 𝔽_p and 𝔽_{p²} for the curve families used as
//! independent oracles, and the Igusa–Clebsch identity.

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charsum::snap_tolerance;
use crate::error::{Error, Result};
use crate::field::{Fp2, PrimeField, QuadExtField};
use crate::hgm::Q;

/// The operations point counting needs from 𝔽_p or 𝔽_{p²}.
#[allow(clippy::wrong_self_convention)]
pub trait FiniteField {
    type El: Copy + Eq + Debug;
    fn characteristic(&self) -> u64;
    fn size(&self) -> u64;
    fn from_i64(&self, x: i64) -> Self::El;
    fn add(&self, a: Self::El, b: Self::El) -> Self::El;
    fn sub(&self, a: Self::El, b: Self::El) -> Self::El;
    fn mul(&self, a: Self::El, b: Self::El) -> Self::El;
    fn pow(&self, a: Self::El, e: u64) -> Self::El;
    fn inv(&self, a: Self::El) -> Option<Self::El>;
    fn quad_char(&self, a: Self::El) -> i8;
    fn all(&self) -> Vec<Self::El>;

    fn zero(&self) -> Self::El {
        self.from_i64(0)
    }
    fn one(&self) -> Self::El {
        self.from_i64(1)
    }
    fn is_zero(&self, a: Self::El) -> bool {
        a == self.zero()
    }
    /// #{y : y^n = c}.
    fn nth_roots(&self, n: u64, c: Self::El) -> u64 {
        if self.is_zero(c) {
            return 1;
        }
        let d = n.gcd(&(self.size() - 1));
        if self.pow(c, (self.size() - 1) / d) == self.one() {
            d
        } else {
            0
        }
    }
}

impl FiniteField for PrimeField {
    type El = u64;
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn size(&self) -> u64 {
        self.p()
    }
    fn from_i64(&self, x: i64) -> u64 {
        self.reduce(x)
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        PrimeField::add(self, a, b)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        PrimeField::sub(self, a, b)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        PrimeField::mul(self, a, b)
    }
    fn pow(&self, a: u64, e: u64) -> u64 {
        PrimeField::pow(self, a, e)
    }
    fn inv(&self, a: u64) -> Option<u64> {
        PrimeField::inv(self, a)
    }
    fn quad_char(&self, a: u64) -> i8 {
        self.legendre(a as i64)
    }
    fn all(&self) -> Vec<u64> {
        self.elements().collect()
    }
}

impl FiniteField for QuadExtField {
    type El = Fp2;
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn size(&self) -> u64 {
        QuadExtField::size(self)
    }
    fn from_i64(&self, x: i64) -> Fp2 {
        (self.base().reduce(x), 0)
    }
    fn add(&self, a: Fp2, b: Fp2) -> Fp2 {
        QuadExtField::add(self, a, b)
    }
    fn sub(&self, a: Fp2, b: Fp2) -> Fp2 {
        QuadExtField::sub(self, a, b)
    }
    fn mul(&self, a: Fp2, b: Fp2) -> Fp2 {
        QuadExtField::mul(self, a, b)
    }
    fn pow(&self, a: Fp2, e: u64) -> Fp2 {
        QuadExtField::pow(self, a, e)
    }
    fn inv(&self, a: Fp2) -> Option<Fp2> {
        QuadExtField::inv(self, a)
    }
    fn quad_char(&self, a: Fp2) -> i8 {
        self.legendre(a)
    }
    fn all(&self) -> Vec<Fp2> {
        self.elements().collect()
    }
}

/// Horner evaluation; coefficients from the leading one down.
pub fn poly_eval<K: FiniteField>(k: &K, f: &[K::El], x: K::El) -> K::El {
    f.iter().fold(k.zero(), |acc, &c| k.add(k.mul(acc, x), c))
}

fn poly_trim<K: FiniteField>(k: &K, f: &[K::El]) -> Vec<K::El> {
    let i = f.iter().position(|&c| !k.is_zero(c)).unwrap_or(f.len());
    f[i..].to_vec()
}

fn poly_rem<K: FiniteField>(k: &K, a: &[K::El], b: &[K::El]) -> Vec<K::El> {
    let b = poly_trim(k, b);
    let mut r = poly_trim(k, a);
    let lead_inv = k.inv(b[0]).expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let c = k.mul(r[0], lead_inv);
        for (i, &bi) in b.iter().enumerate() {
            r[i] = k.sub(r[i], k.mul(c, bi));
        }
        r = poly_trim(k, &r);
    }
    r
}

/// Degree of gcd(f, f') is 0.
pub fn is_squarefree<K: FiniteField>(k: &K, f: &[K::El]) -> bool {
    let f = poly_trim(k, f);
    if f.len() <= 1 {
        return f.len() == 1;
    }
    let deg = f.len() - 1;
    let df: Vec<K::El> = f[..deg]
        .iter()
        .enumerate()
        .map(|(i, &c)| k.mul(c, k.from_i64((deg - i) as i64)))
        .collect();
    let df = poly_trim(k, &df);
    if df.is_empty() {
        return false;
    }
    let (mut a, mut b) = (f, df);
    while !b.is_empty() {
        let r = poly_rem(k, &a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// y² = f(x), f of degree 5 or 6, smooth completion.
pub fn count_hyperelliptic<K: FiniteField>(k: &K, f: &[K::El]) -> i64 {
    let f = poly_trim(k, f);
    let mut n: i64 = k
        .all()
        .into_iter()
        .map(|x| 1 + k.quad_char(poly_eval(k, &f, x)) as i64)
        .sum();
    let deg = f.len().saturating_sub(1);
    n += if deg % 2 == 1 { 1 } else { 1 + k.quad_char(f[0]) as i64 };
    n
}

/// y^N = Π(x − r)^m with distinct roots, on the smooth projective model.
fn count_superelliptic<K: FiniteField>(k: &K, n: u64, roots: &[(K::El, u64)]) -> i64 {
    let roots: Vec<(K::El, u64)> = roots.iter().copied().filter(|r| r.1 > 0).collect();
    let f = |x: K::El| {
        roots
            .iter()
            .fold(k.one(), |acc, &(r, m)| k.mul(acc, k.pow(k.sub(x, r), m)))
    };
    let mut total = 0i64;
    for x in k.all() {
        match roots.iter().position(|&(r, _)| r == x) {
            None => total += k.nth_roots(n, f(x)) as i64,
            Some(i) => {
                let (r, m) = roots[i];
                let c = roots
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(k.one(), |acc, (_, &(s, e))| k.mul(acc, k.pow(k.sub(r, s), e)));
                total += k.nth_roots(n.gcd(&m), c) as i64;
            }
        }
    }
    let deg: u64 = roots.iter().map(|r| r.1).sum();
    total + k.nth_roots(n.gcd(&deg), k.one()) as i64
}

/// The curve families of the oracle layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CurveSpec {
    /// y² = x(x−1)(x−λ)
    Legendre { lambda: i64 },
    /// y² + xy = x³ − (36x + 1)/(j − 1728)
    UniversalJ { j: i64 },
    /// y² = (1 − σ²x²)(1 − x²/σ²)
    JacobiQuartic { sigma: i64 },
    /// x³ + y³ + z³ = 3μxyz
    Hesse { mu: i64 },
    /// y^N = x^a (x−1)^b (x−λ)^c
    GenLegendre {
        n: u64,
        a: u64,
        b: u64,
        c: u64,
        lambda: i64,
    },
    /// y³ = x(x−1)(x−λ)(x−(1−λ))
    PicardSub { lambda: i64 },
    /// The genus-2 sextic with s = ±√(−6j); `branch` picks the sign of s.
    BabaGranath { j: i64, branch: i8 },
    /// x² + 3y² + z² = 0
    ConicX6,
}

impl CurveSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            CurveSpec::Legendre { .. } => "legendre",
            CurveSpec::UniversalJ { .. } => "universal_j",
            CurveSpec::JacobiQuartic { .. } => "jacobi_quartic",
            CurveSpec::Hesse { .. } => "hesse",
            CurveSpec::GenLegendre { .. } => "genlegendre",
            CurveSpec::PicardSub { .. } => "picard_sub",
            CurveSpec::BabaGranath { .. } => "baba_granath",
            CurveSpec::ConicX6 => "conic_x6",
        }
    }

    pub fn params(&self) -> String {
        match self {
            CurveSpec::Legendre { lambda } | CurveSpec::PicardSub { lambda } => format!("lambda={lambda}"),
            CurveSpec::UniversalJ { j } => format!("j={j}"),
            CurveSpec::JacobiQuartic { sigma } => format!("sigma={sigma}"),
            CurveSpec::Hesse { mu } => format!("mu={mu}"),
            CurveSpec::GenLegendre { n, a, b, c, lambda } => format!("N={n};a={a};b={b};c={c};lambda={lambda}"),
            CurveSpec::BabaGranath { j, branch } => format!("j={j};branch={branch}"),
            CurveSpec::ConicX6 => String::new(),
        }
    }
}

/// A projective point count; `trace` is always q + 1 − n_points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCount {
    pub curve: String,
    pub params: String,
    pub p: u64,
    pub q: u64,
    pub n_points: i64,
    pub trace: i64,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CountOutcome {
    Good(CurveCount),
    BadReduction {
        curve: String,
        params: String,
        p: u64,
        factor: String,
    },
}

impl CountOutcome {
    pub fn good(&self) -> Option<&CurveCount> {
        match self {
            CountOutcome::Good(c) => Some(c),
            CountOutcome::BadReduction { .. } => None,
        }
    }

    pub fn n_points(&self) -> Option<i64> {
        self.good().map(|c| c.n_points)
    }

    pub fn trace(&self) -> Option<i64> {
        self.good().map(|c| c.trace)
    }
}

/// Field choice for [`count_points`].
#[derive(Debug, Clone, Copy)]
pub enum FieldRef<'a> {
    Prime(&'a PrimeField),
    Quad(&'a QuadExtField),
}

pub fn count_points(spec: &CurveSpec, field: FieldRef<'_>) -> Result<CountOutcome> {
    if let CurveSpec::BabaGranath { j, branch } = *spec {
        return count_baba_granath(spec, j, branch, field);
    }
    match field {
        FieldRef::Prime(k) => count_generic(spec, k, k),
        FieldRef::Quad(k) => count_generic(spec, k, k.base()),
    }
}

fn count_baba_granath(spec: &CurveSpec, j: i64, branch: i8, field: FieldRef<'_>) -> Result<CountOutcome> {
    let base = match field {
        FieldRef::Prime(k) => k,
        FieldRef::Quad(k) => k.base(),
    };
    let curve = baba_granath_curve(j, branch, base)?;
    if let Some(reason) = curve.bad_reduction {
        return Ok(CountOutcome::BadReduction {
            curve: spec.tag().into(),
            params: spec.params(),
            p: base.p(),
            factor: reason,
        });
    }
    let (n_points, q) = match field {
        FieldRef::Prime(k) => {
            if !curve.rational {
                return Err(Error::InvalidParameter(
                    "-6j is not a square mod p: the sextic is only defined over F_{p^2}".into(),
                ));
            }
            let f: Vec<u64> = curve.coeffs.iter().map(|c| c.0).collect();
            (count_hyperelliptic(k, &f), k.p())
        }
        FieldRef::Quad(k) => (count_hyperelliptic(k, &curve.coeffs), k.size()),
    };
    Ok(CountOutcome::Good(CurveCount {
        curve: spec.tag().into(),
        params: spec.params(),
        p: base.p(),
        q,
        n_points,
        trace: q as i64 + 1 - n_points,
        flags: curve.flags,
    }))
}

fn count_generic<K: FiniteField>(spec: &CurveSpec, k: &K, base: &PrimeField) -> Result<CountOutcome> {
    let p = base.p();
    let bad = |factor: String| {
        Ok(CountOutcome::BadReduction {
            curve: spec.tag().into(),
            params: spec.params(),
            p,
            factor,
        })
    };
    let c = |x: i64| k.from_i64(x);
    let mut flags = Vec::new();
    let n_points: i64 = match *spec {
        CurveSpec::Legendre { lambda } => {
            let l = base.reduce(lambda);
            if l == 0 || l == 1 {
                return bad("lambda(1-lambda) = 0".into());
            }
            let f = [c(1), k.sub(c(0), c(lambda + 1)), c(lambda), c(0)];
            count_hyperelliptic(k, &f)
        }
        CurveSpec::UniversalJ { j } => {
            if p < 5 {
                return Err(Error::InvalidParameter("universal curve needs p >= 5".into()));
            }
            let jr = base.reduce(j);
            if jr == 0 {
                return bad("j = 0".into());
            }
            if jr == base.reduce(1728) {
                return bad("j - 1728 = 0".into());
            }
            let cc = k.inv(c(j - 1728)).expect("j != 1728");
            let mut n = 1i64;
            for x in k.all() {
                let rhs = k.sub(k.pow(x, 3), k.add(k.mul(c(36), k.mul(cc, x)), cc));
                let disc = k.add(k.mul(x, x), k.mul(c(4), rhs));
                n += 1 + k.quad_char(disc) as i64;
            }
            n
        }
        CurveSpec::JacobiQuartic { sigma } => {
            let s = base.reduce(sigma);
            if p <= 3 || s == 0 || base.pow(s, 4) == 1 {
                return bad("sigma(sigma^4 - 1) = 0".into());
            }
            let s2 = c(sigma * sigma % p as i64);
            let si2 = k.inv(s2).expect("sigma != 0");
            let n: i64 = k
                .all()
                .into_iter()
                .map(|x| {
                    let x2 = k.mul(x, x);
                    let f = k.mul(k.sub(k.one(), k.mul(s2, x2)), k.sub(k.one(), k.mul(x2, si2)));
                    1 + k.quad_char(f) as i64
                })
                .sum();
            n + 2
        }
        CurveSpec::Hesse { mu } => {
            let m = base.reduce(mu);
            if p == 3 {
                return Err(Error::InvalidParameter("Hesse family needs p != 3".into()));
            }
            if base.pow(m, 3) == 1 {
                return bad("mu^3 = 1".into());
            }
            let m3 = k.mul(c(3), c(mu));
            let h = |x: K::El, y: K::El, z: K::El| {
                let s = k.add(k.add(k.pow(x, 3), k.pow(y, 3)), k.pow(z, 3));
                k.sub(s, k.mul(m3, k.mul(x, k.mul(y, z))))
            };
            let all = k.all();
            let mut n = 0i64;
            for &x in &all {
                for &y in &all {
                    if k.is_zero(h(x, y, k.one())) {
                        n += 1;
                    }
                }
                if k.is_zero(h(x, k.one(), k.zero())) {
                    n += 1;
                }
            }
            n + k.is_zero(h(k.one(), k.zero(), k.zero())) as i64
        }
        CurveSpec::GenLegendre { n, a, b, c: cc, lambda } => {
            if n == 0 || n % p == 0 {
                return Err(Error::InvalidParameter(format!("p must not divide N = {n}")));
            }
            let l = base.reduce(lambda);
            if l == 0 || l == 1 {
                return bad("lambda(1-lambda) = 0".into());
            }
            count_superelliptic(k, n, &[(c(0), a), (c(1), b), (c(lambda), cc)])
        }
        CurveSpec::PicardSub { lambda } => {
            if p == 3 {
                return Err(Error::InvalidParameter("Picard family needs p != 3".into()));
            }
            let l = base.reduce(lambda);
            if l == 0 || l == 1 || base.mul(2, l) == 1 {
                return bad("roots 0, 1, lambda, 1-lambda not distinct".into());
            }
            flags.push("exploratory: full genus-3 count only".into());
            count_superelliptic(k, 3, &[(c(0), 1), (c(1), 1), (c(lambda), 1), (c(1 - lambda), 1)])
        }
        CurveSpec::BabaGranath { .. } => unreachable!("handled in count_points"),
        CurveSpec::ConicX6 => {
            if p <= 3 {
                return Err(Error::InvalidParameter("conic needs p > 3".into()));
            }
            let f = |x: K::El, y: K::El, z: K::El| k.add(k.add(k.mul(x, x), k.mul(c(3), k.mul(y, y))), k.mul(z, z));
            let all = k.all();
            let mut n = 0i64;
            for &x in &all {
                for &y in &all {
                    n += k.is_zero(f(x, y, k.one())) as i64;
                }
                n += k.is_zero(f(x, k.one(), k.zero())) as i64;
            }
            n + k.is_zero(f(k.one(), k.zero(), k.zero())) as i64
        }
    };
    let q = k.size();
    Ok(CountOutcome::Good(CurveCount {
        curve: spec.tag().into(),
        params: spec.params(),
        p,
        q,
        n_points,
        trace: q as i64 + 1 - n_points,
        flags,
    }))
}

/// Projective count of x² + 3y² + z² = 0 over 𝔽_p.
pub fn conic_points(ctx: &PrimeField) -> Result<i64> {
    count_points(&CurveSpec::ConicX6, FieldRef::Prime(ctx)).map(|o| o.n_points().unwrap_or(0))
}

/// Character decomposition of a generalized Legendre count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterCount {
    pub p: u64,
    /// Σ_x χ^k(f(x)) for k = 0..N−1, χ of exact order N (x with f(x) ≠ 0).
    pub eigen_sums: Vec<[f64; 2]>,
    /// Affine points over the roots of f (one each) plus Σ_k of the sums.
    pub affine: i64,
    /// Smooth-model correction at the roots of f and at infinity.
    pub completion: i64,
    pub total: i64,
    /// −Σ over primitive k of the eigen sums.
    pub new_part_trace: i64,
}

pub fn count_via_characters(spec: &CurveSpec, ctx: &PrimeField) -> Result<CharacterCount> {
    let CurveSpec::GenLegendre { n, a, b, c, lambda } = *spec else {
        return Err(Error::InvalidParameter(
            "character decomposition needs a GenLegendre curve".into(),
        ));
    };
    let p = ctx.p();
    if n == 0 || !(p - 1).is_multiple_of(n) {
        return Err(Error::Congruence { p, modulus: n });
    }
    if n > 1 && [a, b, c, a + b + c].iter().any(|e| e % n == 0) {
        return Err(Error::InvalidParameter("N divides one of a, b, c, a+b+c".into()));
    }
    let l = ctx.reduce(lambda);
    if l == 0 || l == 1 {
        return Err(Error::BadReduction("lambda(1-lambda) = 0".into()));
    }
    let chi = ctx.char(((p - 1) / n) as i64);
    let roots = [(0u64, a), (1u64, b), (l, c)];
    let f = |x: u64| {
        roots
            .iter()
            .fold(1u64, |acc, &(r, m)| ctx.mul(acc, ctx.pow(ctx.sub(x, r), m)))
    };
    let mut sums = vec![Complex64::new(0.0, 0.0); n as usize];
    let mut root_points = 0i64;
    for x in ctx.elements() {
        let v = f(x);
        if v == 0 {
            root_points += 1;
            continue;
        }
        for (kk, s) in sums.iter_mut().enumerate() {
            *s += ctx.eval(chi.pow(kk as i64), v);
        }
    }
    let tol = snap_tolerance(p, n as usize);
    let snap = |z: Complex64| -> Result<i64> {
        let r = z.re.round();
        if (z.re - r).abs() < tol && z.im.abs() < tol {
            Ok(r as i64)
        } else {
            Err(Error::Snap {
                re: z.re,
                im: z.im,
                tol,
            })
        }
    };
    let affine = root_points + snap(sums.iter().sum())?;
    let new: Complex64 = sums
        .iter()
        .enumerate()
        .filter(|(kk, _)| (*kk as u64).gcd(&n) == 1)
        .map(|(_, s)| *s)
        .sum();
    // Replace the single affine point over each root by its branches, add ∞.
    let mut completion = -root_points;
    for (i, &(r, m)) in roots.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let other = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(1u64, |acc, (_, &(s, e))| ctx.mul(acc, ctx.pow(ctx.sub(r, s), e)));
        completion += ctx.nth_roots(n.gcd(&m), other) as i64;
    }
    completion += ctx.nth_roots(n.gcd(&(a + b + c)), 1) as i64;
    Ok(CharacterCount {
        p,
        eigen_sums: sums.iter().map(|z| [z.re, z.im]).collect(),
        affine,
        completion,
        total: affine + completion,
        new_part_trace: -snap(new)?,
    })
}

/// Affine count of y^N = f(x) by enumerating both coordinates.
pub fn brute_affine_genlegendre(ctx: &PrimeField, n: u64, a: u64, b: u64, c: u64, lambda: i64) -> i64 {
    let l = ctx.reduce(lambda);
    let powers: Vec<u64> = ctx.elements().map(|y| ctx.pow(y, n)).collect();
    let mut hist = vec![0i64; ctx.p() as usize];
    for v in powers {
        hist[v as usize] += 1;
    }
    ctx.elements()
        .map(|x| {
            let v = ctx.mul(
                ctx.mul(ctx.pow(x, a), ctx.pow(ctx.sub(x, 1), b)),
                ctx.pow(ctx.sub(x, l), c),
            );
            hist[v as usize]
        })
        .sum()
}

/// Legendre model y² = x(x−1)(x−λ) and the Jacobi quartic have equal counts
/// for λ = (σ + σ⁻¹)²/4.
pub fn jacobi_quartic_isomorphism_check(sigma: i64, ctx: &PrimeField) -> Result<bool> {
    let p = ctx.p();
    let s = ctx.reduce(sigma);
    if p <= 3 {
        return Err(Error::InvalidParameter("need p > 3".into()));
    }
    if s == 0 || ctx.pow(s, 4) == 1 {
        return Err(Error::BadReduction("sigma(sigma^4 - 1) = 0".into()));
    }
    let si = ctx.inv(s).expect("sigma != 0");
    let sum = ctx.add(s, si);
    let lambda = ctx.mul(ctx.mul(sum, sum), ctx.inv(4).expect("p odd"));
    let quartic = count_points(&CurveSpec::JacobiQuartic { sigma }, FieldRef::Prime(ctx))?;
    let legendre = count_points(&CurveSpec::Legendre { lambda: lambda as i64 }, FieldRef::Prime(ctx))?;
    match (quartic.n_points(), legendre.n_points()) {
        (Some(x), Some(y)) => Ok(x == y),
        _ => Err(Error::BadReduction(format!("lambda = {lambda} is degenerate"))),
    }
}

/// The Baba–Granath sextic over 𝔽_p or 𝔽_{p²}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BabaGranathCurve {
    pub j: u64,
    pub branch: i8,
    /// s as u + v√ν.
    pub s: Fp2,
    /// Coefficients of x⁶ … x⁰ as u + v√ν.
    pub coeffs: Vec<Fp2>,
    /// True when s (hence every coefficient) lies in 𝔽_p.
    pub rational: bool,
    pub bad_reduction: Option<String>,
    pub flags: Vec<String>,
}

/// f(x) = (−4+3s)x⁶ + 6tx⁵ + 3t(28+9s)x⁴ − 4t²x³ + 3t²(28−9s)x² + 6t³x − t³(4+3s),
/// s = ±√(−6j), t = −2(27j + 16).
pub fn baba_granath_curve(j: i64, branch: i8, ctx: &PrimeField) -> Result<BabaGranathCurve> {
    if ctx.p() <= 5 {
        return Err(Error::InvalidParameter("Baba-Granath curves need p > 5".into()));
    }
    let k = QuadExtField::new(Arc::new(ctx.clone()));
    let jr = ctx.reduce(j);
    let mut s = k.sqrt_base(ctx.reduce(-6 * jr as i64));
    if branch < 0 {
        s = k.neg(s);
    }
    let e = |x: i64| k.from_base(ctx.reduce(x));
    let t = e(-2 * (27 * jr as i64 + 16));
    let t2 = k.mul(t, t);
    let t3 = k.mul(t2, t);
    let coeffs = vec![
        k.add(e(-4), k.mul(e(3), s)),
        k.mul(e(6), t),
        k.mul(k.mul(e(3), t), k.add(e(28), k.mul(e(9), s))),
        k.mul(e(-4), t2),
        k.mul(k.mul(e(3), t2), k.sub(e(28), k.mul(e(9), s))),
        k.mul(e(6), t3),
        k.neg(k.mul(t3, k.add(e(4), k.mul(e(3), s)))),
    ];
    let rational = s.1 == 0;
    let mut flags = Vec::new();
    let mut bad = None;
    if jr == 0 {
        flags.push("j = 0: s = 0, CM point".into());
        bad = Some("j = 0 (s = 0)".into());
    }
    let trimmed = poly_trim(&k, &coeffs);
    if trimmed.len() < 6 {
        bad = Some(format!("degree {} < 5", trimmed.len().saturating_sub(1)));
    } else if !is_squarefree(&k, &coeffs) {
        bad.get_or_insert_with(|| "sextic not squarefree".into());
    }
    Ok(BabaGranathCurve {
        j: jr,
        branch: if branch < 0 { -1 } else { 1 },
        s,
        coeffs,
        rational,
        bad_reduction: bad,
        flags,
    })
}

/// Frobenius data of a genus-2 curve recovered from #C(𝔽_p) and #C(𝔽_{p²}).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmReport {
    pub p: u64,
    /// Characteristic polynomial x⁴ − s1x³ + s2x² − p·s1x + p².
    pub s1: i64,
    pub s2: i64,
    /// t with Frobenius polynomial (x² − tx + p)², when it exists.
    pub t: Option<i64>,
    pub pass: bool,
    /// Frobenius² has characteristic polynomial (x² − Tx + p²)².
    pub square_over_fp2: Option<i64>,
    /// s1 = 0 and 2p − s2 = d·m² with d | 6: (d, m).
    pub twisted: Option<(i64, i64)>,
}

pub fn qm_consistency(p: u64, n1: i64, n2: i64) -> QmReport {
    let pi = p as i64;
    let s1 = pi + 1 - n1;
    let sum_sq = pi * pi + 1 - n2;
    let s2 = if (s1 * s1 - sum_sq) % 2 == 0 {
        Some((s1 * s1 - sum_sq) / 2)
    } else {
        None
    };
    let t = (s1 % 2 == 0)
        .then_some(s1 / 2)
        .filter(|&t| n2 == pi * pi + 1 - 2 * (t * t - 2 * pi) && t * t <= 4 * pi);
    let s2v = s2.unwrap_or(i64::MIN);
    let square_over_fp2 = s2.and_then(|s2| {
        let e1 = s1 * s1 - 2 * s2;
        let e2 = s2 * s2 - 2 * pi * s1 * s1 + 2 * pi * pi;
        (e1 % 2 == 0 && e2 == (e1 / 2) * (e1 / 2) + 2 * pi * pi).then_some(e1 / 2)
    });
    let twisted = s2.filter(|_| s1 == 0).and_then(|s2| {
        let v = 2 * pi - s2;
        [1i64, 2, 3, 6].into_iter().find_map(|d| {
            if v < 0 || v % d != 0 {
                return None;
            }
            let m = isqrt(v / d);
            (m * m == v / d).then_some((d, m))
        })
    });
    QmReport {
        p,
        s1,
        s2: s2v,
        t,
        pass: t.is_some(),
        square_over_fp2,
        twisted,
    }
}

pub fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Igusa–Clebsch check for [A,B,C,D] = [j+1, j, j(1−j), j³].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IgusaClebschReport {
    pub ratio: BigRational,
    pub d2_over_b5: BigRational,
    pub holds: bool,
}

pub fn igusa_clebsch_identity(j: Q) -> Result<IgusaClebschReport> {
    let j = BigRational::new(BigInt::from(*j.numer()), BigInt::from(*j.denom()));
    let one = BigRational::one();
    let (a, b, c, d) = (&j + &one, j.clone(), &j * (&one - &j), &j * &j * &j);
    let den = &a * &b + &c;
    if b.is_zero() || den.is_zero() {
        return Err(Error::InvalidParameter("j = 0 makes B = 0 and AB + C = 0".into()));
    }
    let ratio = (&a * &b - &c) / den;
    let d2_over_b5 = (&d * &d) / (&b * &b * &b * &b * &b);
    let holds = ratio == j && d2_over_b5 == j;
    Ok(IgusaClebschReport {
        ratio,
        d2_over_b5,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgm::q;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn n(spec: CurveSpec, k: &PrimeField) -> Option<i64> {
        count_points(&spec, FieldRef::Prime(k)).unwrap().n_points()
    }

    #[test]
    fn legendre_examples() {
        let k = fp(7);
        let c = count_points(&CurveSpec::Legendre { lambda: 2 }, FieldRef::Prime(&k)).unwrap();
        assert_eq!(c.n_points(), Some(8));
        assert_eq!(c.trace(), Some(0));
        let bad = count_points(&CurveSpec::Legendre { lambda: 1 }, FieldRef::Prime(&k)).unwrap();
        assert!(matches!(bad, CountOutcome::BadReduction { .. }));
    }

    #[test]
    fn weil_bounds() {
        for p in [7u64, 11, 13, 17] {
            let k = fp(p);
            let ext = QuadExtField::new(Arc::new(k.clone()));
            for l in 2..p as i64 {
                for f in [FieldRef::Prime(&k), FieldRef::Quad(&ext)] {
                    let c = count_points(&CurveSpec::Legendre { lambda: l }, f).unwrap();
                    let c = c.good().unwrap();
                    assert!((c.trace * c.trace) as u64 <= 4 * c.q);
                }
            }
        }
    }

    #[test]
    fn fp2_count_matches_frobenius() {
        // #E(𝔽_{p²}) = p² + 1 − (a² − 2p)
        let k = fp(11);
        let ext = QuadExtField::new(Arc::new(k.clone()));
        for l in 2..11 {
            let a = count_points(&CurveSpec::Legendre { lambda: l }, FieldRef::Prime(&k))
                .unwrap()
                .trace()
                .unwrap();
            let n2 = count_points(&CurveSpec::Legendre { lambda: l }, FieldRef::Quad(&ext))
                .unwrap()
                .n_points()
                .unwrap();
            assert_eq!(n2, 121 + 1 - (a * a - 22));
        }
    }

    #[test]
    fn universal_j_has_right_j_invariant() {
        // b2 = 1, b4 = a4, b6 = 4a6, c4 = b2² − 24b4, j = c4³/Δ.
        for p in [11u64, 13, 17] {
            let k = fp(p);
            for j in 1..p as i64 {
                let c = count_points(&CurveSpec::UniversalJ { j }, FieldRef::Prime(&k)).unwrap();
                if k.reduce(j) == k.reduce(1728) {
                    assert!(c.good().is_none());
                    continue;
                }
                let cc = k.inv(k.reduce(j - 1728)).unwrap();
                let a4 = k.neg(k.mul(36, cc));
                let a6 = k.neg(cc);
                let b8 = k.sub(k.mul(1, a6), k.mul(a4, a4));
                let (b2, b4, b6) = (1u64, k.mul(2, a4), k.mul(4, a6));
                let disc = {
                    let t1 = k.neg(k.mul(k.mul(b2, b2), b8));
                    let t2 = k.neg(k.mul(8, k.pow(b4, 3)));
                    let t3 = k.neg(k.mul(27, k.mul(b6, b6)));
                    let t4 = k.mul(9, k.mul(b2, k.mul(b4, b6)));
                    k.add(k.add(t1, t2), k.add(t3, t4))
                };
                let c4 = k.sub(k.mul(b2, b2), k.mul(24, b4));
                let jinv = k.mul(k.pow(c4, 3), k.inv(disc).unwrap());
                assert_eq!(jinv, k.reduce(j), "p={p} j={j}");
                let t = c.trace().unwrap();
                assert!(t * t <= 4 * p as i64);
            }
        }
    }

    #[test]
    fn jacobi_quartic() {
        let k = fp(13);
        assert!(jacobi_quartic_isomorphism_check(2, &k).unwrap());
        assert!(jacobi_quartic_isomorphism_check(5, &k).is_err());
        for s in 1..13 {
            if k.pow(s, 4) != 1 {
                assert!(jacobi_quartic_isomorphism_check(s as i64, &k).unwrap(), "sigma={s}");
            }
        }
    }

    #[test]
    fn hesse_twist_invariance() {
        for p in [7u64, 13, 19] {
            let k = fp(p);
            let z3 = k.exp((p - 1) / 3);
            for mu in 0..p {
                if k.pow(mu, 3) == 1 {
                    assert!(n(CurveSpec::Hesse { mu: mu as i64 }, &k).is_none());
                    continue;
                }
                let a = n(CurveSpec::Hesse { mu: mu as i64 }, &k).unwrap();
                let b = n(
                    CurveSpec::Hesse {
                        mu: k.mul(mu, z3) as i64,
                    },
                    &k,
                )
                .unwrap();
                assert_eq!(a, b);
                assert!((a - p as i64 - 1).pow(2) <= 4 * p as i64);
            }
        }
    }

    #[test]
    fn conic() {
        for p in [5u64, 7, 13, 29] {
            assert_eq!(conic_points(&fp(p)).unwrap(), p as i64 + 1);
        }
        assert!(conic_points(&fp(3)).is_err());
    }

    #[test]
    fn genlegendre_degenerate_n1() {
        let k = fp(13);
        let c = count_via_characters(
            &CurveSpec::GenLegendre {
                n: 1,
                a: 1,
                b: 1,
                c: 1,
                lambda: 3,
            },
            &k,
        )
        .unwrap();
        assert_eq!(c.affine, 13);
    }

    #[test]
    fn genlegendre_dual() {
        let k = fp(13);
        let spec = CurveSpec::GenLegendre {
            n: 6,
            a: 4,
            b: 3,
            c: 1,
            lambda: 3,
        };
        let cc = count_via_characters(&spec, &k).unwrap();
        assert_eq!(cc.affine, brute_affine_genlegendre(&k, 6, 4, 3, 1, 3));
        assert_eq!(Some(cc.total), n(spec, &k));
    }

    #[test]
    fn squarefree() {
        let k = fp(13);
        assert!(is_squarefree(&k, &[1, 0, 12])); // x² − 1
        assert!(!is_squarefree(&k, &[1, 11, 1])); // (x − 1)²
    }

    #[test]
    fn qm_t_zero() {
        let p = 13;
        let r = qm_consistency(p, p as i64 + 1, (p * p + 1 + 4 * p) as i64);
        assert_eq!(r.t, Some(0));
        assert!(r.pass);
    }

    #[test]
    fn baba_granath_j0_flagged() {
        let c = baba_granath_curve(0, 1, &fp(13)).unwrap();
        assert!(c.bad_reduction.is_some());
    }

    #[test]
    fn igusa_clebsch() {
        for j in [q(2, 1), q(1, 4), q(-1, 1), q(-7, 3), q(1000, 1)] {
            assert!(igusa_clebsch_identity(j).unwrap().holds);
        }
        let r = igusa_clebsch_identity(q(2, 1)).unwrap();
        assert_eq!(r.ratio, BigRational::from_integer(2.into()));
        assert!(igusa_clebsch_identity(q(0, 1)).is_err());
    }
}
