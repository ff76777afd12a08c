//! Exact q-expansions, level-one Hecke traces and newform coefficient fixtures.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;

/// a₀ + a₁q + … + a_N q^N, exact, known modulo q^{N+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: i32,
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(weight: i32, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least a₀");
        QExpansion { weight, coeffs }
    }

    pub fn from_i64(weight: i32, coeffs: &[i64]) -> Self {
        Self::new(weight, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::one();
        QExpansion { weight: 0, coeffs: c }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// a_n, or None beyond the truncation.
    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    pub fn coeff_i64(&self, n: usize) -> Option<i64> {
        self.coeffs.get(n).and_then(ToPrimitive::to_i64)
    }

    pub fn truncate(mut self, n: usize) -> Self {
        self.coeffs.truncate(n + 1);
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        QExpansion {
            weight: self.weight,
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QExpansion {
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact division of every coefficient.
    pub fn div_exact(&self, d: &BigInt) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(d);
            if !r.is_zero() {
                return Err(Error::Numerical(format!("coefficient {a} is not divisible by {d}")));
            }
            out.push(q);
        }
        Ok(QExpansion {
            weight: self.weight,
            coeffs: out,
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut c = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        QExpansion {
            weight: self.weight + other.weight,
            coeffs: c,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QExpansion::one(self.truncation());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// f(q^d), keeping the truncation.
    pub fn dilate(&self, d: usize) -> Self {
        let n = self.truncation();
        let mut c = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i * d > n {
                break;
            }
            c[i * d] = a.clone();
        }
        QExpansion {
            weight: self.weight,
            coeffs: c,
        }
    }

    /// 1/f when a₀ = ±1.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.abs() != BigInt::one() {
            return Err(Error::InvalidParameter("inverse needs a₀ = ±1".into()));
        }
        let n = self.truncation();
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = a0.clone();
        for k in 1..=n {
            let mut s = BigInt::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &c[k - i];
            }
            c[k] = -(s * a0);
        }
        Ok(QExpansion {
            weight: -self.weight,
            coeffs: c,
        })
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "q")?
                    } else {
                        write!(f, "q^{i}")?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation() + 1)
    }
}

fn sigma(n: usize, k: u32) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(k);
            if d * d != n {
                s += BigInt::from(n / d).pow(k);
            }
        }
        d += 1;
    }
    s
}

fn eisenstein(weight: i32, c: i64, k: u32, n: usize) -> QExpansion {
    let mut coeffs = vec![BigInt::one()];
    coeffs.extend((1..=n).map(|m| sigma(m, k) * c));
    QExpansion { weight, coeffs }
}

/// E₄ = 1 + 240Σσ₃(n)qⁿ.
pub fn e4(n: usize) -> QExpansion {
    eisenstein(4, 240, 3, n)
}

/// E₆ = 1 − 504Σσ₅(n)qⁿ.
pub fn e6(n: usize) -> QExpansion {
    eisenstein(6, -504, 5, n)
}

/// Π_{m≥1}(1 − q^{dm})^r, truncated at n.
pub fn euler_product(d: usize, r: i32, n: usize) -> Result<QExpansion> {
    if d == 0 {
        return Err(Error::InvalidParameter("dilation must be positive".into()));
    }
    let mut base = QExpansion::one(n);
    let mut m = d;
    while m <= n {
        // multiply by (1 − q^m) in place
        for i in (m..=n).rev() {
            let t = base.coeffs[i - m].clone();
            base.coeffs[i] -= t;
        }
        m += d;
    }
    let out = if r >= 0 {
        base.pow(r as u32)
    } else {
        base.inverse()?.pow((-r) as u32)
    };
    Ok(QExpansion {
        weight: 0,
        coeffs: out.coeffs,
    })
}

/// Π η(dτ)^{r_d}; the exponent Σ d·r_d/24 must be a non-negative integer.
pub fn eta_product(factors: &[(usize, i32)], n: usize) -> Result<QExpansion> {
    let s: i64 = factors.iter().map(|&(d, r)| d as i64 * r as i64).sum();
    if s < 0 || s % 24 != 0 {
        return Err(Error::InvalidParameter(format!(
            "eta product has q-order {s}/24, not a non-negative integer"
        )));
    }
    let shift = (s / 24) as usize;
    let mut acc = QExpansion::one(n);
    for &(d, r) in factors {
        acc = acc.mul(&euler_product(d, r, n)?);
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[shift..].clone_from_slice(&acc.coeffs[..=n - shift]);
    let w2: i32 = factors.iter().map(|&(_, r)| r).sum();
    Ok(QExpansion { weight: w2 / 2, coeffs })
}

/// Δ = q·Π(1 − qⁿ)²⁴.
pub fn eta_power_24(n: usize) -> Result<QExpansion> {
    if n < 2 {
        return Err(Error::Truncation { need: 2, have: n });
    }
    eta_product(&[(1, 24)], n).map(|mut d| {
        d.weight = 12;
        d
    })
}

pub fn dim_cusp_level1(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

/// Δ^i·E₄^a·E₆^b for i = 1..=dim, each starting q^i + ….
pub fn level1_cusp_basis(k: u32, n: usize) -> Result<Vec<QExpansion>> {
    let dim = dim_cusp_level1(k);
    let delta = eta_power_24(n)?;
    let (ev4, ev6) = (e4(n), e6(n));
    let mut out = Vec::with_capacity(dim);
    for i in 1..=dim {
        let rest = k as usize - 12 * i;
        let (a, b) = match rest % 4 {
            0 => (rest / 4, 0),
            _ => ((rest - 6) / 4, 1),
        };
        let f = delta.pow(i as u32).mul(&ev4.pow(a as u32)).mul(&ev6.pow(b as u32));
        out.push(f);
    }
    Ok(out)
}

/// Tr(T_p | S_k(SL₂(ℤ))) from q-expansions known to q^n.
pub fn level1_hecke_trace(k: u32, p: u64, n: usize) -> Result<BigInt> {
    if k < 12 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!("k = {k} must be even and >= 12")));
    }
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    let dim = dim_cusp_level1(k);
    if dim == 0 {
        return Ok(BigInt::zero());
    }
    let p = p as usize;
    let need = p * dim;
    if n < need {
        return Err(Error::Truncation { need, have: n });
    }
    let basis = level1_cusp_basis(k, n)?;
    let pk1 = BigInt::from(p).pow(k - 1);
    let mut trace = BigInt::zero();
    for f in &basis {
        // first dim coefficients of T_p f
        let mut img: Vec<BigInt> = (1..=dim)
            .map(|m| {
                let mut c = f.coeffs[m * p].clone();
                if m % p == 0 {
                    c += &pk1 * &f.coeffs[m / p];
                }
                c
            })
            .collect();
        // basis is unitriangular in q¹..q^dim; peel off f_1, f_2, … in order
        for (j, g) in basis.iter().enumerate() {
            let c = img[j].clone();
            if std::ptr::eq(f, g) {
                trace += &c;
            }
            if !c.is_zero() {
                for (m, slot) in img.iter_mut().enumerate().skip(j) {
                    *slot -= &c * &g.coeffs[m + 1];
                }
            }
        }
    }
    Ok(trace)
}

/// The weight-8 newform of level 6 as g·(E₄(τ) − 4E₄(2τ) − 9E₄(3τ) + 36E₄(6τ))/24,
/// with g = (η(τ)η(2τ)η(3τ)η(6τ))².
pub fn newform_6_8_a_a(n: usize) -> Result<QExpansion> {
    let g = eta_product(&[(1, 2), (2, 2), (3, 2), (6, 2)], n)?;
    let e = e4(n);
    let comb = e
        .sub(&e.dilate(2).scale(&BigInt::from(4)))
        .sub(&e.dilate(3).scale(&BigInt::from(9)))
        .add(&e.dilate(6).scale(&BigInt::from(36)));
    let f = g.mul(&comb).div_exact(&BigInt::from(24))?;
    Ok(QExpansion { weight: 8, ..f })
}

fn theta_quartic(n: usize, a: i64, b: i64, poly: impl Fn(i64, i64) -> i64) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n + 1];
    let r = ((n as f64).sqrt() as i64) + 1;
    for x in -r..=r {
        for y in -r..=r {
            let m = a * x * x + b * y * y;
            if (m as usize) <= n {
                c[m as usize] += poly(x, y);
            }
        }
    }
    c
}

/// Weight-5 CM form by ℚ(√−6): (θ₁ + θ₂)/2 with
/// θ₁ = Σ(x⁴ − 36x²y² + 36y⁴)q^{x²+6y²}, θ₂ = Σ(4x⁴ − 36x²y² + 9y⁴)q^{2x²+3y²}.
pub fn newform_24_5_h_b(n: usize) -> Result<QExpansion> {
    let t1 = theta_quartic(n, 1, 6, |x, y| x.pow(4) - 36 * x * x * y * y + 36 * y.pow(4));
    let t2 = theta_quartic(n, 2, 3, |x, y| 4 * x.pow(4) - 36 * x * x * y * y + 9 * y.pow(4));
    let sum = QExpansion::new(5, t1.into_iter().zip(t2).map(|(a, b)| a + b).collect());
    sum.div_exact(&BigInt::from(2))
}

/// Hecke eigenvalues of a newform, as stored in a fixture file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewformFixture {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    #[serde(with = "prime_keys")]
    pub ap: BTreeMap<u64, i64>,
}

mod prime_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, i64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, i64>, D::Error> {
        let raw = BTreeMap::<String, i64>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<u64>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("key {k:?} is not an integer")))
            })
            .collect()
    }
}

/// Split "N.k.c.x" into (N, k), checking the shape.
pub fn parse_label(label: &str) -> Result<(u64, u32)> {
    let bad = || Error::InvalidParameter(format!("malformed newform label {label:?}"));
    let parts: Vec<&str> = label.split('.').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let level = parts[0].parse::<u64>().map_err(|_| bad())?;
    let weight = parts[1].parse::<u32>().map_err(|_| bad())?;
    let lower = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_lowercase());
    if level == 0 || weight == 0 || !lower(parts[2]) || !lower(parts[3]) {
        return Err(bad());
    }
    Ok((level, weight))
}

impl NewformFixture {
    /// Schema and Ramanujan-bound checks: a_p² ≤ 4p^{k−1}.
    pub fn validate(&self) -> Result<()> {
        let (level, weight) = parse_label(&self.label).map_err(|e| Error::Fixture(e.to_string()))?;
        if level != self.level || weight != self.weight {
            return Err(Error::Fixture(format!(
                "label {} disagrees with level {} / weight {}",
                self.label, self.level, self.weight
            )));
        }
        if self.ap.is_empty() {
            return Err(Error::Fixture("no coefficients".into()));
        }
        for (&p, &a) in &self.ap {
            if !is_prime(p) {
                return Err(Error::Fixture(format!("key {p} is not prime")));
            }
            let bound = BigInt::from(4) * BigInt::from(p).pow(self.weight - 1);
            if BigInt::from(a).pow(2) > bound {
                return Err(Error::RamanujanBound { p, ap: a });
            }
        }
        Ok(())
    }

    pub fn parse(json: &str) -> Result<Self> {
        let f: NewformFixture =
            serde_json::from_str(json).map_err(|e| Error::Fixture(format!("schema violation: {e}")))?;
        f.validate()?;
        Ok(f)
    }

    pub fn ap(&self, p: u64) -> Result<i64> {
        self.ap
            .get(&p)
            .copied()
            .ok_or_else(|| Error::Fixture(format!("{} has no a_{p}", self.label)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes") + "\n"
    }

    /// a_p for primes p ≤ bound read off a q-expansion.
    pub fn from_expansion(label: &str, f: &QExpansion, bound: u64) -> Result<Self> {
        let (level, weight) = parse_label(label)?;
        if (f.truncation() as u64) < bound {
            return Err(Error::Truncation {
                need: bound as usize,
                have: f.truncation(),
            });
        }
        let ap = (2..=bound)
            .filter(|&p| is_prime(p))
            .map(|p| {
                f.coeff_i64(p as usize)
                    .map(|a| (p, a))
                    .ok_or(Error::Overflow("fixture coefficient"))
            })
            .collect::<Result<_>>()?;
        let fx = NewformFixture {
            label: label.to_string(),
            level,
            weight,
            ap,
        };
        fx.validate()?;
        Ok(fx)
    }
}

pub fn load_fixture(path: &Path) -> Result<NewformFixture> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
    NewformFixture::parse(&s)
}

pub const FIXTURE_DIR_ENV: &str = "HGTRACE_FIXTURE_DIR";

/// Largest prime recorded in the generated fixtures.
pub const FIXTURE_PRIME_BOUND: u64 = 500;

const EMBEDDED: &[(&str, &str)] = &[
    ("6.8.a.a", include_str!("../../../testdata/6.8.a.a.json")),
    ("24.5.h.b", include_str!("../../../testdata/24.5.h.b.json")),
];

pub fn builtin_fixture(label: &str) -> Result<NewformFixture> {
    EMBEDDED
        .iter()
        .find(|(l, _)| *l == label)
        .ok_or_else(|| Error::Fixture(format!("no embedded fixture for {label}")))
        .and_then(|(_, s)| NewformFixture::parse(s))
}

/// `<dir>/<label>.json` from the explicit directory, then $HGTRACE_FIXTURE_DIR, then the embedded copy.
pub fn resolve_fixture(label: &str, dir: Option<&Path>) -> Result<NewformFixture> {
    parse_label(label)?;
    let dir: Option<PathBuf> = dir
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(FIXTURE_DIR_ENV).map(PathBuf::from));
    match dir {
        Some(d) => load_fixture(&d.join(format!("{label}.json"))),
        None => builtin_fixture(label),
    }
}

/// Independent q-expansion generators for the pinned labels.
pub fn oracle_fixture(label: &str, bound: u64) -> Result<NewformFixture> {
    let n = bound as usize;
    let f = match label {
        "6.8.a.a" => newform_6_8_a_a(n)?,
        "24.5.h.b" => newform_24_5_h_b(n)?,
        _ => return Err(Error::Fixture(format!("no generator for {label}"))),
    };
    NewformFixture::from_expansion(label, &f, bound)
}

pub const LMFDB_API: &str = "https://www.lmfdb.org/api/mf_newforms/";

/// Fetch a one-dimensional newform from the public database, write `<dir>/<label>.json`
/// and load it back through [`load_fixture`].
#[cfg(feature = "fetch")]
pub fn fetch_fixture(label: &str, dir: &Path) -> Result<NewformFixture> {
    let (level, weight) = parse_label(label)?;
    let url = format!("{LMFDB_API}?label={label}&_format=json&_fields=label,level,weight,dim,traces");
    let body: serde_json::Value = reqwest::blocking::get(&url)
        .and_then(|r| r.error_for_status())
        .and_then(|r| r.json())
        .map_err(|e| Error::Network(e.to_string()))?;
    let rec = body
        .get("data")
        .and_then(|d| d.as_array())
        .and_then(|d| d.first())
        .ok_or_else(|| Error::Fixture(format!("label {label} not found")))?;
    if rec.get("dim").and_then(|d| d.as_u64()) != Some(1) {
        return Err(Error::Fixture(format!("{label} is not one-dimensional")));
    }
    let traces = rec
        .get("traces")
        .and_then(|t| t.as_array())
        .ok_or_else(|| Error::Fixture("response has no traces".into()))?;
    // traces[n−1] = a_n
    let ap = traces
        .iter()
        .enumerate()
        .filter(|(i, _)| is_prime(*i as u64 + 1))
        .map(|(i, v)| {
            v.as_i64()
                .map(|a| (i as u64 + 1, a))
                .ok_or_else(|| Error::Fixture("non-integer trace".into()))
        })
        .collect::<Result<_>>()?;
    let fx = NewformFixture {
        label: label.to_string(),
        level,
        weight,
        ap,
    };
    fx.validate()?;
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{label}.json"));
    std::fs::write(&path, fx.to_json())?;
    load_fixture(&path)
}

#[cfg(not(feature = "fetch"))]
pub fn fetch_fixture(label: &str, _dir: &Path) -> Result<NewformFixture> {
    parse_label(label)?;
    Err(Error::Offline(format!(
        "cannot fetch {label}: built without the `fetch` feature; use a checked-in fixture"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn delta_coefficients() {
        let d = eta_power_24(30).unwrap();
        assert_eq!(d.coeff_i64(0), Some(0));
        assert_eq!(d.coeff_i64(1), Some(1));
        assert_eq!(d.coeff_i64(2), Some(-24));
        assert_eq!(d.coeff_i64(3), Some(252));
        assert_eq!(d.coeff_i64(6), Some(-6048));
        assert_eq!(d.coeff(6).unwrap(), &(d.coeff(2).unwrap() * d.coeff(3).unwrap()));
        assert!(eta_power_24(1).is_err());
    }

    #[test]
    fn delta_from_eisenstein() {
        let n = 20;
        let lhs = e4(n).pow(3).sub(&e6(n).pow(2)).div_exact(&big(1728)).unwrap();
        assert_eq!(lhs.coeffs(), eta_power_24(n).unwrap().coeffs());
    }

    #[test]
    fn hecke_traces_level1() {
        assert_eq!(level1_hecke_trace(12, 2, 10).unwrap(), big(-24));
        let d = eta_power_24(13).unwrap();
        assert_eq!(&level1_hecke_trace(12, 13, 13).unwrap(), d.coeff(13).unwrap());
        // S_16 = ⟨ΔE₄⟩, a₂ = 216
        assert_eq!(level1_hecke_trace(16, 2, 4).unwrap(), big(216));
        // S_24 has dimension 2; Tr T_2 = 1080
        assert_eq!(level1_hecke_trace(24, 2, 4).unwrap(), big(1080));
        assert_eq!(level1_hecke_trace(14, 5, 0).unwrap(), big(0));
        assert!(matches!(
            level1_hecke_trace(24, 5, 9),
            Err(Error::Truncation { need: 10, .. })
        ));
    }

    #[test]
    fn dims() {
        let d: Vec<usize> = [12, 14, 16, 24, 26, 36, 38]
            .iter()
            .map(|&k| dim_cusp_level1(k))
            .collect();
        assert_eq!(d, vec![1, 0, 1, 2, 1, 3, 2]);
    }

    #[test]
    fn level6_newform_head() {
        let f = newform_6_8_a_a(13).unwrap();
        let head: Vec<i64> = (0..8).map(|i| f.coeff_i64(i).unwrap()).collect();
        assert_eq!(head, vec![0, 1, 8, 27, 64, -114, 216, -1576]);
        assert_eq!(f.coeff_i64(13), Some(-3802));
    }

    #[test]
    fn cm_form_head() {
        let f = newform_24_5_h_b(30).unwrap();
        assert_eq!(f.coeff_i64(1), Some(1));
        assert_eq!(f.coeff_i64(2), Some(4));
        assert_eq!(f.coeff_i64(3), Some(9));
        // inert primes of ℚ(√−6) have a_p = 0
        for p in (5..30).filter(|&p| is_prime(p)) {
            if crate::field::PrimeField::new(p).unwrap().legendre(-6) == -1 {
                assert_eq!(f.coeff_i64(p as usize), Some(0), "p = {p}");
            }
        }
        assert_eq!(f.coeff_i64(6).unwrap(), 36);
    }

    #[test]
    fn labels() {
        assert_eq!(parse_label("6.8.a.a").unwrap(), (6, 8));
        assert!(parse_label("6.8.a").is_err());
        assert!(parse_label("six.8.a.a").is_err());
        assert!(parse_label("6.8.A.a").is_err());
    }

    #[test]
    fn fixture_gate() {
        let ok = r#"{"label":"6.8.a.a","level":6,"weight":8,"ap":{"13":-3802}}"#;
        assert_eq!(NewformFixture::parse(ok).unwrap().ap(13).unwrap(), -3802);
        let bad = r#"{"label":"6.8.a.a","level":6,"weight":8,"ap":{"13":99999}}"#;
        assert!(matches!(
            NewformFixture::parse(bad),
            Err(Error::RamanujanBound { p: 13, ap: 99999 })
        ));
        let schema = r#"{"label":"6.8.a.a","level":6,"ap":{"13":1}}"#;
        assert!(matches!(NewformFixture::parse(schema), Err(Error::Fixture(_))));
        let key = r#"{"label":"6.8.a.a","level":6,"weight":8,"ap":{"15":1}}"#;
        assert!(NewformFixture::parse(key).is_err());
    }

    #[cfg(not(feature = "fetch"))]
    #[test]
    fn offline_fetch_is_explicit() {
        let dir = std::env::temp_dir();
        assert!(matches!(fetch_fixture("6.8.a.a", &dir), Err(Error::Offline(_))));
        assert!(matches!(fetch_fixture("bogus", &dir), Err(Error::InvalidParameter(_))));
    }
}
