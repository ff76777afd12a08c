//! Prime fields with discrete-log tables, multiplicative characters, and the
//! quadratic extension used for 𝔽_{p²} point counts.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

/// Default upper bound on p; dlog tables are O(p) and character sums O(p²).
pub const DEFAULT_MAX_PRIME: u64 = 100_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd primes in `lo..=hi` with `p ≡ 1 mod m`.
pub fn primes_congruent_one(lo: u64, hi: u64, m: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&p| is_prime(p) && (p - 1) % m == 0).collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// True iff g generates (ℤ/p)^×.
pub fn is_primitive_root(g: u64, p: u64) -> bool {
    !g.is_multiple_of(p) && prime_factors(p - 1).iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)
}

/// All primitive roots of p in increasing order.
pub fn primitive_roots(p: u64) -> Vec<u64> {
    (1..p).filter(|&g| is_primitive_root(g, p)).collect()
}

/// 𝔽_p for an odd prime p, with a fixed generator and complete dlog table.
///
/// Characters are evaluated through ζ_{p−1} = exp(2πi/(p−1)).
#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    g: u64,
    dlog: Vec<u32>,
    exp: Vec<u64>,
    roots: Vec<Complex64>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.g == other.g
    }
}

impl Eq for PrimeField {}

impl PrimeField {
    /// Context with the least primitive root and the default size bound.
    pub fn new(p: u64) -> Result<Self> {
        Self::with_bound(p, DEFAULT_MAX_PRIME)
    }

    pub fn with_bound(p: u64, max_prime: u64) -> Result<Self> {
        check_prime(p, max_prime)?;
        let g = (2..p).find(|&g| is_primitive_root(g, p)).unwrap_or(2);
        Ok(Self::build(p, g))
    }

    /// Context with an explicit generator (for generator-independence tests).
    pub fn with_generator(p: u64, g: u64) -> Result<Self> {
        check_prime(p, DEFAULT_MAX_PRIME)?;
        if !is_primitive_root(g, p) {
            return Err(Error::NotPrimitiveRoot { g, p });
        }
        Ok(Self::build(p, g))
    }

    pub fn shared(p: u64) -> Result<Arc<Self>> {
        Self::new(p).map(Arc::new)
    }

    fn build(p: u64, g: u64) -> Self {
        let n = (p - 1) as usize;
        let mut dlog = vec![u32::MAX; p as usize];
        let mut exp = Vec::with_capacity(n);
        let mut x = 1u64;
        for k in 0..n {
            dlog[x as usize] = k as u32;
            exp.push(x);
            x = x * g % p;
        }
        let roots = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect();
        PrimeField { p, g, dlog, exp, roots }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Order of the multiplicative group, p − 1.
    pub fn order(&self) -> u64 {
        self.p - 1
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            None
        } else {
            Some(self.exp[(self.order() as usize - self.dlog[a as usize] as usize) % self.order() as usize])
        }
    }

    /// Index of x base g; None for x = 0.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        let d = self.dlog[(x % self.p) as usize];
        (d != u32::MAX).then_some(d as u64)
    }

    /// g^k.
    pub fn exp(&self, k: u64) -> u64 {
        self.exp[(k % self.order()) as usize]
    }

    /// ζ_{p−1}^k.
    pub fn root(&self, k: u64) -> Complex64 {
        self.roots[(k % self.order()) as usize]
    }

    /// x^((p−1)/2) lifted to {−1, 0, 1}.
    pub fn legendre(&self, x: i64) -> i8 {
        match self.dlog(self.reduce(x)) {
            None => 0,
            Some(d) if d % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    pub fn is_square(&self, x: u64) -> bool {
        self.legendre(x as i64) >= 0
    }

    /// A square root of x when x is a square.
    pub fn sqrt(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        if x == 0 {
            return Some(0);
        }
        let d = self.dlog(x)?;
        (d % 2 == 0).then(|| self.exp(d / 2))
    }

    /// Least quadratic non-residue.
    pub fn non_residue(&self) -> u64 {
        (2..self.p).find(|&x| self.legendre(x as i64) == -1).unwrap_or(2)
    }

    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.p
    }

    pub fn char(&self, e: i64) -> MultChar {
        MultChar::new(e, self.order())
    }

    pub fn trivial(&self) -> MultChar {
        self.char(0)
    }

    /// φ, the quadratic character.
    pub fn quadratic(&self) -> MultChar {
        self.char((self.order() / 2) as i64)
    }

    /// ι(a): the character x ↦ x^{(p−1)a} of order dividing the denominator of a.
    pub fn power_residue_char(&self, a: Rational64) -> Result<MultChar> {
        let n = self.order() as i64;
        let den = *a.denom();
        if n % den != 0 {
            return Err(Error::Congruence {
                p: self.p,
                modulus: den as u64,
            });
        }
        let e = (a.numer().rem_euclid(den)) * (n / den);
        Ok(self.char(e))
    }

    /// χ(x) with χ(0) = 0 for every χ, the trivial one included.
    pub fn eval(&self, chi: MultChar, x: u64) -> Complex64 {
        match self.dlog(x) {
            None => Complex64::new(0.0, 0.0),
            Some(d) => self.root(chi.e * d),
        }
    }

    /// Exponent k with χ(x) = ζ^k; None for x = 0.
    pub fn eval_exp(&self, chi: MultChar, x: u64) -> Option<u64> {
        self.dlog(x).map(|d| chi.e * d % self.order())
    }

    /// χ(−1) ∈ {±1}.
    pub fn sign(&self, chi: MultChar) -> i8 {
        if chi.e.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn check_char(&self, chi: MultChar) -> Result<()> {
        if chi.modulus != self.order() {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }
}

fn check_prime(p: u64, max_prime: u64) -> Result<()> {
    if p > max_prime {
        return Err(Error::PrimeTooLarge { p, max: max_prime });
    }
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Multiplicative character χ(g^k) = ζ_{p−1}^{e·k}, stored as e mod p−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultChar {
    pub e: u64,
    pub modulus: u64,
}

impl MultChar {
    pub fn new(e: i64, modulus: u64) -> Self {
        MultChar {
            e: e.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    pub fn order(&self) -> u64 {
        self.modulus / self.e.gcd(&self.modulus)
    }

    pub fn conj(self) -> Self {
        MultChar::new(-(self.e as i64), self.modulus)
    }

    pub fn pow(self, k: i64) -> Self {
        MultChar::new((self.e as i64) * k, self.modulus)
    }

    /// χ such that χ² = self, if one exists.
    pub fn square_roots(self) -> Vec<MultChar> {
        (0..self.modulus)
            .filter(|s| (2 * s) % self.modulus == self.e)
            .map(|s| MultChar::new(s as i64, self.modulus))
            .collect()
    }
}

impl std::ops::Mul for MultChar {
    type Output = MultChar;
    fn mul(self, rhs: MultChar) -> MultChar {
        debug_assert_eq!(self.modulus, rhs.modulus);
        MultChar::new((self.e + rhs.e) as i64, self.modulus)
    }
}

/// Element a + b√ν of 𝔽_{p²}.
pub type Fp2 = (u64, u64);

/// 𝔽_{p²} = 𝔽_p[√ν] with ν the least non-residue.
#[derive(Debug, Clone)]
pub struct QuadExtField {
    base: Arc<PrimeField>,
    nu: u64,
}

impl QuadExtField {
    pub fn new(base: Arc<PrimeField>) -> Self {
        let nu = base.non_residue();
        QuadExtField { base, nu }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn nu(&self) -> u64 {
        self.nu
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn size(&self) -> u64 {
        self.p() * self.p()
    }

    pub fn from_base(&self, a: u64) -> Fp2 {
        (a % self.p(), 0)
    }

    pub fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p();
        ((x.0 + y.0) % p, (x.1 + y.1) % p)
    }

    pub fn sub(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p();
        ((x.0 + p - y.0) % p, (x.1 + p - y.1) % p)
    }

    pub fn neg(&self, x: Fp2) -> Fp2 {
        self.sub((0, 0), x)
    }

    pub fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p();
        ((x.0 * y.0 + self.nu * (x.1 * y.1 % p)) % p, (x.0 * y.1 + x.1 * y.0) % p)
    }

    pub fn pow(&self, mut x: Fp2, mut e: u64) -> Fp2 {
        let mut r = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }

    /// N(x) = x·x̄ ∈ 𝔽_p.
    pub fn norm(&self, x: Fp2) -> u64 {
        let p = self.p();
        (x.0 * x.0 % p + p - self.nu * (x.1 * x.1 % p) % p) % p
    }

    pub fn inv(&self, x: Fp2) -> Option<Fp2> {
        let n = self.base.inv(self.norm(x))?;
        let p = self.p();
        Some((x.0 * n % p, (p - x.1) % p * n % p))
    }

    /// Quadratic character of 𝔽_{p²}: x is a square iff N(x) is a square in 𝔽_p.
    pub fn legendre(&self, x: Fp2) -> i8 {
        if x == (0, 0) {
            0
        } else {
            self.base.legendre(self.norm(x) as i64)
        }
    }

    /// Square root of a base-field element, which always exists in 𝔽_{p²}.
    pub fn sqrt_base(&self, a: u64) -> Fp2 {
        match self.base.sqrt(a) {
            Some(r) => (r, 0),
            None => {
                let q = self.base.mul(a, self.base.inv(self.nu).unwrap_or(1));
                (0, self.base.sqrt(q).unwrap_or(0))
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fp2> + '_ {
        let p = self.p();
        (0..p).flat_map(move |a| (0..p).map(move |b| (a, b)))
    }
}
