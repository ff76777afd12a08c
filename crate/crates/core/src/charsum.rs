//! Jacobi sums, the bracket symbol, the ₙPₙ₋₁ character sum and its
//! rational normalization H_p, and the Evans–Greene Clausen check.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{MultChar, PrimeField};
use crate::hgm::HGDatum;

/// τ_snap = 10⁻⁶·√p·n.
pub fn snap_tolerance(p: u64, n: usize) -> f64 {
    1e-6 * (p as f64).sqrt() * n.max(1) as f64
}

/// A value of ℤ[ζ_{p−1}] carried as a complex double.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicValue {
    pub re: f64,
    pub im: f64,
    pub snapped: Option<i64>,
}

impl AlgebraicValue {
    pub fn new(z: Complex64) -> Self {
        AlgebraicValue {
            re: z.re,
            im: z.im,
            snapped: None,
        }
    }

    /// Attach the nearest integer when within `tol`.
    pub fn snap(mut self, tol: f64) -> Self {
        let r = self.re.round();
        self.snapped = ((self.re - r).abs() < tol && self.im.abs() < tol && r.abs() < 9.0e18).then_some(r as i64);
        self
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn to_integer(&self) -> Result<i64> {
        self.snapped.ok_or(Error::Snap {
            re: self.re,
            im: self.im,
            tol: f64::NAN,
        })
    }
}

/// Table of (dlog t, dlog(1−t)) for t ∉ {0, 1}; J(A,B) is then O(p) in integer
/// exponent arithmetic.
#[derive(Debug, Clone)]
pub struct JacobiTable {
    ctx: Arc<PrimeField>,
    pairs: Vec<(u64, u64)>,
}

impl JacobiTable {
    pub fn new(ctx: Arc<PrimeField>) -> Self {
        let p = ctx.p();
        let pairs = (2..p)
            .map(|t| {
                let d1 = ctx.dlog(t).expect("t != 0");
                let d2 = ctx.dlog(ctx.sub(1, t)).expect("t != 1");
                (d1, d2)
            })
            .collect();
        JacobiTable { ctx, pairs }
    }

    pub fn ctx(&self) -> &Arc<PrimeField> {
        &self.ctx
    }

    /// J(A,B) = Σ_t A(t)B(1−t).
    pub fn jacobi(&self, a: MultChar, b: MultChar) -> Complex64 {
        let n = self.ctx.order();
        let mut s = Complex64::new(0.0, 0.0);
        for &(d1, d2) in &self.pairs {
            s += self.ctx.root((a.e * d1 + b.e * d2) % n);
        }
        s
    }

    /// −B(−1)·J(A, B̄).
    pub fn bracket(&self, a: MultChar, b: MultChar) -> Complex64 {
        -(self.ctx.sign(b) as f64) * self.jacobi(a, b.conj())
    }
}

/// J(A,B) with the convention A(0) = 0 for all A.
pub fn jacobi_sum(ctx: &PrimeField, a: MultChar, b: MultChar) -> Result<AlgebraicValue> {
    ctx.check_char(a)?;
    ctx.check_char(b)?;
    let mut s = Complex64::new(0.0, 0.0);
    for t in ctx.elements() {
        s += ctx.eval(a, t) * ctx.eval(b, ctx.sub(1, t));
    }
    Ok(AlgebraicValue::new(s).snap(snap_tolerance(ctx.p(), 2)))
}

pub fn bracket(ctx: &PrimeField, a: MultChar, b: MultChar) -> Result<AlgebraicValue> {
    let j = jacobi_sum(ctx, a, b.conj())?;
    let z = -(ctx.sign(b) as f64) * j.z();
    Ok(AlgebraicValue::new(z).snap(snap_tolerance(ctx.p(), 2)))
}

/// Sign convention for the prefactor of the ₙPₙ₋₁ sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Prefactor {
    /// −Π_{i≥2} A_iB_i(−1). Agrees with `Printed` for n = 2.
    #[default]
    Corrected,
    /// Π_{i≥2} (−A_iB_i(−1)).
    Printed,
}

impl Prefactor {
    fn value(self, ctx: &PrimeField, a: &[MultChar], b: &[MultChar]) -> f64 {
        let mut s: i8 = 1;
        for (ai, bi) in a.iter().zip(b).skip(1) {
            s *= ctx.sign(*ai * *bi);
        }
        let n = a.len() as i32;
        let extra = match self {
            Prefactor::Corrected => -1.0,
            Prefactor::Printed => (-1f64).powi(n - 1),
        };
        s as f64 * extra
    }
}

fn check_lists(ctx: &PrimeField, a: &[MultChar], b: &[MultChar]) -> Result<()> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "character lists must have equal length n >= 2 (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    if !b[0].is_trivial() {
        return Err(Error::InvalidParameter("B_1 must be the trivial character".into()));
    }
    for c in a.iter().chain(b) {
        ctx.check_char(*c)?;
    }
    Ok(())
}

/// Precomputed ₙPₙ₋₁ sum for fixed character lists: the χ-sum coefficients
/// P(χ) = bracket(A₁χ,χ)·Π_{i≥2} bracket(A_iχ,B_iχ) are independent of λ, so
/// each evaluation is a length-(p−1) transform in dlog λ.
#[derive(Debug, Clone)]
pub struct NpKernel {
    ctx: Arc<PrimeField>,
    n: usize,
    prefactor: f64,
    coeffs: Vec<Complex64>,
    delta: Complex64,
}

impl NpKernel {
    pub fn new(ctx: Arc<PrimeField>, a: &[MultChar], b: &[MultChar]) -> Result<Self> {
        Self::with_prefactor(ctx, a, b, Prefactor::default())
    }

    pub fn with_prefactor(ctx: Arc<PrimeField>, a: &[MultChar], b: &[MultChar], prefactor: Prefactor) -> Result<Self> {
        check_lists(&ctx, a, b)?;
        let table = JacobiTable::new(ctx.clone());
        Ok(Self::from_table(&table, a, b, prefactor))
    }

    pub fn from_table(table: &JacobiTable, a: &[MultChar], b: &[MultChar], prefactor: Prefactor) -> Self {
        let ctx = table.ctx().clone();
        let m = ctx.order();
        let coeffs = (0..m)
            .map(|x| {
                let chi = ctx.char(x as i64);
                let mut t = table.bracket(a[0] * chi, chi);
                for (ai, bi) in a.iter().zip(b).skip(1) {
                    t *= table.bracket(*ai * chi, *bi * chi);
                }
                t
            })
            .collect();
        let mut delta = Complex64::new(1.0, 0.0);
        for (ai, bi) in a.iter().zip(b).skip(1) {
            delta *= table.bracket(*ai, *bi);
        }
        NpKernel {
            prefactor: prefactor.value(&ctx, a, b),
            n: a.len(),
            ctx,
            coeffs,
            delta,
        }
    }

    pub fn ctx(&self) -> &Arc<PrimeField> {
        &self.ctx
    }

    pub fn tolerance(&self) -> f64 {
        snap_tolerance(self.ctx.p(), self.n)
    }

    pub fn eval_complex(&self, lambda: u64) -> Complex64 {
        let lambda = lambda % self.ctx.p();
        match self.ctx.dlog(lambda) {
            None => self.prefactor * self.delta,
            Some(d) => {
                let m = self.ctx.order();
                let mut s = Complex64::new(0.0, 0.0);
                for (x, c) in self.coeffs.iter().enumerate() {
                    s += c * self.ctx.root(x as u64 * d % m);
                }
                self.prefactor * s / m as f64
            }
        }
    }

    pub fn eval(&self, lambda: u64) -> AlgebraicValue {
        AlgebraicValue::new(self.eval_complex(lambda)).snap(self.tolerance())
    }
}

/// The ₙPₙ₋₁ sum at λ with the default prefactor.
pub fn np_sum(ctx: &Arc<PrimeField>, a: &[MultChar], b: &[MultChar], lambda: u64) -> Result<AlgebraicValue> {
    np_sum_with(ctx, a, b, lambda, Prefactor::default())
}

pub fn np_sum_with(
    ctx: &Arc<PrimeField>,
    a: &[MultChar],
    b: &[MultChar],
    lambda: u64,
    prefactor: Prefactor,
) -> Result<AlgebraicValue> {
    Ok(NpKernel::with_prefactor(ctx.clone(), a, b, prefactor)?.eval(lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClausenStatus {
    Pass,
    Fail,
    /// t ∉ {0,1} with ηK not a square: the theorem says nothing.
    NotApplicable,
    /// Hypothesis of the theorem violated.
    Inadmissible,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClausenReport {
    pub t: u64,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub status: ClausenStatus,
}

/// Evans–Greene hypothesis: none of η, Kφ, ηK, ηK̄ trivial.
pub fn clausen_admissible(ctx: &PrimeField, eta: MultChar, k: MultChar) -> bool {
    let phi = ctx.quadratic();
    !(eta.is_trivial() || (k * phi).is_trivial() || (eta * k).is_trivial() || (eta * k.conj()).is_trivial())
}

/// Both sides of the finite-field Clausen identity for one (η, K) pair, with
/// all kernels built once.
pub struct ClausenPair {
    ctx: Arc<PrimeField>,
    eta: MultChar,
    k: MultChar,
    lhs: NpKernel,
    sides: Vec<(MultChar, NpKernel, NpKernel)>,
    at_one: Vec<Complex64>,
}

impl ClausenPair {
    pub fn new(table: &JacobiTable, eta: MultChar, k: MultChar) -> Option<Self> {
        let ctx = table.ctx().clone();
        if !clausen_admissible(&ctx, eta, k) {
            return None;
        }
        let phi = ctx.quadratic();
        let eps = ctx.trivial();
        let lhs = NpKernel::from_table(
            table,
            &[phi, eta, eta.conj()],
            &[eps, k, k.conj()],
            Prefactor::Corrected,
        );
        let roots = (eta * k).square_roots();
        let mut sides = Vec::new();
        let mut at_one = Vec::new();
        for s in roots {
            let f1 = NpKernel::from_table(table, &[phi * k * s.conj(), s], &[eps, k], Prefactor::Corrected);
            let f2 = NpKernel::from_table(
                table,
                &[phi * k.conj() * s, s.conj()],
                &[eps, k.conj()],
                Prefactor::Corrected,
            );
            let c = table.jacobi(eta * k, eta.conj() * k) / table.jacobi(phi, k.conj());
            let j1 = table.jacobi(s * k.conj(), phi * s.conj());
            let j2 = table.jacobi(phi * s * k.conj(), s.conj());
            at_one.push(c * (j1 * j1 + j2 * j2));
            sides.push((s, f1, f2));
        }
        Some(ClausenPair {
            ctx,
            eta,
            k,
            lhs,
            sides,
            at_one,
        })
    }

    pub fn eta(&self) -> MultChar {
        self.eta
    }

    pub fn k(&self) -> MultChar {
        self.k
    }

    pub fn is_square(&self) -> bool {
        !self.sides.is_empty()
    }

    /// Check at t; with two square roots S both must satisfy the identity.
    pub fn check(&self, t: u64) -> ClausenReport {
        let p = self.ctx.p();
        let t = t % p;
        let tol = snap_tolerance(p, 3) * 10.0;
        let mk = |lhs: Complex64, rhs: Complex64, status| ClausenReport {
            t,
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            status,
        };
        let zero = Complex64::new(0.0, 0.0);
        if t == 0 {
            return mk(zero, zero, ClausenStatus::NotApplicable);
        }
        if t == 1 {
            let lhs = self.lhs.eval_complex(1);
            if self.sides.is_empty() {
                let st = if lhs.norm() < tol {
                    ClausenStatus::Pass
                } else {
                    ClausenStatus::Fail
                };
                return mk(lhs, zero, st);
            }
            let mut status = ClausenStatus::Pass;
            for r in &self.at_one {
                if (lhs - r).norm() >= tol {
                    status = ClausenStatus::Fail;
                }
            }
            return mk(lhs, self.at_one[0], status);
        }
        if self.sides.is_empty() {
            return mk(zero, zero, ClausenStatus::NotApplicable);
        }
        let phi1t = self.ctx.legendre(self.ctx.sub(1, t) as i64) as f64;
        let lhs = phi1t * self.lhs.eval_complex(t);
        let mut status = ClausenStatus::Pass;
        let mut first = None;
        for (_, f1, f2) in &self.sides {
            let rhs = f1.eval_complex(t) * f2.eval_complex(t) - p as f64;
            first.get_or_insert(rhs);
            if (lhs - rhs).norm() >= tol {
                status = ClausenStatus::Fail;
            }
        }
        mk(lhs, first.unwrap_or(zero), status)
    }
}

/// Evans–Greene check at a single (η, K, t).
pub fn clausen_check(ctx: &Arc<PrimeField>, eta: MultChar, k: MultChar, t: u64) -> Result<ClausenReport> {
    ctx.check_char(eta)?;
    ctx.check_char(k)?;
    let table = JacobiTable::new(ctx.clone());
    Ok(match ClausenPair::new(&table, eta, k) {
        Some(pair) => pair.check(t),
        None => ClausenReport {
            t: t % ctx.p(),
            lhs: [0.0; 2],
            rhs: [0.0; 2],
            status: ClausenStatus::Inadmissible,
        },
    })
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClausenSweep {
    pub p: u64,
    pub at_one: usize,
    pub generic: usize,
    pub failures: Vec<(u64, u64, u64)>,
    pub not_applicable: usize,
    pub inadmissible: usize,
}

/// Every admissible (η, K) and every t ∉ {0}.
pub fn clausen_sweep(ctx: &Arc<PrimeField>) -> ClausenSweep {
    let table = JacobiTable::new(ctx.clone());
    let m = ctx.order() as i64;
    let mut out = ClausenSweep {
        p: ctx.p(),
        ..Default::default()
    };
    for e in 0..m {
        for kk in 0..m {
            let (eta, k) = (ctx.char(e), ctx.char(kk));
            let Some(pair) = ClausenPair::new(&table, eta, k) else {
                out.inadmissible += 1;
                continue;
            };
            for t in 1..ctx.p() {
                let r = pair.check(t);
                match r.status {
                    ClausenStatus::Pass if t == 1 => out.at_one += 1,
                    ClausenStatus::Pass => out.generic += 1,
                    ClausenStatus::Fail => out.failures.push((eta.e, k.e, t)),
                    ClausenStatus::NotApplicable => out.not_applicable += 1,
                    ClausenStatus::Inadmissible => out.inadmissible += 1,
                }
            }
        }
    }
    out
}

/// H_p = sign·p^{−w}·np_sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HpNormalization {
    pub sign: i8,
    pub weight: u32,
}

impl HpNormalization {
    pub const IDENTITY: HpNormalization = HpNormalization { sign: 1, weight: 0 };
}

/// Exact value of H_p: `numerator / p^weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpValue {
    pub raw: AlgebraicValue,
    pub numerator: i64,
    pub p: u64,
    pub weight: u32,
}

impl HpValue {
    pub fn value(&self) -> Rational64 {
        Rational64::new(self.numerator, (self.p as i64).pow(self.weight))
    }

    /// p^k·H_p when it is an integer.
    pub fn scaled(&self, k: u32) -> Option<i64> {
        let num = (self.numerator as i128) * (self.p as i128).pow(k);
        let den = (self.p as i128).pow(self.weight);
        (num % den == 0).then(|| (num / den) as i64)
    }
}

/// ₙPₙ₋₁ kernel for ι(α), ι(β) of a datum defined over ℚ.
#[derive(Debug, Clone)]
pub struct HpKernel {
    kernel: NpKernel,
    norm: HpNormalization,
}

impl HpKernel {
    pub fn new(datum: &HGDatum, ctx: Arc<PrimeField>, norm: HpNormalization) -> Result<Self> {
        if !datum.is_defined_over_q() {
            return Err(Error::NotDefinedOverQ);
        }
        let (a, b) = datum.characters(&ctx)?;
        Ok(HpKernel {
            kernel: NpKernel::new(ctx, &a, &b)?,
            norm,
        })
    }

    pub fn np(&self) -> &NpKernel {
        &self.kernel
    }

    pub fn eval(&self, t: u64) -> Result<HpValue> {
        let raw = self.kernel.eval(t);
        let v = raw.snapped.ok_or(Error::Snap {
            re: raw.re,
            im: raw.im,
            tol: self.kernel.tolerance(),
        })?;
        Ok(HpValue {
            raw,
            numerator: self.norm.sign as i64 * v,
            p: self.kernel.ctx().p(),
            weight: self.norm.weight,
        })
    }
}

/// H_p(HD; t), defined for p ≡ 1 mod M(HD).
pub fn hp_sum(datum: &HGDatum, ctx: &Arc<PrimeField>, t: u64, norm: HpNormalization) -> Result<HpValue> {
    HpKernel::new(datum, ctx.clone(), norm)?.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> Arc<PrimeField> {
        PrimeField::shared(p).unwrap()
    }

    #[test]
    fn jacobi_examples() {
        for p in [5u64, 7, 11, 13] {
            let f = ctx(p);
            let e = f.trivial();
            assert_eq!(jacobi_sum(&f, e, e).unwrap().snapped, Some(p as i64 - 2));
            assert_eq!(bracket(&f, e, e).unwrap().snapped, Some(-(p as i64 - 2)));
        }
        let f = ctx(7);
        let phi = f.quadratic();
        assert_eq!(jacobi_sum(&f, phi, phi).unwrap().snapped, Some(1));
        assert_eq!(bracket(&f, phi, f.trivial()).unwrap().snapped, Some(1));
        let f = ctx(13);
        let c6 = f.char(2);
        let j = jacobi_sum(&f, c6, c6).unwrap();
        assert!((j.z().norm() - 13f64.sqrt()).abs() < snap_tolerance(13, 2));
    }

    #[test]
    fn table_matches_direct() {
        let f = ctx(13);
        let t = JacobiTable::new(f.clone());
        for a in 0..12 {
            for b in 0..12 {
                let (a, b) = (f.char(a), f.char(b));
                let d = jacobi_sum(&f, a, b).unwrap().z();
                assert!((t.jacobi(a, b) - d).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn np_at_zero_is_delta_branch() {
        let f = ctx(13);
        let (a, b) = (
            [f.quadratic(), f.char(3), f.char(9)],
            [f.trivial(), f.char(2), f.char(10)],
        );
        let t = JacobiTable::new(f.clone());
        let mut want = Complex64::new(1.0, 0.0);
        for i in 1..3 {
            want *= t.bracket(a[i], b[i]);
        }
        let sign = -(f.sign(a[1] * b[1]) * f.sign(a[2] * b[2])) as f64;
        let v = np_sum(&f, &a, &b, 0).unwrap();
        assert!((v.z() - sign * want).norm() < 1e-9);
    }

    #[test]
    fn legendre_2p1_is_trace() {
        // ₂P₁(φ,φ;ε;λ) = p + 1 − #E_λ
        for p in [7u64, 11, 13] {
            let f = ctx(p);
            let k = NpKernel::new(f.clone(), &[f.quadratic(); 2], &[f.trivial(); 2]).unwrap();
            for lam in 2..p {
                let mut n = 1i64;
                for x in 0..p {
                    let v = x * ((x + p - 1) % p) % p * ((x + p - lam) % p) % p;
                    n += 1 + f.legendre(v as i64) as i64;
                }
                assert_eq!(k.eval(lam).snapped, Some(p as i64 + 1 - n));
            }
        }
        let f = ctx(7);
        let v = np_sum(&f, &[f.quadratic(); 2], &[f.trivial(); 2], 2).unwrap();
        assert_eq!(v.snapped, Some(0));
    }

    #[test]
    fn bad_lists_rejected() {
        let f = ctx(13);
        assert!(np_sum(&f, &[f.quadratic()], &[f.trivial()], 3).is_err());
        assert!(np_sum(&f, &[f.quadratic(); 2], &[f.quadratic(); 2], 3).is_err());
        let other = PrimeField::new(11).unwrap();
        assert!(matches!(
            jacobi_sum(&f, other.quadratic(), f.quadratic()),
            Err(Error::ContextMismatch)
        ));
    }

    #[test]
    fn clausen_examples() {
        let f = ctx(13);
        // η = χ^1, K = χ^2: ηK has odd exponent, not a square.
        let r = clausen_check(&f, f.char(1), f.char(2), 1).unwrap();
        assert_eq!(r.status, ClausenStatus::Pass);
        assert!(r.lhs[0].abs() < 1e-6 && r.lhs[1].abs() < 1e-6);
        let r = clausen_check(&f, f.char(1), f.char(3), 5).unwrap();
        assert_eq!(r.status, ClausenStatus::Pass);
        let r = clausen_check(&f, f.trivial(), f.char(3), 5).unwrap();
        assert_eq!(r.status, ClausenStatus::Inadmissible);
        let s = clausen_sweep(&ctx(11));
        assert!(s.failures.is_empty());
        assert!(s.generic > 0 && s.at_one > 0);
    }

    #[test]
    fn printed_prefactor_breaks_clausen() {
        let f = ctx(13);
        let (phi, eps) = (f.quadratic(), f.trivial());
        let (eta, k) = (f.char(1), f.char(3));
        let s = (eta * k).square_roots()[0];
        let t = 5;
        let lhs = |pf| {
            let v = np_sum_with(&f, &[phi, eta, eta.conj()], &[eps, k, k.conj()], t, pf).unwrap();
            f.legendre(1 - t as i64) as f64 * v.z()
        };
        let rhs = np_sum(&f, &[phi * k * s.conj(), s], &[eps, k], t).unwrap().z()
            * np_sum(&f, &[phi * k.conj() * s, s.conj()], &[eps, k.conj()], t)
                .unwrap()
                .z()
            - 13.0;
        assert!((lhs(Prefactor::Corrected) - rhs).norm() < 1e-6);
        assert!((lhs(Prefactor::Printed) + rhs).norm() < 1e-6);
        assert!(rhs.norm() > 1e-3);
    }
}
