//! The polynomials F_m, local traces a_Γ(λ, p), and the assembled Hecke trace
//! for the triangle-group rows.

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charsum::{HpKernel, HpNormalization, HpValue};
use crate::curves::{count_hyperelliptic, count_points, isqrt, CurveSpec, FieldRef};
use crate::error::{Error, Result};
use crate::field::{Fp2, PrimeField, QuadExtField};
use crate::hgm::{LambdaPoint, TriangleGroupRow, Vertex};

/// F_m(S, T) with F_m(u² + uv + v², uv) = Σ_{i=0}^{2m} u^i v^{2m−i}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymPolyFm {
    pub m: u32,
    /// coeffs[i] multiplies S^{m−i} T^i.
    pub coeffs: Vec<i128>,
}

const MAX_FM: u32 = 60;

fn binom(n: u32, k: u32) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

impl SymPolyFm {
    /// Through h_k = e₁h_{k−1} − T·h_{k−2} (e₁ = u + v, T = uv), then e₁² = S + T.
    pub fn build(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_FM {
            return Err(Error::InvalidParameter(format!("F_m needs 1 <= m <= {MAX_FM}")));
        }
        let k = 2 * m as usize;
        // h[k][j] multiplies e₁^{k−2j} T^j
        let mut h: Vec<Vec<i128>> = vec![vec![1], vec![1]];
        for kk in 2..=k {
            let mut row = vec![0i128; kk / 2 + 1];
            for (j, c) in h[kk - 1].iter().enumerate() {
                row[j] += c;
            }
            for (j, c) in h[kk - 2].iter().enumerate() {
                row[j + 1] -= c;
            }
            h.push(row);
        }
        let mut coeffs = vec![0i128; m as usize + 1];
        for (j, &c) in h[k].iter().enumerate() {
            // c·(S + T)^{m−j}·T^j
            let e = m - j as u32;
            for i in 0..=e {
                coeffs[j + i as usize] += c * binom(e, i);
            }
        }
        Ok(SymPolyFm { m, coeffs })
    }

    pub fn eval(&self, s: i128, t: i128) -> Result<i128> {
        let mut acc: i128 = 0;
        let mut tp: i128 = 1;
        let mut terms = vec![0i128; self.coeffs.len()];
        for (i, term) in terms.iter_mut().enumerate() {
            *term = tp;
            if i + 1 < self.coeffs.len() {
                tp = tp.checked_mul(t).ok_or(Error::Overflow("F_m"))?;
            }
        }
        for (i, &c) in self.coeffs.iter().enumerate() {
            let sp = s.checked_pow(self.m - i as u32).ok_or(Error::Overflow("F_m"))?;
            let v = c
                .checked_mul(sp)
                .and_then(|x| x.checked_mul(terms[i]))
                .ok_or(Error::Overflow("F_m"))?;
            acc = acc.checked_add(v).ok_or(Error::Overflow("F_m"))?;
        }
        Ok(acc)
    }
}

pub fn build_fm(m: u32) -> Result<SymPolyFm> {
    SymPolyFm::build(m)
}

/// Precomputed a_Γ(·, p) for one row and prime.
#[derive(Debug, Clone)]
pub struct RowEvaluator {
    row: TriangleGroupRow,
    ctx: Arc<PrimeField>,
    kernel: HpKernel,
}

impl RowEvaluator {
    pub fn new(row: &TriangleGroupRow, ctx: Arc<PrimeField>) -> Result<Self> {
        Self::with_normalization(row, ctx, row.normalization)
    }

    pub fn with_normalization(row: &TriangleGroupRow, ctx: Arc<PrimeField>, norm: HpNormalization) -> Result<Self> {
        let m = row.level();
        if !ctx.order().is_multiple_of(m) {
            return Err(Error::Congruence { p: ctx.p(), modulus: m });
        }
        let kernel = HpKernel::new(&row.datum, ctx.clone(), norm)?;
        Ok(RowEvaluator {
            row: row.clone(),
            ctx,
            kernel,
        })
    }

    pub fn ctx(&self) -> &Arc<PrimeField> {
        &self.ctx
    }

    pub fn row(&self) -> &TriangleGroupRow {
        &self.row
    }

    pub fn hp(&self, t: u64) -> Result<HpValue> {
        self.kernel.eval(t)
    }

    /// a_Γ(λ, p) for generic λ.
    pub fn a_gamma(&self, lambda: u64) -> Result<i64> {
        let lambda = lambda % self.ctx.p();
        if self.row.is_special(&self.ctx, lambda) {
            return Err(Error::SpecialLambda(lambda.to_string()));
        }
        let local = self
            .row
            .a_rule
            .local(&self.ctx, lambda)
            .ok_or_else(|| Error::SpecialLambda(lambda.to_string()))?;
        let h = self.kernel.eval(local.t)?;
        let v = h.scaled(local.p_power).ok_or_else(|| {
            Error::Calibration(format!(
                "H_p({}) = {} is not integral after scaling by p^{}",
                local.t,
                h.value(),
                local.p_power
            ))
        })?;
        Ok(local.phi as i64 * v)
    }

    /// (λ, a_Γ) for every generic λ, ascending in λ.
    pub fn a_values(&self, parallel: bool) -> Result<Vec<(u64, i64)>> {
        let lams = self.row.generic_lambdas(&self.ctx);
        let f = |&l: &u64| self.a_gamma(l).map(|a| (l, a));
        if parallel {
            lams.par_iter().map(f).collect()
        } else {
            lams.iter().map(f).collect()
        }
    }
}

pub fn a_gamma(row: &TriangleGroupRow, lambda: u64, ctx: &Arc<PrimeField>) -> Result<i64> {
    RowEvaluator::new(row, ctx.clone())?.a_gamma(lambda)
}

/// F_{k/2}(a_Γ(λ, p), p).
pub fn frobenius_trace_vk(row: &TriangleGroupRow, lambda: u64, ctx: &Arc<PrimeField>, k: u32) -> Result<i128> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!("k = {k} must be even and >= 2")));
    }
    let a = a_gamma(row, lambda, ctx)?;
    SymPolyFm::build(k / 2)?.eval(a as i128, ctx.p() as i128)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermKind {
    Generic,
    Cusp,
    Elliptic { order: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceTerm {
    pub lambda: String,
    #[serde(flatten)]
    pub kind: TermKind,
    /// a_Γ(λ, p) for generic terms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    /// None when no formula is available.
    pub value: Option<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub group: String,
    pub p: u64,
    pub k: u32,
    pub weight: u32,
    pub terms: Vec<TraceTerm>,
    pub generic_sum: i128,
    pub cusp_sum: i128,
    pub elliptic_sum: Option<i128>,
    /// generic + cusp terms.
    pub partial_sum: i128,
    /// Σ of all terms; None unless every elliptic term is available.
    pub total: Option<i128>,
    pub partial: bool,
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub displayed_total: Option<i128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_hp_at_one: Option<i64>,
    pub oracle: Option<i128>,
    pub residual: Option<i128>,
    pub target_dim: Option<u32>,
}

impl TraceReport {
    /// Attach an independent value of −Tr(T_p) and the residual against it.
    pub fn with_oracle(mut self, oracle: i128) -> Self {
        self.oracle = Some(oracle);
        self.residual = Some(self.total.unwrap_or(self.partial_sum) - oracle);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TraceOptions {
    pub parallel: bool,
}

pub const ELLIPTIC_UNAVAILABLE: &str = "elliptic terms unavailable";

/// −Tr(T_p | S_{k+2}) as a sum of local terms over ℙ¹(𝔽_p).
pub fn hecke_trace(row: &TriangleGroupRow, p: u64, k: u32, opts: TraceOptions) -> Result<TraceReport> {
    hecke_trace_in(row, PrimeField::shared(p)?, k, opts)
}

/// As [`hecke_trace`] with a caller-supplied field (e.g. a chosen generator).
pub fn hecke_trace_in(row: &TriangleGroupRow, ctx: Arc<PrimeField>, k: u32, opts: TraceOptions) -> Result<TraceReport> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!("k = {k} must be even and >= 2")));
    }
    let p = ctx.p();
    if p <= 5 {
        return Err(Error::InvalidParameter("need p > 5".into()));
    }
    let eval = RowEvaluator::new(row, ctx.clone())?;
    let fm = SymPolyFm::build(k / 2)?;
    let pi = p as i128;
    let avals = eval.a_values(opts.parallel)?;
    let mut terms = Vec::with_capacity(avals.len() + 3);
    let mut generic_sum: i128 = 0;
    for (l, a) in avals {
        let v = fm.eval(a as i128, pi)?;
        generic_sum = generic_sum.checked_add(v).ok_or(Error::Overflow("trace sum"))?;
        terms.push(TraceTerm {
            lambda: l.to_string(),
            kind: TermKind::Generic,
            a: Some(a),
            value: Some(v),
        });
    }
    let is246 = row.signature == [Vertex::Order(2), Vertex::Order(4), Vertex::Order(6)];
    let complete = is246 && k == 6;
    let p3 = pi * pi * pi;
    let leg = |x: i64| ctx.legendre(x) as i128;
    let mut p_hp_at_one = None;
    let mut displayed_total = None;
    let mut cusp_sum = 0i128;
    let mut elliptic_sum = Some(0i128);
    let mut specials = row.special_points();
    specials.sort_by_key(|s| s.lambda);
    for sp in specials {
        let lambda = sp.lambda.to_string();
        match sp.vertex {
            Vertex::Cusp => {
                cusp_sum += 1;
                terms.push(TraceTerm {
                    lambda,
                    kind: TermKind::Cusp,
                    a: None,
                    value: Some(1),
                });
            }
            Vertex::Order(e) => {
                let value = if complete {
                    Some(match (e, sp.lambda) {
                        (2, _) => {
                            let ph = eval
                                .hp(1)?
                                .scaled(1)
                                .ok_or_else(|| Error::Calibration("p*H_p(1) is not an integer".into()))?;
                            p_hp_at_one = Some(ph);
                            let ph = ph as i128;
                            pi * (ph * ph - pi * pi)
                        }
                        (4, LambdaPoint::Infinity) => leg(-1) * p3,
                        (6, LambdaPoint::Finite(0)) => leg(-3) * p3,
                        _ => unreachable!("(2,4,6) table layout"),
                    })
                } else {
                    None
                };
                elliptic_sum = match (elliptic_sum, value) {
                    (Some(s), Some(v)) => Some(s + v),
                    _ => None,
                };
                terms.push(TraceTerm {
                    lambda,
                    kind: TermKind::Elliptic { order: e },
                    a: None,
                    value,
                });
            }
        }
    }
    let partial_sum = generic_sum + cusp_sum;
    let mut flags = Vec::new();
    let total = if complete {
        let e = elliptic_sum.unwrap_or(0);
        displayed_total = Some(partial_sum + e + leg(-6) * p3);
        Some(partial_sum + e)
    } else {
        if row.signature.iter().any(|v| matches!(v, Vertex::Order(_))) {
            flags.push(ELLIPTIC_UNAVAILABLE.to_string());
        }
        elliptic_sum.filter(|_| false)
    };
    let partial = total.is_none();
    let target_dim = if complete { Some(1) } else { None };
    Ok(TraceReport {
        group: row.name(),
        p,
        k,
        weight: k + 2,
        terms,
        generic_sum,
        cusp_sum,
        elliptic_sum: if partial { None } else { elliptic_sum },
        partial_sum,
        total,
        partial,
        flags,
        displayed_total,
        p_hp_at_one,
        oracle: None,
        residual: None,
        target_dim,
    })
}

/// Which test decides a candidate normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationCriterion {
    /// a_Γ + p = t² with |t| ≤ 2√p.
    PerfectSquare,
    /// 0 ≤ a_Γ + p ≤ 4p and the squarefree part of a_Γ + p divides M(HD).
    SquareClass,
}

pub fn squarefree_part(n: i64) -> i64 {
    let mut n = n.abs();
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    out * n
}

impl CalibrationCriterion {
    pub fn accepts(self, a: i64, p: u64, level: u64) -> bool {
        let s = a + p as i64;
        let p = p as i64;
        match self {
            CalibrationCriterion::PerfectSquare => {
                let t = isqrt(s);
                s >= 0 && t * t == s && t * t <= 4 * p
            }
            CalibrationCriterion::SquareClass => {
                (0..=4 * p).contains(&s) && (s == 0 || (level as i64) % squarefree_part(s) == 0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub normalization: HpNormalization,
    pub pass: bool,
    /// First (p, λ) where the candidate failed.
    pub first_failure: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpCalibration {
    pub group: String,
    pub criterion: CalibrationCriterion,
    pub primes: Vec<u64>,
    pub candidates: Vec<CandidateOutcome>,
}

impl HpCalibration {
    /// The unique passing normalization.
    pub fn unique(&self) -> Result<HpNormalization> {
        let ok: Vec<_> = self.candidates.iter().filter(|c| c.pass).collect();
        match ok.as_slice() {
            [c] => Ok(c.normalization),
            [] => Err(Error::Calibration(format!("no normalization works for {}", self.group))),
            _ => Err(Error::Calibration(format!(
                "normalization for {} is not unique",
                self.group
            ))),
        }
    }
}

type Sample = (u64, i8, u32, i64);

/// Search sign ∈ {±1}, w ∈ 0..=3 against the criterion at every generic λ.
pub fn calibrate_hp_weight(
    row: &TriangleGroupRow,
    primes: &[u64],
    criterion: CalibrationCriterion,
) -> Result<HpCalibration> {
    let m = row.level();
    let primes: Vec<u64> = primes.iter().copied().filter(|p| (p - 1) % m == 0).collect();
    if primes.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "calibration needs at least 3 primes = 1 mod {m}"
        )));
    }
    // per prime: (λ, sign, weight, a) for every candidate
    let mut raw: Vec<(u64, Vec<Sample>)> = Vec::new();
    for &p in &primes {
        let ctx = PrimeField::shared(p)?;
        let kernel = HpKernel::new(&row.datum, ctx.clone(), HpNormalization::IDENTITY)?;
        let mut vals = Vec::new();
        for l in row.generic_lambdas(&ctx) {
            let Some(loc) = row.a_rule.local(&ctx, l) else { continue };
            vals.push((l, loc.phi, loc.p_power, kernel.eval(loc.t)?.numerator));
        }
        raw.push((p, vals));
    }
    let mut candidates = Vec::new();
    for sign in [1i8, -1] {
        for weight in 0..=3u32 {
            let mut first_failure = None;
            'outer: for (p, vals) in &raw {
                let pi = *p as i64;
                for &(l, phi, pp, np) in vals {
                    let num = phi as i64 * sign as i64 * np * pi.pow(pp);
                    let den = pi.pow(weight);
                    if num % den != 0 || !criterion.accepts(num / den, *p, m) {
                        first_failure = Some((*p, l));
                        break 'outer;
                    }
                }
            }
            candidates.push(CandidateOutcome {
                normalization: HpNormalization { sign, weight },
                pass: first_failure.is_none(),
                first_failure,
            });
        }
    }
    Ok(HpCalibration {
        group: row.name(),
        criterion,
        primes,
        candidates,
    })
}

/// How a row-(2,∞,∞) coordinate λ is matched with a Legendre parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LegendreMap {
    /// λ′ = λ, 1/λ, 1−λ, 1/(1−λ), λ/(λ−1), (λ−1)/λ
    Identity,
    Inverse,
    OneMinus,
    InverseOneMinus,
    Ratio,
    RatioInverse,
    /// λ = 1/(4x(1−x))
    QuadraticInverse,
    /// λ = 4x(1−x)
    Quadratic,
}

impl LegendreMap {
    pub const ALL: [LegendreMap; 8] = [
        LegendreMap::Identity,
        LegendreMap::Inverse,
        LegendreMap::OneMinus,
        LegendreMap::InverseOneMinus,
        LegendreMap::Ratio,
        LegendreMap::RatioInverse,
        LegendreMap::QuadraticInverse,
        LegendreMap::Quadratic,
    ];

    /// Representative modulo λ ↦ 1/λ, which swaps the two cusps of (2,∞,∞).
    pub fn canonical(self) -> LegendreMap {
        match self {
            LegendreMap::Inverse => LegendreMap::Identity,
            LegendreMap::RatioInverse => LegendreMap::OneMinus,
            LegendreMap::Ratio => LegendreMap::InverseOneMinus,
            LegendreMap::Quadratic => LegendreMap::QuadraticInverse,
            m => m,
        }
    }

    fn mobius(self, k: &PrimeField, l: u64) -> Option<u64> {
        let one_minus = k.sub(1, l);
        match self {
            LegendreMap::Identity => Some(l),
            LegendreMap::Inverse => k.inv(l),
            LegendreMap::OneMinus => Some(one_minus),
            LegendreMap::InverseOneMinus => k.inv(one_minus),
            LegendreMap::Ratio => k.inv(k.sub(l, 1)).map(|i| k.mul(l, i)),
            LegendreMap::RatioInverse => k.inv(l).map(|i| k.mul(k.sub(l, 1), i)),
            _ => None,
        }
    }

    /// Discriminant of the quadratic x² − x + c whose roots are the preimages.
    fn discriminant(self, k: &PrimeField, l: u64) -> Option<u64> {
        match self {
            LegendreMap::QuadraticInverse => k.inv(l).map(|i| k.sub(1, i)),
            LegendreMap::Quadratic => Some(k.sub(1, l)),
            _ => None,
        }
    }
}

/// #E_x(𝔽_{p²}) for y² = X(X−1)(X−x), x ∈ 𝔽_{p²}.
pub fn legendre_count_fp2(k: &QuadExtField, x: Fp2) -> i64 {
    let one = (1, 0);
    let f = [one, k.neg(k.add(one, x)), x, (0, 0)];
    count_hyperelliptic(k, &f)
}

fn legendre_trace(k: &PrimeField, x: u64) -> Option<i64> {
    count_points(&CurveSpec::Legendre { lambda: x as i64 }, FieldRef::Prime(k))
        .ok()?
        .trace()
}

/// Predicted a_Γ(λ, p) under a map, from Legendre counts alone.
pub fn legendre_prediction(map: LegendreMap, k: &Arc<PrimeField>, ext: &QuadExtField, l: u64) -> Option<i64> {
    let p = k.p() as i64;
    if let Some(lp) = map.mobius(k, l) {
        return legendre_trace(k, lp).map(|a| a * a - p);
    }
    let disc = map.discriminant(k, l)?;
    let half = k.inv(2).expect("p odd");
    match k.sqrt(disc) {
        Some(r) => {
            let x = k.mul(k.add(1, r), half);
            legendre_trace(k, x).map(|a| a * a - p)
        }
        None => {
            let r = ext.sqrt_base(disc);
            let x = ext.mul(ext.add((1, 0), r), (half, 0));
            let q = p * p;
            let a2 = q + 1 - legendre_count_fp2(ext, x);
            Some(p - k.legendre(-1) as i64 * a2)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreCandidate {
    pub map: LegendreMap,
    pub consistent: bool,
    pub first_failure: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreCalibration {
    pub primes: Vec<u64>,
    pub candidates: Vec<LegendreCandidate>,
}

impl LegendreCalibration {
    /// The consistent map, unique up to [`LegendreMap::canonical`].
    pub fn chosen(&self) -> Result<LegendreMap> {
        let mut ok: Vec<_> = self
            .candidates
            .iter()
            .filter(|c| c.consistent)
            .map(|c| c.map.canonical())
            .collect();
        ok.dedup();
        match ok.as_slice() {
            [c] => Ok(*c),
            [] => Err(Error::Calibration("no consistent Legendre identification".into())),
            _ => Err(Error::Calibration("Legendre identification is not unique".into())),
        }
    }
}

/// Mismatches of a_Γ(λ, p) for row (2,∞,∞) against the map's prediction.
pub fn legendre_mismatches(map: LegendreMap, p: u64) -> Result<Vec<u64>> {
    let row = TriangleGroupRow::by_signature("2,oo,oo")?;
    let ctx = PrimeField::shared(p)?;
    let ext = QuadExtField::new(ctx.clone());
    let eval = RowEvaluator::new(&row, ctx.clone())?;
    let mut bad = Vec::new();
    for (l, a) in eval.a_values(false)? {
        if legendre_prediction(map, &ctx, &ext, l) != Some(a) {
            bad.push(l);
        }
    }
    Ok(bad)
}

/// Exhaustive matching of every candidate map over the given odd primes.
pub fn calibrate_legendre_relation(primes: &[u64]) -> Result<LegendreCalibration> {
    if primes.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 primes".into()));
    }
    let mut candidates = Vec::new();
    for map in LegendreMap::ALL {
        let mut first_failure = None;
        for &p in primes {
            if let Some(&l) = legendre_mismatches(map, p)?.first() {
                first_failure = Some((p, l));
                break;
            }
        }
        candidates.push(LegendreCandidate {
            map,
            consistent: first_failure.is_none(),
            first_failure,
        });
    }
    Ok(LegendreCalibration {
        primes: primes.to_vec(),
        candidates,
    })
}

/// gcd helper kept for callers that reduce exponents.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
