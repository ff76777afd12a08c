//! Complex hypergeometric series, the hypergeometric ODE residual, the Legendre
//! period integral and the complex Clausen-type product formula.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hgm::{triangle_table, HGDatum};

pub const DEFAULT_TRUNCATION: usize = 80;
/// Tolerance for |t| ≤ ½.
pub const TOL_INNER: f64 = 1e-10;
/// Tolerance for |t| ≤ 0.9.
pub const TOL_OUTER: f64 = 1e-6;
pub const EULER_TOL: f64 = 1e-8;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn q_f64(x: &crate::hgm::Q) -> f64 {
    x.to_f64().expect("small rational")
}

fn nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Σ_{k≤K} Π(a_i)_k / Π(b_j)_k · t^k. The k! must be supplied as a b_j = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval {
    pub t: [f64; 2],
    pub truncation: usize,
    pub value: [f64; 2],
    /// |first omitted term|·1/(1 − |t|).
    pub tail_bound: f64,
}

impl SeriesEval {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }
}

/// The coefficients c₀..c_K.
pub fn series_coeffs(a: &[Complex64], b: &[Complex64], k: usize) -> Result<Vec<Complex64>> {
    if let Some(bad) = b.iter().find(|&&x| nonpositive_integer(x)) {
        return Err(Error::InvalidParameter(format!("Pochhammer pole at b = {bad}")));
    }
    let mut out = Vec::with_capacity(k + 1);
    let mut cur = c(1.0);
    out.push(cur);
    for n in 0..k {
        let nf = n as f64;
        let num: Complex64 = a.iter().map(|&x| x + nf).product();
        let den: Complex64 = b.iter().map(|&x| x + nf).product();
        cur = cur * num / den;
        out.push(cur);
    }
    Ok(out)
}

pub fn hyper_series(a: &[Complex64], b: &[Complex64], t: Complex64, k: usize) -> Result<SeriesEval> {
    let cs = series_coeffs(a, b, k + 1)?;
    let mut sum = c(0.0);
    let mut tp = c(1.0);
    for ck in &cs[..=k] {
        sum += ck * tp;
        tp *= t;
    }
    let r = t.norm();
    let tail = (cs[k + 1] * tp).norm() / (1.0 - r).max(1e-300);
    Ok(SeriesEval {
        t: [t.re, t.im],
        truncation: k,
        value: [sum.re, sum.im],
        tail_bound: tail,
    })
}

/// ₚF_q(a; b; t) in the usual normalization (k! in the denominator).
pub fn pfq(a: &[f64], b: &[f64], t: Complex64, k: usize) -> Result<Complex64> {
    let a: Vec<Complex64> = a.iter().map(|&x| c(x)).collect();
    let mut b: Vec<Complex64> = b.iter().map(|&x| c(x)).collect();
    b.push(c(1.0));
    hyper_series(&a, &b, t, k).map(|s| s.z())
}

/// Sum until the terms drop below `eps`, for 0 ≤ |t| < 1.
pub fn pfq_adaptive(a: &[f64], b: &[f64], t: Complex64, eps: f64, max_terms: usize) -> Result<(Complex64, usize)> {
    let mut term = c(1.0);
    let mut sum = term;
    let mut quiet = 0;
    for n in 0..max_terms {
        let nf = n as f64;
        let num: f64 = a.iter().map(|&x| x + nf).product();
        let den: f64 = b.iter().map(|&x| x + nf).product::<f64>() * (nf + 1.0);
        if den == 0.0 {
            return Err(Error::InvalidParameter("Pochhammer pole".into()));
        }
        term = term * t * (num / den);
        sum += term;
        // a few consecutive tiny terms guard against accidental zeros
        if term.norm() < eps * (1.0 - t.norm()) {
            quiet += 1;
            if quiet >= 3 {
                return Ok((sum, n + 1));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Numerical(format!(
        "series did not converge in {max_terms} terms"
    )))
}

fn datum_params(hd: &HGDatum) -> (Vec<Complex64>, Vec<Complex64>) {
    (
        hd.alpha().iter().map(|x| c(q_f64(x))).collect(),
        hd.beta().iter().map(|x| c(q_f64(x))).collect(),
    )
}

/// F(α, β; t) truncated at K.
pub fn nf_series(hd: &HGDatum, t: Complex64, k: usize) -> Result<SeriesEval> {
    if t.norm() > 0.9 {
        return Err(Error::InvalidParameter(format!("|t| = {} exceeds 0.9", t.norm())));
    }
    if k < 10 {
        return Err(Error::InvalidParameter(format!("truncation {k} < 10")));
    }
    let (a, b) = datum_params(hd);
    hyper_series(&a, &b, t, k)
}

/// |[Π(θ + b_j − 1) − tΠ(θ + a_i)] F_K(t)| with θ acting as k on t^k.
pub fn ode_residual(hd: &HGDatum, t: Complex64, k: usize) -> Result<f64> {
    if t.norm() > 0.9 {
        return Err(Error::InvalidParameter(format!("|t| = {} exceeds 0.9", t.norm())));
    }
    let (a, b) = datum_params(hd);
    let cs = series_coeffs(&a, &b, k)?;
    let pb = |n: f64| -> Complex64 { b.iter().map(|&x| x + n - 1.0).product() };
    let pa = |n: f64| -> Complex64 { a.iter().map(|&x| x + n).product() };
    let mut res = c(0.0);
    let mut tp = c(1.0);
    for n in 0..=k + 1 {
        let here = if n <= k { pb(n as f64) * cs[n] } else { c(0.0) };
        let from_below = if n >= 1 { pa((n - 1) as f64) * cs[n - 1] } else { c(0.0) };
        res += (here - from_below) * tp;
        tp *= t;
    }
    Ok(res.norm())
}

/// The predicted residual −c_K·Π(K + a_i)·t^{K+1}.
pub fn ode_boundary_term(hd: &HGDatum, t: Complex64, k: usize) -> Result<f64> {
    let (a, b) = datum_params(hd);
    let cs = series_coeffs(&a, &b, k)?;
    let pa: Complex64 = a.iter().map(|&x| x + k as f64).product();
    Ok((cs[k] * pa * t.powu(k as u32 + 1)).norm())
}

/// λ(1−λ)f″ + (1−2λ)f′ − f/4 on the truncated ₂F₁(½,½;1;λ).
pub fn legendre_ode_residual(lambda: f64, k: usize) -> Result<f64> {
    let cs = series_coeffs(&[c(0.5), c(0.5)], &[c(1.0), c(1.0)], k)?;
    let (mut f, mut f1, mut f2) = (0.0, 0.0, 0.0);
    for (n, ck) in cs.iter().enumerate() {
        let ck = ck.re;
        let nf = n as f64;
        f += ck * lambda.powi(n as i32);
        if n >= 1 {
            f1 += ck * nf * lambda.powi(n as i32 - 1);
        }
        if n >= 2 {
            f2 += ck * nf * (nf - 1.0) * lambda.powi(n as i32 - 2);
        }
    }
    Ok((lambda * (1.0 - lambda) * f2 + (1.0 - 2.0 * lambda) * f1 - f / 4.0).abs())
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * eps {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical(format!("quadrature did not converge on [{a}, {b}]")));
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)?)
}

/// Adaptive Simpson on [a, b].
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> Result<f64> {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, eps, 40)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerReport {
    pub lambda: f64,
    /// (1/π)∫₁^∞ dx/√(x(x−1)(x−λ))
    pub integral: f64,
    pub series: f64,
    pub series_terms: usize,
    /// 1/AGM(1, √(1−λ))
    pub agm: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

/// Period integral against ₂F₁(½,½;1;λ), 0 < λ < 1.
///
/// [1,2] uses x = 1 + v², [2,∞) uses x = 1 + 1/w²; both integrands are smooth on [0,1].
pub fn euler_period_check(lambda: f64) -> Result<EulerReport> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} not in (0,1)")));
    }
    let near = |v: f64| 2.0 / ((1.0 + v * v) * (1.0 + v * v - lambda)).sqrt();
    let far = |w: f64| 2.0 / ((1.0 + w * w) * (1.0 + (1.0 - lambda) * w * w)).sqrt();
    let i1 = adaptive_simpson(&near, 0.0, 1.0, 1e-13)?;
    let i2 = adaptive_simpson(&far, 0.0, 1.0, 1e-13)?;
    let integral = (i1 + i2) / std::f64::consts::PI;
    let (s, n) = pfq_adaptive(&[0.5, 0.5], &[1.0], c(lambda), 1e-15, 1_000_000)?;
    let series = s.re;
    let error = (integral - series).abs();
    Ok(EulerReport {
        lambda,
        integral,
        series,
        series_terms: n,
        agm: 1.0 / agm(1.0, (1.0 - lambda).sqrt()),
        error,
        tolerance: EULER_TOL,
        pass: error < EULER_TOL,
    })
}

/// 0.05, 0.10, …, 0.95.
pub fn euler_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClausenComplexReport {
    pub a: f64,
    pub b: f64,
    pub t: [f64; 2],
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub error: f64,
    pub pass: bool,
}

/// (1−t)^{−½}₃F₂(½, a−b+½, b−a+½; a+b+½, 3/2−a−b; t) = ₂F₁(a,b;a+b+½;t)·₂F₁(1−a,1−b;3/2−a−b;t).
pub fn clausen_complex_check(a: f64, b: f64, t: Complex64) -> Result<ClausenComplexReport> {
    if t.norm() > 0.5 {
        return Err(Error::InvalidParameter(format!("|t| = {} exceeds 1/2", t.norm())));
    }
    let k = DEFAULT_TRUNCATION;
    let c1 = a + b + 0.5;
    let c2 = 1.5 - a - b;
    let lhs = (c(1.0) - t).powf(-0.5) * pfq(&[0.5, a - b + 0.5, b - a + 0.5], &[c1, c2], t, k)?;
    let rhs = pfq(&[a, b], &[c1], t, k)? * pfq(&[1.0 - a, 1.0 - b], &[c2], t, k)?;
    let error = (lhs - rhs).norm();
    Ok(ClausenComplexReport {
        a,
        b,
        t: [t.re, t.im],
        lhs: [lhs.re, lhs.im],
        rhs: [rhs.re, rhs.im],
        error,
        pass: error < TOL_INNER,
    })
}

/// Random admissible (a, b, t): a, b ∈ (0.05, 0.95), |t| ≤ ½.
pub fn clausen_samples(seed: u64, n: usize) -> Vec<(f64, f64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a: f64 = rng.random_range(0.05..0.95);
        let b: f64 = rng.random_range(0.05..0.95);
        let r: f64 = rng.random_range(0.0..0.5);
        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        // keep both lower parameters away from the pole at 0
        if (a + b + 0.5).abs() < 0.05 || (1.5 - a - b).abs() < 0.05 {
            continue;
        }
        out.push((a, b, Complex64::from_polar(r, th)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContiguityReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t: f64,
    pub finite_difference: f64,
    pub series: f64,
    pub error: f64,
    pub pass: bool,
}

/// d/dt ₂F₁(a,b;c;t) against (ab/c)·₂F₁(a+1,b+1;c+1;t), central differences.
pub fn contiguity_check(a: f64, b: f64, cc: f64, t: f64) -> Result<ContiguityReport> {
    let f = |x: f64| pfq_adaptive(&[a, b], &[cc], c(x), 1e-16, 200_000).map(|(z, _)| z.re);
    let h = 1e-5;
    let fd = (f(t + h)? - f(t - h)?) / (2.0 * h);
    let (s, _) = pfq_adaptive(&[a + 1.0, b + 1.0], &[cc + 1.0], c(t), 1e-16, 200_000)?;
    let series = a * b / cc * s.re;
    let error = (fd - series).abs();
    Ok(ContiguityReport {
        a,
        b,
        c: cc,
        t,
        finite_difference: fd,
        series,
        error,
        pass: error < TOL_OUTER,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeReport {
    pub group: String,
    pub t: [f64; 2],
    pub truncation: usize,
    pub residual: f64,
    pub boundary_term: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Ten points with |t| ≤ ½, off the real segment too.
pub fn ode_sample_points() -> Vec<Complex64> {
    (0..10)
        .map(|i| {
            let r = 0.05 + 0.045 * i as f64;
            Complex64::from_polar(r, 0.7 * i as f64)
        })
        .collect()
}

/// ODE residual for every table row at every sample point.
pub fn ode_suite(k: usize) -> Result<Vec<OdeReport>> {
    let mut out = Vec::new();
    for row in triangle_table() {
        for t in ode_sample_points() {
            let residual = ode_residual(&row.datum, t, k)?;
            out.push(OdeReport {
                group: row.name(),
                t: [t.re, t.im],
                truncation: k,
                residual,
                boundary_term: ode_boundary_term(&row.datum, t, k)?,
                tolerance: TOL_INNER,
                pass: residual < TOL_INNER,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgm::TriangleGroupRow;

    #[test]
    fn series_basics() {
        let hd = HGDatum::parse("1/2,1/2", "1,1").unwrap();
        assert_eq!(nf_series(&hd, c(0.0), 20).unwrap().z(), c(1.0));
        let s = nf_series(&hd, c(1e-3), 20).unwrap().z().re;
        assert!((s - (1.0 + 1e-3 / 4.0 + 9.0 / 64.0 * 1e-6)).abs() < 1e-10);
        assert!(nf_series(&hd, c(0.95), 20).is_err());
        assert!(nf_series(&hd, c(0.5), 5).is_err());
        assert!(series_coeffs(&[c(0.5)], &[c(-2.0)], 5).is_err());
    }

    #[test]
    fn series_converges_246() {
        let hd = TriangleGroupRow::by_signature("2,4,6").unwrap().datum;
        let a = nf_series(&hd, c(0.3), 60).unwrap().z();
        let b = nf_series(&hd, c(0.3), 80).unwrap().z();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn ode_residual_is_boundary_term() {
        for row in triangle_table() {
            for t in [c(0.5), Complex64::new(0.2, -0.3)] {
                let r = ode_residual(&row.datum, t, 50).unwrap();
                let b = ode_boundary_term(&row.datum, t, 50).unwrap();
                assert!(r < 1e-10, "{} {r}", row.name());
                assert!((r - b).abs() <= 1e-14 + 1e-6 * b);
            }
            assert_eq!(ode_residual(&row.datum, c(0.0), 50).unwrap(), 0.0);
        }
        assert!(legendre_ode_residual(0.2, 80).unwrap() < 1e-10);
    }

    #[test]
    fn euler_period() {
        let r = euler_period_check(0.5).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.agm - r.series).abs() < 1e-12);
        let r = euler_period_check(0.9).unwrap();
        assert!(r.error < 1e-6);
        let r = euler_period_check(1e-9).unwrap();
        assert!((r.integral - 1.0).abs() < 1e-8);
        assert!(euler_period_check(1.0).is_err());
    }

    #[test]
    fn clausen_complex() {
        let r = clausen_complex_check(1.0 / 3.0, 0.25, c(0.2)).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.lhs[0] - 1.14801289649009).abs() < 1e-12);
        let r = clausen_complex_check(0.3, 0.4, c(0.0)).unwrap();
        assert_eq!(r.lhs, [1.0, 0.0]);
        assert!(clausen_complex_check(0.3, 0.4, c(0.6)).is_err());
    }

    #[test]
    fn contiguity() {
        assert!(contiguity_check(0.5, 0.5, 1.0, 0.3).unwrap().pass);
        assert!(contiguity_check(1.0 / 3.0, 0.25, 0.7, 0.6).unwrap().pass);
    }
}
