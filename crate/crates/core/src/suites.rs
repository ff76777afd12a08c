//! Invariant suites run by `hgtrace verify` and the acceptance harness.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::charsum::clausen_sweep;
use crate::curves::{
    brute_affine_genlegendre, count_points, count_via_characters, qm_consistency, CurveSpec, FieldRef, QmReport,
};
use crate::error::{Error, Result};
use crate::field::{is_prime, PrimeField, QuadExtField};
use crate::hgm::{triangle_table, TriangleGroupRow};
use crate::trace::{
    build_fm, calibrate_legendre_relation, legendre_mismatches, squarefree_part, LegendreMap, RowEvaluator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Clausen,
    Weil,
    Fm,
    Legendre,
    GenLegendre,
    Qm,
    Analytic,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Clausen,
        Suite::Weil,
        Suite::Fm,
        Suite::Legendre,
        Suite::GenLegendre,
        Suite::Qm,
        Suite::Analytic,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Clausen => "clausen",
            Suite::Weil => "weil",
            Suite::Fm => "fm",
            Suite::Legendre => "legendre",
            Suite::GenLegendre => "genlegendre",
            Suite::Qm => "qm",
            Suite::Analytic => "analytic",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SuiteConfig {
    /// Explicit primes; overrides the per-suite defaults.
    pub primes: Option<Vec<u64>>,
    /// Upper bound replacing the per-suite default range.
    pub max_prime: Option<u64>,
    pub seed: u64,
    pub parallel: bool,
}

impl SuiteConfig {
    /// Explicit primes filtered by `keep`, else primes in [lo, max] filtered by `keep`,
    /// else the defaults.
    fn primes(&self, lo: u64, default: &[u64], keep: impl Fn(u64) -> bool) -> Vec<u64> {
        if let Some(ps) = &self.primes {
            return ps.iter().copied().filter(|&p| keep(p)).collect();
        }
        match self.max_prime {
            Some(m) => (lo..=m).filter(|&p| is_prime(p) && keep(p)).collect(),
            None => default.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: u64,
    pub failures: u64,
    pub pass: bool,
    /// One line per group of checks.
    pub lines: Vec<String>,
    /// First few failing cases.
    pub failing: Vec<String>,
}

const MAX_LISTED: usize = 20;

struct Tally {
    suite: Suite,
    checks: u64,
    failures: u64,
    lines: Vec<String>,
    failing: Vec<String>,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Tally {
            suite,
            checks: 0,
            failures: 0,
            lines: Vec::new(),
            failing: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.failing.len() < MAX_LISTED {
                self.failing.push(what());
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite.to_string(),
            checks: self.checks,
            failures: self.failures,
            pass: self.failures == 0 && self.checks > 0,
            lines: self.lines,
            failing: self.failing,
        }
    }
}

fn map_primes<T: Send>(primes: &[u64], parallel: bool, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    if parallel {
        primes.par_iter().map(|&p| f(p)).collect()
    } else {
        primes.iter().map(|&p| f(p)).collect()
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    Ok(match suite {
        Suite::All => Suite::EACH.iter().map(|&s| run_one(s, cfg)).collect::<Result<_>>()?,
        s => vec![run_one(s, cfg)?],
    })
}

fn run_one(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Clausen => clausen_suite(cfg),
        Suite::Weil => weil_suite(cfg),
        Suite::Fm => fm_suite(cfg),
        Suite::Legendre => legendre_suite(cfg),
        Suite::GenLegendre => genlegendre_suite(cfg),
        Suite::Qm => qm_suite(cfg),
        Suite::Analytic => analytic_suite(cfg),
        Suite::All => unreachable!(),
    }
}

fn clausen_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let primes = cfg.primes(5, &[11, 13, 17, 19], |p| p > 3 && is_prime(p));
    let sweeps = map_primes(&primes, cfg.parallel, |p| Ok(clausen_sweep(&PrimeField::shared(p)?)))?;
    let mut t = Tally::new(Suite::Clausen);
    for s in sweeps {
        t.lines.push(format!(
            "p={} at_one={} generic={} failures={} inadmissible={}",
            s.p,
            s.at_one,
            s.generic,
            s.failures.len(),
            s.inadmissible
        ));
        t.checks += (s.at_one + s.generic) as u64;
        t.failures += s.failures.len() as u64;
        for (e, k, x) in s.failures.iter().take(MAX_LISTED) {
            t.failing.push(format!("p={} eta={e} K={k} t={x}", s.p));
        }
    }
    Ok(t.finish())
}

/// Per row and prime: a_Γ integrality, the literal perfect-square test and the square-class test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilSweep {
    pub group: String,
    pub p: u64,
    pub lambdas: u64,
    /// a_Γ + p = t², |t| ≤ 2√p
    pub literal_failures: Vec<u64>,
    /// 0 ≤ a_Γ + p ≤ 4p with squarefree part dividing the level
    pub class_failures: Vec<u64>,
    pub square_classes: BTreeSet<i64>,
}

pub fn weil_sweep(row: &TriangleGroupRow, p: u64) -> Result<WeilSweep> {
    use crate::trace::CalibrationCriterion::{PerfectSquare, SquareClass};
    let ev = RowEvaluator::new(row, PrimeField::shared(p)?)?;
    let mut out = WeilSweep {
        group: row.name(),
        p,
        lambdas: 0,
        literal_failures: Vec::new(),
        class_failures: Vec::new(),
        square_classes: BTreeSet::new(),
    };
    for (l, a) in ev.a_values(false)? {
        out.lambdas += 1;
        if !PerfectSquare.accepts(a, p, row.level()) {
            out.literal_failures.push(l);
        }
        if SquareClass.accepts(a, p, row.level()) {
            let s = a + p as i64;
            if s != 0 {
                out.square_classes.insert(squarefree_part(s));
            }
        } else {
            out.class_failures.push(l);
        }
    }
    Ok(out)
}

/// Odd primes p ≤ max with p ≡ 1 mod the row level, p > 5.
pub fn row_primes(row: &TriangleGroupRow, max: u64) -> Vec<u64> {
    (7..=max)
        .filter(|&p| is_prime(p) && (p - 1) % row.level() == 0)
        .collect()
}

fn weil_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let max = cfg.max_prime.unwrap_or(61);
    let mut t = Tally::new(Suite::Weil);
    for row in triangle_table() {
        let primes: Vec<u64> = match &cfg.primes {
            Some(ps) => ps
                .iter()
                .copied()
                .filter(|&p| p > 5 && (p - 1) % row.level() == 0)
                .collect(),
            None => row_primes(&row, max),
        };
        let sweeps = map_primes(&primes, cfg.parallel, |p| weil_sweep(&row, p))?;
        let mut literal = 0;
        let mut lambdas = 0;
        let mut classes = BTreeSet::new();
        for s in &sweeps {
            lambdas += s.lambdas;
            literal += s.literal_failures.len();
            classes.extend(s.square_classes.iter().copied());
            for &l in &s.class_failures {
                t.check(false, || format!("{} p={} lambda={l}", s.group, s.p));
            }
            t.checks += s.lambdas - s.class_failures.len() as u64;
        }
        t.lines.push(format!(
            "{} primes={} lambdas={} perfect_square_failures={} square_classes={:?}",
            row.name(),
            primes.len(),
            lambdas,
            literal,
            classes
        ));
    }
    Ok(t.finish())
}

/// F_m(u² + uv + v², uv) = Σ_{i=0}^{2m} u^i v^{2m−i}, exact.
pub fn fm_identity_holds(m: u32, u: i128, v: i128) -> Result<bool> {
    let f = build_fm(m)?;
    let lhs = f.eval(u * u + u * v + v * v, u * v)?;
    let rhs: i128 = (0..=2 * m).map(|i| u.pow(i) * v.pow(2 * m - i)).sum();
    Ok(lhs == rhs)
}

pub fn fm_pairs(seed: u64, n: usize) -> Vec<(i128, i128)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.random_range(-30..=30), rng.random_range(-30..=30)))
        .collect()
}

fn fm_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut t = Tally::new(Suite::Fm);
    let f3 = build_fm(3)?;
    t.check(f3.coeffs == [1, -2, -1, 1], || {
        format!("F_3 coefficients {:?}", f3.coeffs)
    });
    let pairs = fm_pairs(cfg.seed, 100);
    for m in 1..=10 {
        for &(u, v) in &pairs {
            t.check(fm_identity_holds(m, u, v)?, || format!("m={m} u={u} v={v}"));
        }
    }
    t.lines.push(format!(
        "F_3 = {:?}; m <= 10 on {} pairs (seed {})",
        f3.coeffs,
        pairs.len(),
        cfg.seed
    ));
    Ok(t.finish())
}

fn legendre_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let primes = cfg.primes(3, &(3..=101).filter(|&p| is_prime(p)).collect::<Vec<_>>(), |p| {
        p > 2 && is_prime(p)
    });
    let mut t = Tally::new(Suite::Legendre);
    let calib: Vec<u64> = primes.iter().copied().filter(|&p| p >= 7).take(4).collect();
    let map = if calib.len() >= 3 {
        let c = calibrate_legendre_relation(&calib)?;
        let m = c.chosen()?;
        t.lines.push(format!("calibrated on {calib:?}: {m:?}"));
        m
    } else {
        LegendreMap::QuadraticInverse
    };
    let bad = map_primes(&primes, cfg.parallel, |p| legendre_mismatches(map, p).map(|b| (p, b)))?;
    for (p, b) in bad {
        let generic = p - 2;
        t.checks += generic - b.len() as u64;
        for l in b {
            t.check(false, || format!("p={p} lambda={l}"));
        }
    }
    t.lines.push(format!(
        "primes {}..={}",
        primes.first().unwrap_or(&0),
        primes.last().unwrap_or(&0)
    ));
    Ok(t.finish())
}

/// Character-decomposed vs enumerated counts for y⁶ = x⁴(x−1)³(x−λ) over every λ ≠ 0, 1.
pub fn genlegendre_sweep(p: u64) -> Result<Vec<(u64, i64, i64, bool)>> {
    let k = PrimeField::new(p)?;
    let mut out = Vec::new();
    for l in 2..p {
        let spec = CurveSpec::GenLegendre {
            n: 6,
            a: 4,
            b: 3,
            c: 1,
            lambda: l as i64,
        };
        let cc = count_via_characters(&spec, &k)?;
        let brute = count_points(&spec, FieldRef::Prime(&k))?.n_points();
        let affine_ok = cc.affine == brute_affine_genlegendre(&k, 6, 4, 3, 1, l as i64);
        let bound_ok = (cc.new_part_trace as f64).abs() <= 4.0 * (p as f64).sqrt();
        let total = brute.unwrap_or(i64::MIN);
        out.push((l, cc.total, total, affine_ok && bound_ok && Some(cc.total) == brute));
    }
    Ok(out)
}

fn genlegendre_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let primes = cfg.primes(7, &[7, 13, 19, 31, 37], |p| is_prime(p) && p % 6 == 1);
    let sweeps = map_primes(&primes, cfg.parallel, |p| genlegendre_sweep(p).map(|s| (p, s)))?;
    let mut t = Tally::new(Suite::GenLegendre);
    for (p, s) in sweeps {
        t.lines.push(format!("p={p} lambdas={}", s.len()));
        for (l, chars, brute, ok) in s {
            t.check(ok, || format!("p={p} lambda={l} characters={chars} brute={brute}"));
        }
    }
    Ok(t.finish())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmSample {
    pub j: u64,
    pub branch: i8,
    pub n1: i64,
    pub n2: i64,
    pub report: QmReport,
}

/// Every j mod p with −6j a nonzero square (so the sextic is defined over 𝔽_p) and good
/// reduction, both branches. Bad-reduction j are returned separately.
pub fn qm_sweep(p: u64) -> Result<(Vec<QmSample>, Vec<u64>)> {
    let k = PrimeField::shared(p)?;
    let ext = QuadExtField::new(k.clone());
    let mut samples = Vec::new();
    let mut bad = Vec::new();
    for j in 1..p {
        if k.legendre(-6 * j as i64) != 1 {
            continue;
        }
        let mut pair = Vec::new();
        for branch in [1i8, -1] {
            let spec = CurveSpec::BabaGranath { j: j as i64, branch };
            let (n1, n2) = (
                count_points(&spec, FieldRef::Prime(&k))?.n_points(),
                count_points(&spec, FieldRef::Quad(&ext))?.n_points(),
            );
            match (n1, n2) {
                (Some(n1), Some(n2)) => pair.push(QmSample {
                    j,
                    branch,
                    n1,
                    n2,
                    report: qm_consistency(p, n1, n2),
                }),
                _ => break,
            }
        }
        if pair.len() == 2 {
            samples.extend(pair);
        } else {
            bad.push(j);
        }
    }
    Ok((samples, bad))
}

fn qm_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let primes = cfg.primes(7, &[13, 17, 29], |p| p > 5 && is_prime(p));
    let sweeps = map_primes(&primes, cfg.parallel, |p| qm_sweep(p).map(|s| (p, s)))?;
    let mut t = Tally::new(Suite::Qm);
    for (p, (samples, bad)) in sweeps {
        let literal = samples.iter().filter(|s| s.report.pass).count();
        let js: BTreeSet<u64> = samples.iter().map(|s| s.j).collect();
        for s in &samples {
            // Frobenius² is a square: the QM shape over 𝔽_{p²}
            t.check(s.report.square_over_fp2.is_some(), || {
                format!(
                    "p={p} j={} branch={} s1={} s2={}",
                    s.j, s.branch, s.report.s1, s.report.s2
                )
            });
        }
        t.lines.push(format!(
            "p={p} j_good={} bad_reduction={bad:?} literal_(x^2-tx+p)^2={literal}/{} twisted={}",
            js.len(),
            samples.len(),
            samples.iter().filter(|s| s.report.twisted.is_some()).count()
        ));
    }
    Ok(t.finish())
}

fn analytic_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut t = Tally::new(Suite::Analytic);
    let ode = analytic::ode_suite(analytic::DEFAULT_TRUNCATION)?;
    let worst = ode.iter().map(|r| r.residual).fold(0.0, f64::max);
    for r in &ode {
        t.check(r.pass, || {
            format!("ode {} t={:?} residual={:e}", r.group, r.t, r.residual)
        });
    }
    t.lines
        .push(format!("ode: {} points, max residual {worst:.3e}", ode.len()));
    let leg = analytic::legendre_ode_residual(0.2, analytic::DEFAULT_TRUNCATION)?;
    t.check(leg < analytic::TOL_INNER, || format!("legendre ode residual {leg:e}"));
    let mut worst = 0.0f64;
    for l in analytic::euler_grid() {
        let r = analytic::euler_period_check(l)?;
        worst = worst.max(r.error);
        t.check(r.pass, || format!("euler lambda={l} error={:e}", r.error));
    }
    t.lines.push(format!(
        "euler: {} grid points, max error {worst:.3e}",
        analytic::euler_grid().len()
    ));
    let mut worst = 0.0f64;
    for (a, b, z) in analytic::clausen_samples(cfg.seed, 20) {
        let r = analytic::clausen_complex_check(a, b, z)?;
        worst = worst.max(r.error);
        t.check(r.pass, || format!("clausen a={a} b={b} t={z} error={:e}", r.error));
    }
    t.lines
        .push(format!("complex clausen: 20 samples, max error {worst:.3e}"));
    for (a, b, c, x) in [(0.5, 0.5, 1.0, 0.3), (1.0 / 3.0, 0.25, 0.7, 0.6), (0.2, 0.9, 1.5, -0.4)] {
        let r = analytic::contiguity_check(a, b, c, x)?;
        t.check(r.pass, || format!("contiguity ({a},{b},{c}) t={x} error={:e}", r.error));
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn fm_suite_passes() {
        let r = &run_suite(Suite::Fm, &SuiteConfig::default()).unwrap()[0];
        assert!(r.pass);
        assert_eq!(r.checks, 1001);
    }

    #[test]
    fn small_suites() {
        let cfg = SuiteConfig {
            primes: Some(vec![13]),
            ..Default::default()
        };
        for s in [Suite::Clausen, Suite::GenLegendre, Suite::Weil] {
            let r = &run_suite(s, &cfg).unwrap()[0];
            assert!(r.pass, "{r:?}");
        }
    }
}
