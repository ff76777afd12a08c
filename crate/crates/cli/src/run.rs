use std::path::{Path, PathBuf};
use std::sync::Arc;

use hgtrace::charsum::{jacobi_sum, HpKernel, NpKernel, Prefactor};
use hgtrace::curves::{count_points, CountOutcome, CurveSpec, FieldRef};
use hgtrace::field::{is_prime, PrimeField, QuadExtField};
use hgtrace::hgm::{fmt_q, triangle_table, HGDatum, TriangleGroupRow, Vertex};
use hgtrace::modform::{
    dim_cusp_level1, fetch_fixture, level1_hecke_trace, load_fixture, oracle_fixture, resolve_fixture, FIXTURE_DIR_ENV,
    FIXTURE_PRIME_BOUND,
};
use hgtrace::suites::{qm_sweep, run_suite, Suite, SuiteConfig};
use hgtrace::trace::{
    calibrate_hp_weight, calibrate_legendre_relation, hecke_trace_in, squarefree_part, CalibrationCriterion,
    RowEvaluator, TraceOptions,
};
use hgtrace::{analytic, HpNormalization};
use rayon::prelude::*;
use serde_json::json;

use crate::args::*;
use crate::output::{Outcome, Record};

/// Usage problems exit with 2, computation failures with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(hgtrace::Error),
}

impl From<hgtrace::Error> for CliError {
    fn from(e: hgtrace::Error) -> Self {
        CliError::Compute(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(e: impl ToString) -> CliResult<T> {
    Err(CliError::Usage(e.to_string()))
}

fn row(group: &str) -> CliResult<TriangleGroupRow> {
    TriangleGroupRow::by_signature(group).or_else(usage)
}

fn field(p: u64, g: Option<u64>) -> CliResult<Arc<PrimeField>> {
    match g {
        Some(g) => PrimeField::with_generator(p, g),
        None => PrimeField::new(p),
    }
    .map(Arc::new)
    .or_else(usage)
}

fn resolve_primes(sel: &PrimeSel, keep: impl Fn(u64) -> bool, default: &[u64]) -> CliResult<Vec<u64>> {
    if !sel.primes.is_empty() {
        if let Some(&bad) = sel.primes.iter().find(|&&p| !is_prime(p) || p == 2) {
            return usage(format!("{bad} is not an odd prime"));
        }
        return Ok(sel.primes.clone());
    }
    let v: Vec<u64> = match sel.max_prime {
        Some(m) => (3..=m).filter(|&p| is_prime(p) && keep(p)).collect(),
        None => default.to_vec(),
    };
    if v.is_empty() {
        return usage("no primes selected (use --prime or --max-prime)");
    }
    Ok(v)
}

/// "all", one value or a comma list; ∞ is rejected here.
fn lambdas(s: &str, p: u64) -> CliResult<Vec<u64>> {
    if s == "all" {
        return Ok((0..p).collect());
    }
    s.split(',')
        .map(|x| {
            let x = x.trim();
            if x == "oo" {
                return usage("lambda = oo is not a point of F_p");
            }
            x.parse::<i64>()
                .map(|v| v.rem_euclid(p as i64) as u64)
                .or_else(|_| usage(format!("bad lambda {x:?}")))
        })
        .collect()
}

pub fn fixture_source(g: &Global) -> String {
    match (&g.fixture_dir, std::env::var_os(FIXTURE_DIR_ENV)) {
        (Some(d), _) => d.display().to_string(),
        (None, Some(d)) => PathBuf::from(d).display().to_string(),
        (None, None) => "embedded".into(),
    }
}

fn map_ordered<T: Send, U: Send>(items: Vec<T>, parallel: bool, f: impl Fn(T) -> U + Sync + Send) -> Vec<U> {
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

pub fn dispatch(cmd: &Command, g: &Global) -> CliResult<Outcome> {
    let parallel = g.threads > 1;
    match cmd {
        Command::Trace(a) => trace(a, g, parallel),
        Command::Sum(s) => sum(s),
        Command::Count(c) => count(c),
        Command::Verify(v) => verify(v, g, parallel),
        Command::Analytic(a) => analytic_cmd(a, g),
        Command::Fixture(f) => fixture(f, g),
        Command::Table => Ok(table()),
        Command::Calibrate(c) => calibrate(c),
    }
}

fn trace(a: &TraceArgs, g: &Global, parallel: bool) -> CliResult<Outcome> {
    let row = row(&a.group)?;
    if a.weight < 4 || a.weight % 2 == 1 {
        return usage(format!("weight {} must be even and >= 4", a.weight));
    }
    let k = a.weight - 2;
    let level = row.level();
    let primes = resolve_primes(&a.primes, |p| p > 5 && (p - 1) % level == 0, &[])?;
    for &p in &primes {
        field(p, a.generator)?;
    }
    let is246 = row.signature == [Vertex::Order(2), Vertex::Order(4), Vertex::Order(6)];
    let is23 = row.signature == [Vertex::Order(2), Vertex::Order(3), Vertex::Cusp];
    let fixture = if !a.no_oracle && is246 && k == 6 {
        Some(resolve_fixture("6.8.a.a", g.fixture_dir.as_deref())?)
    } else {
        None
    };
    let config = json!({
        "group": row.name(),
        "weight": a.weight,
        "k": k,
        "primes": primes,
        "generator": a.generator,
        "terms": a.terms,
        "oracle": !a.no_oracle,
    });
    let opts = TraceOptions { parallel };
    let results = map_ordered(primes.clone(), parallel, |p| -> hgtrace::Result<_> {
        let ctx = match a.generator {
            Some(gen) => Arc::new(PrimeField::with_generator(p, gen)?),
            None => PrimeField::shared(p)?,
        };
        let mut rep = hecke_trace_in(&row, ctx, k, opts)?;
        if !a.no_oracle {
            if let Some(fx) = &fixture {
                rep = rep.with_oracle(-(fx.ap(p)? as i128));
            } else if is23 {
                let dim = dim_cusp_level1(a.weight);
                let tr = level1_hecke_trace(a.weight, p, (p as usize) * dim.max(1))?;
                let tr: i128 = tr.try_into().map_err(|_| hgtrace::Error::Overflow("oracle trace"))?;
                rep = rep.with_oracle(-tr);
            }
        }
        if !a.terms {
            rep.terms.clear();
        }
        Ok(rep)
    });
    let mut out = Outcome::new(
        "trace",
        config,
        &[
            "group",
            "p",
            "k",
            "weight",
            "generic_sum",
            "cusp_sum",
            "elliptic_sum",
            "partial_sum",
            "total",
            "displayed_total",
            "partial",
            "oracle",
            "residual",
            "flags",
        ],
    );
    for (p, r) in primes.iter().zip(results) {
        match r {
            Ok(rep) => {
                if rep.total.is_some() && rep.residual.is_some_and(|r| r != 0) {
                    out.failed = true;
                }
                let o = |x: Option<i128>| x.map(|v| v.to_string()).unwrap_or_default();
                let csv = vec![
                    rep.group.clone(),
                    rep.p.to_string(),
                    rep.k.to_string(),
                    rep.weight.to_string(),
                    rep.generic_sum.to_string(),
                    rep.cusp_sum.to_string(),
                    o(rep.elliptic_sum),
                    rep.partial_sum.to_string(),
                    o(rep.total),
                    o(rep.displayed_total),
                    rep.partial.to_string(),
                    o(rep.oracle),
                    o(rep.residual),
                    rep.flags.join(";"),
                ];
                out.push(Record::new(serde_json::to_value(&rep).expect("serializable"), csv));
            }
            Err(e) => out.error(*p, &e),
        }
    }
    Ok(out)
}

fn sum(s: &SumCmd) -> CliResult<Outcome> {
    match s {
        SumCmd::Np(a) | SumCmd::Hp(a) => {
            let is_hp = matches!(s, SumCmd::Hp(_));
            let hd = HGDatum::parse(&a.alpha, &a.beta).or_else(usage)?;
            let ctx = field(a.prime, a.generator)?;
            let ls = lambdas(&a.lambda, a.prime)?;
            let pf = if a.printed_prefactor {
                Prefactor::Printed
            } else {
                Prefactor::Corrected
            };
            let config = json!({
                "alpha": hd.alpha().iter().map(|&x| fmt_q(x)).collect::<Vec<_>>(),
                "beta": hd.beta().iter().map(|&x| fmt_q(x)).collect::<Vec<_>>(),
                "p": a.prime,
                "generator": ctx.generator(),
                "lambda": a.lambda,
                "prefactor": pf,
            });
            if is_hp {
                let kernel = HpKernel::new(&hd, ctx.clone(), HpNormalization::IDENTITY)?;
                let mut out = Outcome::new("sum hp", config, &["p", "lambda", "numerator", "weight", "value"]);
                for l in ls {
                    match kernel.eval(l) {
                        Ok(v) => {
                            let val = v.value();
                            out.push(Record::new(
                                json!({"p": a.prime, "lambda": l, "numerator": v.numerator, "weight": v.weight, "value": val.to_string()}),
                                vec![a.prime.to_string(), l.to_string(), v.numerator.to_string(), v.weight.to_string(), val.to_string()],
                            ));
                        }
                        Err(e) => out.error(a.prime, &e),
                    }
                }
                Ok(out)
            } else {
                let (ca, cb) = hd.characters(&ctx)?;
                let kernel = NpKernel::with_prefactor(ctx.clone(), &ca, &cb, pf)?;
                let mut out = Outcome::new("sum np", config, &["p", "lambda", "re", "im", "value"]);
                for l in ls {
                    let v = kernel.eval(l);
                    let snapped = v.snapped.map(|x| x.to_string()).unwrap_or_default();
                    out.push(Record::new(
                        json!({"p": a.prime, "lambda": l, "re": fmt_f(v.re), "im": fmt_f(v.im), "value": v.snapped}),
                        vec![a.prime.to_string(), l.to_string(), fmt_f(v.re), fmt_f(v.im), snapped],
                    ));
                }
                Ok(out)
            }
        }
        SumCmd::Jacobi(a) => {
            let ctx = field(a.prime, a.generator)?;
            let v = jacobi_sum(&ctx, ctx.char(a.a), ctx.char(a.b))?;
            let config = json!({"p": a.prime, "generator": ctx.generator(), "a": a.a, "b": a.b});
            let mut out = Outcome::new("sum jacobi", config, &["p", "a", "b", "re", "im", "value"]);
            let snapped = v.snapped.map(|x| x.to_string()).unwrap_or_default();
            out.push(Record::new(
                json!({"p": a.prime, "a": a.a, "b": a.b, "re": fmt_f(v.re), "im": fmt_f(v.im), "value": v.snapped}),
                vec![
                    a.prime.to_string(),
                    a.a.to_string(),
                    a.b.to_string(),
                    fmt_f(v.re),
                    fmt_f(v.im),
                    snapped,
                ],
            ));
            Ok(out)
        }
    }
}

/// Fixed 12-digit rendering; −0 prints as 0.
fn fmt_f(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn need<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
    v.map_or_else(|| usage(format!("--{name} is required for this family")), Ok)
}

fn count(c: &CountArgs) -> CliResult<Outcome> {
    let spec = match c.family {
        Family::Legendre => CurveSpec::Legendre {
            lambda: need(c.lambda, "lambda")?,
        },
        Family::UniversalJ => CurveSpec::UniversalJ { j: need(c.j, "j")? },
        Family::JacobiQuartic => CurveSpec::JacobiQuartic {
            sigma: need(c.sigma, "sigma")?,
        },
        Family::Hesse => CurveSpec::Hesse { mu: need(c.mu, "mu")? },
        Family::Genlegendre => {
            let e = c.exponents.clone().unwrap_or_else(|| vec![6, 4, 3, 1]);
            CurveSpec::GenLegendre {
                n: e[0],
                a: e[1],
                b: e[2],
                c: e[3],
                lambda: need(c.lambda, "lambda")?,
            }
        }
        Family::PicardSub => CurveSpec::PicardSub {
            lambda: need(c.lambda, "lambda")?,
        },
        Family::BabaGranath => CurveSpec::BabaGranath {
            j: need(c.j, "j")?,
            branch: c.branch,
        },
        Family::Conic => CurveSpec::ConicX6,
    };
    let ctx = field(c.prime, None)?;
    let config = json!({"curve": spec, "p": c.prime, "field": if c.ext { "F_p^2" } else { "F_p" }});
    let outcome = if c.ext {
        let ext = QuadExtField::new(ctx.clone());
        count_points(&spec, FieldRef::Quad(&ext))?
    } else {
        count_points(&spec, FieldRef::Prime(&ctx))?
    };
    let mut out = Outcome::new(
        "count",
        config,
        &["curve", "params", "p", "q", "status", "n_points", "trace", "flags"],
    );
    let csv = match &outcome {
        CountOutcome::Good(cc) => vec![
            cc.curve.clone(),
            cc.params.clone(),
            cc.p.to_string(),
            cc.q.to_string(),
            "good".into(),
            cc.n_points.to_string(),
            cc.trace.to_string(),
            cc.flags.join(";"),
        ],
        CountOutcome::BadReduction {
            curve,
            params,
            p,
            factor,
        } => vec![
            curve.clone(),
            params.clone(),
            p.to_string(),
            String::new(),
            "bad_reduction".into(),
            String::new(),
            String::new(),
            factor.clone(),
        ],
    };
    out.push(Record::new(serde_json::to_value(&outcome).expect("serializable"), csv));
    Ok(out)
}

fn verify(v: &VerifyArgs, g: &Global, parallel: bool) -> CliResult<Outcome> {
    let suite: Suite = v.suite.parse().or_else(|e: hgtrace::Error| usage(e))?;
    let cfg = SuiteConfig {
        primes: (!v.primes.primes.is_empty()).then(|| v.primes.primes.clone()),
        max_prime: v.primes.max_prime,
        seed: g.seed,
        parallel,
    };
    let reports = run_suite(suite, &cfg)?;
    let mut out = Outcome::new(
        "verify",
        json!({"suite": suite.to_string(), "primes": cfg.primes, "max_prime": cfg.max_prime}),
        &["suite", "checks", "failures", "pass"],
    );
    for r in reports {
        if !r.pass {
            out.failed = true;
        }
        let csv = vec![
            r.suite.clone(),
            r.checks.to_string(),
            r.failures.to_string(),
            r.pass.to_string(),
        ];
        out.push(Record::new(serde_json::to_value(&r).expect("serializable"), csv));
    }
    Ok(out)
}

fn analytic_cmd(a: &AnalyticArgs, g: &Global) -> CliResult<Outcome> {
    use AnalyticCheck::*;
    let want = |c: AnalyticCheck| a.check == All || a.check == c;
    let mut out = Outcome::new(
        "analytic",
        json!({"check": format!("{:?}", a.check).to_lowercase(), "truncation": a.truncation}),
        &["check", "params", "value", "tolerance", "pass"],
    );
    let row = |out: &mut Outcome, check: &str, params: String, value: f64, tol: f64, pass: bool| {
        if !pass {
            out.failed = true;
        }
        let v = format!("{value:.3e}");
        let t = format!("{tol:.0e}");
        out.push(Record::new(
            json!({"check": check, "params": params, "value": v, "tolerance": t, "pass": pass}),
            vec![check.into(), params, v, t, pass.to_string()],
        ));
    };
    if want(Ode) {
        for r in analytic::ode_suite(a.truncation)? {
            let params = format!("{} t={}{:+}i", r.group, fmt_f(r.t[0]), fmt_f(r.t[1]));
            row(&mut out, "ode", params, r.residual, r.tolerance, r.pass);
        }
        let leg = analytic::legendre_ode_residual(0.2, a.truncation)?;
        row(
            &mut out,
            "legendre_ode",
            "lambda=0.2".into(),
            leg,
            analytic::TOL_INNER,
            leg < analytic::TOL_INNER,
        );
    }
    if want(Euler) {
        for l in analytic::euler_grid() {
            let r = analytic::euler_period_check(l)?;
            row(
                &mut out,
                "euler",
                format!("lambda={l:.2}"),
                r.error,
                r.tolerance,
                r.pass,
            );
        }
    }
    if want(Clausen) {
        for (x, y, t) in analytic::clausen_samples(g.seed, 20) {
            let r = analytic::clausen_complex_check(x, y, t)?;
            let params = format!("a={x:.6} b={y:.6} t={:.6}{:+.6}i", t.re, t.im);
            row(&mut out, "clausen", params, r.error, analytic::TOL_INNER, r.pass);
        }
    }
    if want(Contiguity) {
        for (x, y, c, t) in [(0.5, 0.5, 1.0, 0.3), (1.0 / 3.0, 0.25, 0.7, 0.6), (0.2, 0.9, 1.5, -0.4)] {
            let r = analytic::contiguity_check(x, y, c, t)?;
            let params = format!("a={x:.6} b={y:.6} c={c} t={t}");
            row(&mut out, "contiguity", params, r.error, analytic::TOL_OUTER, r.pass);
        }
    }
    Ok(out)
}

fn fixture_record(out: &mut Outcome, fx: &hgtrace::NewformFixture, status: &str, source: &str) {
    let max = fx.ap.keys().last().copied().unwrap_or(0);
    out.push(Record::new(
        json!({"status": status, "label": fx.label, "level": fx.level, "weight": fx.weight, "primes": fx.ap.len(), "max_prime": max, "source": source}),
        vec![
            status.into(),
            fx.label.clone(),
            fx.level.to_string(),
            fx.weight.to_string(),
            fx.ap.len().to_string(),
            max.to_string(),
            source.into(),
        ],
    ));
}

const FIXTURE_COLS: &[&str] = &["status", "label", "level", "weight", "primes", "max_prime", "source"];

fn fixture(f: &FixtureCmd, g: &Global) -> CliResult<Outcome> {
    match f {
        FixtureCmd::Validate { path } => {
            let fx = load_fixture(path)?;
            let mut out = Outcome::new("fixture validate", json!({"path": path}), FIXTURE_COLS);
            fixture_record(&mut out, &fx, "OK", &path.display().to_string());
            Ok(out)
        }
        FixtureCmd::Fetch { label, out: dir } => {
            hgtrace::modform::parse_label(label).or_else(usage)?;
            let dir = dir
                .clone()
                .or_else(|| g.fixture_dir.clone())
                .unwrap_or_else(|| Path::new("testdata").to_path_buf());
            let fx = fetch_fixture(label, &dir)?;
            let mut out = Outcome::new("fixture fetch", json!({"label": label, "out": dir}), FIXTURE_COLS);
            fixture_record(
                &mut out,
                &fx,
                "OK",
                &dir.join(format!("{label}.json")).display().to_string(),
            );
            Ok(out)
        }
        FixtureCmd::Check { label } => {
            hgtrace::modform::parse_label(label).or_else(usage)?;
            let pinned = resolve_fixture(label, g.fixture_dir.as_deref())?;
            let fresh = oracle_fixture(label, FIXTURE_PRIME_BOUND)?;
            let same = pinned == fresh;
            let mut out = Outcome::new(
                "fixture check",
                json!({"label": label, "bound": FIXTURE_PRIME_BOUND}),
                FIXTURE_COLS,
            );
            out.failed = !same;
            fixture_record(
                &mut out,
                &pinned,
                if same { "MATCH" } else { "MISMATCH" },
                &fixture_source(g),
            );
            Ok(out)
        }
    }
}

fn table() -> Outcome {
    let mut out = Outcome::new(
        "table",
        json!({}),
        &[
            "signature",
            "lambda_special",
            "alpha",
            "beta",
            "level",
            "a_rule",
            "sign",
            "weight",
        ],
    );
    for r in triangle_table() {
        let j = r.to_json();
        let list = |k: &str| {
            j[k].as_array()
                .map(|a| {
                    a.iter()
                        .map(|x| x.as_str().unwrap_or_default())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default()
        };
        let csv = vec![
            r.name(),
            list("lambda_special"),
            list("alpha"),
            list("beta"),
            r.level().to_string(),
            j["a_rule"].as_str().unwrap_or_default().to_string(),
            r.normalization.sign.to_string(),
            r.normalization.weight.to_string(),
        ];
        out.push(Record::new(j, csv));
    }
    out
}

fn calibrate(c: &CalibrateCmd) -> CliResult<Outcome> {
    match c {
        CalibrateCmd::Hp {
            group,
            primes,
            criterion,
        } => {
            let row = row(group)?;
            let level = row.level();
            let default: Vec<u64> = (7..=61).filter(|&p| is_prime(p) && (p - 1) % level == 0).collect();
            let ps = resolve_primes(primes, |p| p > 5 && (p - 1) % level == 0, &default)?;
            let crit = match criterion {
                Criterion::PerfectSquare => CalibrationCriterion::PerfectSquare,
                Criterion::SquareClass => CalibrationCriterion::SquareClass,
            };
            let res = calibrate_hp_weight(&row, &ps, crit)?;
            let unique = res.unique();
            let mut out = Outcome::new(
                "calibrate hp",
                json!({"group": row.name(), "primes": ps, "criterion": crit}),
                &["group", "sign", "weight", "pass", "first_failure"],
            );
            out.failed = unique.is_err();
            for cand in &res.candidates {
                let ff = cand
                    .first_failure
                    .map(|(p, l)| format!("p={p};lambda={l}"))
                    .unwrap_or_default();
                out.push(Record::new(
                    json!({"group": row.name(), "normalization": cand.normalization, "pass": cand.pass, "first_failure": cand.first_failure}),
                    vec![
                        row.name(),
                        cand.normalization.sign.to_string(),
                        cand.normalization.weight.to_string(),
                        cand.pass.to_string(),
                        ff,
                    ],
                ));
            }
            if let Err(e) = unique {
                out.note(e.to_string());
            }
            Ok(out)
        }
        CalibrateCmd::Legendre { primes } => {
            let ps = resolve_primes(primes, |p| p >= 7, &[7, 11, 13, 17, 19])?;
            let res = calibrate_legendre_relation(&ps)?;
            let chosen = res.chosen();
            let mut out = Outcome::new(
                "calibrate legendre",
                json!({"primes": ps}),
                &["map", "consistent", "first_failure", "chosen"],
            );
            out.failed = chosen.is_err();
            for cand in &res.candidates {
                let is_chosen = chosen.as_ref().is_ok_and(|m| *m == cand.map);
                let ff = cand
                    .first_failure
                    .map(|(p, l)| format!("p={p};lambda={l}"))
                    .unwrap_or_default();
                out.push(Record::new(
                    json!({"map": cand.map, "consistent": cand.consistent, "first_failure": cand.first_failure, "chosen": is_chosen}),
                    vec![
                        serde_json::to_value(cand.map).unwrap().as_str().unwrap_or_default().to_string(),
                        cand.consistent.to_string(),
                        ff,
                        is_chosen.to_string(),
                    ],
                ));
            }
            Ok(out)
        }
        CalibrateCmd::BabaGranath { primes } => {
            let row = row("2,4,6")?;
            let ps = resolve_primes(primes, |p| p > 5 && p % 12 == 1, &[13, 37, 61])?;
            let mut out = Outcome::new(
                "calibrate baba-granath",
                json!({"primes": ps, "exploratory": true}),
                &[
                    "p",
                    "row_square_classes",
                    "curve_square_classes",
                    "row_values",
                    "curve_values",
                ],
            );
            for p in ps {
                let ev = RowEvaluator::new(&row, PrimeField::shared(p)?)?;
                let mut rv: Vec<i64> = ev.a_values(false)?.into_iter().map(|(_, a)| a + p as i64).collect();
                let (samples, _) = qm_sweep(p)?;
                let mut cv: Vec<i64> = samples.iter().map(|s| 2 * p as i64 - s.report.s2).collect();
                rv.sort_unstable();
                cv.sort_unstable();
                cv.dedup();
                let classes = |v: &[i64]| {
                    let mut c: Vec<i64> = v.iter().filter(|&&x| x > 0).map(|&x| squarefree_part(x)).collect();
                    c.sort_unstable();
                    c.dedup();
                    c
                };
                let (rc, cc) = (classes(&rv), classes(&cv));
                let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                out.push(Record::new(
                    json!({"p": p, "row_square_classes": rc, "curve_square_classes": cc, "row_values": rv, "curve_values": cv}),
                    vec![p.to_string(), join(&rc), join(&cc), join(&rv), join(&cv)],
                ));
            }
            Ok(out)
        }
    }
}
