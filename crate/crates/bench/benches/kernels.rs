use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hgtrace::charsum::{clausen_sweep, HpKernel};
use hgtrace::curves::{count_points, CurveSpec, FieldRef};
use hgtrace::field::{PrimeField, QuadExtField};
use hgtrace::hgm::TriangleGroupRow;
use hgtrace::trace::{build_fm, hecke_trace, RowEvaluator, TraceOptions};

fn kernels(c: &mut Criterion) {
    let row = TriangleGroupRow::by_signature("2,4,6").unwrap();
    let mut g = c.benchmark_group("hp_kernel");
    for p in [13u64, 61, 157] {
        let k = PrimeField::shared(p).unwrap();
        g.bench_with_input(BenchmarkId::new("build", p), &p, |b, _| {
            b.iter(|| HpKernel::new(&row.datum, k.clone(), row.normalization).unwrap())
        });
        let ev = RowEvaluator::new(&row, k.clone()).unwrap();
        g.bench_with_input(BenchmarkId::new("lambda_sweep", p), &p, |b, _| {
            b.iter(|| ev.a_values(false).unwrap())
        });
    }
    g.finish();
}

fn traces(c: &mut Criterion) {
    let row = TriangleGroupRow::by_signature("2,4,6").unwrap();
    let mut g = c.benchmark_group("hecke_trace");
    for p in [13u64, 37, 61] {
        for parallel in [false, true] {
            let id = BenchmarkId::new(if parallel { "parallel" } else { "serial" }, p);
            g.bench_with_input(id, &p, |b, &p| {
                b.iter(|| hecke_trace(&row, p, 6, TraceOptions { parallel }).unwrap())
            });
        }
    }
    g.finish();
    c.bench_function("fm_build_40", |b| b.iter(|| build_fm(black_box(40)).unwrap()));
}

fn counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("point_count");
    for p in [101u64, 1009] {
        let k = PrimeField::new(p).unwrap();
        let spec = CurveSpec::Legendre { lambda: 5 };
        g.bench_with_input(BenchmarkId::new("legendre_fp", p), &p, |b, _| {
            b.iter(|| count_points(&spec, FieldRef::Prime(&k)).unwrap())
        });
    }
    let k2 = QuadExtField::new(PrimeField::shared(101).unwrap());
    g.bench_function("legendre_fp2_101", |b| {
        b.iter(|| count_points(&CurveSpec::Legendre { lambda: 5 }, FieldRef::Quad(&k2)).unwrap())
    });
    g.bench_function("baba_granath_29", |b| {
        let k = PrimeField::new(29).unwrap();
        b.iter(|| count_points(&CurveSpec::BabaGranath { j: 1, branch: 1 }, FieldRef::Prime(&k)).unwrap())
    });
    g.finish();
    let k = PrimeField::shared(19).unwrap();
    c.bench_function("clausen_sweep_19", |b| b.iter(|| clausen_sweep(&k)));
}

criterion_group!(benches, kernels, traces, counts);
criterion_main!(benches);
