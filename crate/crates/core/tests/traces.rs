use hgtrace::charsum::hp_sum;
use hgtrace::field::{is_prime, primitive_roots, PrimeField};
use hgtrace::hgm::{triangle_table, TriangleGroupRow};
use hgtrace::modform::builtin_fixture;
use hgtrace::suites::{row_primes, weil_sweep};
use hgtrace::trace::{build_fm, hecke_trace, hecke_trace_in, TraceOptions};
use proptest::prelude::*;
use std::sync::Arc;

proptest! {
    #[test]
    fn fm_identity(m in 1u32..=10, u in -40i128..=40, v in -40i128..=40) {
        let f = build_fm(m).unwrap();
        let lhs = f.eval(u * u + u * v + v * v, u * v).unwrap();
        let rhs: i128 = (0..=2 * m).map(|i| u.pow(i) * v.pow(2 * m - i)).sum();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn square_class_invariant() {
    // a_Γ + p lies in [0, 4p] and its squarefree part divides the level
    for row in triangle_table() {
        for p in row_primes(&row, 61) {
            let s = weil_sweep(&row, p).unwrap();
            assert!(s.class_failures.is_empty(), "{} p={p}", row.name());
            for c in &s.square_classes {
                assert_eq!(row.level() as i64 % c, 0);
            }
        }
    }
}

#[test]
fn perfect_squares_for_two_rows() {
    for sig in ["2,oo,oo", "2,3,oo"] {
        let row = TriangleGroupRow::by_signature(sig).unwrap();
        for p in row_primes(&row, 61) {
            assert!(weil_sweep(&row, p).unwrap().literal_failures.is_empty());
        }
    }
}

#[test]
fn cm_term_corrected_relation() {
    // a_p(24.5.h.b) = (pH_p(1))² − (1 + (−6/p))p²
    let row = TriangleGroupRow::by_signature("2,4,6").unwrap();
    let cm = builtin_fixture("24.5.h.b").unwrap();
    for p in (13..=97u64).filter(|&p| is_prime(p) && p % 12 == 1) {
        let k = PrimeField::shared(p).unwrap();
        let ph = hp_sum(&row.datum, &k, 1, row.normalization).unwrap().scaled(1).unwrap();
        let p = p as i64;
        let rhs = ph * ph - (1 + k.legendre(-6) as i64) * p * p;
        assert_eq!(cm.ap(p as u64).unwrap(), rhs, "p={p}");
    }
}

#[test]
fn headline_identity_and_generators() {
    let row = TriangleGroupRow::by_signature("2,4,6").unwrap();
    let f = builtin_fixture("6.8.a.a").unwrap();
    for p in [13u64, 37, 61, 73, 97] {
        let want = -(f.ap(p).unwrap() as i128);
        let serial = hecke_trace(&row, p, 6, TraceOptions::default()).unwrap();
        assert_eq!(serial.total, Some(want), "p={p}");
        let par = hecke_trace(&row, p, 6, TraceOptions { parallel: true }).unwrap();
        assert_eq!(par, serial);
        for g in primitive_roots(p).into_iter().take(3) {
            let k = Arc::new(PrimeField::with_generator(p, g).unwrap());
            assert_eq!(hecke_trace_in(&row, k, 6, TraceOptions::default()).unwrap(), serial);
        }
    }
}

#[test]
fn partial_reports_never_claim_totals() {
    for row in triangle_table() {
        for k in [4u32, 6, 10] {
            let p = row_primes(&row, 40)[0];
            let r = hecke_trace(&row, p, k, TraceOptions::default()).unwrap();
            let complete = row.name() == "(2,4,6)" && k == 6;
            assert_eq!(r.partial, !complete);
            assert_eq!(r.total.is_some(), complete);
            // every row has an order-2 vertex
            assert_eq!(r.partial, r.flags.iter().any(|f| f.contains("elliptic")));
        }
    }
}
