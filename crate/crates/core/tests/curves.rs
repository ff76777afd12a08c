use hgtrace::curves::{count_points, count_via_characters, CurveSpec, FieldRef};
use hgtrace::field::{PrimeField, QuadExtField};
use hgtrace::suites::qm_sweep;
use proptest::prelude::*;
use std::sync::Arc;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![7u64, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn legendre_weil_and_twists(p in prime(), l in 2i64..200) {
        let k = PrimeField::new(p).unwrap();
        let l = l % p as i64;
        prop_assume!(l > 1);
        let a = |x: i64| count_points(&CurveSpec::Legendre { lambda: x }, FieldRef::Prime(&k)).unwrap().trace().unwrap();
        let t = a(l);
        prop_assert!(t * t <= 4 * p as i64);
        // λ ↦ 1−λ twists by (−1/p), λ ↦ 1/λ by (λ/p)
        prop_assert_eq!(a(1 - l + p as i64), k.legendre(-1) as i64 * t);
        let inv = k.inv(l as u64).unwrap() as i64;
        prop_assert_eq!(a(inv), k.legendre(l) as i64 * t);
    }

    #[test]
    fn fp2_count_from_fp(p in prime(), l in 2i64..200) {
        let k = Arc::new(PrimeField::new(p).unwrap());
        let l = l % p as i64;
        prop_assume!(l > 1);
        let e = QuadExtField::new(k.clone());
        let spec = CurveSpec::Legendre { lambda: l };
        let a1 = count_points(&spec, FieldRef::Prime(&k)).unwrap().trace().unwrap();
        let a2 = count_points(&spec, FieldRef::Quad(&e)).unwrap().trace().unwrap();
        prop_assert_eq!(a2, a1 * a1 - 2 * p as i64);
    }
}

#[test]
fn genlegendre_new_part_bound() {
    for p in [7u64, 13, 19, 31, 37, 43] {
        let k = PrimeField::new(p).unwrap();
        for l in 2..p as i64 {
            let spec = CurveSpec::GenLegendre {
                n: 6,
                a: 4,
                b: 3,
                c: 1,
                lambda: l,
            };
            let c = count_via_characters(&spec, &k).unwrap();
            let t = c.new_part_trace as f64;
            assert!(t.abs() <= 4.0 * (p as f64).sqrt(), "p={p} lambda={l} T={t}");
            assert_eq!(
                Some(c.total),
                count_points(&spec, FieldRef::Prime(&k)).unwrap().n_points()
            );
        }
    }
}

#[test]
fn baba_granath_qm_shape() {
    for p in [13u64, 17, 29] {
        let (samples, _) = qm_sweep(p).unwrap();
        assert!(!samples.is_empty());
        for s in &samples {
            assert!(s.report.square_over_fp2.is_some(), "p={p} j={}", s.j);
            assert!(s.report.pass || s.report.s1 == 0, "p={p} j={}", s.j);
        }
        let literal = samples.iter().filter(|s| s.report.pass).count();
        if p == 29 {
            assert_eq!(2 * literal, samples.len());
        } else {
            assert_eq!(literal, 0);
            assert!(samples.iter().all(|s| s.report.twisted.is_some()));
        }
    }
}
