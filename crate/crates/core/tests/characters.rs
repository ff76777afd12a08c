use std::sync::Arc;

use hgtrace::charsum::{bracket, jacobi_sum, np_sum, NpKernel};
use hgtrace::field::{primitive_roots, PrimeField};
use hgtrace::hgm::triangle_table;
use hgtrace::trace::RowEvaluator;
use num_complex::Complex64;
use proptest::prelude::*;

const PRIMES: [u64; 8] = [7, 11, 13, 17, 19, 23, 29, 31];

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orthogonality(p in prime(), e in 0i64..40, x in 1u64..40) {
        let k = PrimeField::new(p).unwrap();
        let chi = k.char(e);
        let s: Complex64 = k.elements().map(|t| k.eval(chi, t)).sum();
        let expect = if chi.is_trivial() { (p - 1) as f64 } else { 0.0 };
        prop_assert!((s - expect).norm() < 1e-9);
        let x = x % p;
        if x != 0 {
            let s: Complex64 = (0..p - 1).map(|e| k.eval(k.char(e as i64), x)).sum();
            let expect = if x == 1 { (p - 1) as f64 } else { 0.0 };
            prop_assert!((s - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn jacobi_duality_and_symmetry(p in prime(), a in 1i64..40, b in 1i64..40) {
        let k = PrimeField::new(p).unwrap();
        let (x, y) = (k.char(a), k.char(b));
        let j = jacobi_sum(&k, x, y).unwrap().z();
        prop_assert!((j - jacobi_sum(&k, y, x).unwrap().z()).norm() < 1e-9);
        if !x.is_trivial() && !y.is_trivial() && !(x * y).is_trivial() {
            prop_assert!((j.norm_sqr() - p as f64).abs() < 1e-6);
        }
        // conjugate characters give the conjugate sum
        let jc = jacobi_sum(&k, x.conj(), y.conj()).unwrap().z();
        prop_assert!((jc - j.conj()).norm() < 1e-9);
        let br = bracket(&k, x, y).unwrap().z();
        prop_assert!((br + k.eval(y, p - 1) * jacobi_sum(&k, x, y.conj()).unwrap().z()).norm() < 1e-9);
    }

    #[test]
    fn np_conjugation(p in prime(), a1 in 0i64..40, a2 in 0i64..40, b2 in 0i64..40, l in 0u64..40) {
        let k = Arc::new(PrimeField::new(p).unwrap());
        let a = [k.char(a1), k.char(a2)];
        let b = [k.char(0), k.char(b2)];
        let ac: Vec<_> = a.iter().map(|c| c.conj()).collect();
        let bc: Vec<_> = b.iter().map(|c| c.conj()).collect();
        let l = l % p;
        let v = np_sum(&k, &a, &b, l).unwrap().z();
        let w = np_sum(&k, &ac, &bc, l).unwrap().z();
        prop_assert!((v.conj() - w).norm() < 1e-8);
        let kern = NpKernel::new(k.clone(), &a, &b).unwrap();
        prop_assert!((kern.eval(l).z() - v).norm() < 1e-9);
    }
}

#[test]
fn a_gamma_is_generator_independent() {
    for row in triangle_table() {
        for p in [13u64, 37] {
            if (p - 1) % row.level() != 0 {
                continue;
            }
            let vals: Vec<_> = primitive_roots(p)
                .into_iter()
                .take(3)
                .map(|g| {
                    let k = Arc::new(PrimeField::with_generator(p, g).unwrap());
                    RowEvaluator::new(&row, k).unwrap().a_values(false).unwrap()
                })
                .collect();
            assert!(vals.windows(2).all(|w| w[0] == w[1]), "{} p={p}", row.name());
        }
    }
}
