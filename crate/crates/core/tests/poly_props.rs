use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use qtrank::ff::{m_certificate_fp, reduce_mod_p, Fp, FpPoly};
use qtrank::ffcount::{certificate_integer, SystemKind};
use qtrank::poly::{m_certificate, sylvester_resultant, FamilyCurve, IntPoly};

const SMALL_PRIMES: [u64; 24] =
    [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn coeffs(len: usize, r: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-r..=r, len)
}

fn monic_cubic(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(&[c[0], c[1], c[2], 1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduction_commutes_with_m_certificate(b in coeffs(3, 50), c in coeffs(3, 50), pi in 0..SMALL_PRIMES.len()) {
        let p = SMALL_PRIMES[pi];
        let (bq, cq) = (IntPoly::from_i64s(&b), monic_cubic(&c));
        let over_z = reduce_mod_p(&m_certificate(&bq, &cq, 2).unwrap(), p).unwrap();
        let f = Fp::new(p).unwrap();
        let over_fp = m_certificate_fp(&FpPoly::from_intpoly(f, &bq), &FpPoly::from_intpoly(f, &cq), 2).unwrap();
        prop_assert_eq!(over_z, over_fp);
    }

    #[test]
    fn even_quartic_expansion(t in coeffs(6, 30)) {
        let b = IntPoly::from_i64s(&[t[2], t[1], t[0]]);
        let c = IntPoly::from_i64s(&[t[5], t[4], t[3], 1]);
        let want = IntPoly::from_i64s(&certificate_integer(SystemKind::Sys1, &t));
        prop_assert_eq!(m_certificate(&b, &c, 2).unwrap(), want);
    }

    #[test]
    fn even_octic_expansion(t in coeffs(6, 20)) {
        prop_assume!(t[1] != 0);
        let f = FamilyCurve::from_i64s(&[t[0], t[1]], &[t[2], t[3]], &[t[4], t[5], 0, 1]).unwrap();
        let disc = &(f.b() * f.b()) - &(f.a() * f.c()).scalar_mul(&BigInt::from(4));
        let want = IntPoly::from_i64s(&certificate_integer(SystemKind::Sys3, &t));
        prop_assert_eq!(m_certificate(&disc, f.a(), 4).unwrap(), want);
    }

    #[test]
    fn resultant_multiplicative(p in coeffs(3, 9), q in coeffs(2, 9), r in coeffs(3, 9)) {
        prop_assume!(p[2] != 0 && q[1] != 0 && r[2] != 0);
        let as_consts = |v: &IntPoly| v.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect::<Vec<_>>();
        let (pp, qq, rr) = (IntPoly::from_i64s(&p), IntPoly::from_i64s(&q), IntPoly::from_i64s(&r));
        let pq = &pp * &qq;
        let res = |a: &IntPoly, b: &IntPoly| {
            sylvester_resultant(&as_consts(a), &as_consts(b), a.degree().unwrap(), b.degree().unwrap()).unwrap()
        };
        prop_assert_eq!(res(&pq, &rr), &res(&pp, &rr) * &res(&qq, &rr));
    }

    #[test]
    fn height_of_product(p in coeffs(4, 100), q in coeffs(3, 100)) {
        let (pp, qq) = (IntPoly::from_i64s(&p), IntPoly::from_i64s(&q));
        prop_assume!(!pp.is_zero() && !qq.is_zero());
        let k = pp.degree().unwrap().min(qq.degree().unwrap()) + 1;
        let lhs = (&pp * &qq).height().value().clone();
        let rhs = BigUint::from(k) * pp.height().value() * qq.height().value();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn vanishing_a_and_b_is_isotrivial(c in coeffs(3, 20)) {
        let f = FamilyCurve::from_i64s(&[], &[], &[c[0], c[1], c[2], 1]).unwrap();
        let w = f.to_weierstrass();
        prop_assume!(!w.disc_t().is_zero());
        prop_assert!(w.is_isotrivial().unwrap());
    }

    #[test]
    fn isotriviality_matches_constant_j(a in coeffs(3, 3), b in coeffs(3, 3), c in coeffs(3, 3)) {
        let f = FamilyCurve::from_i64s(&a, &b, &[c[0], c[1], c[2], 1]).unwrap();
        let w = f.to_weierstrass();
        prop_assume!(!w.disc_t().is_zero());
        // j = 1728 c4^3 / (c4^3 - c6^2) up to scaling: constant iff c4^3 / disc is.
        let c4 = w.c4();
        let cube = &(&c4 * &c4) * &c4;
        let disc = w.disc_t();
        let constant_ratio = (0..6).all(|t| {
            (0..6).all(|s| {
                let (x, y) = (BigInt::from(t), BigInt::from(s));
                cube.eval(&x) * disc.eval(&y) == cube.eval(&y) * disc.eval(&x)
            })
        });
        prop_assert_eq!(w.is_isotrivial().unwrap(), constant_ratio);
    }
}

/// Isotriviality with `B != 0`: `Y^2 = X^3 + T` has `j = 0`.
#[test]
fn isotrivial_with_nonzero_b() {
    let f = FamilyCurve::from_i64s(&[], &[1], &[0, 0, 0, 1]).unwrap();
    let w = f.to_weierstrass();
    assert!(!w.disc_t().is_zero());
    assert!(w.is_isotrivial().unwrap());
}
