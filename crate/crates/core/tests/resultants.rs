mod common;

use common::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use torgrowth::continuation::Settings;
use torgrowth::polyalg::{classify_roots, IntPoly};
use torgrowth::resultants::{
    cyclic_resultants, exceptional_scan, g_u_continued, hankel_min_singular_value, hillar_decompose, hillar_equal,
    ln_abs_bigint_hp, log_sequence_hp, t_f_continued, unit_norm,
};
use torgrowth::torsion::pole_set;
use torgrowth::Error;

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn figure_eight_and_cyclotomic() {
    let rs = cyclic_resultants(&p(&[1, -3, 1]), 5).unwrap();
    let abs: Vec<BigInt> = rs.iter().map(|x| x.abs()).collect();
    assert_eq!(abs, [1, 5, 16, 45, 121].map(BigInt::from).to_vec());
    let l = lucas(60);
    let rs = cyclic_resultants(&p(&[1, -3, 1]), 30).unwrap();
    for (i, r) in rs.iter().enumerate() {
        assert_eq!(r.abs(), BigInt::from(l[2 * (i + 1)] - 2));
    }
    let phi6 = cyclic_resultants(&p(&[1, -1, 1]), 12).unwrap();
    for (i, r) in phi6.iter().enumerate() {
        assert_eq!(r.is_zero(), (i + 1) % 6 == 0, "m = {}", i + 1);
    }
}

#[test]
fn mersenne_generating_function() {
    let f = p(&[-2, 1]);
    let rs = cyclic_resultants(&f, 40).unwrap();
    for (i, r) in rs.iter().enumerate() {
        assert_eq!(r.abs(), (BigInt::from(1) << (i + 1)) - 1);
    }
    let s = Settings::default();
    for z in [c(0.2, 0.0), c(-0.3, 0.1), c(0.0, 0.4)] {
        let series: Complex64 = (1..=200)
            .map(|m| z.powu(m) * (m as f64 * 2f64.ln() + (-(0.5f64.powi(m as i32))).ln_1p()))
            .sum();
        let v = t_f_continued(&f, z, &s).unwrap().value;
        assert!(close(v, series, 1e-9), "{z}: {v} vs {series}");
    }
    let poles = pole_set(&f, 10.0, &s).unwrap();
    let locs: Vec<f64> = poles.iter().map(|q| q.location.re).collect();
    assert_eq!(locs.len(), 4);
    for (a, b) in locs.iter().zip([1.0, 2.0, 4.0, 8.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(poles.iter().all(|q| q.location.im.abs() < 1e-12));
    assert!(matches!(t_f_continued(&f, c(4.0, 0.0), &s), Err(Error::PoleHit { .. })));
}

#[test]
fn hillar_pairs() {
    let f = p(&[1, -3, 1]);
    assert!(hillar_equal(&f, &f, 20).unwrap());
    assert!(!hillar_equal(&p(&[-2, 1]), &p(&[-3, 1]), 5).unwrap());
    assert!(hillar_equal(&p(&[-2, 1]), &p(&[1, -2]), 20).unwrap());
    assert!(matches!(hillar_equal(&p(&[1, -1, 1]), &p(&[1, -1, 1]), 8), Err(Error::ZeroResultant(6))));
    assert!(matches!(hillar_decompose(&p(&[-2, 1]), &p(&[-3, 1])), Err(Error::NoDecomposition)));
    assert!(matches!(hillar_decompose(&p(&[-2, 1]), &p(&[1, -3, 1])), Err(Error::NoDecomposition)));
    assert!(matches!(hillar_decompose(&p(&[1, -1, 1]), &p(&[1, -1, 1])), Err(Error::OutOfScope(_))));
    assert!(matches!(hillar_decompose(&IntPoly::zero(), &f), Err(Error::ZeroInput)));
    let d = hillar_decompose(&p(&[0, 0, -2, 1]), &p(&[0, 1, -2])).unwrap();
    assert_eq!((d.l1, d.l2), (2, 1));
    let (u, v) = d.integral.unwrap();
    assert_eq!(u.degree() + v.degree(), 1);
    let sign = IntPoly::constant(BigInt::from(d.sign));
    let t = |k| IntPoly::monomial(BigInt::from(1), k);
    assert_eq!(&(&sign * &t(2)) * &(&v * &u.reversed()), p(&[0, 0, -2, 1]));
    assert_eq!(&t(1) * &(&v * &u), p(&[0, 1, -2]));
}

#[test]
fn exceptional_units() {
    let l = lucas(60);
    let golden = exceptional_scan(&p(&[-1, -1, 1]), 60).unwrap();
    assert_eq!(golden.e0, 2);
    assert_eq!(golden.unit_indices, vec![1, 2]);
    assert_eq!(golden.count_lower_bound, 2);
    for n in 1..=60usize {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(golden.norms[n - 1], BigInt::from(1 + sign - l[n]), "n = {n}");
    }
    let square = exceptional_scan(&p(&[1, -3, 1]), 30).unwrap();
    let halved: Vec<u64> = golden.unit_indices.iter().filter(|n| *n % 2 == 0).map(|n| n / 2).collect();
    assert_eq!(square.unit_indices, halved);
    for n in 1..=30u64 {
        assert_eq!(square.norms[n as usize - 1], golden.norms[2 * n as usize - 1]);
        assert_eq!(unit_norm(&p(&[1, -3, 1]), n).unwrap(), square.norms[n as usize - 1]);
    }
    let cubic = exceptional_scan(&p(&[-1, -1, 0, 1]), 40).unwrap();
    assert!(cubic.unit_indices.starts_with(&[1]));
    assert_eq!(cubic.e0 as usize, cubic.unit_indices.iter().enumerate().take_while(|(i, &n)| n == *i as u64 + 1).count());
    assert!(matches!(exceptional_scan(&p(&[-1, 1]), 5), Err(Error::NotAUnit(_))));
    assert!(matches!(exceptional_scan(&p(&[-1, 2]), 5), Err(Error::NotAUnit(_))));
    assert!(matches!(exceptional_scan(&p(&[1, -1, 1]).pow(1), 5), Err(Error::NotAUnit(_))));
    assert!(matches!(exceptional_scan(&p(&[3]), 5), Err(Error::NotAUnit(_))));
}

#[test]
fn unit_generating_function() {
    let u = p(&[-1, -1, 1]);
    let l = lucas(120);
    let s = Settings::default();
    let z = c(0.2, 0.1);
    let series: Complex64 = (1..=120usize)
        .map(|n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let norm = (1 + sign - l[n]).abs();
            z.powu(n as u32) * if norm == 0 { 0.0 } else { (norm as f64).ln() }
        })
        .sum();
    let one = g_u_continued(&u, z, 1, &s).unwrap().value;
    assert!(close(one, series, 1e-9), "{one} vs {series}");
    let three = g_u_continued(&u, z, 3, &s).unwrap().value;
    assert!(close(three, one * 3.0, 1e-12));
    let tiny = c(1e-3, 0.0);
    let lead = g_u_continued(&u, tiny, 1, &s).unwrap().value / tiny.powu(3);
    assert!((lead.re - 4f64.ln()).abs() < 1e-2, "{lead}");
    assert!(matches!(g_u_continued(&u, z, 0, &s), Err(Error::Invalid(_))));
    assert!(matches!(g_u_continued(&p(&[1, -1, 1]), z, 1, &s), Err(Error::UnimodularConjugate)));
    let lehmer = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    assert!(matches!(g_u_continued(&lehmer, z, 1, &s), Err(Error::UnimodularConjugate)));
}

#[test]
fn hankel_rank_of_golden_logs() {
    let scan = exceptional_scan(&p(&[-1, -1, 1]), 40).unwrap();
    let lo = log_sequence_hp(&scan.norms, 256).unwrap();
    let hi = log_sequence_hp(&scan.norms, 384).unwrap();
    for order in 1..=8 {
        let a = hankel_min_singular_value(&lo, order, 256).unwrap();
        let b = hankel_min_singular_value(&hi, order, 384).unwrap();
        assert!(a > 1e-30, "order {order}: {a:e}");
        assert!((a - b).abs() <= 1e-6 * b, "order {order}: {a:e} vs {b:e}");
        if order <= 6 {
            assert!(a > 1e-6, "order {order}: {a:e}");
        }
    }
    assert!(hankel_min_singular_value(&lo[..5], 3, 256).is_err());
    assert!(ln_abs_bigint_hp(&BigInt::zero(), 64).is_err());
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 2..=max_deg + 1)
        .prop_filter("nonzero ends", |v| v[0] != 0 && *v.last().unwrap() != 0)
}

fn off_circle(c: &[i64]) -> bool {
    let prof = classify_roots(&p(c)).unwrap();
    prof.roots.iter().all(|r| (r.value.norm() - 1.0).abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn linear_resultants_are_powers(a in -6i64..=6, m in 1u64..24) {
        let rs = cyclic_resultants(&p(&[-a, 1]), m).unwrap();
        let want: BigInt = (BigInt::from(a).pow(m as u32) - 1i32).abs();
        prop_assert_eq!(rs[m as usize - 1].abs(), want);
    }

    #[test]
    fn equality_is_reflexive_and_symmetric(a in nonzero_poly(3), b in nonzero_poly(3)) {
        prop_assume!(off_circle(&a) && off_circle(&b));
        let (f, g) = (p(&a), p(&b));
        prop_assert!(hillar_equal(&f, &f, 12).unwrap());
        prop_assert_eq!(hillar_equal(&f, &g, 12).unwrap(), hillar_equal(&g, &f, 12).unwrap());
        prop_assert!(hillar_equal(&f, &f.reversed(), 12).unwrap());
    }

    #[test]
    fn decomposition_round_trips(a in nonzero_poly(2), b in nonzero_poly(2), l in 0usize..3) {
        prop_assume!(off_circle(&a) && off_circle(&b));
        let (u, v) = (p(&a), p(&b));
        let shift = IntPoly::monomial(BigInt::from(1), l);
        let f = &shift * &(&v * &u.reversed());
        let g = &v * &u;
        prop_assert!(hillar_equal(&f, &g, 16).unwrap());
        let d = hillar_decompose(&f, &g).unwrap();
        prop_assert_eq!((d.l1, d.l2), (l, 0));
        if let Some((du, dv)) = d.integral {
            let sign = IntPoly::constant(BigInt::from(d.sign));
            let lift = IntPoly::monomial(BigInt::from(1), d.l1);
            prop_assert_eq!(&(&sign * &lift) * &(&dv * &du.reversed()), f);
            prop_assert_eq!(&dv * &du, g);
        }
    }
}
