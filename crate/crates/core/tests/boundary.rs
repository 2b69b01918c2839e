mod common;

use std::f64::consts::PI;

use astro_float::{BigFloat, RoundingMode};
use common::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use torgrowth::boundary::{
    ergodic_average, half_turn_integrals, lll, log_chord, multiplicative_dependence, p_integral, p_quadrature,
    parse_angle, radial_limit, s_m_at_minus_one, s_m_at_minus_one_raw, s_m_at_one, s_m_at_one_raw, stream_length,
    w_fractional, w_integral, w_quadrature, Angle, AverageSpec, CenteredTorsion, Dependence, RadialMode,
};
use torgrowth::polyalg::{classify_roots, IntPoly};
use torgrowth::Error;

const EULER: f64 = 0.577_215_664_901_532_9;
const RM: RoundingMode = RoundingMode::ToEven;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn golden() -> Angle {
    Angle::new((5f64.sqrt() - 1.0) / 2.0)
}

#[test]
fn chord_logs() {
    assert!((log_chord(0.5).unwrap() - 2f64.ln()).abs() < 1e-16);
    assert!(log_chord(1.0 / 6.0).unwrap().abs() < 1e-15);
    assert!(log_chord(0.0).is_none());
    assert!((log_chord(0.2).unwrap() - log_chord(0.8).unwrap()).abs() < 1e-15);
}

#[test]
fn angles() {
    assert_eq!(parse_angle("0.25").unwrap().value(), 0.25);
    assert_eq!(parse_angle("1.25").unwrap().value(), 0.25);
    assert_eq!(parse_angle("-0.25").unwrap().value(), 0.75);
    assert!(matches!(parse_angle("x"), Err(Error::Invalid(_))));
    assert!(matches!(parse_angle("inf"), Err(Error::Invalid(_))));
    let lehmer = [1.0, 1.0, 0.0, -1.0, -1.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0];
    for sel in 1..=4 {
        let a = parse_angle(&format!("root:1,1,0,-1,-1,-1,-1,-1,0,1,1:{sel}")).unwrap();
        assert!(a.value() > 0.0 && a.value() < 0.5);
        assert!(horner(&lehmer, a.unit()).norm() < 1e-12, "selector {sel}");
    }
    assert!(parse_angle("root:1,1,0,-1,-1,-1,-1,-1,0,1,1:5").is_err());
    let a = Angle::new(0.1);
    assert!(a.frac_mul(10) < 1e-15 || a.frac_mul(10) > 1.0 - 1e-15);
}

#[test]
fn integrals_match_closed_forms() {
    for m in 0..=4i64 {
        let mf = m as f64;
        let oracle = graded_simpson(
            |t| Complex64::from_polar(1.0, 2.0 * mf * t) * t.sin().ln(),
            0.0,
            PI,
            200_000,
        );
        assert!(close(oracle, c(p_integral(m), 0.0), 1e-9), "P_{m}: {oracle}");
        let (q, err) = p_quadrature(m, 1e-12);
        assert!(close(q, c(p_integral(m), 0.0), 1e-10) && err < 1e-8, "P_{m}: {q}");
        let w = twisted_chord_integral(mf);
        assert!(close(w, c(w_integral(m), 0.0), 1e-9), "W_{m}: {w}");
        assert!(close(w_quadrature(mf, 1e-12).0, c(w_integral(m), 0.0), 1e-10));
        assert_eq!(w_integral(-m), w_integral(m));
    }
    assert_eq!(p_integral(0), -PI * 2f64.ln());
}

#[test]
fn shifted_basel_sums() {
    assert!((s_m_at_one(1.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((s_m_at_one(0.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
    let psi_half = 2.0 - EULER - 2.0 * 2f64.ln();
    let psi_third = 3.0 - EULER - PI / (2.0 * 3f64.sqrt()) - 1.5 * 3f64.ln();
    let psi_two_thirds = 1.5 - EULER + PI / (2.0 * 3f64.sqrt()) - 1.5 * 3f64.ln();
    for (m, psi) in [(0.5, psi_half), (1.0 / 3.0, psi_third), (2.0 / 3.0, psi_two_thirds)] {
        let closed = (psi + EULER) / m;
        let lib = s_m_at_one(m).unwrap();
        let raw = s_m_at_one_raw(m, 2_000_000).unwrap();
        assert!((lib - closed).abs() < 1e-13, "m = {m}: {lib} vs {closed}");
        assert!((raw - closed).abs() < 1e-10, "m = {m}: raw {raw} vs {closed}");
        let alt = s_m_at_minus_one(m).unwrap();
        let alt_raw = s_m_at_minus_one_raw(m, 200_000).unwrap();
        assert!(close(alt, alt_raw, 1e-10), "m = {m}: {alt} vs {alt_raw}");
    }
    let alt = s_m_at_minus_one(0.0).unwrap();
    assert!(close(alt, c(-PI * PI / 12.0, 0.0), 1e-14));
    assert!(matches!(s_m_at_one(-2.0), Err(Error::InvalidExponent(_))));
    assert!(matches!(s_m_at_one(f64::NAN), Err(Error::InvalidExponent(_))));
    assert!(s_m_at_one(-0.5).is_ok());
}

#[test]
fn fractional_twists() {
    for (u, v) in [(1i64, 2u64), (1, 3), (2, 3), (-1, 2), (5, 4), (7, 3)] {
        let w = w_fractional(u, v).unwrap();
        let oracle = twisted_chord_integral(u as f64 / v as f64);
        assert!(close(w, oracle, 1e-9), "{u}/{v}: {w} vs {oracle}");
    }
    assert_eq!(w_fractional(3, 1).unwrap(), c(-1.0 / 6.0, 0.0));
    assert!(matches!(w_fractional(2, 4), Err(Error::InvalidExponent(_))));
    assert!(matches!(w_fractional(1, 0), Err(Error::InvalidExponent(_))));
}

#[test]
fn half_turn_symmetry() {
    for m in [0.5, 1.0 / 3.0, 1.7, 3.0, -0.25] {
        let (j1, j2) = half_turn_integrals(m, 1e-12);
        let e = Complex64::from_polar(1.0, 2.0 * PI * m);
        assert!((j2 + e * j1.conj()).norm() < 1e-10, "m = {m}");
    }
    for m in 1..=3 {
        let (j1, j2) = half_turn_integrals(m as f64, 1e-12);
        let full = c(0.0, 2.0 * PI * w_integral(m));
        assert!(close(j1 + j2, full, 1e-10));
    }
}

#[test]
fn rotation_averages() {
    let n = 200_000;
    let z = ergodic_average(&AverageSpec::new(golden(), 0, 1, n).unwrap());
    assert!(z.norm() < 1e-3, "{z}");
    let one = ergodic_average(&AverageSpec::new(golden(), 1, 1, n).unwrap());
    assert!(close(one, c(-0.5, 0.0), 1e-3), "{one}");
    let half = ergodic_average(&AverageSpec::new(golden(), 1, 2, n).unwrap());
    assert!(close(half, twisted_chord_integral(0.5), 1e-3), "{half}");
    let same = AverageSpec::new(golden(), 2, 4, 5000).unwrap();
    assert_eq!((same.m_num, same.m_den), (1, 2));
    assert_eq!(ergodic_average(&same.with_alpha(golden())), ergodic_average(&same));
    assert!(AverageSpec::new(golden(), 1, 0, 10).is_err());
    assert!(AverageSpec::new(golden(), 1, 1, 0).is_err());
}

#[test]
fn averages_do_not_depend_on_thread_count() {
    let spec = AverageSpec::new(Angle::new(2f64.sqrt() - 1.0), 3, 2, 300_000).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| ergodic_average(&spec))
    };
    let a = run(1);
    assert_eq!(a, run(3));
    assert_eq!(a, run(8));
}

#[test]
fn radial_limits_of_simple_streams() {
    for mode in [RadialMode::Cesaro, RadialMode::Abel] {
        let stream = vec![2.5; stream_length(mode) as usize];
        let at_one = radial_limit(&stream, Angle::new(0.0), mode).unwrap();
        assert!(close(at_one.value, c(2.5, 0.0), 1e-6), "{mode:?}: {:?}", at_one);
        let off = radial_limit(&stream, Angle::new(0.3), mode).unwrap();
        assert!(off.value.norm() < 1e-4, "{mode:?}: {:?}", off);
        assert!(radial_limit(&stream[..10], Angle::new(0.0), mode).is_err());
    }
    let alt: Vec<f64> = (1..=stream_length(RadialMode::Abel)).map(|n| if n % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let a = radial_limit(&alt, Angle::new(0.0), RadialMode::Abel).unwrap().value;
    let b = radial_limit(&alt, Angle::new(0.0), RadialMode::Cesaro).unwrap().value;
    assert!(close(a, c(0.5, 0.0), 1e-5) && close(b, c(0.5, 0.0), 1e-5), "{a} {b}");
}

#[test]
fn centered_stream_matches_root_products() {
    let f = IntPoly::from_i64(&[6, -13, 6]);
    let prof = classify_roots(&f).unwrap();
    let ct = CenteredTorsion::new(&prof);
    for n in [1u64, 2, 7, 30, 100] {
        let o = log_torsion_product(&[6.0, -13.0, 6.0], n as u32) - n as f64 * 9f64.ln();
        assert!((ct.term(n).unwrap() - o).abs() < 1e-10, "n = {n}");
    }
    let tre = CenteredTorsion::new(&classify_roots(&IntPoly::from_i64(&[1, -1, 1])).unwrap());
    assert!(tre.term(6).is_none());
    assert!((tre.term(3).unwrap() - 4f64.ln()).abs() < 1e-14);
    assert_eq!(tre.stream(12)[5], 0.0);
}

fn bf(x: u64, p: usize) -> BigFloat {
    BigFloat::from_u64(x, p)
}

#[test]
fn integer_relations() {
    let bits = 200;
    let s2 = bf(2, bits).sqrt(bits, RM);
    let s3 = bf(3, bits).sqrt(bits, RM);
    let target = s2.mul(&bf(3, bits), bits, RM).sub(&bf(1, bits), bits, RM);
    match multiplicative_dependence(&[s2.clone()], &target, bits).unwrap() {
        Dependence::Relation(c) => assert_eq!(c, vec![BigInt::from(1), BigInt::from(-3), BigInt::from(1)]),
        other => panic!("{other:?}"),
    }
    let t2 = s2.add(&s3, bits, RM).div(&bf(2, bits), bits, RM);
    match multiplicative_dependence(&[s2.clone(), s3.clone()], &t2, bits).unwrap() {
        Dependence::Relation(c) => assert_eq!(c, vec![BigInt::from(0), BigInt::from(-1), BigInt::from(-1), BigInt::from(2)]),
        other => panic!("{other:?}"),
    }
    let pi = BigFloat::from_f64(PI, bits);
    assert_eq!(
        multiplicative_dependence(&[s2], &s3.add(&pi, bits, RM), bits).unwrap(),
        Dependence::IndependentAtPrecision
    );
    assert!(multiplicative_dependence(&[], &pi, 8).is_err());
}

fn det2(b: &[Vec<BigInt>]) -> BigInt {
    &b[0][0] * &b[1][1] - &b[0][1] * &b[1][0]
}

#[test]
fn lattice_reduction() {
    let b = vec![vec![BigInt::from(201), BigInt::from(37)], vec![BigInt::from(1648), BigInt::from(297)]];
    let r = lll(b.clone());
    assert_eq!(det2(&r).abs(), det2(&b).abs());
    let n0 = r[0].iter().map(|x| x.to_f64().unwrap().powi(2)).sum::<f64>();
    assert!(n0 <= 2.0 * (det2(&b).abs().to_f64().unwrap()));
    assert_eq!(r[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![BigInt::from(1), BigInt::from(32)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fractional_multiples_are_exact(theta in 0.0f64..1.0, n in 1u64..10_000_000) {
        let a = Angle::new(theta);
        let exact = BigRational::from_float(theta).unwrap() * BigRational::from_integer(n.into());
        let frac = (&exact - exact.floor()).to_f64().unwrap();
        let got = a.frac_mul(n);
        let d = (got - frac).abs();
        prop_assert!(d.min(1.0 - d) < 4.0 * f64::EPSILON, "{} vs {}", got, frac);
        prop_assert!((0.0..1.0).contains(&got));
    }

    #[test]
    fn twisted_average_is_conjugate_symmetric(theta in 0.01f64..0.99, m in -4i64..=4) {
        let a = ergodic_average(&AverageSpec::new(Angle::new(theta), m, 1, 2000).unwrap());
        let b = ergodic_average(&AverageSpec::new(Angle::new(theta), -m, 1, 2000).unwrap());
        prop_assert!(close(a, b.conj(), 1e-12));
    }
}
