mod common;

use common::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use torgrowth::polyalg::{
    badly_approximable_witness, classify_roots, continued_fraction, continued_fraction_rational, cyclotomic,
    mahler_measure, resultant_exact, roots, ApproxVerdict, IntPoly, Provenance, RootClass,
};

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

// Resultant through Euclidean remainders over the rationals:
// Res(f, g) = lc(f)^(deg g - deg r) Res(f, r) for g = q f + r, and Res(f, r) = (-1)^(deg f deg r) Res(r, f).
fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rem(g: &[BigRational], f: &[BigRational]) -> Vec<BigRational> {
    let mut r = g.to_vec();
    let df = f.len() - 1;
    while r.len() > df && !r.is_empty() {
        let k = r.len() - 1 - df;
        let q = r.last().unwrap() / f.last().unwrap();
        for (i, c) in f.iter().enumerate() {
            r[k + i] = &r[k + i] - &q * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn euclid_resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let (m, n) = (f.len() - 1, g.len() - 1);
    if m == 0 {
        return f[0].pow(n as i32);
    }
    if n == 0 {
        return g[0].pow(m as i32);
    }
    let r = rem(g, f);
    if r.is_empty() {
        return BigRational::zero();
    }
    let k = r.len() - 1;
    let sign = if (m * k) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    f[m].pow((n - k) as i32) * sign * euclid_resultant(&r, f)
}

fn rat(f: &IntPoly) -> Vec<BigRational> {
    f.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    (prop::collection::vec(-6i64..=6, 0..max_deg), prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            IntPoly::from_i64(&c)
        })
}

#[test]
fn resultant_examples() {
    let eight = p(&[1, -3, 1]);
    assert_eq!(resultant_exact(&eight, &p(&[-1, 1])).unwrap().abs(), big(1));
    assert_eq!(resultant_exact(&eight, &IntPoly::cyclic(3)).unwrap().abs(), big(16));
    assert!(resultant_exact(&p(&[1, -1, 1]), &IntPoly::cyclic(6)).unwrap().is_zero());
}

#[test]
fn cyclotomic_examples() {
    assert_eq!(cyclotomic(1), p(&[-1, 1]));
    assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
    assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
}

#[test]
fn cyclotomic_products_rebuild_t_n_minus_one() {
    for n in 1..=30u64 {
        let mut acc = IntPoly::one();
        for d in 1..=n {
            if n % d == 0 {
                acc = &acc * &cyclotomic(d);
            }
        }
        assert_eq!(acc, IntPoly::cyclic(n as usize), "n = {n}");
    }
}

#[test]
fn root_examples() {
    let r = roots(&p(&[1, -3, 1]), 1e-12).unwrap();
    let mut v: Vec<f64> = r.iter().map(|x| x.value.re).collect();
    v.sort_by(f64::total_cmp);
    assert!((v[0] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert!((v[1] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);

    let r = roots(&p(&[1, -1, 1]), 1e-12).unwrap();
    for x in &r {
        assert!((x.value.powu(6) - 1.0).norm() < 1e-12);
        assert!((x.value.powu(3) + 1.0).norm() < 1e-12);
    }

    let r = roots(&p(&[4, -4, 1]), 1e-12).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].multiplicity, 2);
    assert!((r[0].value - 2.0).norm() < 1e-9);
}

#[test]
fn classify_examples() {
    let t = classify_roots(&p(&[1, -1, 1])).unwrap();
    assert_eq!(t.mahler, 1.0);
    for r in &t.roots {
        assert!(matches!(r.class, RootClass::RootOfUnity { order: 6, .. }));
        assert_eq!(r.provenance, Provenance::ExactCyclotomic);
    }

    let k = classify_roots(&p(&[6, -13, 6])).unwrap();
    assert!((k.mahler - 9.0).abs() < 1e-12);
    let inside: Vec<_> = k.roots.iter().filter(|r| r.class == RootClass::InsideDisc).collect();
    let outside: Vec<_> = k.roots.iter().filter(|r| r.class == RootClass::OutsideDisc).collect();
    assert!((inside[0].value - 2.0 / 3.0).norm() < 1e-12);
    assert!((outside[0].value - 1.5).norm() < 1e-12);

    let lehmer = classify_roots(&p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])).unwrap();
    let count = |c: RootClass| lehmer.roots.iter().filter(|r| r.class == c).map(|r| r.multiplicity).sum::<usize>();
    assert_eq!(count(RootClass::Diophantine), 8);
    assert_eq!(count(RootClass::InsideDisc), 1);
    assert_eq!(count(RootClass::OutsideDisc), 1);
}

#[test]
fn classify_mixed_multiplicities() {
    let f = &(&cyclotomic(6).pow(2) * &cyclotomic(4)) * &p(&[1, -3, 1]);
    let prof = classify_roots(&f).unwrap();
    assert_eq!(prof.roots.iter().map(|r| r.multiplicity).sum::<usize>(), f.degree());
    assert!(prof.cyclotomic_factors.contains(&(6, 2)));
    assert!(prof.cyclotomic_factors.contains(&(4, 1)));
    assert_eq!(prof.period(), 12);
    assert!((prof.mahler - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
}

#[test]
fn continued_fraction_examples() {
    let g = continued_fraction((5f64.sqrt() - 1.0) / 2.0, 30).unwrap();
    assert!(g.quotients.iter().all(|a| a.is_one()));
    let s = continued_fraction(2f64.sqrt() - 1.0, 15).unwrap();
    assert!(s.quotients.iter().all(|a| *a == big(2)));
    assert_eq!(badly_approximable_witness(&s, 3), ApproxVerdict::BoundedByPrefix);

    let r = continued_fraction_rational(&big(5), &big(13), 10).unwrap();
    assert_eq!(r.quotients, vec![big(2), big(1), big(1), big(2)]);
    assert!(r.terminated);
    assert_eq!(badly_approximable_witness(&r, 3), ApproxVerdict::BoundedByPrefix);

    let pi = continued_fraction(std::f64::consts::PI - 3.0, 3).unwrap();
    assert_eq!(pi.quotients, vec![big(7), big(15), big(1)]);
    assert_eq!(badly_approximable_witness(&pi, 3), ApproxVerdict::ExceedsBound(1));
    assert_eq!(badly_approximable_witness(&pi, 10), ApproxVerdict::ExceedsBound(2));
}

#[test]
fn continued_fraction_runs_out_of_precision() {
    let e = continued_fraction((5f64.sqrt() - 1.0) / 2.0, 200).unwrap_err();
    assert!(matches!(e, torgrowth::Error::PrecisionExhausted(n) if n > 20 && n < 60));
}

#[test]
fn parse_and_display() {
    let f = IntPoly::parse("6, -13, 6").unwrap();
    assert_eq!(f, p(&[6, -13, 6]));
    assert_eq!(f.to_string(), "6,-13,6");
    assert_eq!(IntPoly::parse("{\"coeffs\":[\"1\",\"-3\",\"1\"]}").unwrap(), p(&[1, -3, 1]));
    assert!(IntPoly::parse("1,x").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_matches_euclid(f in nonzero_poly(5), g in nonzero_poly(5)) {
        let a = resultant_exact(&f, &g).unwrap();
        let b = euclid_resultant(&rat(&f), &rat(&g));
        prop_assert!(b.is_integer());
        prop_assert_eq!(BigRational::from_integer(a), b);
    }

    #[test]
    fn resultant_is_multiplicative(f in nonzero_poly(4), g in nonzero_poly(3), h in nonzero_poly(3)) {
        let gh = &g * &h;
        let lhs = resultant_exact(&f, &gh).unwrap();
        let rhs = resultant_exact(&f, &g).unwrap() * resultant_exact(&f, &h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_swap_sign(f in nonzero_poly(5), g in nonzero_poly(5)) {
        let s = if (f.degree() * g.degree()) % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(resultant_exact(&f, &g).unwrap(), resultant_exact(&g, &f).unwrap() * s);
    }

    #[test]
    fn display_round_trips(f in nonzero_poly(8)) {
        prop_assert_eq!(IntPoly::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(3), f in nonzero_poly(3), g in nonzero_poly(3)) {
        let (x, y) = (&a * &f, &a * &g);
        let d = x.gcd(&y);
        prop_assert!(x.exact_div(&d).is_some());
        prop_assert!(y.exact_div(&d).is_some());
        prop_assert!(d.degree() >= a.degree());
    }

    #[test]
    fn squarefree_parts_rebuild_the_polynomial(a in nonzero_poly(3), b in nonzero_poly(2)) {
        let f = &(&a * &b) * &b;
        let mut acc = IntPoly::one();
        for (part, e) in f.squarefree_decomposition() {
            prop_assert!(part.is_squarefree());
            acc = &acc * &part.pow(e);
        }
        let lhs = f.primitive();
        let rhs = acc.primitive();
        prop_assert!(lhs == rhs || lhs == -&rhs);
    }

    #[test]
    fn mahler_ignores_cyclotomic_factors(f in nonzero_poly(4), d in 1u64..=12) {
        prop_assume!(!f.coeff(0).is_zero());
        let g = &f * &cyclotomic(d);
        let (mf, mg) = (mahler_measure(&f).unwrap(), mahler_measure(&g).unwrap());
        prop_assert!((mf - mg).abs() <= 1e-9 * mf);
        prop_assert!(mf >= 1.0 - 1e-12);
    }

    #[test]
    fn roots_rebuild_coefficients(seed in prop::collection::vec(-4i64..=4, 2..8)) {
        let mut c = seed;
        c.push(1);
        let f = IntPoly::from_i64(&c);
        prop_assume!(f.is_squarefree() && !f.coeff(0).is_zero());
        let rs = roots(&f, 1e-12).unwrap();
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for r in &rs {
            for _ in 0..r.multiplicity {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (i, a) in prod.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] -= a * r.value;
                }
                prod = next;
            }
        }
        let scale = c.iter().map(|a| a.abs() as f64).fold(1.0, f64::max);
        for (i, a) in c.iter().enumerate() {
            prop_assert!((prod[i] - *a as f64).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn roots_agree_with_durand_kerner(seed in prop::collection::vec(-5i64..=5, 2..7)) {
        let mut c = seed;
        c.push(2);
        let f = IntPoly::from_i64(&c);
        prop_assume!(f.is_squarefree() && !f.coeff(0).is_zero());
        let cf: Vec<f64> = c.iter().map(|&a| a as f64).collect();
        let oracle = dk_roots(&cf);
        prop_assume!(oracle.iter().all(|z| horner(&cf, *z).norm() < 1e-9));
        for r in roots(&f, 1e-12).unwrap() {
            let d = oracle.iter().map(|z| (z - r.value).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-7, "root {} has no oracle partner ({d:e})", r.value);
        }
    }

    #[test]
    fn convergents_bracket_theta(num in 1u64..1_000_000, extra in 1u64..1_000_000) {
        let den = num + extra;
        let theta = BigRational::new(num.into(), den.into());
        let cf = continued_fraction_rational(&BigInt::from(num), &BigInt::from(den), 64).unwrap();
        prop_assert!(cf.terminated);
        let (pl, ql) = cf.convergents.last().unwrap();
        prop_assert_eq!(BigRational::new(pl.clone(), ql.clone()), BigRational::new(num.into(), den.into()));
        for w in cf.convergents.windows(2) {
            let (p0, q0) = &w[0];
            let (_, q1) = &w[1];
            prop_assert!(num_integer::Integer::gcd(p0, q0).is_one());
            let err = (&theta - BigRational::new(p0.clone(), q0.clone())).abs();
            prop_assert!(err <= BigRational::new(BigInt::one(), q0 * q1));
        }
        for i in 2..cf.quotients.len() {
            let (a, (p2, q2), (p1, q1), (p0, q0)) =
                (&cf.quotients[i], &cf.convergents[i], &cf.convergents[i - 1], &cf.convergents[i - 2]);
            prop_assert_eq!(p2, &(a * p1 + p0));
            prop_assert_eq!(q2, &(a * q1 + q0));
        }
    }
}
