//! Cyclic resultants `Res(f, t^m - 1)` of arbitrary integer polynomials, equality of their
//! absolute values (with the matching factorization), exceptional-unit scans and Hankel tests.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::continuation::Settings;
use crate::error::{Error, Result};
use crate::hp::{self, RM};
use crate::polyalg::{classify_roots, resultant_exact, roots, IntPoly, RootClass};
use crate::rxcore::EvalResult;
use crate::torsion::GrowthFunction;

/// `Res(f, t^m - 1)` for `m = 1..=count`, with sign.
pub fn cyclic_resultants(f: &IntPoly, count: u64) -> Result<Vec<BigInt>> {
    (1..=count)
        .into_par_iter()
        .map(|m| resultant_exact(f, &IntPoly::cyclic(m as usize)))
        .collect()
}

/// `T_f(z) = sum_m log|Res(f, t^m - 1)| z^m`, continued.
pub fn t_f_continued(f: &IntPoly, z: Complex64, settings: &Settings) -> Result<EvalResult> {
    GrowthFunction::new(f, *settings)?.eval(z)
}

/// Whether `|Res(f, t^m - 1)| = |Res(g, t^m - 1)|` for all `m <= count`.
pub fn hillar_equal(f: &IntPoly, g: &IntPoly, count: u64) -> Result<bool> {
    let a = cyclic_resultants(f, count)?;
    let b = cyclic_resultants(g, count)?;
    for (m, (x, y)) in a.iter().zip(&b).enumerate() {
        if x.is_zero() || y.is_zero() {
            return Err(Error::ZeroResultant(m as u64 + 1));
        }
        if x.abs() != y.abs() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f = sign t^l1 v(t) t^deg(u) u(1/t)` and `g = t^l2 v(t) u(t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HillarDecomposition {
    /// Ascending complex coefficients.
    #[serde(serialize_with = "ser_cvec")]
    pub u: Vec<Complex64>,
    #[serde(serialize_with = "ser_cvec")]
    pub v: Vec<Complex64>,
    pub l1: usize,
    pub l2: usize,
    pub sign: i8,
    /// Set when `u`, `v` have integer coefficients and both identities hold exactly.
    pub integral: Option<(IntPoly, IntPoly)>,
}

fn ser_cvec<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&crate::report::complex_json(*z))?;
    }
    seq.end()
}

fn poly_from_roots(rs: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in rs {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        c = next;
    }
    c
}

fn cmul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn to_complex(f: &IntPoly) -> Vec<Complex64> {
    f.to_f64().into_iter().map(|x| Complex64::new(x, 0.0)).collect()
}

fn round_int(c: &[Complex64]) -> Option<IntPoly> {
    let mut out = Vec::with_capacity(c.len());
    for z in c {
        let r = z.re.round();
        if (z.re - r).abs() > 1e-6 * r.abs().max(1.0) || z.im.abs() > 1e-6 * r.abs().max(1.0) || r.abs() > 9e15 {
            return None;
        }
        out.push(r as i64);
    }
    Some(IntPoly::from_i64(&out))
}

fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let n = a.len().max(b.len());
    let scale = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max);
    (0..n).all(|i| {
        let x = a.get(i).copied().unwrap_or_default();
        let y = b.get(i).copied().unwrap_or_default();
        (x - y).norm() <= tol * scale
    })
}

/// Splits the roots of `g` into those shared with `f` (`v`) and those whose inverses are
/// roots of `f` (`u`), then checks both product identities.
pub fn hillar_decompose(f: &IntPoly, g: &IntPoly) -> Result<HillarDecomposition> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let l1 = f.trailing_zeros();
    let l2 = g.trailing_zeros();
    let fs = f.shift_down(l1);
    let gs = g.shift_down(l2);
    if fs.degree() != gs.degree() {
        return Err(Error::NoDecomposition);
    }
    let expand = |p: &IntPoly| -> Result<Vec<Complex64>> {
        let mut out = Vec::new();
        for r in roots(p, 1e-12)? {
            if (r.value.norm() - 1.0).abs() <= 1e-9 {
                return Err(Error::OutOfScope("a root lies on the unit circle".into()));
            }
            out.extend(std::iter::repeat_n(r.value, r.multiplicity));
        }
        Ok(out)
    };
    let mut fr = expand(&fs)?;
    let gr = expand(&gs)?;
    let tol = 1e-8;
    let mut u_roots = Vec::new();
    let mut v_roots = Vec::new();
    let mut pending = Vec::new();
    for b in gr {
        if let Some(i) = fr.iter().position(|a| (a - b).norm() <= tol * b.norm().max(1.0)) {
            fr.swap_remove(i);
            v_roots.push(b);
        } else {
            pending.push(b);
        }
    }
    for b in pending {
        let inv = b.inv();
        match fr.iter().position(|a| (a - inv).norm() <= tol * inv.norm().max(1.0)) {
            Some(i) => {
                fr.swap_remove(i);
                u_roots.push(b);
            }
            None => return Err(Error::NoDecomposition),
        }
    }
    let um = poly_from_roots(&u_roots);
    let vm = poly_from_roots(&v_roots);
    let lg = *gs.to_f64().last().unwrap();
    let lf = *fs.to_f64().last().unwrap();
    let s = lf / (lg * um[0].re);
    if (s.abs() - 1.0).abs() > 1e-8 || um[0].im.abs() > 1e-8 * um[0].norm() {
        return Err(Error::NoDecomposition);
    }
    let sign: i8 = if s > 0.0 { 1 } else { -1 };
    // leading coefficient of g goes to v; try moving integer factors of it to u
    let mut u = um.clone();
    let mut v: Vec<Complex64> = vm.iter().map(|c| c * lg).collect();
    let mut integral = None;
    let lgi = leading_abs_u64(&gs);
    for a in divisors_of(&lgi) {
        let af = a as f64;
        let uc: Vec<Complex64> = um.iter().map(|c| c * af).collect();
        let vc: Vec<Complex64> = vm.iter().map(|c| c * (lg / af)).collect();
        if let (Some(ui), Some(vi)) = (round_int(&uc), round_int(&vc)) {
            let rev = ui.reversed();
            let g_check = &(&IntPoly::monomial(BigInt::one(), l2) * &vi) * &ui;
            let f_check = (&(&IntPoly::monomial(BigInt::one(), l1) * &vi) * &rev).scale(&BigInt::from(sign));
            if &g_check == g && &f_check == f {
                u = uc;
                v = vc;
                integral = Some((ui, vi));
                break;
            }
        }
    }
    if integral.is_none() {
        let mut rev: Vec<Complex64> = u.clone();
        rev.reverse();
        let mut g_num = vec![Complex64::new(0.0, 0.0); l2];
        g_num.extend(cmul(&v, &u));
        let mut f_num = vec![Complex64::new(0.0, 0.0); l1];
        f_num.extend(cmul(&v, &rev).into_iter().map(|c| c * sign as f64));
        if !close(&g_num, &to_complex(g), 1e-8) || !close(&f_num, &to_complex(f), 1e-8) {
            return Err(Error::NoDecomposition);
        }
    }
    Ok(HillarDecomposition {
        u,
        v,
        l1,
        l2,
        sign,
        integral,
    })
}

fn leading_abs_u64(p: &IntPoly) -> u64 {
    p.leading().abs().try_into().unwrap_or(1)
}

fn divisors_of(n: &u64) -> Vec<u64> {
    let n = (*n).max(1);
    let mut out: Vec<u64> = (1..=n.min(1_000_000)).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitScan {
    pub minpoly: IntPoly,
    pub e0: u64,
    pub unit_indices: Vec<u64>,
    pub bound: u64,
    /// `N(1 - u^n)` for `n = 1..=bound`.
    #[serde(serialize_with = "ser_bigints")]
    pub norms: Vec<BigInt>,
    /// `unit_indices.len()`; a lower bound for the total count, the scan is never exhaustive.
    pub count_lower_bound: usize,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `N(1 - u^n) = prod (1 - beta_i^n)` over the conjugates, for monic `minpoly`.
pub fn unit_norm(minpoly: &IntPoly, n: u64) -> Result<BigInt> {
    let one_minus = &IntPoly::one() - &IntPoly::monomial(BigInt::one(), n as usize);
    resultant_exact(minpoly, &one_minus)
}

fn check_unit(minpoly: &IntPoly) -> Result<()> {
    if minpoly.degree() == 0 {
        return Err(Error::NotAUnit("constant polynomial".into()));
    }
    if !minpoly.leading().abs().is_one() || !minpoly.coeff(0).abs().is_one() {
        return Err(Error::NotAUnit("leading and constant coefficients must be +-1".into()));
    }
    let p = classify_roots(minpoly)?;
    if !p.cyclotomic_factors.is_empty() {
        return Err(Error::NotAUnit("a root of unity makes 1 - u^n vanish".into()));
    }
    Ok(())
}

/// Indices `n <= bound` with `1 - u^n` a unit, by exact norms.
pub fn exceptional_scan(minpoly: &IntPoly, bound: u64) -> Result<UnitScan> {
    check_unit(minpoly)?;
    let norms: Vec<BigInt> = (1..=bound)
        .into_par_iter()
        .map(|n| unit_norm(minpoly, n))
        .collect::<Result<_>>()?;
    let unit_indices: Vec<u64> = norms
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs().is_one())
        .map(|(i, _)| i as u64 + 1)
        .collect();
    let e0 = unit_indices
        .iter()
        .enumerate()
        .take_while(|(i, &n)| n == *i as u64 + 1)
        .count() as u64;
    Ok(UnitScan {
        minpoly: minpoly.clone(),
        e0,
        count_lower_bound: unit_indices.len(),
        unit_indices,
        bound,
        norms,
    })
}

/// `G_u(z) = sum log|N(1 - u^n)| z^n` for a field of degree `degree_multiplier` over `Q(u)`.
pub fn g_u_continued(minpoly: &IntPoly, z: Complex64, degree_multiplier: u32, settings: &Settings) -> Result<EvalResult> {
    if degree_multiplier == 0 {
        return Err(Error::Invalid("degree_multiplier must be positive".into()));
    }
    let p = classify_roots(minpoly)?;
    if p
        .roots
        .iter()
        .any(|r| matches!(r.class, RootClass::RootOfUnity { .. } | RootClass::Diophantine))
    {
        return Err(Error::UnimodularConjugate);
    }
    let r = GrowthFunction::from_profile(p, *settings).eval(z)?;
    let k = degree_multiplier as f64;
    Ok(EvalResult {
        value: r.value * k,
        tail_bound: r.tail_bound * k,
        terms_used: r.terms_used,
    })
}

/// `log|n|` at `bits` bits.
pub fn ln_abs_bigint_hp(n: &BigInt, bits: usize) -> Result<BigFloat> {
    if n.is_zero() {
        return Err(Error::Invalid("log of zero".into()));
    }
    let mut cc = hp::consts();
    Ok(hp::from_bigint(&n.abs(), bits).ln(bits, RM, &mut cc))
}

/// Smallest singular value of the `(len - order) x (order + 1)` Hankel matrix
/// `H[i][j] = seq[i + j]`, from the eigenvalues of `H^T H` (cyclic Jacobi at `bits` bits).
pub fn hankel_min_singular_value(seq: &[BigFloat], order: usize, bits: usize) -> Result<f64> {
    let cols = order + 1;
    if seq.len() < cols + order {
        return Err(Error::Invalid("sequence too short for this order".into()));
    }
    let rows = seq.len() - order;
    let zero = BigFloat::from_u64(0, bits);
    let mut g = vec![vec![zero.clone(); cols]; cols];
    for a in 0..cols {
        for b in a..cols {
            let mut s = zero.clone();
            for i in 0..rows {
                s = s.add(&seq[i + a].mul(&seq[i + b], bits, RM), bits, RM);
            }
            g[a][b] = s.clone();
            g[b][a] = s;
        }
    }
    let eig = jacobi_eigenvalues(g, bits);
    let min = eig
        .iter()
        .map(hp::to_f64)
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    Ok(min.sqrt())
}

fn jacobi_eigenvalues(mut a: Vec<Vec<BigFloat>>, bits: usize) -> Vec<BigFloat> {
    let n = a.len();
    let one = BigFloat::from_u64(1, 64);
    let two = BigFloat::from_u64(2, 64);
    let frob = |a: &Vec<Vec<BigFloat>>, off: bool| -> BigFloat {
        let mut s = BigFloat::from_u64(0, bits);
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !off || i != j {
                    s = s.add(&x.mul(x, bits, RM), bits, RM);
                }
            }
        }
        s
    };
    let total = frob(&a, false);
    let tiny = total.mul(&BigFloat::from_f64(2f64.powi(-(2 * bits as i32 - 32).min(1000)), 64), bits, RM);
    for _ in 0..60 {
        if frob(&a, true) <= tiny {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].is_zero() {
                    continue;
                }
                let theta = a[q][q].sub(&a[p][p], bits, RM).div(&two.mul(&a[p][q], bits, RM), bits, RM);
                let root = theta.mul(&theta, bits, RM).add(&one, bits, RM).sqrt(bits, RM);
                let mut t = one.div(&theta.abs().add(&root, bits, RM), bits, RM);
                if theta.is_negative() {
                    t = t.neg();
                }
                let c = one.div(&t.mul(&t, bits, RM).add(&one, bits, RM).sqrt(bits, RM), bits, RM);
                let s = t.mul(&c, bits, RM);
                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = c.mul(&akp, bits, RM).sub(&s.mul(&akq, bits, RM), bits, RM);
                    a[k][q] = s.mul(&akp, bits, RM).add(&c.mul(&akq, bits, RM), bits, RM);
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = c.mul(&apk, bits, RM).sub(&s.mul(&aqk, bits, RM), bits, RM);
                    a[q][k] = s.mul(&apk, bits, RM).add(&c.mul(&aqk, bits, RM), bits, RM);
                }
            }
        }
    }
    (0..n).map(|i| a[i][i].clone()).collect()
}

/// `log|x_n|` for `n = 1..` at `bits` bits; zeros are rejected.
pub fn log_sequence_hp(values: &[BigInt], bits: usize) -> Result<Vec<BigFloat>> {
    values.iter().map(|v| ln_abs_bigint_hp(v, bits)).collect()
}
