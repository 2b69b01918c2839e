//! Behaviour on the unit circle: rotation averages of `log|1 - e^{2 pi i n theta}|`, the
//! integrals they converge to, radial limits and integer-relation tests between angles.

use std::f64::consts::PI;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hp::{self, HpComplex, RM};
use crate::lvalues::psi_plus_gamma;
use crate::polyalg::{classify_roots, ClassifiedRoot, IntPoly, Provenance, RootClass, RootProfile, POLISH_BITS};
use crate::quad::tanh_sinh;
use crate::report::ser_complex;
use crate::rxcore::log_term;
use crate::sum::{ComplexSum, KahanSum};

const CHUNK: u64 = 1 << 16;

/// A turn fraction in [0, 1) carried as an unevaluated double-double sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Angle {
    pub hi: f64,
    pub lo: f64,
}

impl Angle {
    pub fn new(theta: f64) -> Self {
        Angle {
            hi: theta.rem_euclid(1.0),
            lo: 0.0,
        }
    }

    pub fn from_hp(t: &BigFloat) -> Self {
        let (hi, lo) = hp::split_double_double(t, POLISH_BITS);
        Angle { hi, lo }
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }

    /// `{n theta}`, exact up to the rounding of the final sum.
    pub fn frac_mul(&self, n: u64) -> f64 {
        let nf = n as f64;
        let p = nf * self.hi;
        let e = nf.mul_add(self.hi, -p);
        let f = (p - p.floor()) + (e + nf * self.lo);
        let f = f - f.floor();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }

    pub fn unit(&self) -> Complex64 {
        let t = 2.0 * PI * self.value();
        Complex64::new(t.cos(), t.sin())
    }
}

/// `log|1 - e^{2 pi i t}| = log(2 sin(pi t))` for `t` in [0, 1); `None` where it is below 1e-300.
pub fn log_chord(t: f64) -> Option<f64> {
    let d = t.min(1.0 - t);
    let v = 2.0 * (PI * d).sin();
    if v < 1e-300 {
        None
    } else {
        Some(v.ln())
    }
}

/// Parses a decimal turn fraction or `root:<coeffs>:<selector>`; see [`root_angle`].
pub fn parse_angle(spec: &str) -> Result<Angle> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("root:") {
        let (poly, sel) = rest
            .rsplit_once(':')
            .ok_or_else(|| Error::Invalid(format!("expected root:<coeffs>:<selector>, got {spec}")))?;
        let f = IntPoly::parse(poly)?;
        return Ok(Angle::from_hp(&root_angle(&f, sel, POLISH_BITS)?));
    }
    let v: f64 = spec
        .parse()
        .map_err(|_| Error::Invalid(format!("not a number: {spec}")))?;
    if !v.is_finite() {
        return Err(Error::Invalid(format!("not finite: {spec}")));
    }
    Ok(Angle::new(v))
}

/// Turn fraction of a unimodular algebraic number at `bits` bits.
///
/// `selector` is either a 1-based index into the roots on the unit circle with positive
/// imaginary part (ordered by angle), or `pair`: the quotient `v1/v2` of the first two roots
/// off the circle that share their modulus without being conjugate (ordered by angle, larger first).
pub fn root_angle(f: &IntPoly, selector: &str, bits: usize) -> Result<BigFloat> {
    let profile = classify_roots(f)?;
    let polish = |z: Complex64| -> Result<HpComplex> {
        let coeffs: Vec<BigInt> = profile.cofactor.coeffs().to_vec();
        hp::polish_root(&coeffs, z, bits).ok_or(Error::NonConvergence { residual: f64::NAN })
    };
    if selector.trim() == "pair" {
        let mut upper: Vec<Complex64> = profile
            .roots
            .iter()
            .filter(|r| r.provenance == Provenance::Numeric && r.value.im > 0.0 && (r.value.norm() - 1.0).abs() > 1e-9)
            .map(|r| r.value)
            .collect();
        upper.sort_by(|a, b| b.arg().partial_cmp(&a.arg()).unwrap());
        for i in 0..upper.len() {
            for j in i + 1..upper.len() {
                let (a, b) = (upper[i], upper[j]);
                if (a.norm() - b.norm()).abs() <= 1e-9 * a.norm() {
                    let q = polish(a)?.div(&polish(b)?, bits);
                    return Ok(hp::turn_fraction_hp(&q, bits));
                }
            }
        }
        return Err(Error::Invalid("no two non-conjugate roots share a modulus".into()));
    }
    let k: usize = selector
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad root selector: {selector}")))?;
    let mut on: Vec<&ClassifiedRoot> = profile
        .roots
        .iter()
        .filter(|r| r.value.im > 0.0 && matches!(r.class, RootClass::RootOfUnity { .. } | RootClass::Diophantine))
        .collect();
    on.sort_by(|a, b| a.value.arg().partial_cmp(&b.value.arg()).unwrap());
    let r = on
        .get(k.wrapping_sub(1))
        .ok_or_else(|| Error::Invalid(format!("root index {k} out of range (1..={})", on.len())))?;
    match (r.class, &r.hp) {
        (RootClass::RootOfUnity { order, index }, _) => {
            let num = BigFloat::from_u64(index, 64);
            Ok(num.div(&BigFloat::from_u64(order, 64), bits, RM))
        }
        (_, Some(h)) => Ok(hp::turn_fraction_hp(&polish(h.to_c64())?, bits)),
        _ => Ok(hp::turn_fraction_hp(&polish(r.value)?, bits)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageSpec {
    pub theta: Angle,
    /// Direction of the twist; `None` twists along `theta` itself.
    pub alpha: Option<Angle>,
    pub m_num: i64,
    pub m_den: u64,
    pub n: u64,
}

impl AverageSpec {
    pub fn new(theta: Angle, m_num: i64, m_den: u64, n: u64) -> Result<Self> {
        if m_den == 0 || n == 0 {
            return Err(Error::Invalid("m_den and N must be positive".into()));
        }
        let g = m_num.unsigned_abs().gcd(&m_den);
        let g = g.max(1);
        Ok(AverageSpec {
            theta,
            alpha: None,
            m_num: m_num / g as i64,
            m_den: m_den / g,
            n,
        })
    }

    pub fn with_alpha(mut self, alpha: Angle) -> Self {
        self.alpha = Some(alpha);
        self
    }
}

/// `(1/N) sum_{n<=N} log|1 - e^{2 pi i n theta}| e^{2 pi i m {n alpha}}` with `alpha = theta`
/// unless given. The twist uses the fractional part so that non-integral `m` is well defined.
/// Chunks are summed in parallel and merged in index order, so the result does not depend on
/// the thread count.
pub fn ergodic_average(spec: &AverageSpec) -> Complex64 {
    let m = spec.m_num as f64 / spec.m_den as f64;
    let twist = spec.alpha.unwrap_or(spec.theta);
    let chunks = spec.n.div_ceil(CHUNK);
    let parts: Vec<ComplexSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s = ComplexSum::new();
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(spec.n);
            for n in lo..=hi {
                if let Some(l) = log_chord(spec.theta.frac_mul(n)) {
                    if m == 0.0 {
                        s.add(Complex64::new(l, 0.0));
                    } else {
                        let ph = 2.0 * PI * m * twist.frac_mul(n);
                        s.add(Complex64::new(l * ph.cos(), l * ph.sin()));
                    }
                }
            }
            s
        })
        .collect();
    let mut total = ComplexSum::new();
    for p in &parts {
        total.merge(p);
    }
    total.value() / spec.n as f64
}

pub fn ergodic_average_2d(theta: Angle, alpha: Angle, m: i64, n: u64) -> Result<Complex64> {
    Ok(ergodic_average(&AverageSpec::new(theta, m, 1, n)?.with_alpha(alpha)))
}

/// `int_0^pi log(sin t) e^{2imt} dt`.
pub fn p_integral(m: i64) -> f64 {
    if m == 0 {
        -PI * 2f64.ln()
    } else {
        -PI / (2.0 * m.unsigned_abs() as f64)
    }
}

pub fn p_quadrature(m: i64, tol: f64) -> (Complex64, f64) {
    let mf = m as f64;
    tanh_sinh(
        |t, d| {
            let ph = 2.0 * mf * t;
            Complex64::new(ph.cos(), ph.sin()) * d.sin().ln()
        },
        0.0,
        PI,
        tol,
    )
}

/// `int_0^1 log|1 - e^{2 pi i t}| e^{2 pi i m t} dt` for integer `m`.
pub fn w_integral(m: i64) -> f64 {
    if m == 0 {
        0.0
    } else {
        -1.0 / (2.0 * m.unsigned_abs() as f64)
    }
}

/// The same integral by tanh-sinh quadrature, for any real `m`.
pub fn w_quadrature(m: f64, tol: f64) -> (Complex64, f64) {
    tanh_sinh(
        |t, d| {
            let ph = 2.0 * PI * m * t;
            Complex64::new(ph.cos(), ph.sin()) * (2.0 * (PI * d).sin()).ln()
        },
        0.0,
        1.0,
        tol,
    )
}

/// `(i int_0^pi, i int_pi^2pi)` of `log(2 sin(t/2)) e^{imt} dt`, by quadrature.
pub fn half_turn_integrals(m: f64, tol: f64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    let f = |t: f64, d: f64| Complex64::new((m * t).cos(), (m * t).sin()) * (2.0 * (d / 2.0).sin()).ln();
    let (a, _) = tanh_sinh(
        |t, d| {
            if t < 0.5 * PI {
                f(t, d)
            } else {
                f(t, t)
            }
        },
        0.0,
        PI,
        tol,
    );
    let (b, _) = tanh_sinh(
        |t, d| {
            if t > 1.5 * PI {
                f(t, d)
            } else {
                f(t, 2.0 * PI - t)
            }
        },
        PI,
        2.0 * PI,
        tol,
    );
    (i * a, i * b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmValue {
    pub m: f64,
    #[serde(serialize_with = "ser_complex")]
    pub at_one: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub at_minus_one: Complex64,
}

fn check_exponent(m: f64) -> Result<()> {
    if !m.is_finite() || (m < 0.0 && m.fract() == 0.0) {
        return Err(Error::InvalidExponent(format!("{m}")));
    }
    Ok(())
}

/// `sum_{r>=1} 1/(r(r+m))` through `(psi(m+1) + gamma)/m`.
pub fn s_m_at_one(m: f64) -> Result<f64> {
    check_exponent(m)?;
    if m == 0.0 {
        return Ok(PI * PI / 6.0);
    }
    Ok(psi_plus_gamma(m + 1.0)? / m)
}

/// Raw partial sum of `1/(r(r+m))` over `r <= n` plus the integral of the tail.
pub fn s_m_at_one_raw(m: f64, n: u64) -> Result<f64> {
    check_exponent(m)?;
    let mut s = KahanSum::new();
    for r in 1..=n {
        let rf = r as f64;
        s.add(1.0 / (rf * (rf + m)));
    }
    let nf = n as f64;
    s.add(if m == 0.0 { 1.0 / nf } else { (m / nf).ln_1p() / m });
    Ok(s.value())
}

/// Cohen-Villegas-Zagier acceleration of `sum_{k>=0} (-1)^k a(k)` for completely monotone `a`.
pub fn alternating_sum<F: Fn(u64) -> f64>(a: F, terms: u64) -> f64 {
    let n = terms as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(n);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..terms {
        c = b - c;
        s += c * a(k);
        let kf = k as f64;
        b = (kf + n) * (kf - n) * b / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

fn alternating_core(m: f64) -> f64 {
    // sum_{r>=1} (-1)^r / (r (r + m)); the terms are completely monotone once r + m > 0
    let mut head = KahanSum::new();
    let mut r0 = 1u64;
    while r0 as f64 + m <= 0.5 {
        let rf = r0 as f64;
        let sign = if r0 % 2 == 0 { 1.0 } else { -1.0 };
        head.add(sign / (rf * (rf + m)));
        r0 += 1;
    }
    let sign0 = if r0 % 2 == 0 { 1.0 } else { -1.0 };
    let tail = alternating_sum(
        |k| {
            let rf = (r0 + k) as f64;
            1.0 / (rf * (rf + m))
        },
        48,
    );
    head.add(sign0 * tail);
    head.value()
}

/// `sum_{r>=1} e^{i pi (r+m)} / (r (r+m))` with the principal branch `e^{i pi m}`.
pub fn s_m_at_minus_one(m: f64) -> Result<Complex64> {
    check_exponent(m)?;
    Ok(Complex64::from_polar(1.0, PI * m) * alternating_core(m))
}

/// Mean of two consecutive raw partial sums of the alternating series.
pub fn s_m_at_minus_one_raw(m: f64, n: u64) -> Result<Complex64> {
    check_exponent(m)?;
    let mut s = KahanSum::new();
    let mut last = 0.0;
    for r in 1..=n + 1 {
        let rf = r as f64;
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        last = sign / (rf * (rf + m));
        s.add(last);
    }
    let v = s.value() - last / 2.0;
    Ok(Complex64::from_polar(1.0, PI * m) * v)
}

pub fn s_m(m: f64) -> Result<SmValue> {
    Ok(SmValue {
        m,
        at_one: Complex64::new(s_m_at_one(m)?, 0.0),
        at_minus_one: s_m_at_minus_one(m)?,
    })
}

/// `W_m` for `m = u/v` in lowest terms, from `S_m(1)` and `S_m(-1)`.
pub fn w_fractional(u: i64, v: u64) -> Result<Complex64> {
    if v == 0 {
        return Err(Error::InvalidExponent(format!("{u}/0")));
    }
    if u.unsigned_abs().gcd(&v) != 1 && u != 0 {
        return Err(Error::InvalidExponent(format!("{u}/{v} is not in lowest terms")));
    }
    if v == 1 || u == 0 {
        return Ok(Complex64::new(w_integral(u), 0.0));
    }
    if u < 0 {
        return Ok(w_fractional(-u, v)?.conj());
    }
    let m = u as f64 / v as f64;
    let i = Complex64::new(0.0, 1.0);
    let s = s_m(m)?;
    let boundary = (Complex64::new(1.0, m * PI) - Complex64::from_polar(1.0, PI * m)) / (2.0 * m * m);
    let lower = (s.at_one - s.at_minus_one - boundary) / i;
    let upper = Complex64::from_polar(1.0, 2.0 * PI * m) * lower.conj();
    Ok((lower + upper) / (2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RadialMode {
    Cesaro,
    Abel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialEstimate {
    pub mode: RadialMode,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// Spread between the last two extrapolated values.
    pub error: f64,
}

const CESARO_N: [u64; 3] = [100_000, 200_000, 400_000];
const ABEL_J: std::ops::RangeInclusive<i32> = 8..=14;

fn abel_terms(j: i32) -> u64 {
    40 * (1u64 << j)
}

/// Terms needed by [`radial_limit`] for a mode.
pub fn stream_length(mode: RadialMode) -> u64 {
    match mode {
        RadialMode::Cesaro => CESARO_N[2],
        RadialMode::Abel => abel_terms(*ABEL_J.end()),
    }
}

/// Limit of `(1 - r) sum a_n (r p)^n` as `r -> 1`, from precomputed `a_1, a_2, ...`.
/// Cesaro mode averages `a_n p^n` at three lengths; Abel mode samples `r = 1 - 2^-j`.
/// Both apply one Richardson step assuming a first-order error.
pub fn radial_limit(stream: &[f64], p: Angle, mode: RadialMode) -> Result<RadialEstimate> {
    let need = stream_length(mode) as usize;
    if stream.len() < need {
        return Err(Error::Invalid(format!("stream needs {need} terms, got {}", stream.len())));
    }
    let term = |n: u64| -> Complex64 {
        let ph = 2.0 * PI * p.frac_mul(n);
        Complex64::new(ph.cos(), ph.sin()) * stream[(n - 1) as usize]
    };
    let vals: Vec<Complex64> = match mode {
        RadialMode::Cesaro => CESARO_N
            .iter()
            .map(|&n| chunked_sum(n, |k| term(k)) / n as f64)
            .collect(),
        RadialMode::Abel => ABEL_J
            .map(|j| {
                let h = 2f64.powi(-j);
                let lr = (-h).ln_1p();
                let s = chunked_sum(abel_terms(j), |k| term(k) * (k as f64 * lr).exp());
                s * h
            })
            .collect(),
    };
    let extra: Vec<Complex64> = vals.windows(2).map(|w| w[1] * 2.0 - w[0]).collect();
    let k = extra.len();
    Ok(RadialEstimate {
        mode,
        value: extra[k - 1],
        error: (extra[k - 1] - extra[k - 2]).norm(),
    })
}

fn chunked_sum<F: Fn(u64) -> Complex64 + Sync>(n: u64, f: F) -> Complex64 {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<ComplexSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s = ComplexSum::new();
            for k in c * CHUNK + 1..=((c + 1) * CHUNK).min(n) {
                s.add(f(k));
            }
            s
        })
        .collect();
    let mut t = ComplexSum::new();
    for p in &parts {
        t.merge(p);
    }
    t.value()
}

/// `log|Res(f, t^n - 1)| - n log M` from the roots; unimodular roots use extended-precision angles.
#[derive(Clone, Debug)]
pub struct CenteredTorsion {
    contracted: Vec<(Complex64, f64)>,
    circle: Vec<(Angle, f64)>,
}

impl CenteredTorsion {
    pub fn new(profile: &RootProfile) -> Self {
        let mut contracted = Vec::new();
        let mut circle = Vec::new();
        for r in &profile.roots {
            let w = r.multiplicity as f64;
            match r.class {
                RootClass::Zero => {}
                RootClass::InsideDisc => contracted.push((r.value, w)),
                RootClass::OutsideDisc => contracted.push((r.value.inv(), w)),
                RootClass::RootOfUnity { order, index } => {
                    let t = BigFloat::from_u64(index, 64).div(&BigFloat::from_u64(order, 64), POLISH_BITS, RM);
                    circle.push((Angle::from_hp(&t), w));
                }
                RootClass::Diophantine => {
                    let a = match &r.hp {
                        Some(h) => Angle::from_hp(&hp::turn_fraction_hp(h, POLISH_BITS)),
                        None => Angle::new(r.value.arg() / (2.0 * PI)),
                    };
                    circle.push((a, w));
                }
            }
        }
        CenteredTorsion { contracted, circle }
    }

    /// `None` when a root of unity makes the term infinite.
    pub fn term(&self, n: u64) -> Option<f64> {
        let mut s = KahanSum::new();
        for &(b, w) in &self.contracted {
            s.add(w * log_term(b, n)?);
        }
        for &(a, w) in &self.circle {
            s.add(w * log_chord(a.frac_mul(n))?);
        }
        Some(s.value())
    }

    /// `a_1 .. a_len`, with infinite terms replaced by 0.
    pub fn stream(&self, len: u64) -> Vec<f64> {
        (1..=len)
            .into_par_iter()
            .map(|n| self.term(n).unwrap_or(0.0))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dependence {
    /// `(c_0, c_1, ..., c_k, c_target)` with `c_0 + sum c_i angle_i + c_target target = 0`.
    Relation(Vec<BigInt>),
    IndependentAtPrecision,
}

/// Integer relation search on `(1, angles.., target)` by LLL on `[I | round(2^bits x)]`.
/// A candidate is accepted only if it involves the target and its residual, recomputed at
/// higher precision, is below `10^(-bits/4)`.
pub fn multiplicative_dependence(angles: &[BigFloat], target: &BigFloat, bits: usize) -> Result<Dependence> {
    if bits < 16 {
        return Err(Error::Invalid("precision_bits must be at least 16".into()));
    }
    let wp = bits + 64;
    let mut xs: Vec<BigFloat> = vec![BigFloat::from_u64(1, 64)];
    xs.extend(angles.iter().cloned());
    xs.push(target.clone());
    let d = xs.len();
    let basis: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            let mut row = vec![BigInt::zero(); d + 1];
            row[i] = BigInt::one();
            row[d] = hp::to_scaled_bigint(&xs[i], bits);
            row
        })
        .collect();
    let reduced = lll(basis);
    let threshold = (-(bits as f64) / 4.0) * 10f64.ln();
    let mut best: Option<(f64, Vec<BigInt>)> = None;
    for row in reduced {
        let mut c: Vec<BigInt> = row[..d].to_vec();
        if c[d - 1].is_zero() {
            continue;
        }
        let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g > BigInt::one() {
            c.iter_mut().for_each(|x| *x = &*x / &g);
        }
        if c[d - 1].is_negative() {
            c.iter_mut().for_each(|x| *x = -&*x);
        }
        let mut acc = BigFloat::from_u64(0, 64);
        for (ci, xi) in c.iter().zip(&xs) {
            acc = acc.add(&hp::from_bigint(ci, wp).mul(xi, wp, RM), wp, RM);
        }
        let res = if acc.is_zero() { f64::NEG_INFINITY } else { ln_abs(&acc) };
        if res <= threshold && best.as_ref().is_none_or(|(r, _)| res < *r) {
            best = Some((res, c));
        }
    }
    Ok(match best {
        Some((_, c)) => Dependence::Relation(c),
        None => Dependence::IndependentAtPrecision,
    })
}

fn ln_abs(x: &BigFloat) -> f64 {
    let e = x.exponent().unwrap_or(0) as f64;
    let m = hp::to_f64(x).abs() * 2f64.powf(-e);
    m.ln() + e * 2f64.ln()
}

/// Textbook LLL (`delta = 3/4`) in exact rational arithmetic.
pub fn lll(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n == 0 {
        return b;
    }
    let gso = |b: &Vec<Vec<BigInt>>| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let n = b.len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut norms = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            for j in 0..i {
                let num: BigRational = b[i]
                    .iter()
                    .zip(&bstar[j])
                    .map(|(a, s)| s * BigRational::from_integer(a.clone()))
                    .sum();
                let m = if norms[j] == BigRational::zero() {
                    BigRational::zero()
                } else {
                    num / &norms[j]
                };
                for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                    *vk -= &m * sk;
                }
                mu[i][j] = m;
            }
            let nn: BigRational = v.iter().map(|x| x * x).sum();
            norms.push(nn);
            bstar.push(v);
        }
        (mu, norms)
    };
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let (mut mu, mut norms) = gso(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = mu[k][j].round().to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = BigRational::from_integer(q);
                for l in 0..j {
                    let t = &qr * &mu[j][l];
                    mu[k][l] -= t;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let g = gso(&b);
            mu = g.0;
            norms = g.1;
            k = k.max(2) - 1;
        }
    }
    b
}
