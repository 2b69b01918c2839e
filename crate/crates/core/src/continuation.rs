//! Meromorphic continuation of `R_x` beyond the unit disc.
//!
//! For `0 < |x| < 1`, with `w = -Log z`,
//! `R_x(z) = (Q_x(w) + Q_{conj x}(w)) / 2` where
//! `Q_x(w) = log(1-x) e^{-w} / 2 + A(w) + i (M+(w) - M-(w)) + T+(w) - T-(w)`.
//! `A` carries the poles on the real lattice `Z_{>=1} log x`, `T+-` those shifted by
//! `+-2 pi i Z_{>=1}`, and `M+-` are entire.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::EPS_CIRCLE;
use crate::quad;
use crate::rxcore::{rx_invert_decompose, rx_root_of_unity, EvalResult, RxParam, POLE_TOL};
use crate::sum::ComplexSum;

/// Global truncation controls shared by every series evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub tail_tol: f64,
    pub max_terms: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tail_tol: 1e-10,
            max_terms: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuationParams {
    pub k: f64,
    pub tail_tol: f64,
    pub max_terms: usize,
    /// `Log z` is always the principal branch; the continuation does not depend on it.
    pub principal_log: bool,
}

impl ContinuationParams {
    pub fn new(k: f64, settings: &Settings) -> Self {
        ContinuationParams {
            k,
            tail_tol: settings.tail_tol,
            max_terms: settings.max_terms,
            principal_log: true,
        }
    }

    pub fn for_x(x: Complex64, settings: &Settings) -> Result<Self> {
        Ok(Self::new(choose_k(x)?, settings))
    }
}

impl Default for ContinuationParams {
    fn default() -> Self {
        Self::new(1.0, &Settings::default())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Height of the Abel-Plana box: admissible for `x` and `conj x` simultaneously.
pub fn choose_k(x: Complex64) -> Result<f64> {
    let a = x.norm();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Invalid("needs 0 < |x| < 1".into()));
    }
    let arg = x.arg();
    if arg == 0.0 {
        Ok(1.0)
    } else {
        Ok(0.5 * (-a.ln()) / arg.abs())
    }
}

fn check_k(x: Complex64, k: f64) -> Result<()> {
    let q = x.norm() * (k * x.arg().abs()).exp();
    if !(k > 0.0) || q >= 1.0 {
        return Err(Error::Invalid(format!("K = {} is not admissible for x = {}", k, x)));
    }
    Ok(())
}

fn check_x(x: Complex64) -> Result<()> {
    let a = x.norm();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Invalid("needs 0 < |x| < 1".into()));
    }
    Ok(())
}

/// `A(w) = sum_{n>=1} (1/n) e^{n log x - w} / (n log x - w)`.
pub fn a_tilde(x: Complex64, w: Complex64, params: &ContinuationParams) -> Result<EvalResult> {
    check_x(x)?;
    let lx = x.ln();
    let a = x.norm();
    let llx = lx.norm();
    let ew = (-w.re).exp();
    let mut s = ComplexSum::new();
    let mut n = 0usize;
    loop {
        n += 1;
        let d = lx * n as f64 - w;
        if d.norm() < POLE_TOL {
            return Err(Error::pole(w));
        }
        s.add(d.exp() / (d * n as f64));
        let n1 = (n + 1) as f64;
        let gap = n1 * llx - w.norm();
        if gap > 0.0 {
            let bound = ew * a.powf(n1) / ((1.0 - a) * n1 * gap);
            if bound < params.tail_tol * 1e-3 || n >= params.max_terms {
                return Ok(EvalResult {
                    value: s.value(),
                    tail_bound: bound,
                    terms_used: n,
                });
            }
        } else if n >= params.max_terms {
            return Ok(EvalResult {
                value: s.value(),
                tail_bound: f64::INFINITY,
                terms_used: n,
            });
        }
    }
}

/// `(e^{u} - 1)/u`, smooth through `u = 0`.
fn expm1_over(u: Complex64) -> Complex64 {
    if u.norm() < 0.1 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut s = term;
        for k in 2..20 {
            term = term * u / k as f64;
            s += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        s
    } else {
        (u.exp() - 1.0) / u
    }
}

/// Sum over `n > n0` of `f(n)` for `f(t) = (1/2 pi) (1/(t-b) - 1/t)`, by Euler-Maclaurin.
fn rational_tail(b: Complex64, n0: f64) -> Complex64 {
    let c = 1.0 / (2.0 * PI);
    let t = Complex64::new(n0, 0.0);
    let deriv = |k: u32| -> Complex64 {
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        ((t - b).powu(k + 1).inv() - t.powu(k + 1).inv()) * (c * sgn * fact)
    };
    let integral = (t / (t - b)).ln() * c;
    integral - deriv(0) * 0.5 - deriv(1) / 12.0 + deriv(3) / 720.0 - deriv(5) / 30240.0
}

/// The entire function `M+-(w)`, evaluated at the lower endpoint `0` of the box.
///
/// Its inner sum over `n` only converges after the counterterm `1/(2 pi n)` is removed;
/// the counterterm is the same for both signs, so `M+ - M-` is unaffected.
pub fn m_tilde(x: Complex64, side: Side, k: f64, w: Complex64, params: &ContinuationParams) -> Result<EvalResult> {
    check_x(x)?;
    check_k(x, k)?;
    let sg = side.sign();
    let lx = x.ln();
    let a = x.norm();
    let q = a * (-k * sg * x.arg()).exp();
    let ew = (-w.re).exp();
    let kim = (k * w.im.abs()).exp();
    let mut total = ComplexSum::new();
    let mut xm = Complex64::new(1.0, 0.0);
    let mut terms = 0usize;
    let mut m = 0usize;
    let bound_at = |m: usize| -> f64 {
        let mf = m as f64;
        let b = (mf * lx - w).norm() / (2.0 * PI);
        a.powf(mf) / mf * ew * (-k * sg * mf * x.arg()).exp().max(1.0) * (2.0 * k * kim + 1.0 + (1.0 + b).ln())
    };
    loop {
        m += 1;
        xm *= x;
        let beta = i() * (lx * m as f64 - w) * sg;
        let b = beta / (2.0 * PI);
        let nmax = (64.0f64).max((4.0 * b.norm()).ceil()) as usize + 1;
        let mut s = ComplexSum::new();
        for n in 1..=nmax {
            let c = beta - 2.0 * PI * n as f64;
            s.add(expm1_over(c * k) * k - 1.0 / (2.0 * PI * n as f64));
        }
        let mut n = nmax;
        loop {
            n += 1;
            let c = beta - 2.0 * PI * n as f64;
            let t = (c * k).exp() / c;
            s.add(t);
            if t.norm() < 1e-20 || n > nmax + 100_000 {
                break;
            }
        }
        s.add(rational_tail(b, nmax as f64));
        total.add(xm / m as f64 * s.value());
        terms += n;
        let tail = bound_at(m + 1) / (1.0 - q);
        if tail < params.tail_tol * 1e-3 || m >= params.max_terms {
            return Ok(EvalResult {
                value: -(-w).exp() * total.value(),
                tail_bound: tail,
                terms_used: terms,
            });
        }
    }
}

/// `T+-(w) = +-sum_{m,n>=1} (1/m) e^{g (1 +- iK)} / g` with `g = m log x - w +- 2 pi i n`.
pub fn t_tilde(x: Complex64, side: Side, k: f64, w: Complex64, params: &ContinuationParams) -> Result<EvalResult> {
    check_x(x)?;
    check_k(x, k)?;
    let sg = side.sign();
    let lx = x.ln();
    let a = x.norm();
    let q = a * (-k * sg * x.arg()).exp();
    let r = (-2.0 * PI * k).exp();
    let rot = Complex64::new(1.0, sg * k);
    let ew = (-w.re).exp();
    let mut total = ComplexSum::new();
    let mut terms = 0usize;
    let mut m = 0usize;
    let amp = |m: usize| -> f64 {
        let mf = m as f64;
        a.powf(mf) * ew * (-sg * k * (mf * x.arg() - w.im)).exp() / mf
    };
    loop {
        m += 1;
        let mf = m as f64;
        let base = lx * mf - w;
        let spread = (mf * x.arg() - w.im).abs();
        let mut n = 0usize;
        loop {
            n += 1;
            let g = base + i() * (sg * 2.0 * PI * n as f64);
            if g.norm() < POLE_TOL {
                return Err(Error::pole(w));
            }
            total.add((g * rot).exp() / (g * mf));
            let lower = (2.0 * PI * (n + 1) as f64 - spread).max(base.re.abs());
            if lower > 0.5 {
                let tail = amp(m) * r.powf((n + 1) as f64) / ((1.0 - r) * lower);
                if tail < params.tail_tol * 1e-4 {
                    break;
                }
            }
            if n >= params.max_terms {
                break;
            }
        }
        terms += n;
        let lower_m = ((mf + 1.0) * a.ln() - w.re).abs();
        if lower_m > 0.5 {
            let tail = amp(m + 1) * (r / (1.0 - r)) / ((1.0 - q) * lower_m);
            if tail < params.tail_tol * 1e-3 || m >= params.max_terms {
                return Ok(EvalResult {
                    value: total.value() * sg,
                    tail_bound: tail,
                    terms_used: terms,
                });
            }
        } else if m >= params.max_terms {
            return Ok(EvalResult {
                value: total.value() * sg,
                tail_bound: f64::INFINITY,
                terms_used: terms,
            });
        }
    }
}

/// The continuation of `Q_x(w) = sum_{n>=1} log(1 - x^n) e^{-wn}` to all non-pole `w`.
pub fn q_continuation(x: Complex64, w: Complex64, params: &ContinuationParams) -> Result<EvalResult> {
    check_x(x)?;
    let k = params.k;
    let a = a_tilde(x, w, params)?;
    let mp = m_tilde(x, Side::Plus, k, w, params)?;
    let mm = m_tilde(x, Side::Minus, k, w, params)?;
    let tp = t_tilde(x, Side::Plus, k, w, params)?;
    let tm = t_tilde(x, Side::Minus, k, w, params)?;
    let head = (Complex64::new(1.0, 0.0) - x).ln() * (-w).exp() * 0.5;
    let value = head + a.value + i() * (mp.value - mm.value) + tp.value - tm.value;
    Ok(EvalResult {
        value,
        tail_bound: a.tail_bound + mp.tail_bound + mm.tail_bound + tp.tail_bound + tm.tail_bound,
        terms_used: a.terms_used + mp.terms_used + mm.terms_used + tp.terms_used + tm.terms_used,
    })
}

/// Poles of `R_x` for `0 < |x| < 1` lie at `x^{-m}` and `conj(x)^{-m}`.
fn check_poles_inside(x: Complex64, z: Complex64) -> Result<()> {
    let targets = if x.im == 0.0 { vec![x] } else { vec![x, x.conj()] };
    for y in targets {
        let inv = y.inv();
        let mut p = inv;
        for m in 1.. {
            if p.norm() > z.norm() * (1.0 + 1e-6) + 1.0 {
                break;
            }
            if (z - p).norm() < POLE_TOL * p.norm().max(1.0) {
                return Err(Error::PoleHit {
                    location: p,
                    generator: Some(y),
                    exponent: Some(-(m as i64)),
                });
            }
            p *= inv;
        }
    }
    Ok(())
}

fn rx_small(x: Complex64, z: Complex64, params: &ContinuationParams) -> Result<EvalResult> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact(z));
    }
    check_poles_inside(x, z)?;
    let w = -z.ln();
    let q1 = q_continuation(x, w, params)?;
    let q2 = if x.im == 0.0 {
        q1
    } else {
        q_continuation(x.conj(), w, params)?
    };
    let mut value = (q1.value + q2.value) * 0.5;
    if x.im == 0.0 && z.im == 0.0 {
        value.im = 0.0;
    }
    Ok(EvalResult {
        value,
        tail_bound: 0.5 * (q1.tail_bound + q2.tail_bound),
        terms_used: q1.terms_used + q2.terms_used,
    })
}

/// `R_x(z)` at any `z` that is not a pole, with an explicit box height `k` for `|x| != 1`.
pub fn rx_continued_with_k(x: RxParam, z: Complex64, k: Option<f64>, settings: &Settings) -> Result<EvalResult> {
    let x = match x {
        RxParam::RootOfUnity { order, index } => return rx_root_of_unity(order, index, z),
        RxParam::Numeric(x) => x,
    };
    if x == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroInput);
    }
    if x == Complex64::new(1.0, 0.0) {
        return Ok(EvalResult::exact(Complex64::new(0.0, 0.0)));
    }
    let a = x.norm();
    if (a - 1.0).abs() <= EPS_CIRCLE {
        return Err(Error::NaturalBoundary { roots: vec![x] });
    }
    if a > 1.0 {
        let (xi, l) = rx_invert_decompose(x)?;
        if (z - 1.0).norm() < POLE_TOL {
            return Err(Error::PoleHit {
                location: z,
                generator: Some(x),
                exponent: Some(0),
            });
        }
        let params = ContinuationParams::new(k.map_or_else(|| choose_k(xi), Ok)?, settings);
        let inner = rx_small(xi, z, &params).map_err(|e| match e {
            Error::PoleHit {
                location,
                generator: Some(g),
                exponent: Some(e),
            } => Error::PoleHit {
                location,
                generator: Some(g.inv()),
                exponent: Some(-e),
            },
            other => other,
        })?;
        let zm1 = z - 1.0;
        return Ok(EvalResult {
            value: inner.value + z / (zm1 * zm1) * l,
            tail_bound: inner.tail_bound,
            terms_used: inner.terms_used,
        });
    }
    let params = ContinuationParams::new(k.map_or_else(|| choose_k(x), Ok)?, settings);
    rx_small(x, z, &params)
}

pub fn rx_continued(x: RxParam, z: Complex64, settings: &Settings) -> Result<EvalResult> {
    rx_continued_with_k(x, z, None, settings)
}

/// Both sides of the finite Abel-Plana identity for `h(s) = log(1 - x^s) e^{-ws}` on the box
/// `[a, b] x [-K, K]`; returns `|LHS - RHS|`.
pub fn abel_plana_check(x: Complex64, w: Complex64, a: u64, b: u64, k: f64) -> Result<f64> {
    check_x(x)?;
    if b <= a || a < 1 {
        return Err(Error::Invalid("needs 1 <= a < b".into()));
    }
    let lx = x.ln();
    let h = move |s: Complex64| -> Complex64 {
        (Complex64::new(1.0, 0.0) - (s * lx).exp()).ln() * (-w * s).exp()
    };
    let (af, bf) = (a as f64, b as f64);
    let tol = 1e-13;
    let lhs: Complex64 = (a..=b).map(|n| h(Complex64::new(n as f64, 0.0))).sum();
    let (body, _) = quad::integrate(|t| h(Complex64::new(t, 0.0)), af, bf, tol);
    let edge = |c: f64| -> Complex64 {
        let (v, _) = quad::integrate(
            |y| {
                let d = h(Complex64::new(c, y)) - h(Complex64::new(c, -y));
                d / (2.0 * PI * y).exp_m1()
            },
            0.0,
            k,
            tol,
        );
        i() * v
    };
    let (top, _) = quad::integrate(
        |t| {
            let s = Complex64::new(t, k);
            h(s) / (Complex64::new(1.0, 0.0) - (-i() * 2.0 * PI * s).exp())
        },
        af,
        bf,
        tol,
    );
    let (bottom, _) = quad::integrate(
        |t| {
            let s = Complex64::new(t, -k);
            h(s) / ((i() * 2.0 * PI * s).exp() - 1.0)
        },
        af,
        bf,
        tol,
    );
    let ha = h(Complex64::new(af, 0.0));
    let hb = h(Complex64::new(bf, 0.0));
    let rhs = (ha + hb) * 0.5 + body + edge(af) - edge(bf) - top + bottom;
    Ok((lhs - rhs).norm())
}
