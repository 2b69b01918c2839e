//! The building block `R_x(z) = sum' log|1 - x^r| z^r`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::{ComplexSum, KahanSum};

/// Below this distance from 1 a numeric `x^r` counts as equal to 1 and the term is omitted.
pub const NUMERIC_SKIP: f64 = 1e-13;
pub const POLE_TOL: f64 = 1e-12;

/// The parameter of `R_x`: either a plain complex number or an exactly known root of unity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RxParam {
    Numeric(Complex64),
    RootOfUnity { order: u64, index: u64 },
}

impl RxParam {
    pub fn value(&self) -> Complex64 {
        match *self {
            RxParam::Numeric(x) => x,
            RxParam::RootOfUnity { order, index } => unit(index, order),
        }
    }

    pub fn conj(&self) -> RxParam {
        match *self {
            RxParam::Numeric(x) => RxParam::Numeric(x.conj()),
            RxParam::RootOfUnity { order, index } => RxParam::RootOfUnity {
                order,
                index: (order - index % order) % order,
            },
        }
    }
}

impl From<Complex64> for RxParam {
    fn from(x: Complex64) -> Self {
        RxParam::Numeric(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalResult<T = Complex64> {
    pub value: T,
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl EvalResult {
    pub fn exact(value: Complex64) -> Self {
        EvalResult {
            value,
            tail_bound: 0.0,
            terms_used: 0,
        }
    }
}

pub(crate) fn unit(index: u64, order: u64) -> Complex64 {
    let t = 2.0 * PI * (index % order) as f64 / order as f64;
    Complex64::new(t.cos(), t.sin())
}

/// `log|1 - e^{2 pi i j/m}|` computed as `log(2 |sin(pi j/m)|)`; `-inf` when `m | j`.
pub fn log_abs_one_minus_unit(j: u64, m: u64) -> f64 {
    let j = j % m;
    if j == 0 {
        return f64::NEG_INFINITY;
    }
    let j = j.min(m - j);
    (2.0 * (PI * j as f64 / m as f64).sin()).ln()
}

/// `log|1 - y|` without cancellation for small `|y|`.
pub fn log_abs_one_minus(y: Complex64) -> f64 {
    let a = y.norm();
    if a < 0.5 {
        0.5 * (-2.0 * y.re + a * a).ln_1p()
    } else {
        (Complex64::new(1.0, 0.0) - y).norm().ln()
    }
}

/// `log|1 - x^r|` for a numeric `x`, stable for large `r` on either side of the circle.
/// `None` encodes the omitted term `x^r = 1`.
pub fn log_term(x: Complex64, r: u64) -> Option<f64> {
    if x == Complex64::new(1.0, 0.0) {
        return None;
    }
    let lm = x.norm().ln();
    let arg = x.arg();
    let rf = r as f64;
    if lm > 0.0 {
        let y = Complex64::from_polar((-rf * lm).exp(), -rf * arg);
        return Some(rf * lm + log_abs_one_minus(y));
    }
    let y = Complex64::from_polar((rf * lm).exp(), rf * arg);
    if (y - 1.0).norm() < NUMERIC_SKIP {
        return None;
    }
    Some(log_abs_one_minus(y))
}

/// The coefficient `log|1 - x^r|` (0 for an omitted term).
pub fn coefficient(x: RxParam, r: u64) -> f64 {
    match x {
        RxParam::RootOfUnity { order, index } => {
            let j = (r % order) * (index % order) % order;
            if j == 0 {
                0.0
            } else {
                log_abs_one_minus_unit(j, order)
            }
        }
        RxParam::Numeric(x) => log_term(x, r).unwrap_or(0.0),
    }
}

/// Partial sum without any tail estimate; valid for every `z`.
pub fn partial_sum(x: RxParam, z: Complex64, n: usize) -> Complex64 {
    let mut s = ComplexSum::new();
    let mut zr = Complex64::new(1.0, 0.0);
    for r in 1..=n as u64 {
        zr *= z;
        let c = coefficient(x, r);
        if c != 0.0 {
            s.add(zr * c);
        }
    }
    s.value()
}

fn sum_log_r_tail(n: usize, rho: f64) -> f64 {
    let n1 = (n + 1) as f64;
    n1.ln() * rho.powf(n1) / (1.0 - rho) + rho.powf(n1 + 1.0) / (n1 * (1.0 - rho).powi(2))
}

/// Truncated series with a bound on the omitted tail. Requires `|z| < 1`.
pub fn rx_series(x: RxParam, z: Complex64, n: usize) -> Result<EvalResult> {
    let xv = x.value();
    if xv == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroInput);
    }
    let rho = z.norm();
    if rho >= 1.0 {
        return Err(Error::Invalid("series evaluation needs |z| < 1".into()));
    }
    let value = partial_sum(x, z, n);
    let nf = n as f64;
    let tail_bound = match x {
        RxParam::RootOfUnity { order, .. } => {
            let bmax = (1..order)
                .map(|j| log_abs_one_minus_unit(j, order).abs())
                .fold(0.0, f64::max);
            bmax * rho.powf(nf + 1.0) / (1.0 - rho)
        }
        RxParam::Numeric(x) => {
            let a = x.norm();
            if a < 1.0 {
                // |log|1-y|| <= |y|/(1-|y|)
                let q = a * rho;
                q.powf(nf + 1.0) / ((1.0 - q) * (1.0 - a.powf(nf + 1.0)))
            } else if a > 1.0 {
                // |log|1-x^r|| <= r log|x| + log 2 once |x|^r >= 2
                let l = a.ln();
                let n1 = nf + 1.0;
                let geo = rho.powf(n1) / (1.0 - rho);
                let lin = rho.powf(n1) * (n1 - nf * rho) / (1.0 - rho).powi(2);
                let start = (2f64.ln() / l).ceil();
                if n1 >= start {
                    std::f64::consts::LN_2 * geo + l * lin
                } else {
                    f64::INFINITY
                }
            } else {
                // unimodular: growth C log r with C estimated from the computed terms
                let c = (2..=n.max(2) as u64)
                    .map(|r| coefficient(RxParam::Numeric(x), r).abs() / (r as f64).ln())
                    .fold(0.0, f64::max);
                2.0 * c.max(1.0) * sum_log_r_tail(n, rho)
            }
        }
    };
    Ok(EvalResult {
        value,
        tail_bound,
        terms_used: n,
    })
}

/// `R_zeta(z) = sum_{l=1}^{m-1} log|1 - zeta^l| z^l / (1 - z^m)` for `zeta = e^{2 pi i k/m}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalFormRx {
    pub order: u64,
    pub index: u64,
    /// `numerator[l-1] = log|1 - zeta^l|`, `l = 1..m-1`.
    pub numerator: Vec<f64>,
}

impl RationalFormRx {
    pub fn new(order: u64, index: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("order must be positive".into()));
        }
        if order > 1 && index.gcd(&order) != 1 {
            return Err(Error::Invalid(format!(
                "exponent {} is not coprime to the order {}",
                index, order
            )));
        }
        let numerator = (1..order)
            .map(|l| log_abs_one_minus_unit(l * index % order, order))
            .collect();
        Ok(RationalFormRx {
            order,
            index,
            numerator,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.order == 1 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let zm = z.powu(self.order as u32);
        if (zm - 1.0).norm() < POLE_TOL {
            return Err(Error::PoleHit {
                location: z,
                generator: Some(unit(self.index, self.order)),
                exponent: None,
            });
        }
        let mut s = ComplexSum::new();
        let mut zl = Complex64::new(1.0, 0.0);
        for &c in &self.numerator {
            zl *= z;
            s.add(zl * c);
        }
        Ok(s.value() / (Complex64::new(1.0, 0.0) - zm))
    }

    /// Residue at a pole `p` with `p^m = 1`.
    pub fn residue(&self, p: Complex64) -> Complex64 {
        if self.order == 1 {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.order as f64;
        let mut s = ComplexSum::new();
        let mut pl = Complex64::new(1.0, 0.0);
        for &c in &self.numerator {
            pl *= p;
            s.add(pl * c);
        }
        -s.value() * p / m
    }

    /// First coefficients of the power series, from the rational form.
    pub fn series_coefficients(&self, n: usize) -> Vec<f64> {
        let m = self.order as usize;
        (1..=n)
            .map(|r| {
                if m == 1 || r % m == 0 {
                    0.0
                } else {
                    self.numerator[r % m - 1]
                }
            })
            .collect()
    }
}

pub fn rx_root_of_unity(m: u64, k: u64, z: Complex64) -> Result<EvalResult> {
    let form = RationalFormRx::new(m, k)?;
    Ok(EvalResult::exact(form.eval(z)?))
}

/// Residue and constant term at `z = 1` of `R_zeta` for `zeta = e^{2 pi i k/m}`, `m >= 2`.
pub fn rx_laurent_at_one_root_of_unity(m: u64, k: u64) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(Error::Invalid("R_1 is the zero function and has no pole".into()));
    }
    let form = RationalFormRx::new(m, k)?;
    let mf = m as f64;
    let residue = (1.0 / mf).ln() / mf;
    let weighted: f64 = crate::sum::sum_f64(
        form.numerator
            .iter()
            .enumerate()
            .map(|(i, c)| (i + 1) as f64 * c),
    );
    let constant = -((mf - 1.0) / 2.0) * residue - weighted / mf;
    Ok((residue, constant))
}

/// `R_x = R_{1/x} + log|x| z/(z-1)^2` for `|x| > 1`.
pub fn rx_invert_decompose(x: Complex64) -> Result<(Complex64, f64)> {
    if x.norm() <= 1.0 {
        return Err(Error::Invalid("inversion needs |x| > 1".into()));
    }
    Ok((x.inv(), x.norm().ln()))
}

/// `log|F(x)| = -sum_{n>=1} log|1 - x^n|`, with `F` the partition generating function.
pub fn log_abs_partition(x: Complex64) -> Result<EvalResult<f64>> {
    let a = x.norm();
    if a >= 1.0 {
        return Err(Error::Invalid("needs |x| < 1".into()));
    }
    if a == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            tail_bound: 0.0,
            terms_used: 0,
        });
    }
    let mut s = KahanSum::new();
    let mut n = 0u64;
    loop {
        n += 1;
        s.add(-log_term(x, n).unwrap_or(0.0));
        let tail = a.powf(n as f64 + 1.0) / ((1.0 - a) * (1.0 - a.powf(n as f64 + 1.0)));
        if tail < 1e-17 * s.value().abs().max(1e-300) || tail < 1e-300 || n > 1_000_000 {
            return Ok(EvalResult {
                value: s.value(),
                tail_bound: tail,
                terms_used: n as usize,
            });
        }
    }
}

fn binom(r: u64, k: u64) -> f64 {
    if k > r {
        return 0.0;
    }
    let mut b = 1.0;
    for i in 0..k {
        b = b * (r - i) as f64 / (i + 1) as f64;
    }
    b
}

/// Taylor coefficients of `R_x` at `z = 1` for `|x| < 1`: `c_0 = -log|F(x)|` and
/// `c_{l+1} = sum_r log|x^r - 1| binom(r, l+1)`.
pub fn rx_expansion_at_one(x: Complex64, l_max: usize) -> Result<Vec<EvalResult<f64>>> {
    let a = x.norm();
    if a >= 1.0 {
        return Err(Error::Invalid("needs |x| < 1".into()));
    }
    let c0 = log_abs_partition(x)?;
    let mut out = vec![EvalResult {
        value: -c0.value,
        tail_bound: c0.tail_bound,
        terms_used: c0.terms_used,
    }];
    if a == 0.0 {
        out.extend((0..l_max).map(|_| EvalResult {
            value: 0.0,
            tail_bound: 0.0,
            terms_used: 0,
        }));
        return Ok(out);
    }
    for l in 1..=l_max as u64 {
        let mut s = KahanSum::new();
        let mut r = 0u64;
        loop {
            r += 1;
            let c = log_term(x, r).unwrap_or(0.0);
            s.add(c * binom(r, l));
            // term bound |x|^r binom(r,l)/(1-|x|); the ratio of successive bounds
            // decreases to |x|, so the tail is dominated by a geometric series
            let next = (r + 1) as f64;
            let t_next = a.powf(next) * binom(r + 1, l) / (1.0 - a);
            let q = a * next / (next - l as f64).max(1.0);
            if r > l && q < 1.0 {
                let tail = t_next / (1.0 - q);
                if tail < 1e-16 * s.value().abs().max(1e-300) || tail < 1e-300 || r > 100_000 {
                    out.push(EvalResult {
                        value: s.value(),
                        tail_bound: tail,
                        terms_used: r as usize,
                    });
                    break;
                }
            }
        }
    }
    Ok(out)
}
