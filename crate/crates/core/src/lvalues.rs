//! Dirichlet characters, discrete Fourier analysis on `Z/m`, and `L(1, f)` for periodic `f`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::{ComplexSum, KahanSum};
use crate::torsion::richardson;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
fn order_mod(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

/// A cyclic factor of `(Z/m)^x`: generator (lifted to `Z/m`) and its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicFactor {
    pub generator: u64,
    pub order: u64,
}

/// Characters of `(Z/m)^x` as exponent vectors on a fixed cyclic decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    pub modulus: u64,
    pub factors: Vec<CyclicFactor>,
    /// `exponents[c][i]`: character `c` sends generator `i` to `e^{2 pi i e / order_i}`.
    pub exponents: Vec<Vec<u64>>,
    pub principal_index: usize,
    /// Discrete logs of every residue on the generators; `None` off the unit group.
    logs: Vec<Option<Vec<u64>>>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `chi_c(a)` as an exact fraction of a full turn `(k, n)`, or `None` when `gcd(a, m) > 1`.
    pub fn turn(&self, c: usize, a: i64) -> Option<(u64, u64)> {
        let m = self.modulus;
        let r = a.rem_euclid(m as i64) as u64;
        let logs = self.logs[r as usize].as_ref()?;
        let n = self.factors.iter().fold(1u64, |l, f| l.lcm(&f.order));
        let mut k = 0u64;
        for ((f, e), l) in self.factors.iter().zip(&self.exponents[c]).zip(logs) {
            k = (k + e * l % f.order * (n / f.order)) % n;
        }
        Some((k, n))
    }

    pub fn value(&self, c: usize, a: i64) -> Complex64 {
        match self.turn(c, a) {
            Some((k, n)) => {
                let t = 2.0 * PI * k as f64 / n as f64;
                Complex64::new(t.cos(), t.sin())
            }
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_real(&self, c: usize) -> bool {
        (0..self.modulus as i64).all(|a| match self.turn(c, a) {
            Some((k, n)) => 2 * k % n == 0,
            None => true,
        })
    }

    pub fn periodic_fn(&self, c: usize) -> PeriodicFn {
        PeriodicFn::from_values((0..self.modulus as i64).map(|a| self.value(c, a)).collect())
    }
}

/// Cyclic decomposition of `(Z/m)^x` through the Chinese remainder theorem, then all characters.
pub fn characters(m: u64) -> Result<CharacterTable> {
    if m == 0 || m > 1_000_000 {
        return Err(Error::Invalid(format!("modulus {m} out of range")));
    }
    let mut factors = Vec::new();
    for (p, k) in factor(m) {
        let q = p.pow(k);
        let rest = m / q;
        // lift x mod q to the residue that is 1 modulo the other prime powers
        let lift = |x: u64| -> u64 {
            if rest == 1 {
                return x % m;
            }
            let inv = modpow(rest % q, euler_phi_small(q) - 1, q);
            let t = (x + q - 1) % q * inv % q;
            (1 + rest * t) % m
        };
        if p == 2 {
            if k == 2 {
                factors.push(CyclicFactor { generator: lift(3), order: 2 });
            } else if k >= 3 {
                factors.push(CyclicFactor { generator: lift(q - 1), order: 2 });
                factors.push(CyclicFactor { generator: lift(5), order: q / 4 });
            }
        } else {
            let phi = q / p * (p - 1);
            let g = (2..q)
                .find(|&g| g % p != 0 && order_mod(g, q) == phi)
                .expect("odd prime powers have primitive roots");
            factors.push(CyclicFactor { generator: lift(g), order: phi });
        }
    }
    // discrete logs by walking the product of the cyclic factors
    let mut logs: Vec<Option<Vec<u64>>> = vec![None; m as usize];
    let total: u64 = factors.iter().map(|f| f.order).product();
    for idx in 0..total {
        let mut rem = idx;
        let mut e = Vec::with_capacity(factors.len());
        let mut a = 1 % m;
        for f in &factors {
            let ei = rem % f.order;
            rem /= f.order;
            a = a * modpow(f.generator, ei, m) % m;
            e.push(ei);
        }
        logs[a as usize] = Some(e);
    }
    if m == 1 {
        logs[0] = Some(Vec::new());
    }
    let mut exponents = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut rem = idx;
        exponents.push(
            factors
                .iter()
                .map(|f| {
                    let e = rem % f.order;
                    rem /= f.order;
                    e
                })
                .collect(),
        );
    }
    Ok(CharacterTable {
        modulus: m,
        factors,
        exponents,
        principal_index: 0,
        logs,
    })
}

fn euler_phi_small(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// A function on `Z/m` together with its transform `f^(n) = (1/m) sum f(l) e^{-2 pi i l n/m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicFn {
    pub modulus: u64,
    pub values: Vec<Complex64>,
    pub fourier: Vec<Complex64>,
}

fn twiddle(k: u64, m: u64) -> Complex64 {
    let t = 2.0 * PI * (k % m) as f64 / m as f64;
    Complex64::new(t.cos(), t.sin())
}

impl PeriodicFn {
    pub fn from_values(values: Vec<Complex64>) -> Self {
        let m = values.len() as u64;
        let fourier = (0..m)
            .map(|n| {
                let mut s = ComplexSum::new();
                for (l, v) in values.iter().enumerate() {
                    s.add(v * twiddle(m - (l as u64 * n) % m, m));
                }
                s.value() / m as f64
            })
            .collect();
        PeriodicFn {
            modulus: m,
            values,
            fourier,
        }
    }

    pub fn from_fourier(fourier: Vec<Complex64>) -> Self {
        let m = fourier.len() as u64;
        let values = (0..m)
            .map(|l| {
                let mut s = ComplexSum::new();
                for (n, c) in fourier.iter().enumerate() {
                    s.add(c * twiddle(l * n as u64, m));
                }
                s.value()
            })
            .collect();
        PeriodicFn {
            modulus: m,
            values,
            fourier,
        }
    }

    pub fn conj(&self) -> Self {
        PeriodicFn::from_values(self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::Invalid("moduli differ".into()));
        }
        Ok(PeriodicFn::from_values(
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        ))
    }

    /// `f(n)` for any integer `n`.
    pub fn at(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }
}

/// Principal `log(1 - e^{2 pi i l/m})` for `0 < l < m`.
pub fn log_one_minus_unit(l: u64, m: u64) -> Complex64 {
    let phi = 2.0 * PI * (l % m) as f64 / m as f64;
    Complex64::new((2.0 * (phi / 2.0).sin()).ln(), (phi - PI) / 2.0)
}

/// `L(1, f) = sum_{n>=1} f(n)/n = -sum_{l=1}^{m-1} f^(l) log(1 - e^{2 pi i l/m})` for mean-zero `f`.
pub fn l_one_periodic(f: &PeriodicFn) -> Result<Complex64> {
    if f.fourier[0].norm() >= 1e-12 {
        return Err(Error::NonzeroMean);
    }
    let m = f.modulus;
    let mut s = ComplexSum::new();
    for l in 1..m {
        s.add(-f.fourier[l as usize] * log_one_minus_unit(l, m));
    }
    Ok(s.value())
}

/// The Dirichlet series itself: partial sums over `K m` terms for `K = 2^10 .. 2^16`,
/// Richardson-extrapolated in `1/K`.
pub fn l_one_series(f: &PeriodicFn) -> Result<Complex64> {
    if f.fourier[0].norm() >= 1e-12 {
        return Err(Error::NonzeroMean);
    }
    let m = f.modulus;
    let mut s = ComplexSum::new();
    let mut samples = Vec::new();
    let mut n = 1u64;
    for j in 10..=16 {
        let upto = (1u64 << j) * m;
        while n <= upto {
            s.add(f.at(n as i64) / n as f64);
            n += 1;
        }
        samples.push(s.value());
    }
    Ok(richardson(&samples))
}

/// `log|1 - e^{2 pi i l/m}|` as `-(1/2) L(1, f + conj f)` where `f^ = delta_l`.
pub fn log_abs_from_lvalues(m: u64, l: u64) -> Result<f64> {
    if m < 2 || l == 0 || l >= m {
        return Err(Error::Invalid(format!("need 0 < l < m, got l={l}, m={m}")));
    }
    let mut hat = vec![Complex64::new(0.0, 0.0); m as usize];
    hat[l as usize] = Complex64::new(1.0, 0.0);
    let f = PeriodicFn::from_fourier(hat);
    let g = f.add(&f.conj())?;
    Ok(-0.5 * l_one_periodic(&g)?.re)
}

/// `psi(x) + gamma`: recurrence into (0, 1], then `-1/z + sum_{r<=10^6} z/(r(r+z))` with an
/// Euler-Maclaurin tail.
pub fn psi_plus_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || (x <= 0.0 && x.fract() == 0.0) {
        return Err(Error::PoleOfGamma);
    }
    let mut shift = KahanSum::new();
    let mut z = x;
    while z > 1.0 {
        z -= 1.0;
        shift.add(1.0 / z);
    }
    while z <= 0.0 {
        shift.add(-1.0 / z);
        z += 1.0;
    }
    const N: u64 = 1_000_000;
    let mut s = KahanSum::new();
    s.add(-1.0 / z);
    for r in 1..=N {
        let rf = r as f64;
        s.add(z / (rf * (rf + z)));
    }
    let n = N as f64;
    // k-th derivative of 1/r - 1/(r+z) at r = N
    let d = |k: i32| -> f64 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        sign * fact * (n.powi(-(k + 1)) - (n + z).powi(-(k + 1)))
    };
    s.add((z / n).ln_1p() - d(0) / 2.0 - d(1) / 12.0 + d(3) / 720.0);
    s.merge(&shift);
    Ok(s.value())
}

pub fn digamma(x: f64) -> Result<f64> {
    Ok(psi_plus_gamma(x)? - EULER_GAMMA)
}

/// `psi(u/v) + gamma`.
pub fn digamma_rational(u: i64, v: u64) -> Result<f64> {
    if v == 0 {
        return Err(Error::Invalid("zero denominator".into()));
    }
    if u <= 0 && u % v as i64 == 0 {
        return Err(Error::PoleOfGamma);
    }
    psi_plus_gamma(u as f64 / v as f64)
}

/// `sum_{r<=n} 1/((r+z) r)`, the partial sums of `((psi(z) + gamma) + 1/z)/z`.
pub fn psi_series_partial(z: f64, n: u64) -> f64 {
    let mut s = KahanSum::new();
    for r in 1..=n {
        let rf = r as f64;
        s.add(1.0 / ((rf + z) * rf));
    }
    s.value()
}
