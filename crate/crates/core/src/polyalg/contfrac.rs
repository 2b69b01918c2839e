use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Partial quotients `a_1, a_2, ...` of a number in (0,1) and its convergents `p_n/q_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigInt>,
    pub convergents: Vec<(BigInt, BigInt)>,
    /// The expansion ended exactly (rational input).
    pub terminated: bool,
}

impl ContinuedFraction {
    fn from_quotients(quotients: Vec<BigInt>, terminated: bool) -> Self {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
        let mut convergents = Vec::with_capacity(quotients.len());
        for a in &quotients {
            let p2 = a * &p1 + &p0;
            let q2 = a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
            convergents.push((p1.clone(), q1.clone()));
        }
        ContinuedFraction {
            quotients,
            convergents,
            terminated,
        }
    }
}

/// Expansion of `p/q` in (0,1); terminates exactly.
pub fn continued_fraction_rational(p: &BigInt, q: &BigInt, n: usize) -> Result<ContinuedFraction> {
    if q.is_zero() {
        return Err(Error::Invalid("zero denominator".into()));
    }
    let r = BigRational::new(p.clone(), q.clone());
    if !r.is_positive() || r >= BigRational::one() {
        return Err(Error::Invalid("fraction must lie in (0,1)".into()));
    }
    let (mut a, mut b) = (q.abs(), p.abs());
    let mut out = Vec::new();
    while !b.is_zero() && out.len() < n {
        let (d, r) = a.div_rem(&b);
        out.push(d);
        a = b;
        b = r;
    }
    let done = b.is_zero();
    Ok(ContinuedFraction::from_quotients(out, done))
}

/// Expansion of an unknown number known only to lie in `[lo, hi]`. Only quotients shared by
/// every point of the interval are emitted; fewer than `n` gives `PrecisionExhausted`.
pub fn continued_fraction_interval(lo: &BigRational, hi: &BigRational, n: usize) -> Result<ContinuedFraction> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if lo > hi || *lo <= zero || *hi >= one {
        return Err(Error::Invalid("interval must lie inside (0,1)".into()));
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let mut out = Vec::new();
    while out.len() < n {
        if lo.is_zero() {
            if hi.is_zero() {
                return Ok(ContinuedFraction::from_quotients(out, true));
            }
            return Err(Error::PrecisionExhausted(out.len()));
        }
        let inv_lo = lo.recip();
        let inv_hi = hi.recip();
        let a_small = inv_hi.floor();
        let a_big = inv_lo.floor();
        if a_small != a_big {
            return Err(Error::PrecisionExhausted(out.len()));
        }
        let a = a_small.to_integer();
        let new_lo = inv_hi - &a_small;
        let new_hi = inv_lo - &a_big;
        out.push(a);
        lo = new_lo;
        hi = new_hi;
        if lo == hi && lo.is_zero() {
            return Ok(ContinuedFraction::from_quotients(out, true));
        }
    }
    Ok(ContinuedFraction::from_quotients(out, false))
}

/// Expansion of a double, treated as the half-ulp interval around it.
pub fn continued_fraction(theta: f64, n: usize) -> Result<ContinuedFraction> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Invalid("theta must lie in (0,1)".into()));
    }
    let x = BigRational::from_float(theta).expect("finite");
    let half_ulp = BigRational::from_float(f64::EPSILON * theta).expect("finite")
        / BigInt::from(2);
    let lo = &x - &half_ulp;
    let hi = &x + &half_ulp;
    continued_fraction_interval(&lo, &hi, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxVerdict {
    /// Every computed quotient is below the bound. Evidence about the prefix only.
    BoundedByPrefix,
    /// 1-based index of the first quotient reaching the bound.
    ExceedsBound(usize),
}

/// Checks `a_n < bound` over the computed prefix.
pub fn badly_approximable_witness(cf: &ContinuedFraction, bound: u64) -> ApproxVerdict {
    let b = BigInt::from(bound);
    match cf.quotients.iter().position(|a| *a >= b) {
        Some(i) => ApproxVerdict::ExceedsBound(i + 1),
        None => ApproxVerdict::BoundedByPrefix,
    }
}
