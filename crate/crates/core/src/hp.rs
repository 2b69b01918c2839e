//! Thin layer over `astro_float` for the few places that need more than double precision.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_complex::Complex64;

pub const RM: RoundingMode = RoundingMode::ToEven;

pub fn consts() -> Consts {
    Consts::new().expect("astro-float constants cache")
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    let n = words.len();
    let top = words[n - 1] as f64;
    let next = if n >= 2 { words[n - 2] as f64 } else { 0.0 };
    let m = top + next / 18446744073709551616.0;
    let v = m * 2f64.powi(exp - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub fn from_bigint(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let full = 64 * (digits.len() + 1);
    let base = BigFloat::from_u64(u64::MAX, 64).add(&BigFloat::from_u64(1, 64), 128, RM);
    let mut acc = BigFloat::from_u64(0, full);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, full, RM).add(&BigFloat::from_u64(*d, 64), full, RM);
    }
    let mut out = acc;
    if sign == num_bigint::Sign::Minus {
        out = out.neg();
    }
    let _ = out.set_precision(p, RM);
    out
}

/// Natural logarithm of a positive integer, accurate to double precision for any size.
pub fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let (_, d) = n.to_u64_digits();
        let mut v = 0.0f64;
        for w in d.iter().rev() {
            v = v * 18446744073709551616.0 + *w as f64;
        }
        return v.abs().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    let (_, d) = top.to_u64_digits();
    let mut v = 0.0f64;
    for w in d.iter().rev() {
        v = v * 18446744073709551616.0 + *w as f64;
    }
    v.abs().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Clone for HpComplex {
    fn clone(&self) -> Self {
        HpComplex {
            re: self.re.clone(),
            im: self.im.clone(),
        }
    }
}

impl HpComplex {
    pub fn from_c64(z: Complex64, p: usize) -> Self {
        HpComplex {
            re: BigFloat::from_f64(z.re, p),
            im: BigFloat::from_f64(z.im, p),
        }
    }

    pub fn zero(p: usize) -> Self {
        HpComplex {
            re: BigFloat::from_f64(0.0, p),
            im: BigFloat::from_f64(0.0, p),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        HpComplex {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
        }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        HpComplex {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
        }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        HpComplex {
            re: rr.sub(&ii, p, RM),
            im: ri.add(&ir, p, RM),
        }
    }

    pub fn scale(&self, s: &BigFloat, p: usize) -> Self {
        HpComplex {
            re: self.re.mul(s, p, RM),
            im: self.im.mul(s, p, RM),
        }
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        let d = o.norm_sqr(p);
        let conj = HpComplex {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let n = self.mul(&conj, p);
        HpComplex {
            re: n.re.div(&d, p, RM),
            im: n.im.div(&d, p, RM),
        }
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.norm_sqr(p).sqrt(p, RM)
    }

    /// Argument in (-pi, pi].
    pub fn arg(&self, p: usize, cc: &mut Consts) -> BigFloat {
        atan2(&self.im, &self.re, p, cc)
    }
}

pub fn atan2(y: &BigFloat, x: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let pi = cc.pi(p, RM);
    if x.is_zero() {
        let half = pi.div(&BigFloat::from_u64(2, 64), p, RM);
        return if y.is_negative() { half.neg() } else { half };
    }
    let t = y.div(x, p, RM).atan(p, RM, cc);
    if x.is_positive() {
        t
    } else if y.is_negative() {
        t.sub(&pi, p, RM)
    } else {
        t.add(&pi, p, RM)
    }
}

/// Evaluates a polynomial with integer coefficients (ascending) and its derivative.
pub fn eval_with_derivative(coeffs: &[BigFloat], z: &HpComplex, p: usize) -> (HpComplex, HpComplex) {
    let mut val = HpComplex::zero(p);
    let mut der = HpComplex::zero(p);
    for c in coeffs.iter().rev() {
        der = der.mul(z, p).add(&val, p);
        val = val.mul(z, p);
        val.re = val.re.add(c, p, RM);
    }
    (val, der)
}

/// Newton refinement of a simple root at `p` bits. Returns `None` if the derivative vanishes.
pub fn polish_root(coeffs: &[BigInt], z0: Complex64, p: usize) -> Option<HpComplex> {
    let c: Vec<BigFloat> = coeffs.iter().map(|a| from_bigint(a, p)).collect();
    let mut z = HpComplex::from_c64(z0, p);
    let target = -(p as i32) + 8;
    for _ in 0..12 {
        let (v, d) = eval_with_derivative(&c, &z, p);
        if d.re.is_zero() && d.im.is_zero() {
            return None;
        }
        let step = v.div(&d, p);
        z = z.sub(&step, p);
        let sz = step.abs(p);
        let zz = z.abs(p);
        if sz.is_zero() {
            break;
        }
        let rel = if zz.is_zero() { sz } else { sz.div(&zz, p, RM) };
        if rel.exponent().map(|e| e < target).unwrap_or(true) {
            break;
        }
    }
    Some(z)
}

/// Fractional part of `arg(z)/(2 pi)` in [0, 1) at `p` bits.
pub fn turn_fraction_hp(z: &HpComplex, p: usize) -> BigFloat {
    let mut cc = consts();
    let a = z.arg(p, &mut cc);
    let two_pi = cc.pi(p, RM).mul(&BigFloat::from_u64(2, 64), p, RM);
    let t = a.div(&two_pi, p, RM);
    if t.is_negative() {
        t.add(&BigFloat::from_u64(1, 64), p, RM)
    } else {
        t
    }
}

/// [`turn_fraction_hp`] split into a double-double pair `(hi, lo)`.
pub fn turn_fraction(z: &HpComplex, p: usize) -> (f64, f64) {
    split_double_double(&turn_fraction_hp(z, p), p)
}

pub fn split_double_double(t: &BigFloat, p: usize) -> (f64, f64) {
    let hi = to_f64(t);
    let lo = to_f64(&t.sub(&BigFloat::from_f64(hi, 64), p, RM));
    (hi, lo)
}

/// `round(x * 2^shift)` as an exact integer.
pub fn to_scaled_bigint(x: &BigFloat, shift: usize) -> BigInt {
    if x.is_zero() {
        return BigInt::from(0);
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    let mut m = BigInt::from(0);
    for w in words.iter().rev() {
        m = (m << 64) + BigInt::from(*w);
    }
    let e = exp as i64 - 64 * words.len() as i64 + shift as i64;
    let v = if e >= 0 {
        m << (e as usize)
    } else {
        let k = (-e) as usize;
        (m + (BigInt::from(1) << (k - 1))) >> k
    };
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Parses a decimal literal at `p` bits.
pub fn parse_decimal(s: &str, p: usize) -> Option<BigFloat> {
    let mut cc = consts();
    let v = BigFloat::parse(s.trim(), astro_float::Radix::Dec, p, RM, &mut cc);
    if v.is_nan() {
        None
    } else {
        Some(v)
    }
}
