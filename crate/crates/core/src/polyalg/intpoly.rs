use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial with integer coefficients, stored in ascending order and trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        Self::new(v)
    }

    /// `t^r - 1`
    pub fn cyclic(r: usize) -> Self {
        let mut v = vec![BigInt::zero(); r + 1];
        v[0] = BigInt::from(-1);
        v[r] += BigInt::one();
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Largest `k` with `t^k | f`.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// `f / t^k`, assuming `t^k | f`.
    pub fn shift_down(&self, k: usize) -> IntPoly {
        IntPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, s: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `t^deg f(1/t)`
    pub fn reversed(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    pub fn is_reciprocal(&self) -> bool {
        let f = self.shift_down(self.trailing_zeros());
        let r = f.reversed();
        r == f || r == -&f
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.to_f64()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact quotient over Z; `None` when `d` does not divide `self` in Z[t].
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.degree();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qi, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &qi * c;
            }
            q[i] = qi;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Remainder of `lc(d)^k * self` by `d` for some `k >= 0`; enough for gcd work.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dl = d.leading();
        let dd = d.degree();
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= dd {
            let lr = r.leading();
            let k = r.degree() - dd;
            let mut v = r.coeffs.iter().map(|c| c * &dl).collect::<Vec<_>>();
            for (j, c) in d.coeffs.iter().enumerate() {
                v[k + j] -= &lr * c;
            }
            r = IntPoly::new(v);
        }
        r
    }

    /// Greatest common divisor over Q, returned primitive with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Square-free decomposition over Q (Yun). Returns pairs `(s_i, i)` with every
    /// `s_i` primitive and square-free; `prod s_i^i` equals `primitive(self)`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        let a = self.primitive();
        if a.degree() == 0 {
            return out;
        }
        let b = a.derivative();
        let c = a.gcd(&b);
        let mut w = a.exact_div(&c).expect("gcd divides").primitive();
        let mut y = b.exact_div(&c).expect("gcd divides derivative");
        let mut z = &y - &w.derivative();
        let mut i = 1;
        while w.degree() > 0 {
            let g = w.gcd(&z);
            if g.degree() > 0 {
                out.push((g.clone(), i));
            }
            w = w.exact_div(&g).expect("gcd divides");
            y = z.exact_div(&g).expect("gcd divides");
            z = &y - &w.derivative();
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    pub fn pow(&self, e: usize) -> IntPoly {
        let mut r = IntPoly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Parses a comma separated ascending coefficient list such as `6,-13,6`.
    pub fn parse(s: &str) -> Result<IntPoly> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('{') {
            let v: serde_json::Value = serde_json::from_str(&format!("{{{}", rest))
                .map_err(|e| Error::Invalid(e.to_string()))?;
            return serde_json::from_value(v).map_err(|e| Error::Invalid(e.to_string()));
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Invalid(format!("bad coefficient '{}'", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IntPoly", 1)?;
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &c)?;
        st.end()
    }
}

struct CoeffList(Vec<BigInt>);

impl<'de> Deserialize<'de> for CoeffList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CoeffList;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of integers or decimal strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<CoeffList, A::Error> {
                let mut out = Vec::new();
                while let Some(v) = seq.next_element::<serde_json::Value>()? {
                    let c = match &v {
                        serde_json::Value::Number(n) if n.is_i64() => BigInt::from(n.as_i64().unwrap()),
                        serde_json::Value::Number(n) if n.is_u64() => BigInt::from(n.as_u64().unwrap()),
                        serde_json::Value::String(s) => s
                            .trim()
                            .parse::<BigInt>()
                            .map_err(|_| de::Error::custom(format!("bad coefficient {}", s)))?,
                        other => return Err(de::Error::custom(format!("bad coefficient {}", other))),
                    };
                    out.push(c);
                }
                Ok(CoeffList(out))
            }
        }
        d.deserialize_seq(V)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeffs: CoeffList,
        }
        let r = Raw::deserialize(d)?;
        Ok(IntPoly::new(r.coeffs.0))
    }
}
