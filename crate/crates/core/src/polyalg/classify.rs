use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;

use super::cyclotomic::{cyclotomic, orders_up_to_degree};
use super::roots::roots_hp;
use super::IntPoly;
use crate::error::{Error, Result};
use crate::hp::{self, HpComplex};

pub const EPS_CIRCLE: f64 = 1e-9;
pub const ROOT_PRECISION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootClass {
    Zero,
    InsideDisc,
    OutsideDisc,
    /// `exp(2 pi i index / order)` with `gcd(index, order) = 1`.
    RootOfUnity { order: u64, index: u64 },
    Diophantine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ExactCyclotomic,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifiedRoot {
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub value: Complex64,
    pub multiplicity: usize,
    pub class: RootClass,
    pub provenance: Provenance,
    #[serde(skip)]
    pub hp: Option<HpComplex>,
}

impl ClassifiedRoot {
    pub fn is_unimodular(&self) -> bool {
        matches!(self.class, RootClass::RootOfUnity { .. } | RootClass::Diophantine)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootProfile {
    pub poly: IntPoly,
    pub roots: Vec<ClassifiedRoot>,
    pub leading_abs: f64,
    pub log_leading: f64,
    pub log_mahler: f64,
    pub mahler: f64,
    /// `(d, e)` with `Phi_d^e` dividing the polynomial exactly.
    pub cyclotomic_factors: Vec<(u64, usize)>,
    /// What is left after removing `t^k` and every cyclotomic factor.
    pub cofactor: IntPoly,
}

impl RootProfile {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn roots_of_unity(&self) -> impl Iterator<Item = &ClassifiedRoot> {
        self.roots
            .iter()
            .filter(|r| matches!(r.class, RootClass::RootOfUnity { .. }))
    }

    pub fn diophantine(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .filter(|r| r.class == RootClass::Diophantine)
            .map(|r| r.value)
            .collect()
    }

    /// Least common multiple of the root-of-unity orders (1 if there are none).
    pub fn period(&self) -> u64 {
        self.cyclotomic_factors
            .iter()
            .fold(1u64, |acc, &(d, _)| acc.lcm(&d))
    }

    /// True iff the Mahler measure is exactly 1 (leading coefficient +-1 and all
    /// nonzero roots are roots of unity).
    pub fn mahler_is_one(&self) -> bool {
        self.poly.leading().abs() == 1.into()
            && self.cofactor.degree() == 0
    }
}

fn unit_root(order: u64, index: u64) -> Complex64 {
    let t = 2.0 * PI * index as f64 / order as f64;
    Complex64::new(t.cos(), t.sin())
}

pub fn classify_roots(f: &IntPoly) -> Result<RootProfile> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let k = f.trailing_zeros();
    let mut g = f.shift_down(k);
    let mut roots = Vec::new();
    if k > 0 {
        roots.push(ClassifiedRoot {
            value: Complex64::new(0.0, 0.0),
            multiplicity: k,
            class: RootClass::Zero,
            provenance: Provenance::ExactCyclotomic,
            hp: None,
        });
    }
    let mut cyc = Vec::new();
    for d in orders_up_to_degree(g.degree()) {
        if g.degree() == 0 {
            break;
        }
        let phi = cyclotomic(d);
        if phi.degree() > g.degree() || g.gcd(&phi).degree() == 0 {
            continue;
        }
        let mut e = 0;
        while let Some(q) = g.exact_div(&phi) {
            g = q;
            e += 1;
        }
        cyc.push((d, e));
        for idx in 0..d.max(1) {
            if d == 1 || idx.gcd(&d) == 1 {
                roots.push(ClassifiedRoot {
                    value: unit_root(d, idx),
                    multiplicity: e,
                    class: RootClass::RootOfUnity { order: d, index: idx },
                    provenance: Provenance::ExactCyclotomic,
                    hp: None,
                });
            }
        }
    }
    let lead = f.leading();
    let log_leading = hp::ln_bigint(&lead.abs());
    let mut log_mahler = log_leading;
    if g.degree() > 0 {
        for r in roots_hp(&g, super::roots::POLISH_BITS, ROOT_PRECISION)? {
            let v = r.value.to_c64();
            let m = v.norm();
            let class = if (m - 1.0).abs() <= EPS_CIRCLE {
                RootClass::Diophantine
            } else if m < 1.0 {
                RootClass::InsideDisc
            } else {
                log_mahler += r.multiplicity as f64 * m.ln();
                RootClass::OutsideDisc
            };
            roots.push(ClassifiedRoot {
                value: v,
                multiplicity: r.multiplicity,
                class,
                provenance: Provenance::Numeric,
                hp: Some(r.value),
            });
        }
    }
    Ok(RootProfile {
        poly: f.clone(),
        roots,
        leading_abs: log_leading.exp(),
        log_leading,
        log_mahler,
        mahler: log_mahler.exp(),
        cyclotomic_factors: cyc,
        cofactor: g,
    })
}

pub fn mahler_measure(f: &IntPoly) -> Result<f64> {
    Ok(classify_roots(f)?.mahler)
}
