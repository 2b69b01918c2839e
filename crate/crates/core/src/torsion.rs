//! Knot-facing layer: Fox torsion values and the generating function
//! `E(z) = sum_r log|Res(f, t^r - 1)| z^r`, its poles, residues and Laurent data at `z = 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::continuation::{rx_continued, Settings};
use crate::error::{Error, Result};
use crate::hp::ln_bigint;
use crate::polyalg::{
    classify_roots, resultant_exact, ClassifiedRoot, IntPoly, RootClass,
    RootProfile,
};
use crate::report::{complex_json, ser_complex};
use crate::rxcore::{
    log_abs_one_minus_unit, log_abs_partition, log_term, rx_laurent_at_one_root_of_unity,
    EvalResult, RationalFormRx, RxParam, POLE_TOL,
};
use crate::sum::{ComplexSum, KahanSum};

pub const R_EXACT_CAP: u64 = 64;
pub const POLE_DEDUP: f64 = 1e-9;

/// `|Res(f, t^r - 1)|`; zero exactly when `f` has an `r`-th root of unity as a root.
pub fn fox_torsion(delta: &IntPoly, r: u64) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    Ok(resultant_exact(delta, &IntPoly::cyclic(r as usize))?.abs())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TorsionTable {
    #[serde(serialize_with = "ser_big_map")]
    pub entries: BTreeMap<u64, BigInt>,
    pub omitted: BTreeSet<u64>,
}

fn ser_big_map<S: serde::Serializer>(m: &BTreeMap<u64, BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (r, v) in m {
        seq.serialize_element(&serde_json::json!({ "r": r, "value": v.to_string() }))?;
    }
    seq.end()
}

impl TorsionTable {
    /// Natural log of a stored value; `None` for omitted or missing `r`.
    pub fn log(&self, r: u64) -> Option<f64> {
        self.entries.get(&r).map(ln_bigint)
    }

    /// Whether `entries[r] = entries[r + m]` wherever both exist, with matching omissions.
    pub fn is_periodic(&self, m: u64) -> bool {
        let max = self
            .entries
            .keys()
            .chain(self.omitted.iter())
            .copied()
            .max()
            .unwrap_or(0);
        (1..=max.saturating_sub(m)).all(|r| {
            let a = (self.entries.get(&r), self.omitted.contains(&r));
            let b = (self.entries.get(&(r + m)), self.omitted.contains(&(r + m)));
            a == b
        })
    }
}

pub fn torsion_table(delta: &IntPoly, r_max: u64) -> Result<TorsionTable> {
    let vals: Vec<(u64, BigInt)> = (1..=r_max)
        .into_par_iter()
        .map(|r| fox_torsion(delta, r).map(|v| (r, v)))
        .collect::<Result<_>>()?;
    let mut t = TorsionTable::default();
    for (r, v) in vals {
        if v.is_zero() {
            t.omitted.insert(r);
        } else {
            t.entries.insert(r, v);
        }
    }
    Ok(t)
}

/// `log|Res(f, t^r - 1)|` from the roots: `r log|a| + sum log|1 - beta^r|`.
/// `None` when a root of unity of order dividing `r` is present.
pub fn float_log_torsion(profile: &RootProfile, r: u64) -> Option<f64> {
    let mut s = KahanSum::new();
    s.add(r as f64 * profile.log_leading);
    for root in &profile.roots {
        let w = root.multiplicity as f64;
        match root.class {
            RootClass::Zero => {}
            RootClass::RootOfUnity { order, index } => {
                let j = (r % order) * (index % order) % order;
                if j == 0 {
                    return None;
                }
                s.add(w * log_abs_one_minus_unit(j, order));
            }
            _ => s.add(w * log_term(root.value, r)?),
        }
    }
    Some(s.value())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ESeries {
    pub terms: Vec<(u64, f64)>,
    pub omitted: Vec<u64>,
    /// Largest `|exact - float| / max(1, |exact|)` over `r <= cap`.
    pub max_discrepancy: f64,
}

/// Coefficients of `E` for `r = 1..=n`: exact resultants up to `cap`, root products beyond.
pub fn e_series(delta: &IntPoly, n: u64, cap: u64) -> Result<ESeries> {
    let profile = classify_roots(delta)?;
    let exact = torsion_table(delta, n.min(cap))?;
    let mut terms = Vec::new();
    let mut omitted = Vec::new();
    let mut disc: f64 = 0.0;
    for r in 1..=n {
        let fl = float_log_torsion(&profile, r);
        if r <= cap {
            match exact.log(r) {
                Some(v) => {
                    if let Some(f) = fl {
                        disc = disc.max((v - f).abs() / v.abs().max(1.0));
                    } else {
                        disc = f64::INFINITY;
                    }
                    terms.push((r, v));
                }
                None => {
                    if fl.is_some() {
                        disc = f64::INFINITY;
                    }
                    omitted.push(r);
                }
            }
        } else {
            match fl {
                Some(v) => terms.push((r, v)),
                None => omitted.push(r),
            }
        }
    }
    Ok(ESeries {
        terms,
        omitted,
        max_discrepancy: disc,
    })
}

/// Roots grouped so that `R_beta` and `R_{conj beta}` (the same function) are evaluated once.
#[derive(Clone, Debug)]
struct Summand {
    param: RxParam,
    weight: f64,
}

fn summands(profile: &RootProfile) -> Vec<Summand> {
    let mut out = Vec::new();
    for r in &profile.roots {
        let m = r.multiplicity as f64;
        match r.class {
            RootClass::Zero => {}
            RootClass::RootOfUnity { order, index } => {
                if order <= 2 {
                    out.push(Summand {
                        param: RxParam::RootOfUnity { order, index },
                        weight: m,
                    });
                } else if 2 * index < order {
                    out.push(Summand {
                        param: RxParam::RootOfUnity { order, index },
                        weight: 2.0 * m,
                    });
                }
            }
            _ => {
                let v = r.value;
                let tol = 1e-12 * v.norm();
                if v.im.abs() <= tol {
                    out.push(Summand {
                        param: RxParam::Numeric(Complex64::new(v.re, 0.0)),
                        weight: m,
                    });
                } else if v.im > 0.0 {
                    out.push(Summand {
                        param: RxParam::Numeric(v),
                        weight: 2.0 * m,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleReport {
    pub location: Complex64,
    pub order: u8,
    pub generator: Option<Complex64>,
    pub exponent: i64,
    pub residue_estimate: Option<Complex64>,
}

impl Serialize for PoleReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PoleReport", 6)?;
        st.serialize_field("re", &self.location.re)?;
        st.serialize_field("im", &self.location.im)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("generator", &self.generator.map(complex_json))?;
        st.serialize_field("exponent", &self.exponent)?;
        st.serialize_field("residue", &self.residue_estimate.map(complex_json))?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LaurentAtOne {
    pub c_minus2: f64,
    pub c_minus1: f64,
    pub c_0: f64,
}

/// `E` for a fixed polynomial, with its root data computed once.
#[derive(Clone, Debug)]
pub struct GrowthFunction {
    pub profile: RootProfile,
    pub settings: Settings,
    parts: Vec<Summand>,
}

impl GrowthFunction {
    pub fn new(delta: &IntPoly, settings: Settings) -> Result<Self> {
        Ok(Self::from_profile(classify_roots(delta)?, settings))
    }

    pub fn from_profile(profile: RootProfile, settings: Settings) -> Self {
        let parts = summands(&profile);
        GrowthFunction {
            profile,
            settings,
            parts,
        }
    }

    fn require_continuable(&self) -> Result<()> {
        let d = self.profile.diophantine();
        if d.is_empty() {
            Ok(())
        } else {
            Err(Error::NaturalBoundary { roots: d })
        }
    }

    fn has_pole_at_one(&self) -> bool {
        !self.profile.mahler_is_one()
            || self
                .profile
                .cyclotomic_factors
                .iter()
                .any(|&(d, _)| d >= 2)
    }

    /// `log M z/(z-1)^2 + sum over roots of R_beta(z)` (with `R_beta` continued).
    pub fn eval(&self, z: Complex64) -> Result<EvalResult> {
        self.require_continuable()?;
        if (z - 1.0).norm() < POLE_TOL && self.has_pole_at_one() {
            return Err(Error::PoleHit {
                location: Complex64::new(1.0, 0.0),
                generator: None,
                exponent: Some(0),
            });
        }
        let mut s = ComplexSum::new();
        let mut tail = 0.0;
        let mut terms = 0;
        let lm = self.profile.log_mahler;
        if lm != 0.0 {
            let zm1 = z - 1.0;
            s.add(z / (zm1 * zm1) * lm);
        }
        for part in &self.parts {
            let r = match part.param {
                RxParam::Numeric(x) if x.norm() > 1.0 => {
                    // the log|beta| z/(z-1)^2 piece is already inside log M
                    let inner = rx_continued(RxParam::Numeric(x.inv()), z, &self.settings);
                    inner.map_err(|e| relabel_inverse(e, x))?
                }
                p => rx_continued(p, z, &self.settings)?,
            };
            s.add(r.value * part.weight);
            tail += r.tail_bound * part.weight;
            terms += r.terms_used;
        }
        Ok(EvalResult {
            value: s.value(),
            tail_bound: tail,
            terms_used: terms,
        })
    }

    /// Pole locations with `|p| <= radius_max`, without residues.
    pub fn pole_locations(&self, radius_max: f64) -> Result<Vec<PoleReport>> {
        self.require_continuable()?;
        let mut raw: Vec<PoleReport> = Vec::new();
        let push = |raw: &mut Vec<PoleReport>, loc: Complex64, gen: Complex64, e: i64| {
            raw.push(PoleReport {
                location: loc,
                order: 1,
                generator: Some(gen),
                exponent: e,
                residue_estimate: None,
            });
        };
        for root in &self.profile.roots {
            let b = root.value;
            match root.class {
                RootClass::Zero => {}
                RootClass::InsideDisc | RootClass::OutsideDisc => {
                    let step = if b.norm() < 1.0 { b.inv() } else { b };
                    let sign = if b.norm() < 1.0 { -1 } else { 1 };
                    let mut p = step;
                    let mut n = 1i64;
                    while p.norm() <= radius_max * (1.0 + 1e-12) {
                        push(&mut raw, p, b, sign * n);
                        p *= step;
                        n += 1;
                    }
                }
                RootClass::RootOfUnity { order, index } => {
                    if order >= 2 && radius_max >= 1.0 {
                        for j in 1..order {
                            let loc = crate::rxcore::unit(index * j % order, order);
                            push(&mut raw, loc, b, j as i64);
                        }
                    }
                }
                RootClass::Diophantine => unreachable!(),
            }
        }
        let mut out: Vec<PoleReport> = Vec::new();
        if self.has_pole_at_one() && radius_max >= 1.0 {
            out.push(PoleReport {
                location: Complex64::new(1.0, 0.0),
                order: if self.profile.mahler_is_one() { 1 } else { 2 },
                generator: None,
                exponent: 0,
                residue_estimate: None,
            });
        }
        raw.sort_by(|a, b| a.exponent.abs().cmp(&b.exponent.abs()));
        for p in raw {
            if out
                .iter()
                .any(|q| (q.location - p.location).norm() <= POLE_DEDUP)
            {
                continue;
            }
            out.push(p);
        }
        let key = |p: &PoleReport| ((p.location.norm() * 1e9).round(), p.location.arg());
        out.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        Ok(out)
    }

    pub fn pole_set(&self, radius_max: f64) -> Result<Vec<PoleReport>> {
        let mut poles = self.pole_locations(radius_max)?;
        let res: Vec<Option<Complex64>> = poles
            .par_iter()
            .map(|p| self.residue_at(p.location).ok())
            .collect();
        for (p, r) in poles.iter_mut().zip(res) {
            p.residue_estimate = r;
        }
        Ok(poles)
    }

    /// Richardson limit of `(z - p) E(z)` along `z = p(1 + 2^-j)`, `j = 6..12`.
    /// At `p = 1` with a double pole the `log M/(z-1)^2` part is removed first.
    pub fn residue_at(&self, p: Complex64) -> Result<Complex64> {
        self.require_continuable()?;
        let at_one = (p - 1.0).norm() < POLE_DEDUP;
        let double = at_one && !self.profile.mahler_is_one();
        let lm = self.profile.log_mahler;
        let mut row: Vec<Complex64> = Vec::new();
        for j in 6..=12 {
            let h = 2f64.powi(-j);
            let z = p * (1.0 + h);
            let e = self.eval(z)?.value;
            let d = z - p;
            let mut g = d * e;
            if double {
                g -= lm / d;
            }
            row.push(g);
        }
        let limit = richardson(&row);
        if limit.norm() < 1e-8 {
            return Err(Error::NotAPole(p));
        }
        Ok(limit)
    }

    /// Closed-form Laurent coefficients at `z = 1`.
    pub fn laurent_at_one(&self) -> Result<LaurentAtOne> {
        self.require_continuable()?;
        let lm = self.profile.log_mahler;
        let mut c1 = KahanSum::new();
        let mut c0 = KahanSum::new();
        c1.add(lm);
        for root in &self.profile.roots {
            let w = root.multiplicity as f64;
            match root.class {
                RootClass::Zero => {}
                RootClass::RootOfUnity { order, index } => {
                    if order >= 2 {
                        let (res, cst) = rx_laurent_at_one_root_of_unity(order, index)?;
                        c1.add(w * res);
                        c0.add(w * cst);
                    }
                }
                RootClass::InsideDisc | RootClass::OutsideDisc => {
                    let b = root.value;
                    let inner = if b.norm() < 1.0 { b } else { b.inv() };
                    c0.add(-w * log_abs_partition(inner)?.value);
                }
                RootClass::Diophantine => unreachable!(),
            }
        }
        Ok(LaurentAtOne {
            c_minus2: lm,
            c_minus1: c1.value(),
            c_0: c0.value(),
        })
    }

    /// Laurent coefficients `c_{-2} .. c_{k_max}` at `z = 1` from Cauchy integrals on
    /// `|z - 1| = rho` (trapezoidal rule, 512 nodes). `rho = 0.05` unless another pole is closer.
    pub fn laurent_numeric(&self, k_max: i32) -> Result<Vec<(i32, Complex64)>> {
        self.require_continuable()?;
        let mut rho: f64 = 0.05;
        for p in self.pole_locations(1.0 + 2.0 * rho)? {
            let d = (p.location - 1.0).norm();
            if d > POLE_DEDUP && d < 3.0 * rho {
                rho = d / 3.0;
            }
        }
        let n = 512;
        let vals: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|j| {
                let phi = 2.0 * PI * (j as f64 + 0.5) / n as f64;
                let u = Complex64::from_polar(rho, phi);
                self.eval(u + 1.0).map(|r| r.value)
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        for k in -2..=k_max {
            let mut s = ComplexSum::new();
            for (j, v) in vals.iter().enumerate() {
                let phi = 2.0 * PI * (j as f64 + 0.5) / n as f64;
                let u = Complex64::from_polar(rho, phi);
                s.add(v * u.powi(-k));
            }
            out.push((k, s.value() / n as f64));
        }
        Ok(out)
    }
}

fn relabel_inverse(e: Error, x: Complex64) -> Error {
    match e {
        Error::PoleHit {
            location,
            exponent: Some(n),
            ..
        } => Error::PoleHit {
            location,
            generator: Some(x),
            exponent: Some(-n),
        },
        other => other,
    }
}

/// Richardson extrapolation for samples at `h, h/2, h/4, ...` with an error series in `h`.
pub fn richardson(samples: &[Complex64]) -> Complex64 {
    let mut t: Vec<Complex64> = samples.to_vec();
    let n = t.len();
    for level in 1..n {
        let f = 2f64.powi(level as i32);
        for i in (level..n).rev() {
            t[i] = (t[i] * f - t[i - 1]) / (f - 1.0);
        }
    }
    t[n - 1]
}

pub fn e_continued(delta: &IntPoly, z: Complex64, settings: &Settings) -> Result<EvalResult> {
    GrowthFunction::new(delta, *settings)?.eval(z)
}

pub fn pole_set(delta: &IntPoly, radius_max: f64, settings: &Settings) -> Result<Vec<PoleReport>> {
    GrowthFunction::new(delta, *settings)?.pole_set(radius_max)
}

pub fn residue_at(delta: &IntPoly, p: Complex64, settings: &Settings) -> Result<Complex64> {
    GrowthFunction::new(delta, *settings)?.residue_at(p)
}

pub fn laurent_at_one(delta: &IntPoly) -> Result<LaurentAtOne> {
    GrowthFunction::new(delta, Settings::default())?.laurent_at_one()
}

pub fn laurent_numeric(delta: &IntPoly, k_max: i32, settings: &Settings) -> Result<Vec<(i32, Complex64)>> {
    GrowthFunction::new(delta, *settings)?.laurent_numeric(k_max)
}

/// `(log |Res(f, t^r - 1)| / r, log M)` at the largest non-omitted `r <= r_max`.
pub fn silver_williams_slope(delta: &IntPoly, r_max: u64) -> Result<(f64, f64)> {
    let profile = classify_roots(delta)?;
    let mut r = r_max;
    while r >= 1 {
        let v = fox_torsion(delta, r)?;
        if !v.is_zero() {
            return Ok((ln_bigint(&v) / r as f64, profile.log_mahler));
        }
        r -= 1;
    }
    Ok((0.0, profile.log_mahler))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GordonVerdict {
    pub periodic: bool,
    pub period: Option<u64>,
    /// `(d, e)`: `Phi_d^e` divides the polynomial.
    pub cyclotomic_factors: Vec<(u64, usize)>,
    pub cofactor: IntPoly,
}

/// Periodic torsion iff the leading coefficient is +-1 and every nonzero root is a root of unity.
pub fn gordon_classify(delta: &IntPoly) -> Result<GordonVerdict> {
    let p = classify_roots(delta)?;
    let periodic = p.mahler_is_one();
    Ok(GordonVerdict {
        periodic,
        period: if periodic { Some(p.period()) } else { None },
        cyclotomic_factors: p.cyclotomic_factors.clone(),
        cofactor: p.cofactor.clone(),
    })
}

/// `log|Res(f, t^r - 1)| = r log M + a_{r mod m} + err(r)` with `|err(r)| <= bound(r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicDecomposition {
    pub period: u64,
    /// One period `a_0 .. a_{m-1}`; `None` where a root of unity forces the value 0.
    pub periodic_part: Vec<Option<f64>>,
    pub log_mahler: f64,
    /// `(min(|beta|, 1/|beta|), multiplicity)` over the roots off the circle.
    pub contraction: Vec<(f64, usize)>,
}

impl PeriodicDecomposition {
    pub fn bound(&self, r: u64) -> f64 {
        self.contraction
            .iter()
            .map(|&(q, m)| {
                let qr = q.powf(r as f64);
                m as f64 * qr / (1.0 - qr)
            })
            .sum()
    }

    pub fn predicted(&self, r: u64) -> Option<f64> {
        self.periodic_part[(r % self.period) as usize].map(|a| a + r as f64 * self.log_mahler)
    }

    /// Largest violation `|log T_r - predicted(r)| - bound(r)` over a table (<= 0 when it holds).
    pub fn check(&self, table: &TorsionTable) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (&r, v) in &table.entries {
            let pred = match self.predicted(r) {
                Some(p) => p,
                None => return f64::INFINITY,
            };
            let slack = (ln_bigint(v) - pred).abs() - self.bound(r) - 1e-9 * pred.abs().max(1.0);
            worst = worst.max(slack);
        }
        for &r in &table.omitted {
            if self.predicted(r).is_some() {
                return f64::INFINITY;
            }
        }
        worst
    }
}

pub fn periodic_part_and_bound(delta: &IntPoly) -> Result<PeriodicDecomposition> {
    let p = classify_roots(delta)?;
    let d = p.diophantine();
    if !d.is_empty() {
        return Err(Error::NaturalBoundary { roots: d });
    }
    let m = p.period();
    let units: Vec<&ClassifiedRoot> = p.roots_of_unity().collect();
    let periodic_part = (0..m)
        .map(|r| {
            let mut s = KahanSum::new();
            for u in &units {
                if let RootClass::RootOfUnity { order, index } = u.class {
                    let j = (r % order) * index % order;
                    if j == 0 {
                        return None;
                    }
                    s.add(u.multiplicity as f64 * log_abs_one_minus_unit(j, order));
                }
            }
            Some(s.value())
        })
        .collect();
    let contraction = p
        .roots
        .iter()
        .filter(|r| matches!(r.class, RootClass::InsideDisc | RootClass::OutsideDisc))
        .map(|r| {
            let a = r.value.norm();
            (a.min(1.0 / a), r.multiplicity)
        })
        .collect();
    Ok(PeriodicDecomposition {
        period: m,
        periodic_part,
        log_mahler: p.log_mahler,
        contraction,
    })
}

/// A class `{p, 1/p, conj p, 1/conj p}` of roots off the circle recovered from the poles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveredPair {
    #[serde(serialize_with = "ser_complex")]
    pub outside: Complex64,
    /// `mult(p) + mult(1/p)`.
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reconstruction {
    pub pairs: Vec<RecoveredPair>,
    /// `(order, multiplicity)` of recovered root-of-unity orbits.
    pub unit_orbits: Vec<(u64, usize)>,
}

impl Reconstruction {
    /// The reciprocal-closed root multiset; requires every pair weight to be even.
    pub fn roots(&self) -> Result<Vec<(Complex64, usize)>> {
        let mut out = Vec::new();
        for p in &self.pairs {
            if p.weight % 2 != 0 {
                return Err(Error::AmbiguousGenerators);
            }
            let h = p.weight / 2;
            for b in [p.outside, p.outside.inv()] {
                out.push((b, h));
                if b.im.abs() > 1e-12 * b.norm() {
                    out.push((b.conj(), h));
                }
            }
        }
        for &(d, e) in &self.unit_orbits {
            for k in 0..d {
                if num_integer::Integer::gcd(&k, &d) == 1 {
                    out.push((crate::rxcore::unit(k, d), e));
                }
            }
        }
        Ok(out)
    }
}

fn near_integer(v: f64, tol: f64) -> Option<usize> {
    let r = v.round();
    if r >= 0.0 && (v - r).abs() <= tol * r.max(1.0) {
        Some(r as usize)
    } else {
        None
    }
}

/// Exact order of a unimodular point, if it is a root of unity of order `<= 10^4`.
fn unit_order(p: Complex64) -> Option<u64> {
    let mut t = p.arg() / (2.0 * PI);
    if t < 0.0 {
        t += 1.0;
    }
    if t.abs() < 1e-9 || (1.0 - t).abs() < 1e-9 {
        return Some(1);
    }
    for d in 2..=10_000u64 {
        let x = t * d as f64;
        if (x - x.round()).abs() < 1e-9 * d as f64 {
            return Some(d);
        }
    }
    None
}

/// Recovers the roots from a pole list with residues: off the circle the residue at `p`
/// equals `p * sum_k s_{p^(1/k)}/k`, so poles are processed by increasing modulus and
/// whatever the already found generators do not explain becomes a new generator.
pub fn fried_reconstruct(poles: &[PoleReport]) -> Result<Reconstruction> {
    let mut off: Vec<&PoleReport> = poles
        .iter()
        .filter(|p| p.location.norm() > 1.0 + POLE_DEDUP)
        .collect();
    off.sort_by(|a, b| a.location.norm().partial_cmp(&b.location.norm()).unwrap());
    let mut pairs: Vec<RecoveredPair> = Vec::new();
    for p in &off {
        if p.location.im < -1e-12 * p.location.norm() {
            continue;
        }
        let obs = p.residue_estimate.ok_or(Error::AmbiguousGenerators)?;
        let loc = p.location;
        let mut pred = Complex64::new(0.0, 0.0);
        for g in &pairs {
            let bases = if g.outside.im == 0.0 {
                vec![g.outside]
            } else {
                vec![g.outside, g.outside.conj()]
            };
            for base in bases {
                let mut q = base;
                let mut k = 1;
                while q.norm() <= loc.norm() * (1.0 + 1e-9) {
                    if (q - loc).norm() <= POLE_DEDUP * loc.norm().max(1.0) {
                        pred += loc * (g.weight as f64 / k as f64);
                    }
                    q *= base;
                    k += 1;
                }
            }
        }
        let real_loc = loc.im.abs() <= 1e-12 * loc.norm();
        let left = (obs - pred) / loc;
        let w = left.re;
        if left.im.abs() > 1e-3 * left.norm().max(1.0) {
            return Err(Error::AmbiguousGenerators);
        }
        match near_integer(w, 1e-3) {
            Some(0) => {}
            Some(n) => pairs.push(RecoveredPair {
                outside: if real_loc { Complex64::new(loc.re, 0.0) } else { loc },
                weight: n,
            }),
            None => return Err(Error::AmbiguousGenerators),
        }
    }

    let mut on: Vec<(u64, &PoleReport)> = Vec::new();
    for p in poles {
        let a = p.location.norm();
        if (a - 1.0).abs() <= POLE_DEDUP && (p.location - 1.0).norm() > POLE_DEDUP {
            let d = unit_order(p.location).ok_or(Error::AmbiguousGenerators)?;
            on.push((d, p));
        }
    }
    let mut orders: Vec<u64> = on.iter().map(|x| x.0).collect();
    orders.sort_unstable();
    orders.dedup();
    orders.reverse();
    let orbit_residue = |d: u64, at: Complex64| -> Complex64 {
        (1..d)
            .filter(|k| num_integer::Integer::gcd(k, &d) == 1)
            .map(|k| RationalFormRx::new(d, k).unwrap().residue(at))
            .sum()
    };
    let mut unit_orbits: Vec<(u64, usize)> = Vec::new();
    for d in orders {
        let rep = on
            .iter()
            .filter(|x| x.0 == d)
            .map(|x| x.1)
            .max_by(|a, b| {
                let ra = orbit_residue(d, a.location).norm();
                let rb = orbit_residue(d, b.location).norm();
                ra.partial_cmp(&rb).unwrap()
            })
            .unwrap();
        let at = rep.location;
        let obs = rep.residue_estimate.unwrap_or_default();
        let mut pred = Complex64::new(0.0, 0.0);
        for &(e, mult) in &unit_orbits {
            if e % d == 0 {
                pred += orbit_residue(e, at) * mult as f64;
            }
        }
        let unit = orbit_residue(d, at);
        if unit.norm() < 1e-12 {
            return Err(Error::AmbiguousGenerators);
        }
        let ratio = (obs - pred) / unit;
        if ratio.im.abs() > 1e-3 * ratio.norm().max(1.0) {
            return Err(Error::AmbiguousGenerators);
        }
        match near_integer(ratio.re, 1e-3) {
            Some(0) => {}
            Some(n) => unit_orbits.push((d, n)),
            None => return Err(Error::AmbiguousGenerators),
        }
    }
    unit_orbits.sort_unstable();
    Ok(Reconstruction { pairs, unit_orbits })
}

/// `prod_i |Res(f_i, t^r - 1)|^{(-1)^{i+1}}` as an exact fraction.
pub fn reidemeister_tau(deltas: &[IntPoly], r: u64) -> Result<BigRational> {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, d) in deltas.iter().enumerate() {
        let v = fox_torsion(d, r)?;
        if v.is_zero() {
            return Err(Error::RootOfUnityCollision(r));
        }
        if i % 2 == 0 {
            num *= v;
        } else {
            den *= v;
        }
    }
    Ok(BigRational::new(num, den))
}

/// Alternating sum of the per-polynomial generating functions.
pub fn j_continued(deltas: &[IntPoly], z: Complex64, settings: &Settings) -> Result<EvalResult> {
    let mut s = ComplexSum::new();
    let mut tail = 0.0;
    let mut terms = 0;
    for (i, d) in deltas.iter().enumerate() {
        let r = e_continued(d, z, settings)?;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        s.add(r.value * sign);
        tail += r.tail_bound;
        terms += r.terms_used;
    }
    Ok(EvalResult {
        value: s.value(),
        tail_bound: tail,
        terms_used: terms,
    })
}

/// Everything the `analyze` command reports about one polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub poly: IntPoly,
    pub mahler: f64,
    pub gordon: GordonVerdict,
    pub laurent: Option<LaurentAtOne>,
    pub poles: Vec<PoleReport>,
    pub diophantine: Option<DiophantineBlock>,
    #[serde(serialize_with = "ser_torsion_rows")]
    pub torsion: TorsionTable,
    pub warnings: Vec<String>,
}

/// Present instead of Laurent and pole data when roots lie on the circle without being roots of unity.
#[derive(Clone, Debug, Serialize)]
pub struct DiophantineBlock {
    #[serde(serialize_with = "ser_roots")]
    pub roots: Vec<Complex64>,
    pub note: String,
}

/// Every `r` in order, omitted ones with value `"0"`.
fn ser_torsion_rows<S: serde::Serializer>(t: &TorsionTable, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut rows: Vec<(u64, String)> = t.entries.iter().map(|(r, v)| (*r, v.to_string())).collect();
    rows.extend(t.omitted.iter().map(|r| (*r, "0".to_string())));
    rows.sort();
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for (r, v) in rows {
        seq.serialize_element(&serde_json::json!({ "r": r, "value": v }))?;
    }
    seq.end()
}

fn ser_roots<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&complex_json(*z))?;
    }
    seq.end()
}

pub fn analyze(delta: &IntPoly, radius_max: f64, r_max: u64, settings: &Settings) -> Result<AnalysisReport> {
    let f = GrowthFunction::new(delta, *settings)?;
    let mut warnings = Vec::new();
    let at_one = delta.eval_int(&BigInt::one());
    if at_one.abs() != BigInt::one() {
        warnings.push(format!("f(1) = {} is not +-1", at_one));
    }
    if !delta.is_reciprocal() {
        warnings.push("polynomial is not reciprocal".into());
    }
    let roots = f.profile.diophantine();
    let (laurent, poles, diophantine) = if roots.is_empty() {
        (Some(f.laurent_at_one()?), f.pole_set(radius_max)?, None)
    } else {
        let note = "the unit circle is a natural boundary: no Laurent data or poles beyond it; \
                    probe it with radial limits at powers of these roots"
            .to_string();
        (None, Vec::new(), Some(DiophantineBlock { roots, note }))
    };
    Ok(AnalysisReport {
        poly: delta.clone(),
        mahler: f.profile.mahler,
        gordon: gordon_classify(delta)?,
        laurent,
        poles,
        diophantine,
        torsion: torsion_table(delta, r_max)?,
        warnings,
    })
}
