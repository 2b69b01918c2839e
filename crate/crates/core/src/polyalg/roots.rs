use num_complex::Complex64;

use super::IntPoly;
use crate::error::{Error, Result};
use crate::hp::{self, HpComplex};

pub const POLISH_BITS: usize = 128;

#[derive(Clone, Debug)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct HpRoot {
    pub value: HpComplex,
    pub multiplicity: usize,
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, log|a_i|)`, so that roots of very different sizes are separated early.
fn initial_guesses(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let pts: Vec<(f64, f64)> = a
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = c.norm();
            (i as f64, if m > 0.0 { m.ln() } else { f64::NEG_INFINITY })
        })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if pts[i].1 == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (j, k) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (pts[k].0 - pts[j].0) * (pts[i].1 - pts[j].1)
                - (pts[k].1 - pts[j].1) * (pts[i].0 - pts[j].0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (i, k) = (w[0], w[1]);
        let cnt = k - i;
        let r = ((pts[i].1 - pts[k].1) / cnt as f64).exp();
        for j in 0..cnt {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / cnt as f64
                + 2.0 * std::f64::consts::PI * i as f64 / n as f64
                + sigma;
            out.push(Complex64::from_polar(r, ang));
        }
    }
    out
}

fn newton_ratio(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let n = a.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            d = d * z + p;
            p = p * z + c;
        }
        (p / d, p)
    } else {
        let y = z.inv();
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        for c in a.iter() {
            dq = dq * y + q;
            q = q * y + c;
        }
        let ratio = z * q / (q * n as f64 - y * dq);
        (ratio, q * z.powu(n as u32))
    }
}

/// Simultaneous Aberth iteration in double precision for a polynomial with nonzero
/// constant term. Returns all `deg` roots, unpolished.
pub fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let a: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let n = a.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![-a[0] / a[1]]);
    }
    let mut z = initial_guesses(&a);
    let mut done = vec![false; n];
    for _ in 0..800 {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, _) = newton_ratio(&a, z[i]);
            if !ratio.is_finite() {
                done[i] = true;
                continue;
            }
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence { residual: f64::INFINITY });
    }
    Ok(z)
}

fn check_residual(f: &IntPoly, z: Complex64, precision: f64) -> Result<()> {
    let c = f.to_f64();
    let r = z.norm();
    let (scale, val) = if r <= 1.0 {
        let s: f64 = c.iter().enumerate().map(|(i, a)| a.abs() * r.powi(i as i32)).sum();
        (s, f.eval(z))
    } else {
        let n = c.len() - 1;
        let y = z.inv();
        let s: f64 = c.iter().enumerate().map(|(i, a)| a.abs() * y.norm().powi((n - i) as i32)).sum();
        let v = c.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * y + a);
        (s, v)
    };
    let res = val.norm() / scale.max(f64::MIN_POSITIVE);
    if res > precision {
        return Err(Error::NonConvergence { residual: res });
    }
    Ok(())
}

/// Roots of a square-free polynomial with nonzero constant term, polished at `bits`.
fn squarefree_roots_hp(s: &IntPoly, bits: usize, precision: f64) -> Result<Vec<HpComplex>> {
    let approx = aberth(&s.to_f64())?;
    let mut out = Vec::with_capacity(approx.len());
    for z0 in approx {
        let z = hp::polish_root(s.coeffs(), z0, bits)
            .ok_or(Error::NonConvergence { residual: f64::INFINITY })?;
        check_residual(s, z.to_c64(), precision)?;
        out.push(z);
    }
    let vals: Vec<Complex64> = out.iter().map(|z| z.to_c64()).collect();
    for i in 0..vals.len() {
        for j in 0..i {
            if (vals[i] - vals[j]).norm() <= 1e-14 * (1.0 + vals[i].norm()) {
                return Err(Error::NonConvergence { residual: 0.0 });
            }
        }
    }
    Ok(out)
}

/// All complex roots with multiplicity. Multiplicities come from the exact
/// square-free decomposition; a factor `t^k` is split off first.
pub fn roots(f: &IntPoly, precision: f64) -> Result<Vec<Root>> {
    Ok(roots_hp(f, POLISH_BITS, precision)?
        .into_iter()
        .map(|r| Root {
            value: r.value.to_c64(),
            multiplicity: r.multiplicity,
        })
        .collect())
}

pub fn roots_hp(f: &IntPoly, bits: usize, precision: f64) -> Result<Vec<HpRoot>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let k = f.trailing_zeros();
    let mut out = Vec::new();
    if k > 0 {
        out.push(HpRoot {
            value: HpComplex::zero(bits),
            multiplicity: k,
        });
    }
    let g = f.shift_down(k);
    for (s, mult) in g.squarefree_decomposition() {
        for z in squarefree_roots_hp(&s, bits, precision)? {
            out.push(HpRoot {
                value: z,
                multiplicity: mult,
            });
        }
    }
    Ok(out)
}

/// Groups numerically close values; used as a cross-check on multiplicities.
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for &v in values {
        match out
            .iter_mut()
            .find(|(c, _)| (*c - v).norm() <= tol * (1.0 + v.norm()))
        {
            Some(e) => e.1 += 1,
            None => out.push((v, 1)),
        }
    }
    out
}
