//! Independent reference computations shared by the integration tests. Nothing here calls
//! into the library's numerical paths.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Horner evaluation of ascending real coefficients.
pub fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Durand-Kerner iteration followed by a few Newton steps per root.
pub fn dk_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|a| a / lead).collect();
    let seed = c(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * 1.1).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    let deriv: Vec<f64> = monic.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect();
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = horner(&deriv, *r);
            if d.norm() > 1e-300 {
                *r -= horner(&monic, *r) / d;
            }
        }
    }
    z
}

/// `log(|a|^r prod |1 - beta^r|)` from the roots, stable for roots off the circle.
pub fn log_torsion_product(coeffs: &[f64], r: u32) -> f64 {
    let lead = coeffs[coeffs.len() - 1].abs();
    let mut s = r as f64 * lead.ln();
    for b in dk_roots(coeffs) {
        if b.norm() > 1.0 {
            s += r as f64 * b.norm().ln() + (b.inv().powu(r) - 1.0).norm().ln();
        } else {
            s += (c(1.0, 0.0) - b.powu(r)).norm().ln();
        }
    }
    s
}

/// `sum_{r=1}^{n} log|1 - x^r| z^r`, terms with `x^r = 1` dropped. For `|x| > 1` each term is
/// taken as `r log|x| + log|1 - x^-r|`.
pub fn log_series(x: Complex64, z: Complex64, n: u32) -> Complex64 {
    let outside = x.norm() > 1.0;
    let y = if outside { x.inv() } else { x };
    let mut s = c(0.0, 0.0);
    let mut yr = c(1.0, 0.0);
    let mut zr = c(1.0, 0.0);
    for r in 1..=n {
        yr *= y;
        zr *= z;
        let d = (c(1.0, 0.0) - yr).norm();
        if d > 0.0 {
            let lift = if outside { r as f64 * x.norm().ln() } else { 0.0 };
            s += zr * (d.ln() + lift);
        }
    }
    s
}

/// Composite Simpson on `[a, b]` after the graded map `s -> s^3 / (s^3 + (1 - s)^3)`, which
/// flattens integrable endpoint singularities of logarithmic type.
pub fn graded_simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize) -> Complex64 {
    let map = |s: f64| {
        let p = s * s * s;
        let q = (1.0 - s).powi(3);
        let t = p / (p + q);
        let dt = 3.0 * s * s * (1.0 - s) * (1.0 - s) / ((p + q) * (p + q));
        (a + (b - a) * t, (b - a) * dt)
    };
    let n = panels * 2;
    let h = 1.0 / n as f64;
    let mut acc = c(0.0, 0.0);
    for i in 1..n {
        let (t, dt) = map(i as f64 * h);
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(t) * (w * dt);
    }
    acc * (h / 3.0)
}

/// `int_0^1 log|1 - e^{2 pi i t}| e^{2 pi i m t} dt` by graded Simpson.
pub fn twisted_chord_integral(m: f64) -> Complex64 {
    graded_simpson(
        |t| {
            let v = (2.0 * (PI * t).sin()).abs().ln();
            Complex64::from_polar(1.0, 2.0 * PI * m * t) * v
        },
        0.0,
        1.0,
        200_000,
    )
}

/// Lucas numbers `L_0 = 2, L_1 = 1`.
pub fn lucas(n: usize) -> Vec<i128> {
    let mut l = vec![2i128, 1];
    while l.len() <= n {
        let k = l.len();
        l.push(l[k - 1] + l[k - 2]);
    }
    l
}

/// Reciprocal integer polynomial of even degree `2h` with value `+-1` at 1, coefficients in
/// `[-3, 3]` apart from the middle one, which is solved for.
pub fn random_alexander<R: Rng>(rng: &mut R, h: usize) -> Vec<i64> {
    loop {
        let mut half: Vec<i64> = (0..h).map(|_| rng.gen_range(-3..=3)).collect();
        if half[0] == 0 {
            half[0] = 1;
        }
        let outer: i64 = 2 * half.iter().sum::<i64>();
        let target = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mid = target - outer;
        let mut co = half.clone();
        co.push(mid);
        co.extend(half.iter().rev());
        if mid.abs() <= 12 {
            return co;
        }
    }
}
