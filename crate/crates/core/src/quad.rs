//! Adaptive quadrature for complex-valued integrands on finite intervals.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Integral of `f` over `[a, b]` to absolute tolerance `tol`, by bisection on the
/// interval with the largest Kronrod error estimate.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> (Complex64, f64) {
    let mut pieces = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..4000 {
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= tol {
            break;
        }
        let (i, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = pieces.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    let mut s = crate::sum::ComplexSum::new();
    let mut e = 0.0;
    for p in &pieces {
        s.add(p.2);
        e += p.3;
    }
    (s.value(), e)
}

/// Double-exponential (tanh-sinh) rule; tolerates integrable endpoint singularities.
/// The integrand receives `(x, distance to the nearer endpoint)` so it can avoid cancellation.
pub fn tanh_sinh<F: Fn(f64, f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> (Complex64, f64) {
    use std::f64::consts::FRAC_PI_2;
    let h2 = 0.5 * (b - a);
    let tmax = 3.2;
    let node = |t: f64| -> Option<Complex64> {
        let s = FRAC_PI_2 * t.sinh();
        let ch = s.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        // distance from the endpoint: 1 - tanh(s) = 1/(e^s cosh s)
        let d = 1.0 / (s.abs().exp() * ch);
        if d * h2 == 0.0 {
            return None;
        }
        let x = if s >= 0.0 { b - h2 * d } else { a + h2 * d };
        Some(f(x, h2 * d) * (w * h2))
    };
    let mut h = 0.5;
    let mut total = node(0.0).unwrap_or_default();
    let mut k = 1;
    while (k as f64) * h <= tmax {
        let t = k as f64 * h;
        if let Some(v) = node(t) {
            total += v;
        }
        if let Some(v) = node(-t) {
            total += v;
        }
        k += 1;
    }
    let mut est = total * h;
    let mut err = f64::INFINITY;
    for _ in 0..10 {
        h *= 0.5;
        let mut add = Complex64::new(0.0, 0.0);
        let mut k = 1;
        while (k as f64) * h <= tmax {
            let t = k as f64 * h;
            if let Some(v) = node(t) {
                add += v;
            }
            if let Some(v) = node(-t) {
                add += v;
            }
            k += 2;
        }
        total += add;
        let next = total * h;
        err = (next - est).norm();
        est = next;
        if err <= tol {
            break;
        }
    }
    (est, err)
}
