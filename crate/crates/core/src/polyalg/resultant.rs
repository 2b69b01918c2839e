use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Sylvester matrix of `f` and `g`, rows of `f` first, coefficients in descending order.
pub fn sylvester(f: &IntPoly, g: &IntPoly) -> Vec<Vec<BigInt>> {
    let m = f.degree();
    let n = g.degree();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    let fd: Vec<BigInt> = f.coeffs().iter().rev().cloned().collect();
    let gd: Vec<BigInt> = g.coeffs().iter().rev().cloned().collect();
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in fd.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in gd.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Fraction-free Gaussian elimination; every intermediate division is exact.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign_flip = !sign_flip;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Res(f, g) = lc(f)^deg g * prod g(alpha) over the roots alpha of f.
pub fn resultant_exact(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.degree() == 0 {
        return Ok(num_traits::pow(f.leading(), g.degree()));
    }
    if g.degree() == 0 {
        return Ok(num_traits::pow(g.leading(), f.degree()));
    }
    Ok(bareiss_det(sylvester(f, g)))
}
