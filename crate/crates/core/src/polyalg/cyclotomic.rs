use std::collections::BTreeMap;

use super::IntPoly;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Phi_d by exact division of t^d - 1 by the lower cyclotomic factors.
pub fn cyclotomic(d: u64) -> IntPoly {
    let mut memo = BTreeMap::new();
    cyclotomic_memo(d, &mut memo)
}

fn cyclotomic_memo(d: u64, memo: &mut BTreeMap<u64, IntPoly>) -> IntPoly {
    if let Some(p) = memo.get(&d) {
        return p.clone();
    }
    let mut p = IntPoly::cyclic(d as usize);
    for e in divisors(d) {
        if e < d {
            let q = cyclotomic_memo(e, memo);
            p = p.exact_div(&q).expect("cyclotomic factor divides t^d - 1");
        }
    }
    memo.insert(d, p.clone());
    p
}

/// All orders `d` whose cyclotomic polynomial has degree at most `n`.
pub fn orders_up_to_degree(n: usize) -> Vec<u64> {
    let bound = 2 * (n as u64) * (n as u64) + 6;
    (1..=bound).filter(|&d| euler_phi(d) as usize <= n).collect()
}
