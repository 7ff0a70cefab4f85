//! Dense polynomials over GF(p), coefficients stored constant term first.
//!
//! Internal helpers for the irreducibility test; the zero polynomial is the
//! empty vector and every result is trimmed of leading zeros.

use super::primes::pow_mod;

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(out)
}

/// Remainder of `a` divided by a nonzero `f`.
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let f = trim(f.to_vec());
    assert!(!f.is_empty(), "division by the zero polynomial");
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    let mut r = trim(a.to_vec());
    while r.len() > df {
        let top = r.len() - 1;
        let c = ((r[top] as u128 * lead_inv as u128) % p as u128) as u64;
        let shift = top - df;
        for (i, &fi) in f.iter().enumerate() {
            let t = ((c as u128 * fi as u128) % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn pow_mod_poly(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's test: a monic `f` of degree `k` is irreducible iff
/// `x^(p^k) = x (mod f)` and `gcd(x^(p^(k/r)) - x, f) = 1` for every prime `r | k`.
pub(crate) fn is_irreducible(f: &[u64], p: u64, prime_divisors_of_degree: &[u64]) -> bool {
    let k = f.len() - 1;
    let x: Poly = vec![0, 1];
    let x_mod = rem(&x, f, p);
    // frobenius[j] = x^(p^j) mod f
    let mut frobenius = Vec::with_capacity(k + 1);
    frobenius.push(x_mod.clone());
    for j in 1..=k {
        let next = pow_mod_poly(&frobenius[j - 1], p, f, p);
        frobenius.push(next);
    }
    if frobenius[k] != x_mod {
        return false;
    }
    prime_divisors_of_degree.iter().all(|&r| {
        let h = sub(&frobenius[k / r as usize], &x, p);
        let g = gcd(&h, f, p);
        g.len() == 1
    })
}
