//! Primality, factorization and prime-power decomposition on `u64`.

use crate::error::{Error, Result};

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test.
///
/// Miller-Rabin with the first twelve prime witnesses, which is exact for
/// every 64-bit input.
pub fn is_prime(u: u64) -> bool {
    if u < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if u.is_multiple_of(w) {
            return u == w;
        }
    }
    let mut d = u - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, u);
        if x == 1 || x == u - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, u);
            if x == u - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as `(prime, multiplicity)` pairs in
/// ascending prime order.
pub fn factorize(u: u64) -> Result<Vec<(u64, u32)>> {
    if u < 2 {
        return Err(Error::FactorizeDomain { u });
    }
    let mut factors = Vec::new();
    let mut rest = u;
    let mut d = 2u64;
    let mut rest_is_prime = is_prime(rest);
    while rest > 1 && !rest_is_prime && d.checked_mul(d).is_some_and(|sq| sq <= rest) {
        if rest.is_multiple_of(d) {
            let mut k = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                k += 1;
            }
            factors.push((d, k));
            rest_is_prime = is_prime(rest);
        } else {
            d += if d == 2 { 1 } else { 2 };
        }
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(factors)
}

/// A prime power `q = p^n`.
///
/// Construction rejects values whose square does not fit in a `u64`, since
/// the Bose-Chowla construction works in `GF(q^2)` and on residues mod `q^2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    n: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower { q });
        }
        if q.checked_mul(q).is_none() {
            return Err(Error::TooLarge {
                what: "q^2",
                value: q,
            });
        }
        let factors = factorize(q)?;
        match factors.as_slice() {
            [(p, n)] => Ok(Self { p: *p, n: *n, q }),
            _ => Err(Error::NotPrimePower { q }),
        }
    }

    pub fn from_parts(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { p });
        }
        let q = p.checked_pow(n).filter(|_| n >= 1).ok_or(Error::TooLarge {
            what: "p^n",
            value: p,
        })?;
        Self::new(q)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// `true` iff `q` is a prime power `p^n` with `n >= 1`.
pub fn is_prime_power(q: u64) -> bool {
    q >= 2 && factorize(q).is_ok_and(|f| f.len() == 1)
}
