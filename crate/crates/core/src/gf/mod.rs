//! Exact arithmetic in GF(p^n).
//!
//! Fields are realized as `GF(p)[x] / (f)` for the canonical monic
//! irreducible `f` of the requested degree: monic polynomials are ordered by
//! their coefficient sequences read from the highest degree down to the
//! constant term as base-p integers, and the first irreducible one is taken.
//! Elements are ordered the same way with the constant term least
//! significant, which fixes the primitive element returned by
//! [`FieldCtx::find_primitive`]. Both choices make every downstream
//! construction reproducible without external polynomial tables.

mod poly;
mod primes;

use std::fmt;

use crate::error::{Error, Result};

pub use primes::{factorize, is_prime, is_prime_power, PrimePower};

/// The field `GF(p^degree)` with its defining modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    degree: usize,
    /// Monic modulus, constant term first, length `degree + 1`.
    modulus: Vec<u64>,
    order: u64,
}

/// An element of a [`FieldCtx`], as its coefficient vector (constant term first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Returns the canonical monic irreducible polynomial of the given degree
/// over GF(p), packaged as a field context.
pub fn find_irreducible(p: u64, degree: usize) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    if degree == 0 {
        return Err(Error::InvalidConfig(
            "extension degree must be at least 1".into(),
        ));
    }
    if p >= 1 << 32 {
        return Err(Error::TooLarge {
            what: "p",
            value: p,
        });
    }
    let order = u32::try_from(degree)
        .ok()
        .and_then(|d| p.checked_pow(d))
        .ok_or(Error::TooLarge {
            what: "p^degree",
            value: p,
        })?;
    let degree_primes: Vec<u64> = if degree > 1 {
        factorize(degree as u64)?
            .into_iter()
            .map(|(r, _)| r)
            .collect()
    } else {
        Vec::new()
    };
    // candidates x^degree + (lower coefficients), lower part enumerated as base-p digits
    for v in 0..order {
        let mut modulus = digits(v, p, degree);
        modulus.push(1);
        if poly::is_irreducible(&modulus, p, &degree_primes) {
            return Ok(FieldCtx {
                p,
                degree,
                modulus,
                order,
            });
        }
    }
    unreachable!("an irreducible polynomial exists in every degree")
}

fn digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

impl FieldCtx {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of field elements, `p^degree`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Builds an element from at most `degree` coefficients, each in `[0, p)`.
    pub fn element(&self, mut coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() > self.degree || coeffs.iter().any(|&c| c >= self.p) {
            return Err(self.foreign());
        }
        coeffs.resize(self.degree, 0);
        Ok(FieldElement { coeffs })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    /// The prime-subfield element `c mod p`.
    pub fn constant(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.degree];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// The class of `x` itself (for degree 1 this is `-f(0)`).
    pub fn generator(&self) -> FieldElement {
        if self.degree == 1 {
            self.constant((self.p - self.modulus[0]) % self.p)
        } else {
            let mut coeffs = vec![0; self.degree];
            coeffs[1] = 1;
            FieldElement { coeffs }
        }
    }

    /// Element at position `index` of the canonical order.
    pub fn from_index(&self, index: u64) -> Result<FieldElement> {
        if index >= self.order {
            return Err(self.foreign());
        }
        Ok(FieldElement {
            coeffs: digits(index, self.p, self.degree),
        })
    }

    /// Position of `a` in the canonical order.
    pub fn index_of(&self, a: &FieldElement) -> Result<u64> {
        self.check(a)?;
        Ok(a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_raw(a, b))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub_raw(a, b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_raw(a, b))
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, a: &FieldElement, e: u64) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.pow_raw(a, e))
    }

    /// `true` iff `g` has multiplicative order `p^degree - 1`.
    pub fn is_primitive(&self, g: &FieldElement) -> Result<bool> {
        self.check(g)?;
        if g.is_zero() {
            return Err(Error::ZeroElement);
        }
        let group = self.order - 1;
        let primes = self.group_order_primes()?;
        Ok(self.is_primitive_raw(g, group, &primes))
    }

    /// The canonically smallest primitive element.
    pub fn find_primitive(&self) -> FieldElement {
        let group = self.order - 1;
        let primes = self
            .group_order_primes()
            .expect("group order factorization cannot fail for order >= 2");
        (1..self.order)
            .map(|i| FieldElement {
                coeffs: digits(i, self.p, self.degree),
            })
            .find(|g| self.is_primitive_raw(g, group, &primes))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// Frobenius fixed-point test: `x^q = x` iff `x` lies in the subfield GF(q),
    /// where `q = p^(degree/2)`.
    pub fn in_subfield(&self, x: &FieldElement, q: u64) -> Result<bool> {
        self.check(x)?;
        if self.degree % 2 == 1 {
            return Err(Error::OddDegree {
                degree: self.degree,
            });
        }
        let expected = self.p.checked_pow((self.degree / 2) as u32);
        if expected != Some(q) {
            return Err(Error::SubfieldMismatch {
                q,
                p: self.p,
                degree: self.degree,
            });
        }
        Ok(self.pow_raw(x, q) == *x)
    }

    fn group_order_primes(&self) -> Result<Vec<u64>> {
        let group = self.order - 1;
        if group < 2 {
            return Ok(Vec::new());
        }
        Ok(factorize(group)?.into_iter().map(|(r, _)| r).collect())
    }

    fn is_primitive_raw(&self, g: &FieldElement, group: u64, primes: &[u64]) -> bool {
        let one = self.one();
        !g.is_zero() && primes.iter().all(|&r| self.pow_raw(g, group / r) != one)
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.coeffs.len() != self.degree || a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(self.foreign());
        }
        Ok(())
    }

    fn foreign(&self) -> Error {
        Error::ForeignElement {
            p: self.p,
            degree: self.degree,
        }
    }

    pub(crate) fn add_raw(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub(crate) fn sub_raw(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub(crate) fn mul_raw(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree;
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * d - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        // x^d = -(f_0 + f_1 x + ... + f_{d-1} x^{d-1})
        for top in (d..2 * d - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (k, &f) in self.modulus[..d].iter().enumerate() {
                let idx = top - d + k;
                prod[idx] = (prod[idx] + (p - c) * f as u128) % p;
            }
        }
        FieldElement {
            coeffs: prod[..d].iter().map(|&c| c as u64).collect(),
        }
    }

    pub(crate) fn pow_raw(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            base = self.mul_raw(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn fmt_poly(coeffs: &[u64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => var,
                _ => format!("{c}{var}"),
            }
        })
        .collect();
    if terms.is_empty() {
        write!(f, "0")
    } else {
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(&self.coeffs, f)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod ", self.p, self.degree)?;
        fmt_poly(&self.modulus, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, d: usize) -> FieldCtx {
        find_irreducible(p, d).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(gf(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(gf(2, 1).modulus(), &[0, 1]);
        assert_eq!(gf(3, 2).to_string(), "GF(3^2) mod x^2 + 1");
        assert_eq!(find_irreducible(4, 2), Err(Error::NotPrime { p: 4 }));
    }

    #[test]
    fn canonical_modulus_is_first_irreducible() {
        // brute force: a reducible monic of degree k has a monic factor of degree <= k/2
        for (p, k) in [
            (2u64, 2usize),
            (2, 3),
            (2, 4),
            (3, 2),
            (3, 3),
            (5, 2),
            (7, 2),
            (2, 6),
        ] {
            let ctx = gf(p, k);
            let is_irreducible_brute = |f: &[u64]| {
                (1..=k / 2).all(|dd| {
                    (0..p.pow(dd as u32)).all(|v| {
                        let mut g = digits(v, p, dd);
                        g.push(1);
                        !poly::rem(f, &g, p).is_empty()
                    })
                })
            };
            assert!(is_irreducible_brute(ctx.modulus()));
            let rank = |f: &[u64]| f[..k].iter().rev().fold(0u64, |a, &c| a * p + c);
            for v in 0..rank(ctx.modulus()) {
                let mut f = digits(v, p, k);
                f.push(1);
                assert!(
                    !is_irreducible_brute(&f),
                    "{f:?} precedes the canonical modulus"
                );
            }
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f4 = gf(2, 2);
        let x = f4.generator();
        assert_eq!(f4.mul(&x, &x).unwrap(), f4.element(vec![1, 1]).unwrap());
        let a = f4.element(vec![1, 1]).unwrap();
        assert_eq!(f4.add(&a, &f4.zero()).unwrap(), a);

        let f9 = gf(3, 2);
        let xp1 = f9.element(vec![1, 1]).unwrap();
        assert_eq!(f9.pow(&xp1, 2).unwrap(), f9.element(vec![0, 2]).unwrap());
        assert_eq!(f9.pow(&xp1, 0).unwrap(), f9.one());
    }

    #[test]
    fn foreign_elements_rejected() {
        let f4 = gf(2, 2);
        let f9 = gf(3, 2);
        let a = f9.element(vec![2, 2]).unwrap();
        assert!(matches!(
            f4.mul(&a, &f4.one()),
            Err(Error::ForeignElement { .. })
        ));
        let b = gf(2, 3).one();
        assert!(f4.add(&b, &f4.one()).is_err());
        assert!(f4.element(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn primitivity() {
        let f4 = gf(2, 2);
        assert!(f4.is_primitive(&f4.generator()).unwrap());
        assert!(!f4.is_primitive(&f4.one()).unwrap());
        assert_eq!(f4.is_primitive(&f4.zero()), Err(Error::ZeroElement));
        assert_eq!(f4.find_primitive(), f4.generator());

        let f9 = gf(3, 2);
        assert!(!f9.is_primitive(&f9.generator()).unwrap());
        assert_eq!(f9.find_primitive(), f9.element(vec![1, 1]).unwrap());

        let f2 = gf(2, 1);
        assert_eq!(f2.find_primitive(), f2.one());
    }

    fn brute_order(ctx: &FieldCtx, g: &FieldElement) -> u64 {
        let one = ctx.one();
        let mut acc = g.clone();
        let mut k = 1;
        while acc != one {
            acc = ctx.mul(&acc, g).unwrap();
            k += 1;
        }
        k
    }

    #[test]
    fn find_primitive_is_canonically_first() {
        for (p, k) in [
            (2u64, 2usize),
            (3, 2),
            (2, 4),
            (5, 2),
            (2, 6),
            (7, 2),
            (3, 4),
        ] {
            let ctx = gf(p, k);
            let g = ctx.find_primitive();
            assert_eq!(brute_order(&ctx, &g), ctx.order() - 1);
            for i in 1..ctx.index_of(&g).unwrap() {
                let h = ctx.from_index(i).unwrap();
                assert!(brute_order(&ctx, &h) < ctx.order() - 1);
            }
        }
    }

    #[test]
    fn fermat_holds_exhaustively() {
        for (p, k) in [
            (2u64, 2usize),
            (3, 2),
            (2, 4),
            (5, 2),
            (7, 2),
            (2, 6),
            (3, 4),
            (11, 2),
            (13, 2),
            (2, 8),
        ] {
            let ctx = gf(p, k);
            assert!(ctx.order() <= 10_000);
            for i in 1..ctx.order() {
                let a = ctx.from_index(i).unwrap();
                assert_eq!(ctx.pow(&a, ctx.order() - 1).unwrap(), ctx.one());
            }
        }
    }

    #[test]
    fn subfield_examples() {
        let f4 = gf(2, 2);
        assert!(f4.in_subfield(&f4.zero(), 2).unwrap());
        assert!(!f4.in_subfield(&f4.generator(), 2).unwrap());
        let f9 = gf(3, 2);
        assert!(f9.in_subfield(&f9.constant(2), 3).unwrap());
        let f8 = gf(2, 3);
        assert_eq!(
            f8.in_subfield(&f8.one(), 2),
            Err(Error::OddDegree { degree: 3 })
        );
        assert!(matches!(
            f9.in_subfield(&f9.one(), 9),
            Err(Error::SubfieldMismatch { .. })
        ));
    }

    #[test]
    fn subfield_matches_closure_enumeration() {
        // GF(q) inside GF(q^2) is {0} together with the q - 1 powers of g^(q+1)
        for (p, k, q) in [
            (2u64, 2usize, 2u64),
            (3, 2, 3),
            (2, 4, 4),
            (5, 2, 5),
            (7, 2, 7),
            (2, 6, 8),
            (3, 4, 9),
        ] {
            let ctx = gf(p, k);
            let g = ctx.find_primitive();
            let h = ctx.pow(&g, q + 1).unwrap();
            let mut sub = vec![ctx.zero()];
            let mut acc = ctx.one();
            for _ in 0..q - 1 {
                sub.push(acc.clone());
                acc = ctx.mul(&acc, &h).unwrap();
            }
            for i in 0..ctx.order() {
                let a = ctx.from_index(i).unwrap();
                assert_eq!(
                    ctx.in_subfield(&a, q).unwrap(),
                    sub.contains(&a),
                    "{a} in GF({q})"
                );
            }
        }
    }

    #[test]
    fn display() {
        let f9 = gf(3, 2);
        assert_eq!(f9.element(vec![1, 2]).unwrap().to_string(), "2x + 1");
        assert_eq!(f9.zero().to_string(), "0");
    }
}
