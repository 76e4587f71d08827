//! Square roots in Q_p by Hensel lifting.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::context::{is_prime, pow_mod};
use crate::error::{Error, Result};
use crate::rational::{mod_inverse, mod_small, modulo, pow_p, split_p_power};

/// Selects one of the two square roots of `D` in Q_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// The root whose unit part has the smaller least nonnegative residue mod p.
    #[serde(rename = "+")]
    PlusRoot,
    #[serde(rename = "-")]
    MinusRoot,
}

impl Branch {
    pub fn parse(text: &str) -> Result<Branch> {
        match text.trim() {
            "+" | "plus" => Ok(Branch::PlusRoot),
            "-" | "\u{2212}" | "minus" => Ok(Branch::MinusRoot),
            other => Err(Error::Parse(format!("branch must be '+' or '-', got {other:?}"))),
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Branch::PlusRoot => 1,
            Branch::MinusRoot => -1,
        }
    }
}

/// Both square roots of `D` modulo `p^N`, as least nonnegative residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtResidues {
    pub plus: BigInt,
    pub minus: BigInt,
    pub modulus: BigInt,
}

impl SqrtResidues {
    pub fn branch(&self, branch: Branch) -> &BigInt {
        match branch {
            Branch::PlusRoot => &self.plus,
            Branch::MinusRoot => &self.minus,
        }
    }
}

/// Tonelli-Shanks square root of `a` modulo an odd prime `p`.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

/// The PlusRoot square root of a p-adic unit `u` modulo `p^n`.
pub(crate) fn unit_sqrt(u: &BigInt, p: u64, n: usize) -> Result<BigInt> {
    let residue = mod_small(u, p);
    let root = sqrt_mod_prime(residue, p)
        .ok_or_else(|| Error::NotASquare(u.to_string(), p))?;
    let root = root.min(p - root);
    let mut x = BigInt::from(root);
    let mut precision = 1usize;
    while precision < n {
        precision = (precision * 2).min(n);
        let modulus = pow_p(p, precision);
        // Newton step x <- x - (x^2 - u) / (2x)
        let fx = &x * &x - u;
        let inv = mod_inverse(&(BigInt::from(2) * &x), &modulus);
        x = modulo(&(x - fx * inv), &modulus);
    }
    Ok(modulo(&x, &pow_p(p, n)))
}

/// Square roots of `d` modulo `p^n`.
///
/// `d` needs even valuation and a unit part that is a quadratic residue
/// mod `p`; otherwise it has no square root in Q_p.
pub fn hensel_sqrt(d: &BigInt, p: u64, n: usize) -> Result<SqrtResidues> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (v, unit) = split_p_power(d, p);
    if v % 2 == 1 {
        return Err(Error::NotASquare(d.to_string(), p));
    }
    let half = (v / 2) as usize;
    let modulus = pow_p(p, n);
    let root = unit_sqrt(&unit, p, n.saturating_sub(half).max(1))?;
    let plus = modulo(&(root * pow_p(p, half)), &modulus);
    let minus = modulo(&-&plus, &modulus);
    Ok(SqrtResidues {
        plus,
        minus,
        modulus,
    })
}

/// Legendre-style test for a unit residue.
pub(crate) fn is_unit_square(u: &BigInt, p: u64) -> bool {
    let r = mod_small(u, p);
    r != 0 && pow_mod(r, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_roots() {
        let r = hensel_sqrt(&BigInt::from(6), 5, 2).unwrap();
        assert_eq!(r.plus, BigInt::from(16));
        assert_eq!(r.minus, BigInt::from(9));
        let r = hensel_sqrt(&BigInt::from(101), 5, 3).unwrap();
        assert_eq!(r.plus, BigInt::from(51));
        assert!(matches!(hensel_sqrt(&BigInt::from(2), 5, 1), Err(Error::NotASquare(..))));
        assert!(matches!(hensel_sqrt(&BigInt::from(10), 5, 4), Err(Error::NotASquare(..))));
    }

    #[test]
    fn tonelli_shanks_matches_search() {
        for p in [3u64, 5, 7, 11, 13, 17, 41, 97, 113] {
            for a in 1..p {
                let brute = (1..p).find(|x| x * x % p == a);
                match sqrt_mod_prime(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert!(brute.is_none(), "p={p} a={a}"),
                }
            }
        }
    }

    #[test]
    fn roots_square_back_with_p_power_part() {
        let d = BigInt::from(6 * 25 * 25);
        let r = hensel_sqrt(&d, 5, 12).unwrap();
        for x in [&r.plus, &r.minus] {
            assert_eq!(modulo(&(x * x - &d), &r.modulus), BigInt::zero());
        }
        assert_eq!(modulo(&(&r.plus + &r.minus), &r.modulus), BigInt::zero());
    }
}
