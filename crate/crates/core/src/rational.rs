//! Exact rationals and the integer helpers the rest of the crate leans on.
//!
//! `Rational` is `num_rational::BigRational`, which already keeps values
//! reduced with a positive denominator (0 is stored as 0/1).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::valuation::ExtendedValuation;

pub type Rational = BigRational;

/// Parses `"n"` or `"n/d"` with an optional leading sign. Both ASCII `-` and
/// the Unicode minus sign are accepted.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let cleaned: String = text
        .trim()
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    let bad = || Error::Parse(format!("not a rational literal: {text:?}"));
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n, d),
        None => (cleaned.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(p: u64) -> BigInt {
    BigInt::from(p)
}

pub fn pow_p(p: u64, e: usize) -> BigInt {
    num_traits::pow(big(p), e)
}

/// `p^e` as a rational, for any sign of `e`.
pub fn pow_p_rational(p: u64, e: i64) -> Rational {
    let mag = pow_p(p, e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Exponent of `p` in a nonzero integer. Returns `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p_big = big(p);
    let mut current = n.abs();
    let mut count = 0u64;
    loop {
        let (q, r) = current.div_rem(&p_big);
        if !r.is_zero() {
            return Some(count);
        }
        current = q;
        count += 1;
        // Strip larger powers once the first factor is known to divide.
        let mut power = &p_big * &p_big;
        let mut step = 2u64;
        loop {
            let (q, r) = current.div_rem(&power);
            if !r.is_zero() {
                break;
            }
            current = q;
            count += step;
            power = &power * &power;
            step *= 2;
        }
    }
}

/// Splits a nonzero integer as `p^v * unit` with `p` not dividing `unit`.
pub fn split_p_power(n: &BigInt, p: u64) -> (u64, BigInt) {
    let v = vp_int(n, p).expect("split_p_power on zero");
    (v, n / pow_p(p, v as usize))
}

/// p-adic valuation of a rational; `Infinity` at zero.
pub fn vp(x: &Rational, p: u64) -> ExtendedValuation {
    match vp_int(x.numer(), p) {
        None => ExtendedValuation::Infinity,
        Some(vn) => {
            let vd = vp_int(x.denom(), p).unwrap_or(0);
            ExtendedValuation::Finite(vn as i64 - vd as i64)
        }
    }
}

/// Archimedean absolute value.
pub fn arch_abs(x: &Rational) -> Rational {
    x.abs()
}

/// Least nonnegative residue of `n` modulo `m > 0`.
pub fn modulo(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n % m;
    if r.sign() == Sign::Minus {
        r + m
    } else {
        r
    }
}

pub fn mod_small(n: &BigInt, p: u64) -> u64 {
    let r = modulo(n, &big(p));
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// Inverse of `a` modulo `m`; `a` must be coprime to `m`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let a = modulo(a, m);
    if m.is_one() {
        return BigInt::zero();
    }
    a.modinv(m).expect("mod_inverse of a non-unit")
}

/// True when the rational lies in Z[1/p], i.e. its denominator is a power of `p`.
pub fn in_z_inv_p(x: &Rational, p: u64) -> bool {
    let d = x.denom();
    match vp_int(d, p) {
        Some(v) => (d / pow_p(p, v as usize)).is_one(),
        None => false,
    }
}

/// `base^exp` compared against `other`, used for cross-multiplied checks.
pub fn pow_big(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

/// Integer square root test.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_rational_square(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if is_perfect_square(n) && is_perfect_square(d) {
        Some(Rational::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}

/// Writes `n = s^2 * c` after removing square factors of primes below 10^4
/// (and the remaining cofactor when it is itself a square).
pub fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut core = n.clone();
    let mut s = BigInt::one();
    let mut q = 2u64;
    while q < 10_000 {
        let qq = BigInt::from(q * q);
        if qq > core.abs() {
            break;
        }
        while (&core % &qq).is_zero() {
            core /= &qq;
            s *= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if is_perfect_square(&core) {
        let r = core.sqrt();
        return (s * r, BigInt::one());
    }
    (s, core)
}
