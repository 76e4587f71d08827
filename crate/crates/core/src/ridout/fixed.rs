//! Binary fixed-point logarithms on `BigInt`: a value `x` is stored as
//! `round(x * 2^bits)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// `atanh(a/b) * 2^bits` for `0 <= a/b < 1`, by the odd power series.
pub(crate) fn atanh_ratio(a: &BigInt, b: &BigInt, bits: u64) -> BigInt {
    let mut term = (a << bits) / b;
    let (a2, b2) = (a * a, b * b);
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * j + 1);
        term = term * &a2 / &b2;
        j += 1;
    }
    sum
}

/// `atanh(1/q) * 2^bits`; divisions by small integers keep each term linear in `bits`.
fn atanh_inv(q: u64, bits: u64) -> BigInt {
    let q2 = BigInt::from(q * q);
    let mut term = (BigInt::one() << bits) / q;
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * j + 1);
        term /= &q2;
        j += 1;
    }
    sum
}

/// `ln 2 = 2 atanh(1/3)`.
pub(crate) fn ln2(bits: u64) -> BigInt {
    (atanh_inv(3, bits + 8) * 2) >> 8
}

/// `ln 10 = 3 ln 2 + ln(5/4)`, with `ln(5/4) = 2 atanh(1/9)`.
pub(crate) fn ln10(bits: u64) -> BigInt {
    let g = bits + 8;
    (atanh_inv(3, g) * 6 + atanh_inv(9, g) * 2) >> 8
}

/// `ln x` for a positive fixed-point `x`.
pub(crate) fn ln_fixed(x: &BigInt, bits: u64) -> BigInt {
    assert!(x.is_positive(), "logarithm of a non-positive value");
    let g = bits + 16;
    let x = x << 16u32;
    // x = 2^s * y with y in [1, 2)
    let s = x.bits() as i64 - 1 - g as i64;
    let y = if s >= 0 { &x >> s as u64 } else { &x << (-s) as u64 };
    let one = BigInt::one() << g;
    let t = ((&y - &one) << g) / (&y + &one);
    let t2 = (&t * &t) >> g;
    let mut term = t;
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * j + 1);
        term = (term * &t2) >> g;
        j += 1;
    }
    (sum * 2 + ln2(g) * s) >> 16
}

/// `ln r` for a positive rational.
pub(crate) fn ln_rational(r: &Rational, bits: u64) -> BigInt {
    let g = bits + 16;
    let x = (r.numer() << g) / r.denom();
    ln_fixed(&x, g) >> 16
}

/// `ln(1 + u/w) = 2 atanh(u / (2w + u))`.
pub(crate) fn ln_one_plus(eps: &Rational, bits: u64) -> BigInt {
    let (u, w) = (eps.numer(), eps.denom());
    (atanh_ratio(u, &(w * 2 + u), bits + 4) * 2) >> 4
}

pub(crate) fn from_int(n: &BigInt, bits: u64) -> BigInt {
    n << bits
}

/// Nearest `f64` to a fixed-point value.
pub(crate) fn to_f64(x: &BigInt, bits: u64) -> f64 {
    let (v, b) = if bits > 64 { (x >> (bits - 64), 64) } else { (x.clone(), bits) };
    v.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(b as i32)
}
