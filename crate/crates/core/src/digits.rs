//! Digit expansions `sum a_i p^i` and the truncating floor `s`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::context::{Mode, PadicContext};
use crate::error::{Error, Result};
use crate::rational::{big, mod_inverse, mod_small, pow_p_rational, split_p_power, Rational};

/// The digits `a_r, a_{r+1}, ...` of a p-adic number, lowest exponent first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicDigitExpansion {
    pub p: u64,
    pub mode: Mode,
    pub start_exponent: i64,
    pub digits: Vec<i64>,
}

impl PadicDigitExpansion {
    /// `sum_i digits[i] * p^(start_exponent + i)` as an exact rational.
    pub fn truncation(&self) -> Rational {
        let mut acc = BigInt::zero();
        let p = big(self.p);
        for d in self.digits.iter().rev() {
            acc = acc * &p + BigInt::from(*d);
        }
        Rational::from_integer(acc) * pow_p_rational(self.p, self.start_exponent)
    }
}

/// Splits a nonzero rational as `p^r * num/den` with `p` dividing neither.
pub(crate) fn unit_decomposition(x: &Rational, p: u64) -> (i64, BigInt, BigInt) {
    let (vn, num) = split_p_power(x.numer(), p);
    let (vd, den) = split_p_power(x.denom(), p);
    (vn as i64 - vd as i64, num, den)
}

/// First `count` digits of the p-adic unit `num/den`.
fn unit_digits(mut num: BigInt, den: &BigInt, p: u64, mode: Mode, count: usize) -> Vec<i64> {
    let p_big = big(p);
    let den_inv = mod_inverse(den, &p_big);
    let den_inv = mod_small(&den_inv, p);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let residue = mod_small(&num, p);
        let digit = mode.digit(((residue as u128 * den_inv as u128) % p as u128) as u64, p);
        out.push(digit);
        num = (num - den * BigInt::from(digit)) / &p_big;
    }
    out
}

/// Digits of an integer (taken modulo `p^count`) in the mode's digit set.
pub(crate) fn residue_digits(value: &BigInt, p: u64, mode: Mode, count: usize) -> Vec<i64> {
    unit_digits(value.clone(), &BigInt::one(), p, mode, count)
}

/// The valuation `r = v_p(x)` and the first `count` digits of `x`.
pub fn digits(x: &Rational, ctx: &PadicContext, count: usize) -> Result<PadicDigitExpansion> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (r, num, den) = unit_decomposition(x, ctx.p());
    Ok(PadicDigitExpansion {
        p: ctx.p(),
        mode: ctx.mode(),
        start_exponent: r,
        digits: unit_digits(num, &den, ctx.p(), ctx.mode(), count),
    })
}

/// `s(x) = sum_{i=r}^{0} a_i p^i`; zero when `v_p(x) > 0` (empty sum).
pub fn padic_floor_rational(x: &Rational, ctx: &PadicContext) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let (r, num, den) = unit_decomposition(x, ctx.p());
    if r > 0 {
        return Rational::zero();
    }
    let count = (1 - r) as usize;
    PadicDigitExpansion {
        p: ctx.p(),
        mode: ctx.mode(),
        start_exponent: r,
        digits: unit_digits(num, &den, ctx.p(), ctx.mode(), count),
    }
    .truncation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, vp};
    use crate::valuation::ExtendedValuation;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn ctx(p: u64, mode: Mode) -> PadicContext {
        PadicContext::new(p, mode).unwrap()
    }

    #[test]
    fn digits_of_one_third() {
        let d = digits(&r("1/3"), &ctx(5, Mode::Ruban), 3).unwrap();
        assert_eq!((d.start_exponent, d.digits.clone()), (0, vec![2, 3, 1]));
        // 3 * (2 + 3*5 + 1*25) = 126 = 1 mod 125
        assert_eq!(d.truncation(), r("42"));

        let d = digits(&r("1/3"), &ctx(5, Mode::Browkin), 2).unwrap();
        assert_eq!((d.start_exponent, d.digits.clone()), (0, vec![2, -2]));
        assert_eq!(d.truncation(), r("-8"));

        let d = digits(&r("1/5"), &ctx(5, Mode::Ruban), 1).unwrap();
        assert_eq!((d.start_exponent, d.digits), (-1, vec![1]));
    }

    #[test]
    fn digits_of_zero_fail() {
        assert_eq!(digits(&r("0"), &ctx(5, Mode::Ruban), 3), Err(Error::ZeroInput));
    }

    #[test]
    fn floors() {
        assert_eq!(padic_floor_rational(&r("1/3"), &ctx(5, Mode::Browkin)), r("2"));
        assert_eq!(padic_floor_rational(&r("-3/5"), &ctx(5, Mode::Ruban)), r("22/5"));
        assert_eq!(padic_floor_rational(&r("-3/5"), &ctx(5, Mode::Browkin)), r("-3/5"));
        assert_eq!(padic_floor_rational(&r("9"), &ctx(5, Mode::Ruban)), r("4"));
        assert_eq!(padic_floor_rational(&r("9"), &ctx(5, Mode::Browkin)), r("-1"));
        assert_eq!(padic_floor_rational(&r("10/3"), &ctx(5, Mode::Browkin)), r("0"));
        assert_eq!(padic_floor_rational(&r("0"), &ctx(5, Mode::Browkin)), r("0"));
    }

    #[test]
    fn floor_leaves_positive_valuation() {
        for p in [3u64, 5, 7, 11] {
            for mode in [Mode::Browkin, Mode::Ruban] {
                for (n, d) in [(1, 3), (-7, 250), (13, 1), (99, 49), (-1, 121), (2, 27)] {
                    let x = Rational::new(n.into(), d.into());
                    let s = padic_floor_rational(&x, &ctx(p, mode));
                    assert!(vp(&(&x - &s), p) > ExtendedValuation::Finite(0));
                }
            }
        }
    }
}
