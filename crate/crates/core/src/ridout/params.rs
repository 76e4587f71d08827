use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use super::fixed;
use super::lognum::LogNumber;
use super::minpoly::c_hat_of;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest `m` for which `k` and `l` are computed as exact integers.
pub const EXACT_M_LIMIT: u64 = 200_000;

/// Extra fractional bits beyond the size of `m 2^m`.
const GUARD_BITS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RidoutConditions {
    /// `delta < 1/m`.
    pub delta_below_inverse_m: bool,
    /// `2m(1 + 5 delta) / (m - 4(1 + 3 delta) n sqrt(m) - 2) < 2 + eps`.
    pub ratio_below_two_plus_eps: bool,
    /// `2 + 4(1 + 3 delta) n sqrt(m) < m`.
    pub sqrt_term_below_m: bool,
}

impl RidoutConditions {
    pub fn all(&self) -> bool {
        self.delta_below_inverse_m && self.ratio_below_two_plus_eps && self.sqrt_term_below_m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RidoutParams {
    pub n: u32,
    #[serde(serialize_with = "crate::report::as_string")]
    pub epsilon: Rational,
    #[serde(serialize_with = "crate::report::as_string")]
    pub m: BigInt,
    /// `m 2^m`, so that `delta = 10^(-log10_delta_inv)`; kept exactly for `m <= EXACT_M_LIMIT`.
    #[serde(serialize_with = "crate::report::as_opt_string")]
    pub log10_delta_inv: Option<BigInt>,
    /// `log10_delta_inv` itself as a magnitude.
    pub log10_delta_inv_size: LogNumber,
    pub c_hat: f64,
    pub conditions: RidoutConditions,
    pub k: LogNumber,
    pub l: LogNumber,
    #[serde(serialize_with = "crate::report::as_opt_string")]
    pub k_exact: Option<BigInt>,
    #[serde(serialize_with = "crate::report::as_opt_string")]
    pub l_exact: Option<BigInt>,
}

pub(crate) fn check_epsilon(eps: &Rational, max: &Rational) -> Result<()> {
    if !eps.is_positive() || eps > max {
        return Err(Error::EpsilonOutOfRange {
            eps: eps.to_string(),
            max: max.to_string(),
        });
    }
    Ok(())
}

/// `floor(100 n^2 / eps^2) + 1`.
pub fn ridout_m(n: u32, eps: &Rational) -> BigInt {
    let (u, w) = (eps.numer(), eps.denom());
    (BigInt::from(100u32) * BigInt::from(n).pow(2) * w * w).div_floor(&(u * u)) + 1
}

/// `floor(x / y)` for fixed-point `x, y > 0`, or `None` when the quotient is
/// too close to an integer to decide at this precision.
fn floor_ratio(x: &BigInt, y: &BigInt, bits: u64) -> Option<BigInt> {
    let q = (x << bits) / y;
    let one = BigInt::one() << bits;
    let frac = q.mod_floor(&one);
    let margin = BigInt::one() << (bits - 32);
    (frac > margin && frac < &one - &margin).then(|| q >> bits)
}

/// Smallest `l` with `(1 + eps)^l > 2 * 10^t`.
pub fn smallest_l(eps: &Rational, t: &BigInt) -> BigInt {
    let mut bits = t.bits() + GUARD_BITS;
    loop {
        let x = fixed::ln2(bits) + t * fixed::ln10(bits);
        if let Some(q) = floor_ratio(&x, &fixed::ln_one_plus(eps, bits), bits) {
            return q + 1;
        }
        bits *= 2;
    }
}

/// Smallest `k` with `(1 + eps)^(k-2) ln 2 > C_hat m 10^(2t)`, where
/// `C_hat = 2 + 2 ln(2 + a_bar)`.
pub fn smallest_k(eps: &Rational, a_bar: &BigInt, m: &BigInt, t: &BigInt) -> BigInt {
    let mut bits = t.bits() + m.bits() + GUARD_BITS;
    loop {
        let c_hat = fixed::from_int(&BigInt::from(2), bits) + fixed::ln_rational(&Rational::from_integer(a_bar + 2), bits) * 2;
        let x = fixed::ln_fixed(&c_hat, bits) + fixed::ln_rational(&Rational::from_integer(m.clone()), bits)
            + t * fixed::ln10(bits) * 2
            - fixed::ln_fixed(&fixed::ln2(bits), bits);
        if let Some(q) = floor_ratio(&x, &fixed::ln_one_plus(eps, bits), bits) {
            return q + 3;
        }
        bits *= 2;
    }
}

/// `t` is `None` when it is too large to materialize; then `t >= m >= digits(m)`.
fn conditions(n: u32, eps: &Rational, m: &BigInt, t: Option<&BigInt>) -> RidoutConditions {
    // delta is replaced by the upper bound 10^-e and sqrt(m) by its ceiling;
    // both sides are monotone, so a true verdict carries over to the exact values.
    let digits = m.to_string().len();
    let delta = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits as u32 + 10));
    let root = m.sqrt();
    let s = if &(&root * &root) == m { root } else { root + 1 };
    let one = Rational::one();
    let mr = Rational::from_integer(m.clone());
    let ns = Rational::from_integer(BigInt::from(n) * s);
    let three_delta = &delta * Rational::from_integer(3.into());
    let five_delta = &delta * Rational::from_integer(5.into());
    let sqrt_term = Rational::from_integer(4.into()) * (&one + three_delta) * ns;
    let two = Rational::from_integer(2.into());
    let denom = &mr - &sqrt_term - &two;
    let lhs = &two * &mr * (&one + five_delta);
    RidoutConditions {
        delta_below_inverse_m: t.is_none_or(|t| t >= &BigInt::from(digits)),
        ratio_below_two_plus_eps: denom.is_positive() && lhs < (&two + eps) * &denom,
        sqrt_term_below_m: &two + &sqrt_term < mr,
    }
}

/// `k ~ 2 t ln 10 / L` and `l ~ t ln 10 / L` with `L = ln(1 + eps)`, from `ln t`.
fn approximate_kl(eps: &Rational, ln_t: &BigInt, bits: u64) -> (LogNumber, LogNumber) {
    let ln_l = fixed::ln_fixed(&fixed::ln10(bits), bits) + ln_t - fixed::ln_fixed(&fixed::ln_one_plus(eps, bits), bits);
    (LogNumber::from_ln_fixed(&(&ln_l + fixed::ln2(bits)), bits), LogNumber::from_ln_fixed(&ln_l, bits))
}

/// Parameters of the gap principle for degree `n`, `0 < eps <= 1/3`, and a
/// polynomial whose largest non-leading coefficient is `a_bar` in absolute value.
pub fn ridout_params(n: u32, eps: &Rational, a_bar: &BigInt) -> Result<RidoutParams> {
    if n < 2 {
        return Err(Error::InvalidPolynomial("degree must be at least 2".into()));
    }
    check_epsilon(eps, &Rational::new(1.into(), 3.into()))?;
    let m = ridout_m(n, eps);
    let m_small: Option<u64> = num_traits::ToPrimitive::to_u64(&m);
    let exact = m_small.is_some_and(|m| m <= EXACT_M_LIMIT);
    let t: Option<BigInt> = exact.then(|| &m << m_small.unwrap());
    let bits = 2 * m.bits() + GUARD_BITS;
    let ln_t = fixed::ln_rational(&Rational::from_integer(m.clone()), bits) + fixed::ln2(bits) * &m;
    let (k, l, k_exact, l_exact) = match &t {
        Some(t) => {
            let k = smallest_k(eps, a_bar, &m, t);
            let l = smallest_l(eps, t);
            (LogNumber::from_bigint(&k), LogNumber::from_bigint(&l), Some(k), Some(l))
        }
        None => {
            let (k, l) = approximate_kl(eps, &ln_t, bits);
            (k, l, None, None)
        }
    };
    Ok(RidoutParams {
        n,
        epsilon: eps.clone(),
        conditions: conditions(n, eps, &m, t.as_ref()),
        log10_delta_inv_size: LogNumber::from_ln_fixed(&ln_t, bits),
        c_hat: c_hat_of(a_bar),
        m,
        log10_delta_inv: t,
        k,
        l,
        k_exact,
        l_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn eps(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn smallest_m() {
        assert_eq!(ridout_m(2, &eps("1/3")), BigInt::from(3601));
        assert_eq!(ridout_m(2, &eps("1/4")), BigInt::from(6401));
        assert_eq!(ridout_m(3, &eps("2/7")), BigInt::from(11026));
    }

    #[test]
    fn params_for_quadratics() {
        let p = ridout_params(2, &eps("1/3"), &BigInt::from(6)).unwrap();
        assert_eq!(p.m, BigInt::from(3601));
        let t = p.log10_delta_inv.unwrap();
        assert_eq!(t, BigInt::from(3601) << 3601u32);
        assert_eq!(t.to_string().len(), 1088);
        assert!(p.conditions.all());
        let (k, l) = (p.k_exact.unwrap(), p.l_exact.unwrap());
        // k - 3 and l - 1 are about 2 t ln10 / L and t ln10 / L
        let gap: BigInt = &k - 3 - (&l - 1) * 2;
        assert!(gap.abs() < BigInt::from(64));
        assert_eq!(p.k, LogNumber::from_bigint(&k));
    }

    #[test]
    fn small_exponents() {
        // (4/3)^l > 2 * 10^t, checked exactly
        for t in 0..40u32 {
            let l = smallest_l(&eps("1/3"), &BigInt::from(t));
            let l = u32::try_from(l).unwrap();
            let bound = BigInt::from(2) * BigInt::from(10u32).pow(t);
            assert!(BigInt::from(4u32).pow(l) > &bound * BigInt::from(3u32).pow(l));
            assert!(BigInt::from(4u32).pow(l - 1) <= &bound * BigInt::from(3u32).pow(l - 1));
        }
    }

    #[test]
    fn rejects_bad_epsilon() {
        for bad in ["0", "-1/3", "1/2"] {
            assert!(matches!(ridout_params(2, &eps(bad), &BigInt::one()), Err(Error::EpsilonOutOfRange { .. })));
        }
        assert!(ridout_params(1, &eps("1/3"), &BigInt::one()).is_err());
    }

    #[test]
    fn approximation_matches_exact_values() {
        let p = ridout_params(2, &eps("1/3"), &BigInt::from(6)).unwrap();
        let bits = 2 * p.m.bits() + GUARD_BITS;
        let ln_t = fixed::ln_rational(&Rational::from_integer(p.m.clone()), bits) + fixed::ln2(bits) * &p.m;
        let (k, l) = approximate_kl(&p.epsilon, &ln_t, bits);
        assert_eq!(k.log10_int, p.k.log10_int);
        assert_eq!(l.log10_int, p.l.log10_int);
        assert!((k.log10_frac - p.k.log10_frac).abs() < 1e-12);
        assert!((l.log10_frac - p.l.log10_frac).abs() < 1e-12);
    }

    #[test]
    fn approximate_path_continues_exact_path() {
        let exact = ridout_params(2, &eps("1/6"), &BigInt::one()).unwrap();
        let approx = ridout_params(2, &eps("1/30"), &BigInt::one()).unwrap();
        assert!(approx.k_exact.is_none() && approx.conditions.all());
        assert!(approx.k > exact.k && approx.l > exact.l && approx.k > approx.l);
        let tiny = ridout_params(2, &eps("1/10000"), &BigInt::one()).unwrap();
        assert!(tiny.log10_delta_inv.is_none() && tiny.conditions.all());
        assert!(tiny.log10_delta_inv_size > approx.log10_delta_inv_size);
    }
}
