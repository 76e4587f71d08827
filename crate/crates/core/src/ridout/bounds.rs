use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use super::fixed;
use super::lognum::LogNumber;
use super::minpoly::{c_hat_of, MinimalPolynomial};
use super::params::{check_epsilon, ridout_m, ridout_params};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// Solutions of the inequality with the factor 1/2, `eps <= 1/3`.
    TheoremHalf,
    /// Solutions of the inequality without the factor, `eps <= 2/3`.
    CorollaryFull,
    /// The single-exponential form `exp(c_1 eps^-2)`, `eps <= 2/3`.
    RemarkSingleExp,
    /// `k + (m - 1) l`, `eps <= 1/3`.
    #[serde(rename = "exact-kl")]
    ExactKL,
}

impl BoundVariant {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "theorem-half" => Ok(BoundVariant::TheoremHalf),
            "corollary-full" => Ok(BoundVariant::CorollaryFull),
            "remark-single-exp" => Ok(BoundVariant::RemarkSingleExp),
            "exact-kl" => Ok(BoundVariant::ExactKL),
            other => Err(Error::Parse(format!(
                "unknown variant {other:?} (expected theorem-half, corollary-full, remark-single-exp or exact-kl)"
            ))),
        }
    }

    pub fn max_epsilon(self) -> Rational {
        match self {
            BoundVariant::TheoremHalf | BoundVariant::ExactKL => Rational::new(1.into(), 3.into()),
            BoundVariant::CorollaryFull | BoundVariant::RemarkSingleExp => Rational::new(2.into(), 3.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub variant: BoundVariant,
    pub n: u32,
    #[serde(serialize_with = "crate::report::as_string")]
    pub epsilon: Rational,
    pub value: LogNumber,
    /// Intermediate constants, so the instantiation can be audited.
    pub audit: serde_json::Value,
}

/// Terms of the half-inequality bound: `2 eps^-1 ln C_hat` and the natural log
/// of `m 2^m eps^-1 (c_2 + (m - 1) c_1)`, in fixed point with `bits` fractional bits.
struct HalfTerms {
    m: BigInt,
    first: f64,
    ln_second: BigInt,
    bits: u64,
}

fn half_terms(n: u32, eps: &Rational, c_hat: f64) -> HalfTerms {
    let m = ridout_m(n, eps);
    let bits = 2 * m.bits() + 64;
    let ln10 = fixed::ln10(bits);
    let two = fixed::from_int(&BigInt::from(2), bits);
    let c1 = &two + &ln10 * 2;
    let c2 = &two + &ln10 * 4;
    let factor = c2 + c1 * (&m - 1);
    let ln_second = fixed::ln_rational(&Rational::from_integer(m.clone()), bits)
        + fixed::ln2(bits) * &m
        + fixed::ln_rational(&eps.recip(), bits)
        + fixed::ln_fixed(&factor, bits);
    HalfTerms {
        first: 2.0 * c_hat.ln() / eps_f64(eps),
        m,
        ln_second,
        bits,
    }
}

fn eps_f64(eps: &Rational) -> f64 {
    eps.numer().to_f64().unwrap() / eps.denom().to_f64().unwrap()
}

fn to_f64(x: &BigInt, bits: u64) -> f64 {
    fixed::to_f64(x, bits)
}

/// An upper bound on the number of solutions, per `variant`.
pub fn count_bound(mp: &MinimalPolynomial, eps: &Rational, variant: BoundVariant) -> Result<BoundReport> {
    count_bound_for(mp.degree(), &mp.a_bar(), eps, variant)
}

/// [`count_bound`] from the degree and `A_bar` alone.
pub fn count_bound_for(n: u32, a_bar: &BigInt, eps: &Rational, variant: BoundVariant) -> Result<BoundReport> {
    check_epsilon(eps, &variant.max_epsilon())?;
    if n < 2 {
        return Err(Error::InvalidPolynomial(format!("degree must be at least 2 (got {n})")));
    }
    if *a_bar < BigInt::from(1) {
        return Err(Error::InvalidPolynomial(format!("A_bar must be at least 1 (got {a_bar})")));
    }
    let c_hat = c_hat_of(a_bar);
    let ln10 = std::f64::consts::LN_10;
    // n^2 eps^-2
    let scale = f64::from(n * n) / eps_f64(eps).powi(2);
    let (value, audit) = match variant {
        BoundVariant::TheoremHalf => {
            let t = half_terms(n, eps, c_hat);
            let exp_term = LogNumber::from_ln_fixed(&t.ln_second, t.bits);
            let value = LogNumber::from_f64(t.first).add(&exp_term);
            let audit = json!({
                "c_hat": c_hat,
                "m": t.m.to_string(),
                "c1": 2.0 + 2.0 * ln10,
                "c2": 2.0 + 4.0 * ln10,
                "first_term": t.first,
                "exp_term": exp_term,
                "C_instantiated": to_f64(&t.ln_second, t.bits) / scale,
            });
            (value, audit)
        }
        BoundVariant::CorollaryFull | BoundVariant::RemarkSingleExp => {
            let half = eps / Rational::from_integer(2.into());
            let t = half_terms(n, &half, c_hat);
            let bits = t.bits;
            let scale_fixed = fixed::from_int(&BigInt::from(n * n), bits) * eps.denom() * eps.denom() / (eps.numer() * eps.numer());
            // 4 C(eps/2) n^2 eps^-2 equals ln of the half-inequality exponential term at eps/2
            let c1_term = t.ln_second.clone();
            let c2_term = (&scale_fixed * fixed::ln2(bits) * 8) >> bits;
            let exponent = ((&scale_fixed * fixed::ln2(bits)) >> bits) + (&c1_term).max(&c2_term);
            let big_c = to_f64(&t.ln_second, bits) / (4.0 * scale);
            let c1 = 4.0 * big_c;
            let c2 = 8.0 * std::f64::consts::LN_2;
            let c3 = c1.max(c2);
            let big_c1 = std::f64::consts::LN_2 + c3;
            if variant == BoundVariant::CorollaryFull {
                let first = 4.0 * c_hat.ln() / eps_f64(eps);
                let exp_term = LogNumber::from_ln_fixed(&exponent, bits);
                let value = LogNumber::from_f64(first).add(&exp_term);
                let audit = json!({
                    "c_hat": c_hat,
                    "m_at_half_epsilon": t.m.to_string(),
                    "C_at_half_epsilon": big_c,
                    "c1": c1,
                    "c2": c2,
                    "c3": c3,
                    "C1": big_c1,
                    "first_term": first,
                    "exponent": to_f64(&exponent, bits),
                    "exp_term": exp_term,
                });
                (value, audit)
            } else {
                let c2_remark = 4.0 * c_hat.ln();
                let c3_remark = c2_remark.max(big_c1);
                let c1_remark = f64::from(n * n) * std::f64::consts::LN_2 + c3_remark;
                let eps_sq_inv = scale / f64::from(n * n);
                let exponent = c1_remark * eps_sq_inv;
                // the last step of the displayed chain needs ln 2 + c_3 n^2 eps^-2 <= c_1 eps^-2
                let chain_lhs = std::f64::consts::LN_2 + c3_remark * scale;
                let value = LogNumber::from_log10(exponent / ln10);
                let audit = json!({
                    "c_hat": c_hat,
                    "C1": big_c1,
                    "c2": c2_remark,
                    "c3": c3_remark,
                    "c1": c1_remark,
                    "exponent": exponent,
                    "chain_lhs": chain_lhs,
                    "chain_rhs": exponent,
                    "chain_holds": chain_lhs <= exponent,
                });
                (value, audit)
            }
        }
        BoundVariant::ExactKL => {
            let params = ridout_params(n, eps, a_bar)?;
            let m1 = &params.m - 1;
            let (value, exact) = match (&params.k_exact, &params.l_exact) {
                (Some(k), Some(l)) => {
                    let total = k + &m1 * l;
                    (LogNumber::from_bigint(&total), Some(total.to_string()))
                }
                _ => (LogNumber::from_bigint(&m1).mul(&params.l).add(&params.k), None),
            };
            let audit = json!({
                "m": params.m.to_string(),
                "k": params.k,
                "l": params.l,
                "k_exact": params.k_exact.as_ref().map(|k| k.to_string()),
                "l_exact": params.l_exact.as_ref().map(|l| l.to_string()),
                "exact_value": exact,
            });
            (value, audit)
        }
    };
    Ok(BoundReport {
        variant,
        n,
        epsilon: eps.clone(),
        value,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn x2_minus_6() -> MinimalPolynomial {
        MinimalPolynomial::parse("1,0,-6").unwrap()
    }

    fn eps(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn corollary_first_term() {
        let r = count_bound(&x2_minus_6(), &eps("2/3"), BoundVariant::CorollaryFull).unwrap();
        let first = r.audit["first_term"].as_f64().unwrap();
        assert!((first - 6.0 * x2_minus_6().c_hat().ln()).abs() < 1e-12);
        assert_eq!(r.audit["m_at_half_epsilon"], "3601");
    }

    #[test]
    fn exact_kl_is_self_consistent() {
        let r = count_bound(&x2_minus_6(), &eps("1/3"), BoundVariant::ExactKL).unwrap();
        let exact: BigInt = r.audit["exact_value"].as_str().unwrap().parse().unwrap();
        assert_eq!(r.value.log10_int, BigInt::from(exact.to_string().len() - 1));
    }

    #[test]
    fn half_bound_grows_as_epsilon_shrinks() {
        let a = count_bound(&x2_minus_6(), &eps("1/3"), BoundVariant::TheoremHalf).unwrap();
        let b = count_bound(&x2_minus_6(), &eps("1/4"), BoundVariant::TheoremHalf).unwrap();
        assert!(a.value < b.value);
    }

    #[test]
    fn remark_chain_fails_for_quadratics() {
        let r = count_bound(&x2_minus_6(), &eps("1/3"), BoundVariant::RemarkSingleExp).unwrap();
        assert_eq!(r.audit["chain_holds"], false);
    }

    #[test]
    fn epsilon_ranges() {
        let mp = x2_minus_6();
        assert!(count_bound(&mp, &eps("1/2"), BoundVariant::TheoremHalf).is_err());
        assert!(count_bound(&mp, &eps("1/2"), BoundVariant::ExactKL).is_err());
        assert!(count_bound(&mp, &eps("1/2"), BoundVariant::CorollaryFull).is_ok());
        assert!(count_bound(&mp, &eps("3/4"), BoundVariant::RemarkSingleExp).is_err());
        assert!(BoundVariant::parse("bogus").is_err());
    }
}
