use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{arch_abs, pow_p, pow_p_rational, split_p_power, vp, Rational};
use crate::valuation::ExtendedValuation;
use crate::value::{Evaluator, PadicValue};

/// `A_i / B_i` with cached valuations and Archimedean sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergentPair {
    pub index: usize,
    #[serde(serialize_with = "crate::report::as_string")]
    pub a: Rational,
    #[serde(serialize_with = "crate::report::as_string")]
    pub b: Rational,
    pub vp_a: ExtendedValuation,
    pub vp_b: ExtendedValuation,
    #[serde(serialize_with = "crate::report::as_string")]
    pub arch_a: Rational,
    #[serde(serialize_with = "crate::report::as_string")]
    pub arch_b: Rational,
}

impl ConvergentPair {
    /// `p^(-vpB)`, the p-adic size of `B_i` (zero when `B_i = 0`).
    pub fn padic_abs_b(&self, p: u64) -> Rational {
        match self.vp_b {
            ExtendedValuation::Finite(v) => pow_p_rational(p, -v),
            ExtendedValuation::Infinity => Rational::zero(),
        }
    }
}

/// Convergents of a quotient sequence, with access to the seed indices -2 and -1.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergentTable {
    pub p: u64,
    #[serde(skip)]
    pub quotients: Vec<Rational>,
    pub pairs: Vec<ConvergentPair>,
}

impl ConvergentTable {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `A_i` for `i >= -2`; `A_{-2} = 0`, `A_{-1} = 1`.
    pub fn a(&self, i: i64) -> Rational {
        match i {
            -2 => Rational::zero(),
            -1 => Rational::one(),
            _ => self.pairs[i as usize].a.clone(),
        }
    }

    /// `B_i` for `i >= -2`; `B_{-2} = 1`, `B_{-1} = 0`.
    pub fn b(&self, i: i64) -> Rational {
        match i {
            -2 => Rational::one(),
            -1 => Rational::zero(),
            _ => self.pairs[i as usize].b.clone(),
        }
    }

    pub fn pair(&self, i: usize) -> Result<&ConvergentPair> {
        self.pairs.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            available: self.pairs.len(),
        })
    }
}

/// Exact convergents `A_i = b_i A_{i-1} + A_{i-2}`, `B_i = b_i B_{i-1} + B_{i-2}`.
pub fn convergents(quotients: &[Rational], p: u64) -> ConvergentTable {
    let mut pairs: Vec<ConvergentPair> = Vec::with_capacity(quotients.len());
    let (mut a2, mut a1) = (Rational::zero(), Rational::one());
    let (mut b2, mut b1) = (Rational::one(), Rational::zero());
    for (index, q) in quotients.iter().enumerate() {
        let a = q * &a1 + &a2;
        let b = q * &b1 + &b2;
        pairs.push(ConvergentPair {
            index,
            vp_a: vp(&a, p),
            vp_b: vp(&b, p),
            arch_a: arch_abs(&a),
            arch_b: arch_abs(&b),
            a: a.clone(),
            b: b.clone(),
        });
        (a2, a1) = (a1, a);
        (b2, b1) = (b1, b);
    }
    ConvergentTable {
        p,
        quotients: quotients.to_vec(),
        pairs,
    }
}

/// Indices at which one of the classical identities fails.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IdentityAudit {
    pub checked: usize,
    /// `A_i B_{i-1} - B_i A_{i-1} != (-1)^(i+1)`.
    pub determinant: Vec<usize>,
    /// `v(B_i) != sum_{j=1..i} v(b_j)`.
    pub vp_b_sum: Vec<usize>,
    /// `b_0 = 0` and `v(A_i) != sum_{j=2..i} v(b_j)` (i >= 2).
    pub vp_a_sum: Vec<usize>,
    /// `|B_i|_inf > |B_i|_p`.
    pub arch_vs_padic: Vec<usize>,
}

impl IdentityAudit {
    pub fn is_clean(&self) -> bool {
        self.determinant.is_empty()
            && self.vp_b_sum.is_empty()
            && self.vp_a_sum.is_empty()
            && self.arch_vs_padic.is_empty()
    }
}

/// Checks the determinant identity, the valuation sums and `|B_i|_inf <= |B_i|_p`.
pub fn audit_identities(table: &ConvergentTable) -> IdentityAudit {
    let p = table.p;
    let q = &table.quotients;
    let mut audit = IdentityAudit {
        checked: table.len(),
        ..Default::default()
    };
    let mut vb_sum = ExtendedValuation::Finite(0);
    let mut va_sum = ExtendedValuation::Finite(0);
    for (i, pair) in table.pairs.iter().enumerate() {
        let ii = i as i64;
        let det = &pair.a * table.b(ii - 1) - &pair.b * table.a(ii - 1);
        let sign = if i % 2 == 1 { Rational::one() } else { -Rational::one() };
        if det != sign {
            audit.determinant.push(i);
        }
        if i >= 1 {
            vb_sum = vb_sum + vp(&q[i], p);
        }
        if pair.vp_b != vb_sum {
            audit.vp_b_sum.push(i);
        }
        if i >= 2 {
            va_sum = va_sum + vp(&q[i], p);
            if q[0].is_zero() && pair.vp_a != va_sum {
                audit.vp_a_sum.push(i);
            }
        }
        if pair.arch_b > pair.padic_abs_b(p) {
            audit.arch_vs_padic.push(i);
        }
    }
    audit
}

/// Value of a finite continued fraction, folded from the right.
pub fn evaluate(quotients: &[Rational]) -> Result<Rational> {
    let (last, rest) = quotients
        .split_last()
        .ok_or_else(|| Error::Parse("empty quotient sequence".into()))?;
    let mut value = last.clone();
    for (depth, q) in rest.iter().enumerate().rev() {
        if value.is_zero() {
            return Err(Error::DivisionByZero(depth + 1));
        }
        value = q + value.recip();
    }
    Ok(value)
}

/// `v_p(x - A_i/B_i)`.
pub fn approx_defect(x: &PadicValue, c: &ConvergentPair, evaluator: &Evaluator) -> Result<ExtendedValuation> {
    if c.b.is_zero() {
        return Err(Error::DivisionByZero(c.index));
    }
    evaluator.distance_valuation(x, &(&c.a / &c.b))
}

/// `A = A~ / p^e`, `B = B~ / p^f` with `p` dividing neither numerator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicDecomposition {
    #[serde(serialize_with = "crate::report::as_string")]
    pub a_tilde: BigInt,
    pub e: i64,
    #[serde(serialize_with = "crate::report::as_string")]
    pub b_tilde: BigInt,
    pub f: i64,
    pub zero_numerator: bool,
    /// `f >= e`; `None` when `A = 0`.
    pub f_ge_e: Option<bool>,
    /// `|A~ p^(f-e)|_inf <= |B~|_inf`; `None` when `A = 0`.
    pub arch_hypothesis: Option<bool>,
}

fn split_z_inv_p(x: &Rational, p: u64) -> (BigInt, i64) {
    // x = n / (p^k) with p not dividing the reduced n; a non-p denominator is a caller error.
    let (vn, unit) = split_p_power(x.numer(), p);
    let (vd, rest) = split_p_power(x.denom(), p);
    debug_assert!(rest.is_one(), "{x} is not in Z[1/p]");
    let sign_unit = if x.is_negative() { -unit.abs() } else { unit.abs() };
    let e = vd as i64 - vn as i64;
    (sign_unit, e)
}

pub fn decompose(c: &ConvergentPair, p: u64) -> PadicDecomposition {
    let (b_tilde, f) = split_z_inv_p(&c.b, p);
    if c.a.is_zero() {
        return PadicDecomposition {
            a_tilde: BigInt::zero(),
            e: 0,
            b_tilde,
            f,
            zero_numerator: true,
            f_ge_e: None,
            arch_hypothesis: None,
        };
    }
    let (a_tilde, e) = split_z_inv_p(&c.a, p);
    // |A~| p^(f-e) <= |B~|, cross-multiplied so both sides stay integral
    let shift = f - e;
    let (lhs, rhs) = if shift >= 0 {
        (a_tilde.abs() * pow_p(p, shift as usize), b_tilde.abs())
    } else {
        (a_tilde.abs(), b_tilde.abs() * pow_p(p, (-shift) as usize))
    };
    PadicDecomposition {
        a_tilde,
        e,
        b_tilde,
        f,
        zero_numerator: false,
        f_ge_e: Some(f >= e),
        arch_hypothesis: Some(lhs <= rhs),
    }
}
