//! Hypothesis and inequality checks for the palindromic and quasi-periodic
//! transcendence criteria.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::cf::{convergents, ConvergentTable};
use crate::context::PadicContext;
use crate::error::{Error, Result};
use crate::hensel::Branch;
use crate::rational::{extract_square, pow_p_rational, vp, Rational};
use crate::structure::{growth_statistic, PalindromeReport, RepetitionBlock};
use crate::surd::SurdElement;
use crate::valuation::ExtendedValuation;
use crate::value::{Evaluator, PadicValue};
use crate::report::CriterionReport;

fn require_zero_b0(table: &ConvergentTable) -> Result<()> {
    match table.quotients.first() {
        Some(b0) if !b0.is_zero() => Err(Error::NonzeroB0(b0.to_string())),
        _ => Ok(()),
    }
}

fn rational_pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// `max(|A_i|, |B_i|)^4 < p^i` for every `i >= max(i0, 1)`.
pub fn theorem_a_margin(table: &ConvergentTable, i0: usize) -> Result<CriterionReport> {
    require_zero_b0(table)?;
    let p = table.p;
    let mut ledger = Vec::new();
    let mut violations = Vec::new();
    for pair in table.pairs.iter().skip(i0.max(1)) {
        let i = pair.index;
        let size = pair.arch_a.clone().max(pair.arch_b.clone());
        let holds = rational_pow(&size, 4) < pow_p_rational(p, i as i64);
        if !holds {
            violations.push(i);
        }
        ledger.push(json!({
            "i": i,
            "max_arch": size.to_string(),
            "holds": holds,
            // the proof also uses |A_i|_p < |B_i|_p; recorded, not part of the verdict
            "padic_a_below_b": pair.vp_a > pair.vp_b,
        }));
    }
    let summary = if violations.is_empty() {
        format!("max(|A_i|,|B_i|)^4 < p^i for all {} checked indices", ledger.len())
    } else {
        format!("fails at {} of {} indices: {:?}", violations.len(), ledger.len(), violations)
    };
    Ok(CriterionReport::new(
        "theorem-a",
        violations.first().map(|&i| i as i64),
        ledger,
        summary,
    ))
}

/// `v(x^2 - A_{n-1}/B_n) > v(b_1) - 2 v(B_n)` at each palindromic `n >= 2`.
pub fn lemma_a2_check(
    x: &PadicValue,
    table: &ConvergentTable,
    report: &PalindromeReport,
    evaluator: &Evaluator,
) -> Result<CriterionReport> {
    require_zero_b0(table)?;
    let vb1 = match table.quotients.get(1) {
        Some(b1) => vp(b1, table.p),
        None => {
            return Ok(CriterionReport::new("lemma-a2", None, vec![], "no quotient b_1".into()));
        }
    };
    let square = x.square();
    let mut ledger = Vec::new();
    let mut first = None;
    for &n in report.lengths.iter().filter(|&&n| n >= 2 && n < table.len()) {
        let pair = &table.pairs[n];
        let lhs = evaluator.distance_valuation(&square, &(table.a(n as i64 - 1) / &pair.b))?;
        let rhs = match (vb1, pair.vp_b) {
            (ExtendedValuation::Finite(a), ExtendedValuation::Finite(b)) => a - 2 * b,
            _ => return Err(Error::Unsupported("lemma a2 needs finite v(b_1) and v(B_n)".into())),
        };
        let holds = lhs.exceeds(rhs);
        if !holds && first.is_none() {
            first = Some(n as i64);
        }
        ledger.push(json!({"n": n, "lhs_valuation": lhs, "rhs_valuation": rhs, "holds": holds}));
    }
    let summary = format!(
        "checked {} indices; {}",
        ledger.len(),
        match first {
            None => "strict inequality at each".to_string(),
            Some(n) => format!("first failure at n = {n}"),
        }
    );
    Ok(CriterionReport::new("lemma-a2", first, ledger, summary))
}

/// Exact data of the product of linear forms at `(A_n, B_n, A_{n-1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceDiagnostic {
    pub n: usize,
    pub epsilon: String,
    /// `|A_n B_n A_{n-1}|_inf`.
    pub arch_product: String,
    /// `v(B_n x - A_n)`.
    pub v_first_form: ExtendedValuation,
    /// `v(A_{n-1} - x A_n)`.
    pub v_second_form: ExtendedValuation,
    pub v_b: ExtendedValuation,
    /// `max(|A_n|, |B_n|, |A_{n-1}|)_inf`.
    pub arch_max: String,
    /// `min(v(A_n), v(B_n), v(A_{n-1}))`.
    pub v_min: ExtendedValuation,
    /// Natural log of the full tilted product (zero product gives `None`).
    pub log_product: Option<f64>,
    pub product_below_one: bool,
    /// `((3+eps)/4 - (1-eps)) n`, the base-p exponent bounding the product in the proof.
    pub chain_exponent: String,
}

pub fn subspace_product(
    x: &PadicValue,
    table: &ConvergentTable,
    n: usize,
    epsilon: &Rational,
    evaluator: &Evaluator,
) -> Result<SubspaceDiagnostic> {
    require_zero_b0(table)?;
    if n == 0 || n >= table.len() {
        return Err(Error::IndexOutOfRange { index: n, available: table.len() });
    }
    if epsilon.is_negative() {
        return Err(Error::EpsilonOutOfRange { eps: epsilon.to_string(), max: "1/5".into() });
    }
    let (an, bn, an1) = (table.a(n as i64), table.b(n as i64), table.a(n as i64 - 1));
    if an != table.b(n as i64 - 1) {
        return Err(Error::NotPalindromic(n));
    }
    let p = table.p;
    let v1 = evaluator.valuation(&x.mul_rational(&bn).sub_rational(&an))?;
    let v2 = evaluator.valuation(&x.mul_rational(&an).sub_rational(&an1))?;
    let vb = vp(&bn, p);
    let v_min = [vp(&an, p), vb, vp(&an1, p)].into_iter().min().unwrap();
    let arch_product = (&an * &bn * &an1).abs();
    let arch_max = [an.abs(), bn.abs(), an1.abs()].into_iter().max().unwrap();
    let (u, w) = (epsilon.numer().clone(), epsilon.denom().clone());
    let u32_of = |b: &BigInt| u32::try_from(b).map_err(|_| Error::Unsupported("epsilon terms too large".into()));

    let (log_product, below) = match (v1 + v2 + vb, v_min) {
        (ExtendedValuation::Finite(vsum), ExtendedValuation::Finite(vm)) if !arch_product.is_zero() => {
            // X^w M^u p^(-(w*vsum + u*vm)) < 1, with eps = u/w
            let (uu, ww) = (u32_of(&u)?, u32_of(&w)?);
            let exponent = ww as i64 * vsum + uu as i64 * vm;
            let lhs = rational_pow(&arch_product, ww) * rational_pow(&arch_max, uu) * pow_p_rational(p, -exponent);
            let eps = uu as f64 / ww as f64;
            let log = ratio_ln(&arch_product) + eps * ratio_ln(&arch_max) - (vsum as f64 + eps * vm as f64) * (p as f64).ln();
            (Some(log), lhs < Rational::one())
        }
        _ => (None, true),
    };
    let three = Rational::from_integer(3.into());
    let four = Rational::from_integer(4.into());
    let chain = ((&three + epsilon) / four - (Rational::one() - epsilon)) * Rational::from_integer(n.into());
    Ok(SubspaceDiagnostic {
        n,
        epsilon: epsilon.to_string(),
        arch_product: arch_product.to_string(),
        v_first_form: v1,
        v_second_form: v2,
        v_b: vb,
        arch_max: arch_max.to_string(),
        v_min,
        log_product,
        product_below_one: below,
        chain_exponent: chain.to_string(),
    })
}

pub(crate) fn ratio_ln(x: &Rational) -> f64 {
    big_ln(x.numer()) - big_ln(x.denom())
}

pub(crate) fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        let f: f64 = n.to_string().parse().unwrap();
        return f.abs().ln();
    }
    let shift = bits - 64;
    let top: f64 = (n.abs() >> shift).to_string().parse().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `P eta^2 + Q eta + R = 0` for `eta = [0, b_1, ..., b_{h-1}, (b_h, ..., b_{h+k-1}) repeated]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticRelation {
    pub h: usize,
    pub k: usize,
    #[serde(serialize_with = "crate::report::as_string")]
    pub p_coeff: Rational,
    #[serde(serialize_with = "crate::report::as_string")]
    pub q_coeff: Rational,
    #[serde(serialize_with = "crate::report::as_string")]
    pub r_coeff: Rational,
    /// `max(|P|, |Q|, |R|)`.
    #[serde(serialize_with = "crate::report::as_string")]
    pub height: Rational,
    /// `2 p^(-2 v(B_{h+k-1}))`.
    #[serde(serialize_with = "crate::report::as_string")]
    pub height_bound: Rational,
    pub height_holds: bool,
    pub eta: Option<PadicValue>,
    /// `Some(true)` when `P eta^2 + Q eta + R` is exactly zero.
    pub eta_residual_zero: Option<bool>,
    pub note: Option<String>,
}

/// Coefficients of the relation and, when possible, the exact periodic tail value.
pub fn tail_quadratic(quotients: &[Rational], h: usize, k: usize, ctx: &PadicContext) -> Result<QuadraticRelation> {
    if h == 0 || k == 0 {
        return Err(Error::Parse("h and k must be positive".into()));
    }
    let last = h + k - 1;
    if last >= quotients.len() {
        return Err(Error::IndexOutOfRange { index: last, available: quotients.len() });
    }
    let table = convergents(&quotients[..=last], ctx.p());
    require_zero_b0(&table)?;
    let (hi, ki) = (h as i64, k as i64);
    let (a, b) = (|i: i64| table.a(i), |i: i64| table.b(i));
    let p_coeff = b(hi - 2) * b(hi + ki - 1) - b(hi - 1) * b(hi + ki - 2);
    let q_coeff = b(hi - 1) * a(hi + ki - 2) + a(hi - 1) * b(hi + ki - 2)
        - a(hi - 2) * b(hi + ki - 1)
        - b(hi - 2) * a(hi + ki - 1);
    let r_coeff = a(hi - 2) * a(hi + ki - 1) - a(hi - 1) * a(hi + ki - 2);
    let height = [p_coeff.abs(), q_coeff.abs(), r_coeff.abs()].into_iter().max().unwrap();
    let height_bound = match table.pairs[last].vp_b {
        ExtendedValuation::Finite(v) => Rational::from_integer(2.into()) * pow_p_rational(ctx.p(), -2 * v),
        ExtendedValuation::Infinity => Rational::zero(),
    };
    let height_holds = height < height_bound;

    let (eta, eta_residual_zero, note) = match periodic_tail_value(quotients, &table, h, k, ctx) {
        Ok(eta) => {
            let residual = eta
                .square()
                .mul_rational(&p_coeff)
                .add(&eta.mul_rational(&q_coeff))
                .add(&PadicValue::Rational(r_coeff.clone()));
            (Some(eta), Some(residual.is_zero()), None)
        }
        Err(e) => (None, None, Some(format!("eta not constructed: {e}"))),
    };
    Ok(QuadraticRelation {
        h,
        k,
        p_coeff,
        q_coeff,
        r_coeff,
        height,
        height_bound,
        height_holds,
        eta,
        eta_residual_zero,
        note,
    })
}

/// The purely periodic value `theta = [b_h, ..., b_{h+k-1}, theta]` and then
/// `eta = (theta A_{h-1} + A_{h-2}) / (theta B_{h-1} + B_{h-2})`.
fn periodic_tail_value(
    quotients: &[Rational],
    table: &ConvergentTable,
    h: usize,
    k: usize,
    ctx: &PadicContext,
) -> Result<PadicValue> {
    let theta = purely_periodic_value(&quotients[h..h + k], ctx)?;
    let hi = h as i64;
    let num = theta.mul_rational(&table.a(hi - 1)).add(&PadicValue::Rational(table.a(hi - 2)));
    let den = theta.mul_rational(&table.b(hi - 1)).add(&PadicValue::Rational(table.b(hi - 2)));
    num.div(&den).ok_or(Error::DivisionByZero(h))
}

/// The root of `B' t^2 + (B'' - A') t - A'' = 0` whose p-adic expansion is
/// the repeated block, where `A'/B'` and `A''/B''` are the last two
/// convergents of the block.
pub fn purely_periodic_value(block: &[Rational], ctx: &PadicContext) -> Result<PadicValue> {
    let p = ctx.p();
    let bt = convergents(block, p);
    let last = block.len() as i64 - 1;
    let (a1, b1, a2, b2) = (bt.a(last), bt.b(last), bt.a(last - 1), bt.b(last - 1));
    if b1.is_zero() {
        return Err(Error::DivisionByZero(block.len()));
    }
    let lin = &b2 - &a1;
    let disc = &lin * &lin + Rational::from_integer(4.into()) * &a2 * &b1;
    let two_b = Rational::from_integer(2.into()) * &b1;
    let candidates: Vec<PadicValue> = if disc.is_zero() {
        vec![PadicValue::Rational(-&lin / &two_b)]
    } else if disc.is_negative() {
        return Err(Error::InvalidRadicand(disc.to_string()));
    } else {
        let (outer, radicand) = extract_square(&(disc.numer() * disc.denom()));
        if radicand.is_one() {
            let s = Rational::new(outer, disc.denom().clone());
            vec![
                PadicValue::Rational((-&lin + &s) / &two_b),
                PadicValue::Rational((-&lin - &s) / &two_b),
            ]
        } else {
            let scale = Rational::new(outer, disc.denom().clone()) / &two_b;
            [Rational::one(), -Rational::one()]
                .into_iter()
                .map(|sign| {
                    SurdElement::new(-&lin / &two_b, sign * &scale, radicand.clone(), Branch::PlusRoot)
                        .map(PadicValue::from)
                })
                .collect::<Result<_>>()?
        }
    };
    let evaluator = Evaluator::for_value(&candidates[0], ctx)?;
    // The true root is approached by the block's convergents; its conjugate is not.
    let mut repeated = block.to_vec();
    for _ in 0..12 {
        let t = convergents(&repeated, p);
        let c = t.pairs.last().unwrap();
        let bound = match c.vp_b {
            ExtendedValuation::Finite(v) => -2 * v,
            ExtendedValuation::Infinity => return Err(Error::DivisionByZero(repeated.len())),
        };
        let target = &c.a / &c.b;
        let mut close = Vec::new();
        for cand in &candidates {
            if evaluator.distance_valuation(cand, &target)?.exceeds(bound) {
                close.push(cand.clone());
            }
        }
        if close.len() == 1 {
            return Ok(close.pop().unwrap());
        }
        repeated.extend_from_slice(block);
    }
    Err(Error::Unsupported("could not separate the periodic root from its conjugate".into()))
}

/// Hypotheses of the quasi-periodic criterion on the observed range.
pub fn theorem_b_check(
    table: &ConvergentTable,
    blocks: &[RepetitionBlock],
    c: &Rational,
    i0: usize,
) -> CriterionReport {
    let mut ledger = Vec::new();
    let mut first: Option<i64> = None;
    let note = |i: usize, first: &mut Option<i64>| {
        let i = i as i64;
        *first = Some(first.map_or(i, |f| f.min(i)));
    };
    for pair in table.pairs.iter().skip(i0) {
        if pair.arch_a > pair.arch_b {
            note(pair.index, &mut first);
            ledger.push(json!({"check": "arch", "i": pair.index, "abs_a": pair.arch_a.to_string(), "abs_b": pair.arch_b.to_string(), "holds": false}));
        }
    }
    for block in blocks.iter().filter(|b| b.n >= i0) {
        let holds = Rational::from_integer(block.k.into()) < c * Rational::from_integer(block.n.into());
        if !holds {
            note(block.n, &mut first);
        }
        ledger.push(json!({"check": "block", "n": block.n, "k": block.k, "lambda": block.lambda, "holds": holds}));
    }
    let stats = growth_statistic(blocks);
    ledger.push(json!({"check": "growth", "statistic": stats}));
    let summary = if blocks.is_empty() {
        "no quasi-periodic structure detected".to_string()
    } else if first.is_none() {
        "hypotheses hold on observed range".to_string()
    } else {
        format!("first violation at index {}", first.unwrap())
    };
    CriterionReport::new("theorem-b", first, ledger, summary)
}
