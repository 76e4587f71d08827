use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::minpoly::MinimalPolynomial;
use crate::context::{Mode, PadicContext};
use crate::error::{Error, Result};
use crate::hensel::Branch;
use crate::rational::{modulo, mod_inverse, pow_p, Rational};
use crate::report::CriterionReport;
use crate::surd::{SurdElement, SurdEmbedding};
use crate::valuation::ExtendedValuation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityVariant {
    /// `|alpha - A/B|_p < 1 / (2 B^(2+eps))`.
    Half,
    /// `|alpha - A/B|_p < 1 / B^(2+eps)`.
    Full,
}

impl InequalityVariant {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "half" => Ok(InequalityVariant::Half),
            "full" => Ok(InequalityVariant::Full),
            other => Err(Error::Parse(format!("variant must be 'half' or 'full', got {other:?}"))),
        }
    }

    /// `c B^(2w+u)` with `c = 2^w` or `1`: the inequality reads `lhs < p^(v w)`.
    fn lhs(self, b: &BigInt, eps: &Rational) -> BigInt {
        let (u, w) = exponents(eps);
        let base = b.pow(2 * w + u);
        match self {
            InequalityVariant::Half => base << w,
            InequalityVariant::Full => base,
        }
    }

    /// Exact membership test for a defect valuation `v`.
    pub fn holds(self, b: &BigInt, v: i64, eps: &Rational, p: u64) -> bool {
        if v <= 0 {
            return false;
        }
        let (_, w) = exponents(eps);
        self.lhs(b, eps) < pow_p(p, v as usize * w as usize)
    }
}

fn exponents(eps: &Rational) -> (u32, u32) {
    let u = u32::try_from(eps.numer()).expect("epsilon numerator fits in u32");
    let w = u32::try_from(eps.denom()).expect("epsilon denominator fits in u32");
    (u, w)
}

/// A solution `A/B` in lowest terms with `B > 0` and `|A| <= B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    #[serde(serialize_with = "crate::report::as_string")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::report::as_string")]
    pub b: BigInt,
    /// `v_p(alpha - A/B)`.
    pub defect_valuation: i64,
}

/// Smallest `v` with `lhs < p^(v w)`.
fn min_valuation(lhs: &BigInt, p: u64, w: u32) -> usize {
    let step = pow_p(p, w as usize);
    let mut power = step.clone();
    let mut v = 1;
    while &power <= lhs {
        power *= &step;
        v += 1;
    }
    v
}

/// All solutions with `1 <= B <= h_max`, sorted by `(B, A)`.
pub fn enumerate_solutions(
    mp: &MinimalPolynomial,
    p: u64,
    branch: Branch,
    eps: &Rational,
    h_max: u64,
    variant: InequalityVariant,
) -> Result<Vec<SolutionRecord>> {
    if !eps.is_positive() {
        return Err(Error::EpsilonOutOfRange {
            eps: eps.to_string(),
            max: "infinity".into(),
        });
    }
    let alpha = mp.quadratic_root(branch)?;
    let (_, w) = exponents(eps);
    let deepest = min_valuation(&variant.lhs(&BigInt::from(h_max.max(1)), eps), p, w);
    let mut precision = 2 * deepest + 16;
    loop {
        let ctx = PadicContext::new(p, Mode::Ruban)?.with_precision(precision);
        match enumerate_at(&alpha, &ctx, eps, h_max, variant) {
            Err(Error::PrecisionExhausted { .. }) => precision *= 2,
            other => return other,
        }
    }
}

fn enumerate_at(
    alpha: &SurdElement,
    ctx: &PadicContext,
    eps: &Rational,
    h_max: u64,
    variant: InequalityVariant,
) -> Result<Vec<SolutionRecord>> {
    let p = ctx.p();
    let embedding = SurdEmbedding::new(alpha.field(), ctx)?;
    let (_, w) = exponents(eps);
    let deepest = min_valuation(&variant.lhs(&BigInt::from(h_max.max(1)), eps), p, w);
    // alpha = (a + b sqrt(D)) with 2a, 2b integers, reduced modulo p^deepest
    let modulus = pow_p(p, deepest);
    let two_inv = mod_inverse(&BigInt::from(2), &modulus);
    let two_a = (alpha.a() * BigInt::from(2)).to_integer();
    let two_b = (alpha.b() * BigInt::from(2)).to_integer();
    let root = modulo(&((two_a + two_b * embedding.sqrt_residue(deepest)) * two_inv), &modulus);
    let per_b: Vec<Result<Vec<SolutionRecord>>> = (1..=h_max)
        .into_par_iter()
        .filter(|b| b % p != 0)
        .map(|b| {
            let b = BigInt::from(b);
            let v_min = min_valuation(&variant.lhs(&b, eps), p, w);
            let step = pow_p(p, v_min);
            let residue = modulo(&(&b * &root), &step);
            // smallest A >= -B in the residue class
            let mut a = &residue - (&b + &residue).div_floor(&step) * &step;
            let mut found = Vec::new();
            while a <= b {
                if a.gcd(&b).is_one() {
                    let defect = alpha.add_rational(&-Rational::new(a.clone(), b.clone()));
                    if let ExtendedValuation::Finite(v) = embedding.valuation(&defect)? {
                        if variant.holds(&b, v, eps, p) {
                            found.push(SolutionRecord {
                                a: a.clone(),
                                b: b.clone(),
                                defect_valuation: v,
                            });
                        }
                    }
                }
                a += &step;
            }
            Ok(found)
        })
        .collect();
    let mut all = Vec::new();
    for part in per_b {
        all.extend(part?);
    }
    all.sort_by(|x, y| (&x.b, &x.a).cmp(&(&y.b, &y.a)));
    Ok(all)
}

/// `B_{i+1}^w > B_i^(w+u)` for consecutive solutions with `B_i >= 2`.
pub fn gap_law_check(solutions: &[SolutionRecord], eps: &Rational) -> Result<CriterionReport> {
    let (u, w) = exponents(eps);
    for (i, pair) in solutions.windows(2).enumerate() {
        if pair[1].b <= pair[0].b {
            return Err(Error::UnsortedInput(i + 1));
        }
    }
    let mut ledger = Vec::new();
    let mut excluded = Vec::new();
    let mut first_violation = None;
    for (i, pair) in solutions.windows(2).enumerate() {
        let (b0, b1) = (&pair[0].b, &pair[1].b);
        if b0.is_one() {
            excluded.push(json!({"i": i, "b_i": b0.to_string(), "b_next": b1.to_string()}));
            continue;
        }
        let lhs = b1.pow(w);
        let rhs = b0.pow(w + u);
        let holds = lhs > rhs;
        if !holds && first_violation.is_none() {
            first_violation = Some(i as i64);
        }
        ledger.push(json!({
            "i": i,
            "b_i": b0.to_string(),
            "b_next": b1.to_string(),
            "lhs": lhs.to_string(),
            "rhs": rhs.to_string(),
            "holds": holds,
        }));
    }
    let checked = ledger.len();
    let summary = match first_violation {
        None => format!("gap law holds on {checked} pairs ({} excluded with B_i = 1)", excluded.len()),
        Some(i) => format!("gap law fails at pair {i} of {checked} ({} excluded with B_i = 1)", excluded.len()),
    };
    if !excluded.is_empty() {
        ledger.push(json!({"excluded": excluded}));
    }
    Ok(CriterionReport::new("gap_law", first_violation, ledger, summary))
}

impl SolutionRecord {
    pub fn new(a: i64, b: i64, defect_valuation: i64) -> Self {
        SolutionRecord {
            a: a.into(),
            b: b.into(),
            defect_valuation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn eps(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn sqrt6_full() {
        let mp = MinimalPolynomial::parse("1,0,-6").unwrap();
        let sols = enumerate_solutions(&mp, 5, Branch::PlusRoot, &eps("1/2"), 100, InequalityVariant::Full).unwrap();
        assert_eq!(sols[0], SolutionRecord::new(1, 1, 1));
        assert!(sols.iter().all(|s| s.b.mod_floor(&BigInt::from(5)) != BigInt::from(0)));
        assert!(enumerate_solutions(&mp, 5, Branch::PlusRoot, &eps("1/2"), 0, InequalityVariant::Full)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn gap_law_examples() {
        let e = eps("1/2");
        let ok = gap_law_check(&[SolutionRecord::new(1, 2, 3), SolutionRecord::new(1, 9, 5)], &e).unwrap();
        assert!(ok.holds_on_range);
        assert!(gap_law_check(&[SolutionRecord::new(1, 2, 3)], &e).unwrap().holds_on_range);
        let bad = gap_law_check(&[SolutionRecord::new(1, 4, 3), SolutionRecord::new(1, 8, 5)], &e).unwrap();
        assert_eq!(bad.first_violation, Some(0));
        let unsorted = gap_law_check(&[SolutionRecord::new(1, 8, 3), SolutionRecord::new(1, 4, 5)], &e);
        assert_eq!(unsorted, Err(Error::UnsortedInput(1)));
    }

    #[test]
    fn non_square_is_rejected() {
        // 2 is not a square modulo 5
        let mp = MinimalPolynomial::parse("1,0,-2").unwrap();
        let r = enumerate_solutions(&mp, 5, Branch::PlusRoot, &eps("1/2"), 10, InequalityVariant::Half);
        assert!(matches!(r, Err(Error::NotASquare(..))));
    }
}
