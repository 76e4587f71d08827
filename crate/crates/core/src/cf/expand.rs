use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::context::PadicContext;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::value::{Evaluator, PadicValue};

/// Why an expansion stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Finite,
    /// `alpha_{preperiod + period} = alpha_{preperiod}` exactly.
    PeriodicDetected { preperiod: usize, period: usize },
    Truncated { max_terms: usize },
    /// The floor of the complete quotient at `index` could not be certified.
    PrecisionExhausted { index: usize },
}

/// Partial quotients `b_0, b_1, ...` of a p-adic continued fraction.
#[derive(Debug, Clone, Serialize)]
pub struct CFExpansion {
    pub context: PadicContext,
    #[serde(serialize_with = "crate::report::as_strings")]
    pub partial_quotients: Vec<Rational>,
    pub termination: Termination,
    /// `alpha_i` for every emitted `b_i`.
    #[serde(skip)]
    pub complete_quotients: Vec<PadicValue>,
}

impl CFExpansion {
    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.termination, Termination::PeriodicDetected { .. })
    }
}

/// Runs `b_i = s(alpha_i)`, `alpha_{i+1} = 1/(alpha_i - b_i)`.
///
/// A repeated complete quotient ends the loop; the periodic part is then
/// unrolled so that `max_terms` quotients are returned.
pub fn expand(x: &PadicValue, ctx: &PadicContext, max_terms: usize) -> Result<CFExpansion> {
    let max_terms = max_terms.max(1);
    let evaluator = Evaluator::for_value(x, ctx)?;
    let mut quotients: Vec<Rational> = Vec::new();
    let mut complete: Vec<PadicValue> = Vec::new();
    let mut seen: HashMap<PadicValue, usize> = HashMap::new();
    let mut alpha = x.clone();

    let termination = loop {
        if let Some(&first) = seen.get(&alpha) {
            let period = quotients.len() - first;
            while quotients.len() < max_terms {
                let i = quotients.len();
                quotients.push(quotients[i - period].clone());
                complete.push(complete[i - period].clone());
            }
            break Termination::PeriodicDetected { preperiod: first, period };
        }
        if quotients.len() == max_terms {
            break Termination::Truncated { max_terms };
        }
        let b = if alpha.is_zero() {
            Rational::zero()
        } else {
            match evaluator.floor(&alpha) {
                Ok(b) => b,
                Err(Error::PrecisionExhausted { .. }) => {
                    break Termination::PrecisionExhausted { index: quotients.len() }
                }
                Err(e) => return Err(e),
            }
        };
        let rest = alpha.sub_rational(&b);
        seen.insert(alpha.clone(), quotients.len());
        quotients.push(b);
        complete.push(alpha);
        match rest.inverse() {
            None => break Termination::Finite,
            Some(next) => alpha = next,
        }
    };

    Ok(CFExpansion {
        context: *ctx,
        partial_quotients: quotients,
        termination,
        complete_quotients: complete,
    })
}

/// [`expand`] with one retry at doubled precision when a surd floor runs
/// out of certified digits. Returns the expansion and any warnings.
pub fn expand_with_retry(
    x: &PadicValue,
    ctx: &PadicContext,
    max_terms: usize,
) -> Result<(CFExpansion, Vec<String>)> {
    let first = expand(x, ctx, max_terms)?;
    let Termination::PrecisionExhausted { index } = first.termination else {
        return Ok((first, Vec::new()));
    };
    let doubled = ctx.with_precision(ctx.precision() * 2);
    let mut warnings = vec![format!(
        "precision exhausted at index {index} with N = {}; retried with N = {}",
        ctx.precision(),
        doubled.precision()
    )];
    let second = expand(x, &doubled, max_terms)?;
    if let Termination::PrecisionExhausted { index } = second.termination {
        warnings.push(format!(
            "precision still exhausted at index {index} with N = {}",
            doubled.precision()
        ));
    }
    Ok((second, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Mode;
    use crate::hensel::Branch;
    use crate::rational::parse_rational;
    use crate::surd::SurdElement;

    fn q(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    fn rat(s: &str) -> PadicValue {
        parse_rational(s).unwrap().into()
    }

    #[test]
    fn browkin_rationals_terminate() {
        let ctx = PadicContext::new(5, Mode::Browkin).unwrap();
        let cf = expand(&rat("1/3"), &ctx, 10).unwrap();
        assert_eq!(cf.partial_quotients, q(&["2", "-3/5"]));
        assert_eq!(cf.termination, Termination::Finite);
        let cf = expand(&rat("3"), &ctx, 10).unwrap();
        assert_eq!(cf.partial_quotients, q(&["-2", "1/5"]));
    }

    #[test]
    fn ruban_one_third_is_periodic() {
        let ctx = PadicContext::new(5, Mode::Ruban).unwrap();
        let cf = expand(&rat("1/3"), &ctx, 6).unwrap();
        assert_eq!(cf.partial_quotients, q(&["2", "22/5", "24/5", "24/5", "24/5", "24/5"]));
        assert_eq!(cf.termination, Termination::PeriodicDetected { preperiod: 2, period: 1 });
        assert_eq!(cf.complete_quotients[5], rat("-1/5"));
    }

    #[test]
    fn zero_and_truncation() {
        let ctx = PadicContext::new(5, Mode::Ruban).unwrap();
        let cf = expand(&rat("0"), &ctx, 10).unwrap();
        assert_eq!((cf.partial_quotients, cf.termination), (q(&["0"]), Termination::Finite));
        let ctx = PadicContext::new(7, Mode::Browkin).unwrap();
        let cf = expand(&rat("123456/7919"), &ctx, 2).unwrap();
        assert_eq!(cf.termination, Termination::Truncated { max_terms: 2 });
    }

    #[test]
    fn quadratic_surd_is_purely_periodic_after_zero() {
        let ctx = PadicContext::new(5, Mode::Browkin).unwrap().with_precision(64);
        let alpha = SurdElement::parse("(-1/10 + 1/10*sqrt(101))", Branch::PlusRoot).unwrap();
        let cf = expand(&alpha.into(), &ctx, 8).unwrap();
        let mut expected = q(&["0"]);
        expected.extend(q(&["1/5"; 7]));
        assert_eq!(cf.partial_quotients, expected);
        assert_eq!(cf.termination, Termination::PeriodicDetected { preperiod: 1, period: 1 });
    }

    #[test]
    fn retry_recovers_from_tiny_precision() {
        let ctx = PadicContext::new(5, Mode::Browkin).unwrap().with_precision(1);
        let alpha = SurdElement::parse("(0 + 1/625*sqrt(6))", Branch::PlusRoot).unwrap();
        let first = expand(&alpha.clone().into(), &ctx, 4).unwrap();
        assert_eq!(first.termination, Termination::PrecisionExhausted { index: 0 });
        let ctx = ctx.with_precision(4);
        let (cf, warnings) = expand_with_retry(&alpha.into(), &ctx, 4).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(!matches!(cf.termination, Termination::PrecisionExhausted { .. }));
    }
}
