use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::criteria::big_ln;
use crate::error::{Error, Result};
use crate::hensel::Branch;
use crate::rational::{extract_square, is_perfect_square, Rational};
use crate::surd::SurdElement;

/// A monic integer polynomial `x^n + a_1 x^(n-1) + ... + a_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalPolynomial {
    #[serde(serialize_with = "crate::report::as_strings")]
    coefficients: Vec<BigInt>,
    /// Irreducibility is only verified for degree 2.
    irreducibility_checked: bool,
}

impl MinimalPolynomial {
    /// Coefficients from the leading `1` down to the constant term.
    pub fn new(coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.len() < 3 {
            return Err(Error::InvalidPolynomial("degree must be at least 2".into()));
        }
        if !coefficients[0].is_one() {
            return Err(Error::InvalidPolynomial("polynomial must be monic".into()));
        }
        let mp = MinimalPolynomial {
            irreducibility_checked: coefficients.len() == 3,
            coefficients,
        };
        if mp.degree() == 2 && is_perfect_square(&mp.discriminant()) {
            return Err(Error::InvalidPolynomial(format!(
                "discriminant {} is a square, so the polynomial is reducible",
                mp.discriminant()
            )));
        }
        Ok(mp)
    }

    /// Parses `"1,0,-6"`.
    pub fn parse(text: &str) -> Result<Self> {
        let coefficients = text
            .split(',')
            .map(|c| {
                c.trim()
                    .replace('\u{2212}', "-")
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {c:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MinimalPolynomial::new(coefficients)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> u32 {
        (self.coefficients.len() - 1) as u32
    }

    pub fn irreducibility_checked(&self) -> bool {
        self.irreducibility_checked
    }

    /// `max(1, |a_1|, ..., |a_n|)`.
    pub fn a_bar(&self) -> BigInt {
        self.coefficients[1..]
            .iter()
            .map(|c| c.abs())
            .fold(BigInt::one(), |acc, c| acc.max(c))
    }

    /// `2 + 2 ln(2 + A_bar)`.
    pub fn c_hat(&self) -> f64 {
        c_hat_of(&self.a_bar())
    }

    /// Sum of the absolute values of all coefficients.
    pub fn coefficient_norm(&self) -> BigInt {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    /// `a_1^2 - 4 a_2` for a quadratic.
    pub fn discriminant(&self) -> BigInt {
        let (a1, a2) = (&self.coefficients[1], &self.coefficients[2]);
        a1 * a1 - BigInt::from(4) * a2
    }

    /// The root `(-a_1 + s sqrt(c)) / 2` of a quadratic, where `D = s^2 c` with
    /// `c` squarefree over small primes; `branch` picks the root of `c`.
    pub fn quadratic_root(&self, branch: Branch) -> Result<SurdElement> {
        if self.degree() != 2 {
            return Err(Error::Unsupported("only quadratic polynomials have surd roots here".into()));
        }
        let d = self.discriminant();
        if !d.is_positive() {
            return Err(Error::InvalidRadicand(d.to_string()));
        }
        let (s, core) = extract_square(&d);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let a = -Rational::from_integer(self.coefficients[1].clone()) * &half;
        SurdElement::new(a, half * Rational::from_integer(s), core, branch)
    }

    /// `f(x)` at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients
            .iter()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }
}

pub(crate) fn c_hat_of(a_bar: &BigInt) -> f64 {
    2.0 + 2.0 * big_ln(&(a_bar + 2))
}
