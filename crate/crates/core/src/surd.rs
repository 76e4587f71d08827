//! Exact arithmetic in a real quadratic field Q(sqrt D), embedded in Q_p.
//!
//! All algebra happens on exact coefficients `a + b*sqrt(D)`. The p-adic
//! embedding only consumes a residue of `sqrt(D)` modulo `p^N`, and only
//! when a valuation or a floor is requested.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::context::PadicContext;
use crate::digits::{padic_floor_rational, residue_digits};
use crate::error::{Error, Result};
use crate::hensel::{is_unit_square, unit_sqrt, Branch};
use crate::rational::{
    mod_inverse, modulo, parse_rational, pow_p, pow_p_rational, split_p_power, vp, vp_int, Rational,
};
use crate::valuation::ExtendedValuation;

/// `Q(sqrt D)` together with the choice of square root used to embed it in Q_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    d: BigInt,
    branch: Branch,
}

impl QuadraticField {
    pub fn new(d: BigInt, branch: Branch) -> Result<Self> {
        if !d.is_positive() || crate::rational::is_perfect_square(&d) {
            return Err(Error::InvalidRadicand(d.to_string()));
        }
        Ok(QuadraticField { d, branch })
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn element(&self, a: Rational, b: Rational) -> SurdElement {
        SurdElement {
            a,
            b,
            field: self.clone(),
        }
    }

    pub fn sqrt(&self) -> SurdElement {
        self.element(Rational::zero(), Rational::one())
    }

    pub fn from_rational(&self, a: Rational) -> SurdElement {
        self.element(a, Rational::zero())
    }
}

/// `a + b*sqrt(D)` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurdElement {
    a: Rational,
    b: Rational,
    field: QuadraticField,
}

impl SurdElement {
    pub fn new(a: Rational, b: Rational, d: BigInt, branch: Branch) -> Result<Self> {
        Ok(QuadraticField::new(d, branch)?.element(a, b))
    }

    /// Parses `"(a + b*sqrt(D))"`; `a` and `b` are rational literals and the
    /// middle sign may be `+` or `-`. The outer parentheses are optional.
    pub fn parse(text: &str, branch: Branch) -> Result<Self> {
        let bad = || Error::Parse(format!("surd must look like \"(a + b*sqrt(D))\", got {text:?}"));
        let mut s: String = text
            .chars()
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .filter(|c| !c.is_whitespace())
            .collect();
        if s.starts_with('(') && s.ends_with("))") {
            s = s[1..s.len() - 1].to_string();
        }
        let at = s.find("sqrt(").ok_or_else(bad)?;
        let radicand = s[at + 5..].strip_suffix(')').ok_or_else(bad)?;
        let d: BigInt = radicand.parse().map_err(|_| bad())?;
        let head = &s[..at];
        let head = head.strip_suffix('*').unwrap_or(head);
        // Split "a+b" / "a-b" at the last sign that is not the leading one.
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => {
                let a = parse_rational(&head[..i])?;
                let coeff = &head[i + 1..];
                let b = if coeff.is_empty() { Rational::one() } else { parse_rational(coeff)? };
                (a, if &head[i..i + 1] == "-" { -b } else { b })
            }
            None => {
                let b = match head {
                    "" | "+" => Rational::one(),
                    "-" => -Rational::one(),
                    other => parse_rational(other)?,
                };
                (Rational::zero(), b)
            }
        };
        SurdElement::new(a, b, d, branch)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> SurdElement {
        self.field.element(self.a.clone(), -&self.b)
    }

    /// Field norm `a^2 - b^2 D`; zero only for the zero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.field.d.clone())
    }

    pub fn inverse(&self) -> Option<SurdElement> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.field.element(&self.a / &n, -&self.b / &n))
    }

    pub fn add_rational(&self, r: &Rational) -> SurdElement {
        self.field.element(&self.a + r, self.b.clone())
    }

    pub fn mul_rational(&self, r: &Rational) -> SurdElement {
        self.field.element(&self.a * r, &self.b * r)
    }

    /// Writes the element as `(alpha + beta*sqrt(D)) / delta` with integers
    /// `alpha, beta` and `delta > 0`.
    pub(crate) fn integer_form(&self) -> (BigInt, BigInt, BigInt) {
        let delta = self.a.denom().lcm(self.b.denom());
        let alpha = self.a.numer() * (&delta / self.a.denom());
        let beta = self.b.numer() * (&delta / self.b.denom());
        (alpha, beta, delta)
    }
}

impl fmt::Display for SurdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt({}))", self.a, sign, self.b.abs(), self.field.d)
    }
}

fn same_field(x: &SurdElement, y: &SurdElement) {
    assert_eq!(x.field, y.field, "arithmetic across different quadratic fields");
}

impl Add for &SurdElement {
    type Output = SurdElement;
    fn add(self, rhs: &SurdElement) -> SurdElement {
        same_field(self, rhs);
        self.field.element(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &SurdElement {
    type Output = SurdElement;
    fn sub(self, rhs: &SurdElement) -> SurdElement {
        same_field(self, rhs);
        self.field.element(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &SurdElement {
    type Output = SurdElement;
    fn mul(self, rhs: &SurdElement) -> SurdElement {
        same_field(self, rhs);
        let d = Rational::from_integer(self.field.d.clone());
        self.field.element(
            &self.a * &rhs.a + &self.b * &rhs.b * d,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &SurdElement {
    type Output = SurdElement;
    fn neg(self) -> SurdElement {
        self.field.element(-&self.a, -&self.b)
    }
}

/// The embedding of `Q(sqrt D)` into Q_p: `sqrt(D) = p^t * rho` with `rho`
/// a unit known modulo `p^N`.
#[derive(Debug, Clone)]
pub struct SurdEmbedding {
    ctx: PadicContext,
    field: QuadraticField,
    half_valuation: u64,
    unit_root: BigInt,
}

impl SurdEmbedding {
    pub fn new(field: &QuadraticField, ctx: &PadicContext) -> Result<Self> {
        let p = ctx.p();
        let (v, unit) = split_p_power(&field.d, p);
        if v % 2 == 1 || !is_unit_square(&unit, p) {
            return Err(Error::NotASquare(field.d.to_string(), p));
        }
        let mut root = unit_sqrt(&unit, p, ctx.precision())?;
        if field.branch == Branch::MinusRoot {
            root = modulo(&-root, &pow_p(p, ctx.precision()));
        }
        Ok(SurdEmbedding {
            ctx: *ctx,
            field: field.clone(),
            half_valuation: v / 2,
            unit_root: root,
        })
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    /// `sqrt(D)` modulo `p^n`; `n` must not exceed the certified precision.
    pub fn sqrt_residue(&self, n: usize) -> BigInt {
        let modulus = pow_p(self.ctx.p(), n);
        modulo(&(&self.unit_root * pow_p(self.ctx.p(), self.half_valuation as usize)), &modulus)
    }

    /// Digits to which `alpha + beta*sqrt(D)` is known: `N + t + v_p(beta)`.
    fn certified_digits(&self, beta: &BigInt) -> usize {
        let vb = vp_int(beta, self.ctx.p()).unwrap_or(0) as usize;
        self.ctx.precision() + self.half_valuation as usize + vb
    }

    /// `alpha + beta*sqrt(D)` modulo `p^digits`, using the certified root.
    fn numerator_residue(&self, alpha: &BigInt, beta: &BigInt, digits: usize) -> BigInt {
        let p = self.ctx.p();
        let modulus = pow_p(p, digits);
        let scaled_root = &self.unit_root * pow_p(p, self.half_valuation as usize);
        modulo(&(alpha + beta * scaled_root), &modulus)
    }

    /// Exact `v_p(alpha + beta*sqrt(D))` for integers not both zero.
    pub(crate) fn integer_valuation(&self, alpha: &BigInt, beta: &BigInt) -> Result<i64> {
        let p = self.ctx.p();
        if beta.is_zero() {
            return vp_int(alpha, p).map(|v| v as i64).ok_or(Error::ZeroInput);
        }
        if alpha.is_zero() {
            return Ok((vp_int(beta, p).unwrap() + self.half_valuation) as i64);
        }
        let digits = self.certified_digits(beta);
        let direct = self.numerator_residue(alpha, beta, digits);
        if !direct.is_zero() {
            return Ok(vp_int(&direct, p).unwrap() as i64);
        }
        // v(z) + v(conj z) = v(alpha^2 - beta^2 D); the conjugate is usually shallow.
        let conj = self.numerator_residue(alpha, &-beta, digits);
        if !conj.is_zero() {
            let norm = alpha * alpha - beta * beta * &self.field.d;
            let vn = vp_int(&norm, p).expect("nonzero element has nonzero norm") as i64;
            return Ok(vn - vp_int(&conj, p).unwrap() as i64);
        }
        Err(Error::PrecisionExhausted {
            lowest: 0,
            highest: digits as i64,
            needed: digits + 1,
            available: self.ctx.precision(),
        })
    }

    /// Exact p-adic valuation of an element of the field.
    pub fn valuation(&self, z: &SurdElement) -> Result<ExtendedValuation> {
        debug_assert_eq!(z.field, self.field);
        if z.is_zero() {
            return Ok(ExtendedValuation::Infinity);
        }
        if z.is_rational() {
            return Ok(vp(&z.a, self.ctx.p()));
        }
        let (alpha, beta, delta) = z.integer_form();
        let v = self.integer_valuation(&alpha, &beta)?;
        Ok(ExtendedValuation::Finite(v - vp_int(&delta, self.ctx.p()).unwrap() as i64))
    }

    /// The floor `s(z) = sum_{i=r}^{0} a_i p^i` of an embedded element.
    pub fn floor(&self, z: &SurdElement) -> Result<Rational> {
        if z.is_rational() {
            return Ok(padic_floor_rational(&z.a, &self.ctx));
        }
        let p = self.ctx.p();
        let r = match self.valuation(z)? {
            ExtendedValuation::Infinity => return Ok(Rational::zero()),
            ExtendedValuation::Finite(r) if r > 0 => return Ok(Rational::zero()),
            ExtendedValuation::Finite(r) => r,
        };
        let (alpha, beta, delta) = z.integer_form();
        let (e, delta_unit) = split_p_power(&delta, p);
        let count = (1 - r) as usize;
        let w = (r + e as i64) as usize;
        let available = self.certified_digits(&beta);
        if w + count > available {
            return Err(Error::PrecisionExhausted {
                lowest: r,
                highest: 0,
                needed: w + count,
                available,
            });
        }
        // y = z * p^(-r) is a unit; its first `count` digits fix s(z).
        let numerator = self.numerator_residue(&alpha, &beta, w + count) / pow_p(p, w);
        let modulus = pow_p(p, count);
        let y = modulo(&(numerator * mod_inverse(&delta_unit, &modulus)), &modulus);
        let digits = residue_digits(&y, p, self.ctx.mode(), count);
        let mut acc = BigInt::zero();
        for d in digits.iter().rev() {
            acc = acc * BigInt::from(p) + BigInt::from(*d);
        }
        Ok(Rational::from_integer(acc) * pow_p_rational(p, r))
    }
}

/// Exact `v_p(z)` of a surd under the context's embedding.
pub fn surd_valuation(z: &SurdElement, ctx: &PadicContext) -> Result<ExtendedValuation> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    SurdEmbedding::new(z.field(), ctx)?.valuation(z)
}
