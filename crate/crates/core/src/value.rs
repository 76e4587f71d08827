//! Rational-or-surd inputs and the floor dispatcher.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::context::PadicContext;
use crate::digits::padic_floor_rational;
use crate::error::{Error, Result};
use crate::rational::{vp, Rational};
use crate::surd::{SurdElement, SurdEmbedding};
use crate::valuation::ExtendedValuation;

/// An exact element of Q or of a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PadicValue {
    Rational(Rational),
    Surd(SurdElement),
}

impl PadicValue {
    pub fn is_zero(&self) -> bool {
        match self {
            PadicValue::Rational(r) => r.is_zero(),
            PadicValue::Surd(s) => s.is_zero(),
        }
    }

    pub fn sub_rational(&self, r: &Rational) -> PadicValue {
        match self {
            PadicValue::Rational(x) => PadicValue::Rational(x - r),
            PadicValue::Surd(s) => PadicValue::Surd(s.add_rational(&-r)).normalized(),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> PadicValue {
        match self {
            PadicValue::Rational(x) => PadicValue::Rational(x * r),
            PadicValue::Surd(s) => PadicValue::Surd(s.mul_rational(r)).normalized(),
        }
    }

    pub fn square(&self) -> PadicValue {
        match self {
            PadicValue::Rational(x) => PadicValue::Rational(x * x),
            PadicValue::Surd(s) => PadicValue::Surd(s * s).normalized(),
        }
    }

    pub fn inverse(&self) -> Option<PadicValue> {
        match self {
            PadicValue::Rational(x) if x.is_zero() => None,
            PadicValue::Rational(x) => Some(PadicValue::Rational(Rational::one() / x)),
            PadicValue::Surd(s) => s.inverse().map(|i| PadicValue::Surd(i).normalized()),
        }
    }

    /// Both operands as elements of a common field (rationals lift into the surd's field).
    fn lift_pair(&self, other: &PadicValue) -> Option<(SurdElement, SurdElement)> {
        match (self, other) {
            (PadicValue::Rational(_), PadicValue::Rational(_)) => None,
            (PadicValue::Surd(x), PadicValue::Surd(y)) => Some((x.clone(), y.clone())),
            (PadicValue::Surd(x), PadicValue::Rational(r)) => Some((x.clone(), x.field().from_rational(r.clone()))),
            (PadicValue::Rational(r), PadicValue::Surd(y)) => Some((y.field().from_rational(r.clone()), y.clone())),
        }
    }

    pub fn add(&self, other: &PadicValue) -> PadicValue {
        match self.lift_pair(other) {
            None => PadicValue::Rational(self.as_rational().unwrap() + other.as_rational().unwrap()),
            Some((x, y)) => PadicValue::Surd(&x + &y).normalized(),
        }
    }

    pub fn mul(&self, other: &PadicValue) -> PadicValue {
        match self.lift_pair(other) {
            None => PadicValue::Rational(self.as_rational().unwrap() * other.as_rational().unwrap()),
            Some((x, y)) => PadicValue::Surd(&x * &y).normalized(),
        }
    }

    /// `self / other`, or `None` when `other` is zero.
    pub fn div(&self, other: &PadicValue) -> Option<PadicValue> {
        other.inverse().map(|inv| self.mul(&inv))
    }

    /// Surds with a zero irrational part collapse to rationals.
    fn normalized(self) -> PadicValue {
        match self {
            PadicValue::Surd(s) if s.is_rational() => PadicValue::Rational(s.a().clone()),
            other => other,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            PadicValue::Rational(r) => Some(r),
            PadicValue::Surd(_) => None,
        }
    }

    pub fn as_surd(&self) -> Option<&SurdElement> {
        match self {
            PadicValue::Surd(s) => Some(s),
            PadicValue::Rational(_) => None,
        }
    }
}

impl From<Rational> for PadicValue {
    fn from(r: Rational) -> Self {
        PadicValue::Rational(r)
    }
}

impl From<SurdElement> for PadicValue {
    fn from(s: SurdElement) -> Self {
        PadicValue::Surd(s).normalized()
    }
}

impl fmt::Display for PadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicValue::Rational(r) => write!(f, "{r}"),
            PadicValue::Surd(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for PadicValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Valuations and floors of values from one field, reusing the Hensel root.
#[derive(Debug, Clone)]
pub struct Evaluator {
    ctx: PadicContext,
    embedding: Option<SurdEmbedding>,
}

impl Evaluator {
    /// Prepares an evaluator for `x` and anything in its field.
    pub fn for_value(x: &PadicValue, ctx: &PadicContext) -> Result<Self> {
        let embedding = match x {
            PadicValue::Surd(s) => Some(SurdEmbedding::new(s.field(), ctx)?),
            PadicValue::Rational(_) => None,
        };
        Ok(Evaluator { ctx: *ctx, embedding })
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn embedding(&self) -> Option<&SurdEmbedding> {
        self.embedding.as_ref()
    }

    fn embedding_for(&self, s: &SurdElement) -> Result<&SurdEmbedding> {
        match &self.embedding {
            Some(e) if e.field() == s.field() => Ok(e),
            _ => Err(Error::Unsupported(format!("no embedding prepared for {s}"))),
        }
    }

    pub fn valuation(&self, x: &PadicValue) -> Result<ExtendedValuation> {
        match x {
            PadicValue::Rational(r) => Ok(vp(r, self.ctx.p())),
            PadicValue::Surd(s) => self.embedding_for(s)?.valuation(s),
        }
    }

    pub fn floor(&self, x: &PadicValue) -> Result<Rational> {
        match x {
            PadicValue::Rational(r) => Ok(padic_floor_rational(r, &self.ctx)),
            PadicValue::Surd(s) => self.embedding_for(s)?.floor(s),
        }
    }

    /// `v_p(x - r)` for a rational `r`.
    pub fn distance_valuation(&self, x: &PadicValue, r: &Rational) -> Result<ExtendedValuation> {
        self.valuation(&x.sub_rational(r))
    }
}

/// `s(x) = sum_{i=r}^{0} a_i p^i` for a rational or an embedded surd.
pub fn padic_floor(x: &PadicValue, ctx: &PadicContext) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Evaluator::for_value(x, ctx)?.floor(x)
}
