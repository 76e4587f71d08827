use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

/// A p-adic valuation extended by `Infinity`, the valuation of zero.
///
/// The derived order puts every finite value below `Infinity`, so the
/// p-adic norm `p^(-v)` of zero compares below every positive norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedValuation {
    Finite(i64),
    Infinity,
}

impl ExtendedValuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtendedValuation::Finite(v) => Some(v),
            ExtendedValuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedValuation::Infinity)
    }

    /// Strict comparison against an integer threshold: `self > bound`.
    pub fn exceeds(self, bound: i64) -> bool {
        self > ExtendedValuation::Finite(bound)
    }
}

impl From<i64> for ExtendedValuation {
    fn from(v: i64) -> Self {
        ExtendedValuation::Finite(v)
    }
}

impl Add for ExtendedValuation {
    type Output = ExtendedValuation;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedValuation::Finite(a), ExtendedValuation::Finite(b)) => {
                ExtendedValuation::Finite(a + b)
            }
            _ => ExtendedValuation::Infinity,
        }
    }
}

impl fmt::Display for ExtendedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValuation::Finite(v) => write!(f, "{v}"),
            ExtendedValuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Finite valuations serialize as JSON integers, `Infinity` as the string `"inf"`.
impl Serialize for ExtendedValuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedValuation::Finite(v) => serializer.serialize_i64(*v),
            ExtendedValuation::Infinity => serializer.serialize_str("inf"),
        }
    }
}
