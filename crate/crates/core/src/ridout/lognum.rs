use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::fixed;

/// A positive number `10^(log10_int + log10_frac)` with `log10_frac` in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogNumber {
    pub log10_int: BigInt,
    pub log10_frac: f64,
}

impl LogNumber {
    /// Normalizes an integer part plus an arbitrary `f64` offset.
    pub fn new(int: BigInt, offset: f64) -> Self {
        let whole = offset.floor();
        let mut frac = offset - whole;
        let mut int = int + BigInt::from(whole as i64);
        if frac >= 1.0 {
            frac -= 1.0;
            int += 1;
        }
        LogNumber {
            log10_int: int,
            log10_frac: frac.max(0.0),
        }
    }

    pub fn from_log10(x: f64) -> Self {
        LogNumber::new(BigInt::zero(), x)
    }

    /// `ln x` given in fixed point with `bits` fractional bits.
    pub(crate) fn from_ln_fixed(ln_x: &BigInt, bits: u64) -> Self {
        let g = bits + 8;
        let scaled = (ln_x << 8u32 << g) / fixed::ln10(g);
        let (int, rem) = scaled.div_mod_floor(&(BigInt::from(1) << g));
        LogNumber::new(int, fixed::to_f64(&rem, g))
    }

    /// Exact positive integer.
    pub fn from_bigint(n: &BigInt) -> Self {
        assert!(n.is_positive(), "LogNumber needs a positive value");
        let digits = n.to_string();
        let len = digits.len();
        if len <= 17 {
            return LogNumber::from_log10(n.to_f64().unwrap().log10());
        }
        let lead: f64 = digits[..17].parse().unwrap();
        LogNumber::new(BigInt::from(len - 17), lead.log10())
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x > 0.0, "LogNumber needs a positive value");
        LogNumber::from_log10(x.log10())
    }

    /// `log10` as an `f64` (loses precision once the integer part is large).
    pub fn log10_approx(&self) -> f64 {
        self.log10_int.to_f64().unwrap_or(f64::INFINITY) + self.log10_frac
    }

    pub fn mul(&self, other: &LogNumber) -> LogNumber {
        LogNumber::new(&self.log10_int + &other.log10_int, self.log10_frac + other.log10_frac)
    }

    pub fn add(&self, other: &LogNumber) -> LogNumber {
        let (hi, lo) = if self >= other { (self, other) } else { (other, self) };
        let gap = &hi.log10_int - &lo.log10_int;
        if gap > BigInt::from(40) {
            return hi.clone();
        }
        let diff = gap.to_f64().unwrap() + hi.log10_frac - lo.log10_frac;
        LogNumber::new(hi.log10_int.clone(), hi.log10_frac + (1.0 + 10f64.powf(-diff)).log10())
    }

    /// The value as an `f64`, when it fits.
    pub fn to_f64(&self) -> Option<f64> {
        let x = 10f64.powf(self.log10_approx());
        x.is_finite().then_some(x)
    }
}

impl Eq for LogNumber {}

impl PartialOrd for LogNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.log10_int
            .cmp(&other.log10_int)
            .then(self.log10_frac.total_cmp(&other.log10_frac))
    }
}

impl fmt::Display for LogNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "10^({} + {:.15})", self.log10_int, self.log10_frac)
    }
}

impl Serialize for LogNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LogNumber", 2)?;
        s.serialize_field("log10_int", &self.log10_int.to_string())?;
        s.serialize_field("log10_frac", &self.log10_frac)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        let x = LogNumber::from_bigint(&BigInt::from(1000));
        assert_eq!(x.log10_int, BigInt::from(3));
        assert!(x.log10_frac.abs() < 1e-15);
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = LogNumber::from_bigint(&big);
        assert_eq!(x.log10_int, BigInt::from(29));
        assert!((x.log10_frac - 1.2345678901234567f64.log10()).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_and_order() {
        let a = LogNumber::from_f64(2.0);
        let b = LogNumber::from_f64(3.0);
        assert!((a.mul(&b).to_f64().unwrap() - 6.0).abs() < 1e-12);
        assert!((a.add(&b).to_f64().unwrap() - 5.0).abs() < 1e-12);
        assert!(a < b);
        let huge = LogNumber::new(BigInt::from(10).pow(50), 0.5);
        assert_eq!(huge.add(&a), huge);
        assert!(huge > b);
    }

    #[test]
    fn serializes_as_string_and_double() {
        let x = LogNumber::new(BigInt::from(12), 0.25);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"log10_int":"12","log10_frac":0.25}"#);
    }

    #[test]
    fn from_natural_log() {
        let bits = 128;
        let ln_1000 = fixed::ln_rational(&crate::rational::rational_from_int(1000), bits);
        let x = LogNumber::from_ln_fixed(&ln_1000, bits);
        assert!(x.log10_int == BigInt::from(3) && x.log10_frac < 1e-12 || x.log10_int == BigInt::from(2) && x.log10_frac > 1.0 - 1e-12);
    }
}
