use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Digit convention for the p-adic floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Symmetric digits in `[-(p-1)/2, (p-1)/2]`.
    Browkin,
    /// Digits in `[0, p-1]`.
    Ruban,
}

impl Mode {
    /// Representative of the residue class `r mod p` (`0 <= r < p`) in this digit set.
    pub fn digit(self, residue: u64, p: u64) -> i64 {
        debug_assert!(residue < p);
        match self {
            Mode::Ruban => residue as i64,
            Mode::Browkin => {
                if residue > (p - 1) / 2 {
                    residue as i64 - p as i64
                } else {
                    residue as i64
                }
            }
        }
    }

    pub fn contains(self, digit: i64, p: u64) -> bool {
        let p = p as i64;
        match self {
            Mode::Ruban => (0..p).contains(&digit),
            Mode::Browkin => digit.abs() <= (p - 1) / 2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Browkin => "browkin",
            Mode::Ruban => "ruban",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "browkin" | "b" => Ok(Mode::Browkin),
            "ruban" | "r" => Ok(Mode::Ruban),
            other => Err(Error::Parse(format!("unknown mode {other:?} (expected browkin or ruban)"))),
        }
    }
}

pub const DEFAULT_PRECISION: usize = 16 * 200;

/// The prime, digit convention and square-root precision shared by all
/// p-adic operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PadicContext {
    p: u64,
    mode: Mode,
    precision: usize,
}

impl PadicContext {
    pub fn new(p: u64, mode: Mode) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PadicContext {
            p,
            mode,
            precision: DEFAULT_PRECISION,
        })
    }

    pub fn with_precision(mut self, precision: usize) -> Self {
        self.precision = precision.max(1);
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Digits of square roots certified modulo `p^precision`.
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn digit(&self, residue: u64) -> i64 {
        self.mode.digit(residue, self.p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
