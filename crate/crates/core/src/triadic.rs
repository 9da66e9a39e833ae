//! Exact rationals whose denominator is a power of three.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `num / 3^den_pow3` in lowest terms: `num` is not divisible by 3 unless `den_pow3 == 0`.
///
/// Arithmetic panics on `i128` overflow; desk-scale values stay far below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTriadic")]
pub struct Triadic {
    num: i128,
    den_pow3: u32,
}

#[derive(Deserialize)]
struct RawTriadic {
    num: i128,
    den_pow3: u32,
}

impl TryFrom<RawTriadic> for Triadic {
    type Error = Error;

    fn try_from(raw: RawTriadic) -> Result<Self> {
        pow3(raw.den_pow3)
            .map(|_| Triadic::new(raw.num, raw.den_pow3))
            .ok_or_else(|| Error::Input(format!("3^{} overflows", raw.den_pow3)))
    }
}

fn pow3(e: u32) -> Option<i128> {
    3i128.checked_pow(e)
}

fn pow3_or_panic(e: u32) -> i128 {
    pow3(e).expect("triadic overflow: power of 3 too large")
}

impl Triadic {
    pub const ZERO: Triadic = Triadic { num: 0, den_pow3: 0 };
    pub const ONE: Triadic = Triadic { num: 1, den_pow3: 0 };

    /// Builds `num / 3^den_pow3` and reduces it.
    pub fn new(mut num: i128, mut den_pow3: u32) -> Self {
        if num == 0 {
            den_pow3 = 0;
        }
        while den_pow3 > 0 && num % 3 == 0 {
            num /= 3;
            den_pow3 -= 1;
        }
        Triadic { num, den_pow3 }
    }

    pub fn from_int(n: i128) -> Self {
        Triadic { num: n, den_pow3: 0 }
    }

    /// `num / den`; `den` must itself be a power of 3 (1 counts).
    pub fn from_ratio(num: i128, den: i128) -> Result<Self> {
        if den <= 0 {
            return Err(Error::Input(format!("denominator must be positive, got {den}")));
        }
        let mut e = 0;
        let mut rest = den;
        while rest % 3 == 0 {
            rest /= 3;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::Input(format!(
                "{num}/{den} is not triadic: {den} is not a power of 3"
            )));
        }
        Ok(Triadic::new(num, e))
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den_pow3(&self) -> u32 {
        self.den_pow3
    }

    /// The denominator `3^den_pow3`.
    pub fn den(&self) -> i128 {
        pow3_or_panic(self.den_pow3)
    }

    /// Multiplies by `3^k`.
    pub fn mul_pow3(self, k: u32) -> Self {
        if k <= self.den_pow3 {
            Triadic::new(self.num, self.den_pow3 - k)
        } else {
            Triadic::new(
                self.num
                    .checked_mul(pow3_or_panic(k - self.den_pow3))
                    .expect("triadic overflow"),
                0,
            )
        }
    }

    /// Divides by `3^k`.
    pub fn div_pow3(self, k: u32) -> Self {
        Triadic::new(self.num, self.den_pow3 + k)
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<i128> {
        (self.den_pow3 == 0).then_some(self.num)
    }

    pub fn is_integer(&self) -> bool {
        self.den_pow3 == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / 3f64.powi(self.den_pow3 as i32)
    }

    /// Both values rescaled to the common exponent `max(e1, e2)`.
    fn aligned(self, other: Triadic) -> (i128, i128, u32) {
        let e = self.den_pow3.max(other.den_pow3);
        let a = self
            .num
            .checked_mul(pow3_or_panic(e - self.den_pow3))
            .expect("triadic overflow");
        let b = other
            .num
            .checked_mul(pow3_or_panic(e - other.den_pow3))
            .expect("triadic overflow");
        (a, b, e)
    }
}

impl Add for Triadic {
    type Output = Triadic;

    fn add(self, rhs: Triadic) -> Triadic {
        let (a, b, e) = self.aligned(rhs);
        Triadic::new(a.checked_add(b).expect("triadic overflow"), e)
    }
}

impl Sub for Triadic {
    type Output = Triadic;

    fn sub(self, rhs: Triadic) -> Triadic {
        self + (-rhs)
    }
}

impl Neg for Triadic {
    type Output = Triadic;

    fn neg(self) -> Triadic {
        Triadic {
            num: -self.num,
            den_pow3: self.den_pow3,
        }
    }
}

impl Mul for Triadic {
    type Output = Triadic;

    // Powers of three multiply by adding exponents.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Triadic) -> Triadic {
        Triadic::new(
            self.num.checked_mul(rhs.num).expect("triadic overflow"),
            self.den_pow3 + rhs.den_pow3,
        )
    }
}

impl Mul<i128> for Triadic {
    type Output = Triadic;

    fn mul(self, rhs: i128) -> Triadic {
        Triadic::new(
            self.num.checked_mul(rhs).expect("triadic overflow"),
            self.den_pow3,
        )
    }
}

impl From<i128> for Triadic {
    fn from(n: i128) -> Self {
        Triadic::from_int(n)
    }
}

impl Ord for Triadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl PartialOrd for Triadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Triadic {
    /// `p` for integers, `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_pow3 == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den())
        }
    }
}

impl FromStr for Triadic {
    type Err = Error;

    /// Accepts `p`, `p/q` with `q` a power of 3, and `p/3^e`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("cannot parse triadic number {s:?}"));
        let s = s.trim();
        let Some((num, den)) = s.split_once('/') else {
            return Ok(Triadic::from_int(s.parse().map_err(|_| bad())?));
        };
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim();
        if let Some(exp) = den.strip_prefix("3^") {
            let e: u32 = exp.trim().parse().map_err(|_| bad())?;
            if pow3(e).is_none() {
                return Err(Error::Input(format!("3^{e} is too large")));
            }
            return Ok(Triadic::new(num, e));
        }
        Triadic::from_ratio(num, den.parse().map_err(|_| bad())?)
    }
}
