//! Exact half-integers.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

/// An element of ½ℤ, stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    doubled: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid half-integer {0:?}")]
pub struct HalfIntParseError(pub String);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const HALF: HalfInt = HalfInt { doubled: 1 };
    pub const ONE: HalfInt = HalfInt { doubled: 2 };

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub const fn int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub const fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    /// True when `self - other` is an integer.
    pub const fn same_coset(self, other: HalfInt) -> bool {
        (self.doubled - other.doubled) % 2 == 0
    }

    /// The integer value, if there is one.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.doubled / 2)
    }

    pub fn ceil(self) -> i64 {
        self.doubled.div_euclid(2) + self.doubled.rem_euclid(2)
    }

    pub fn floor(self) -> i64 {
        self.doubled.div_euclid(2)
    }

    pub fn abs(self) -> Self {
        HalfInt { doubled: self.doubled.abs() }
    }

    /// Half of an integer, e.g. `half(3) == 3/2`.
    pub const fn half(n: i64) -> Self {
        HalfInt { doubled: n }
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::int(n)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled + rhs.doubled }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled - rhs.doubled }
    }
}

impl Add<i64> for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: i64) -> HalfInt {
        HalfInt { doubled: self.doubled + 2 * rhs }
    }
}

impl Sub<i64> for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: i64) -> HalfInt {
        HalfInt { doubled: self.doubled - 2 * rhs }
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.doubled += rhs.doubled;
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.doubled -= rhs.doubled;
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { doubled: -self.doubled }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfInt {
    type Err = HalfIntParseError;

    /// Accepts `k`, `-k`, `k/2` and `-k/2`. Only lowest terms are
    /// accepted for the `/2` form, so printing is the inverse of parsing.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || HalfIntParseError(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (num, halved) = match body.strip_suffix("/2") {
            Some(n) => (n, true),
            None => (body, false),
        };
        if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let n: i64 = num.parse().map_err(|_| err())?;
        if halved && n % 2 == 0 {
            return Err(err());
        }
        let doubled = if halved { n } else { n.checked_mul(2).ok_or_else(err)? };
        Ok(HalfInt { doubled: if neg { -doubled } else { doubled } })
    }
}
