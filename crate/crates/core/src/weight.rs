//! Nonnegative rational weights (the grading of a ℚ-Rees algebra) and
//! orders extended by infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;

/// A reduced fraction `numerator / denominator` with `numerator ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Ratio<i64>);

impl Weight {
    pub const ZERO: Weight = Weight(Ratio::new_raw(0, 1));
    pub const ONE: Weight = Weight(Ratio::new_raw(1, 1));

    pub fn new(numer: i64, denom: i64) -> Weight {
        assert!(denom != 0, "zero denominator");
        let r = Ratio::new(numer, denom);
        assert!(r >= Ratio::zero(), "weights are nonnegative");
        Weight(r)
    }

    pub fn int(n: i64) -> Weight {
        Weight::new(n, 1)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: Weight) -> Option<Weight> {
        let d = self.0 - other.0;
        (d >= Ratio::zero()).then_some(Weight(d))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Least common multiple of the denominators of `weights` (1 when empty).
    pub fn common_denominator<'a, I: IntoIterator<Item = &'a Weight>>(weights: I) -> i64 {
        weights.into_iter().fold(1i64, |acc, w| acc.lcm(&w.denom()))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        self.checked_sub(rhs).expect("negative weight")
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        Weight(self.0 * rhs.0)
    }
}

impl Div for Weight {
    type Output = Weight;
    fn div(self, rhs: Weight) -> Weight {
        assert!(!rhs.is_zero(), "division by zero weight");
        Weight(self.0 / rhs.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("invalid weight `{s}`"),
        };
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d <= 0 || n < 0 {
            return Err(bad());
        }
        Ok(Weight::new(n, d))
    }
}

impl serde::Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A weight or `∞` (the order of the zero polynomial / zero algebra).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Weight),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<Weight> {
        match self {
            Extended::Finite(w) => Some(w),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }
}

impl From<Weight> for Extended {
    fn from(w: Weight) -> Self {
        Extended::Finite(w)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
            (Extended::Infinity, _) => Ordering::Greater,
            (_, Extended::Infinity) => Ordering::Less,
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
        }
    }
}

impl serde::Serialize for Extended {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(w) => w.fmt(f),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}
