//! Exact coefficient fields: the rationals and prime fields.
//!
//! Scalars are always carried as [`BigRational`]; in a prime field they are
//! kept as canonical residues `0..p` with denominator one.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    fn modulus(&self) -> Option<BigInt> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(BigInt::from(*p)),
        }
    }

    /// Canonical representative; fails only when a denominator vanishes mod p.
    pub fn try_normalize(&self, x: Scalar) -> Option<Scalar> {
        match self.modulus() {
            None => Some(x),
            Some(p) => {
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return None;
                }
                let inv = den.modpow(&(&p - BigInt::from(2)), &p);
                Some(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn normalize(&self, x: Scalar) -> Scalar {
        self.try_normalize(x)
            .expect("denominator divisible by the characteristic")
    }

    pub fn from_int<T: Into<BigInt>>(&self, n: T) -> Scalar {
        self.normalize(BigRational::from_integer(n.into()))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.normalize(-a)
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self.modulus() {
            None => a.recip(),
            Some(p) => {
                let n = a.numer().mod_floor(&p);
                BigRational::from_integer(n.modpow(&(&p - BigInt::from(2)), &p))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Parses a decimal integer or `p/q` literal into the field.
    pub fn parse_scalar(&self, text: &str) -> Option<Scalar> {
        let (n, d) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        self.try_normalize(BigRational::new(n, d))
    }

    pub fn scalar_to_string(&self, a: &Scalar) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        a.is_one()
    }

    pub fn is_minus_one(&self, a: &Scalar) -> bool {
        match self {
            FieldSpec::Rationals => a.is_integer() && a.numer() == &BigInt::from(-1),
            FieldSpec::PrimeField(p) => *p > 2 && a.numer().to_u64() == Some(p - 1),
        }
    }

    /// True when `a` should print with a leading minus sign.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        matches!(self, FieldSpec::Rationals) && a.is_negative()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F {p}"),
        }
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_int(3);
        assert_eq!(f.mul(&a, &f.inv(&a)), BigRational::one());
        assert_eq!(f.from_int(-1), f.from_int(6));
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_int(4));
        assert!(f.parse_scalar("1/7").is_none());
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(FieldSpec::prime(4), Err(Error::NotPrime(4)));
        assert!(FieldSpec::prime(2).is_ok());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 2), BigInt::from(3));
        assert_eq!(binomial(5, 0), BigInt::one());
        assert_eq!(binomial(2, 3), BigInt::zero());
    }
}
