//! Exact rational numbers, always stored reduced with a positive denominator.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::int::Int;

/// Reduced fraction: `gcd(|num|, den) = 1`, `den >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational {
    num: Int,
    den: Int,
}

impl Rational {
    pub fn zero() -> Rational {
        Rational { num: Int::ZERO, den: Int::ONE }
    }

    pub fn one() -> Rational {
        Rational { num: Int::ONE, den: Int::ONE }
    }

    /// Builds `num/den`, reducing to canonical form. Panics on `den = 0`.
    pub fn new(num: Int, den: Int) -> Rational {
        assert!(!den.is_zero(), "Rational with zero denominator");
        let mut num = num;
        let mut den = den;
        if den.is_negative() {
            num = num.neg();
            den = den.neg();
        }
        if num.is_zero() {
            return Rational::zero();
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g);
            den = den.div_exact(&g);
        }
        Rational { num, den }
    }

    pub fn from_int(v: i64) -> Rational {
        Rational { num: Int::from(v), den: Int::ONE }
    }

    pub fn from_integer(v: Int) -> Rational {
        Rational { num: v, den: Int::ONE }
    }

    pub fn ratio(num: i64, den: i64) -> Rational {
        Rational::new(Int::from(num), Int::from(den))
    }

    pub fn numerator(&self) -> &Int {
        &self.num
    }

    pub fn denominator(&self) -> &Int {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn add(&self, rhs: &Rational) -> Rational {
        if self.den.is_one() && rhs.den.is_one() {
            return Rational { num: self.num.add(&rhs.num), den: Int::ONE };
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Rational::new(num, den)
    }

    pub fn sub(&self, rhs: &Rational) -> Rational {
        if self.den.is_one() && rhs.den.is_one() {
            return Rational { num: self.num.sub(&rhs.num), den: Int::ONE };
        }
        let num = self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Rational::new(num, den)
    }

    pub fn mul(&self, rhs: &Rational) -> Rational {
        if self.den.is_one() && rhs.den.is_one() {
            return Rational { num: self.num.mul(&rhs.num), den: Int::ONE };
        }
        Rational::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "Rational division by zero");
        Rational::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn neg(&self) -> Rational {
        Rational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn abs(&self) -> Rational {
        Rational { num: self.num.abs(), den: self.den.clone() }
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> Int {
        self.num.div_floor(&self.den)
    }

    /// Representative of `self` in `[0, 1)` modulo 1.
    pub fn mod1(&self) -> Rational {
        self.sub(&Rational::from_integer(self.floor()))
    }

    /// Exact non-negative square root, if one exists.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let num = self.num.to_bigint().sqrt();
        let den = self.den.to_bigint().sqrt();
        if &num * &num == self.num.to_bigint() && &den * &den == self.den.to_bigint() {
            Some(Rational::new(Int::from(num), Int::from(den)))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators are positive, so cross-multiplication preserves order.
        self.num.mul(&other.den).cmp(&other.num.mul(&self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal: {}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        match s.split_once('/') {
            None => {
                let num: Int = s.parse().map_err(|_| err())?;
                Ok(Rational::from_integer(num))
            }
            Some((n, d)) => {
                let num: Int = n.parse().map_err(|_| err())?;
                let den: Int = d.parse().map_err(|_| err())?;
                if den.is_zero() {
                    return Err(err());
                }
                Ok(Rational::new(num, den))
            }
        }
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
