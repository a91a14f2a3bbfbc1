//! Overflow-safe integers: machine words that promote to big integers on demand.
//!
//! Batch sweeps evaluate quadratic forms and loop-operator exponents whose
//! intermediate products can leave the 64-bit range, so every arithmetic
//! path either stays in `i64` or promotes to [`BigInt`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero as _};

/// Arbitrary-size signed integer with an inline `i64` fast path.
///
/// Canonical form: the `Big` variant is only used for values outside the
/// `i64` range, so equality and ordering can branch on the variant.
#[derive(Clone, Debug)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn to_i128(&self) -> Option<i128> {
        match self {
            Int::Small(v) => Some(*v as i128),
            Int::Big(b) => b.to_i128(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Int::Small(v) => *v as f64,
            Int::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => (*v).signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(b.abs()),
        }
    }

    pub fn add(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_bigint() + rhs.to_bigint())
    }

    pub fn sub(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_bigint() - rhs.to_bigint())
    }

    pub fn mul(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(p) = a.checked_mul(*b) {
                return Int::Small(p);
            }
        }
        Int::from_big(self.to_bigint() * rhs.to_bigint())
    }

    pub fn neg(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }

    pub fn gcd(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            let g = (a.unsigned_abs() as u128).gcd(&(b.unsigned_abs() as u128));
            if g <= i64::MAX as u128 {
                return Int::Small(g as i64);
            }
        }
        Int::from_big(self.to_bigint().gcd(&rhs.to_bigint()))
    }

    /// Quotient of an exact division. Panics if `rhs` is zero or does not
    /// divide `self`; callers only divide where divisibility is guaranteed.
    pub fn div_exact(&self, rhs: &Int) -> Int {
        assert!(!rhs.is_zero(), "Int::div_exact by zero");
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            // i64::MIN / -1 is the single overflowing case.
            if !(*a == i64::MIN && *b == -1) {
                assert_eq!(a % b, 0, "Int::div_exact: {a} not divisible by {b}");
                return Int::Small(a / b);
            }
        }
        let (q, r) = self.to_bigint().div_rem(&rhs.to_bigint());
        assert!(r.is_zero(), "Int::div_exact: inexact division");
        Int::from_big(q)
    }

    pub fn div_floor(&self, rhs: &Int) -> Int {
        assert!(!rhs.is_zero(), "Int::div_floor by zero");
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if !(*a == i64::MIN && *b == -1) {
                return Int::Small(a.div_euclid(*b) - i64::from(*b < 0 && a.rem_euclid(*b) != 0));
            }
        }
        Int::from_big(self.to_bigint().div_floor(&rhs.to_bigint()))
    }

    /// Least non-negative residue of `self` modulo `m > 0`.
    pub fn rem_euclid(&self, m: &Int) -> Int {
        assert!(m.signum() > 0, "Int::rem_euclid needs positive modulus");
        if let (Int::Small(a), Int::Small(b)) = (self, m) {
            return Int::Small(a.rem_euclid(*b));
        }
        Int::from_big(self.to_bigint().mod_floor(&m.to_bigint()))
    }
}

// `div_floor` above: `i64::div_euclid` already floors for positive divisors;
// the correction term handles negative divisors, matching BigInt::div_floor.

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<i128> for Int {
    fn from(v: i128) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(Box::new(BigInt::from(v))),
        }
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        Int::from(v as i128)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a == b,
            (Int::Big(a), Int::Big(b)) => a == b,
            // Canonical form: Big never holds an i64-range value.
            _ => false,
        }
    }
}

impl Eq for Int {}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            (Int::Big(a), Int::Big(b)) => a.cmp(b),
            (Int::Small(_), Int::Big(b)) => {
                if b.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (Int::Big(a), Int::Small(_)) => {
                if a.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIntError(pub String);

impl fmt::Display for ParseIntError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid integer literal: {}", self.0)
    }
}

impl std::error::Error for ParseIntError {}

impl FromStr for Int {
    type Err = ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        BigInt::from_str(s)
            .map(Int::from_big)
            .map_err(|_| ParseIntError(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promotion_on_overflow() {
        let a = Int::from(i64::MAX);
        let b = a.add(&Int::ONE);
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(b.sub(&Int::ONE), a);
    }

    #[test]
    fn demotion_back_to_small() {
        let a = Int::from(i64::MAX).add(&Int::ONE);
        let back = a.add(&Int::Small(-1));
        assert!(matches!(back, Int::Small(_)));
        assert_eq!(back, Int::from(i64::MAX));
    }

    #[test]
    fn mul_promotes() {
        let a = Int::from(1_i64 << 40);
        let sq = a.mul(&a);
        assert_eq!(sq.to_bigint(), BigInt::from(1_i128 << 80));
        assert_eq!(sq.to_i64(), None);
    }

    #[test]
    fn neg_of_min_promotes() {
        let m = Int::from(i64::MIN);
        let n = m.neg();
        assert_eq!(n.to_bigint(), -BigInt::from(i64::MIN));
        assert_eq!(m.abs(), n);
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = Int::from(84);
        let b = Int::from(-12);
        assert_eq!(a.div_exact(&b), Int::from(-7));
        assert_eq!(a.gcd(&b), Int::from(12));
        assert_eq!(Int::ZERO.gcd(&Int::ZERO), Int::ZERO);
    }

    #[test]
    fn floor_division_matches_bigint() {
        for a in [-7i64, -1, 0, 1, 7, 13] {
            for b in [-3i64, -2, 2, 3, 5] {
                let got = Int::from(a).div_floor(&Int::from(b));
                let want = Int::from_big(BigInt::from(a).div_floor(&BigInt::from(b)));
                assert_eq!(got, want, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn residues_are_nonnegative() {
        assert_eq!(Int::from(-13).rem_euclid(&Int::from(5)), Int::from(2));
        assert_eq!(Int::from(13).rem_euclid(&Int::from(5)), Int::from(3));
    }

    #[test]
    fn ordering_across_variants() {
        let big = Int::from(i64::MAX).add(&Int::from(2));
        let neg_big = big.neg();
        assert!(big > Int::from(i64::MAX));
        assert!(neg_big < Int::from(i64::MIN));
        assert_ne!(big, Int::from(0));
        // −(i64::MAX + 1) demotes back to the small representation
        assert_eq!(Int::from(i64::MAX).add(&Int::ONE).neg(), Int::from(i64::MIN));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-17", "170141183460469231731687303715884105727"] {
            let v: Int = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("12x".parse::<Int>().is_err());
    }
}
