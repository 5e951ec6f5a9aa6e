//! Coefficient fields for exact linear algebra.
//!
//! [`Rational`] keeps values in machine words while they fit and promotes to
//! arbitrary precision on overflow, so differentials with small entries stay
//! fast without ever losing exactness.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient ring selector exposed on the CLI and the C ABI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Ring {
    /// Exact rationals.
    #[default]
    #[serde(rename = "q")]
    Rational,
    /// The two-element field.
    #[serde(rename = "f2")]
    F2,
}

impl Ring {
    pub fn tag(self) -> &'static str {
        match self {
            Ring::Rational => "q",
            Ring::F2 => "f2",
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" | "Q" | "rational" => Ok(Ring::Rational),
            "f2" | "F2" | "z2" => Ok(Ring::F2),
            other => Err(format!("unknown ring '{other}' (expected q or f2)")),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Field operations needed by the elimination routines.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    /// True for `1` and `-1`; the preferred elimination pivots.
    fn is_unit_sign(&self) -> bool;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Element of the two-element field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct F2(pub bool);

impl Field for F2 {
    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn from_i64(v: i64) -> Self {
        F2(v.rem_euclid(2) == 1)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, other: &Self) -> Self {
        F2(self.0 ^ other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        F2(self.0 & other.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn inv(&self) -> Self {
        assert!(self.0, "inverse of zero in F2");
        *self
    }
    fn is_unit_sign(&self) -> bool {
        self.0
    }
}

/// Exact rational number. `Small` is always fully reduced with a positive
/// denominator; `Big` is only used when a value does not fit in `i64`.
#[derive(Clone, Debug)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(r) => r.is_integer(),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) => write!(f, "{r}"),
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }
    fn one() -> Self {
        Rational::Small(1, 1)
    }
    fn from_i64(v: i64) -> Self {
        Rational::Small(v, 1)
    }
    fn is_zero(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n == 0,
            Rational::Big(r) => r.is_zero(),
        }
    }
    fn add(&self, other: &Self) -> Self {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            if b == d {
                return Self::from_i128(*a as i128 + *c as i128, *b as i128);
            }
            let n =
                (*a as i128).checked_mul(*d as i128).and_then(|x| x.checked_add((*c as i128).checked_mul(*b as i128)?));
            if let Some(n) = n {
                return Self::from_i128(n, *b as i128 * *d as i128);
            }
        }
        Self::from_big(self.to_big() + other.to_big())
    }
    fn mul(&self, other: &Self) -> Self {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            return Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Self::from_big(self.to_big() * other.to_big())
    }
    fn neg(&self) -> Self {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, *d),
                None => Self::from_big(-self.to_big()),
            },
            Rational::Big(r) => Self::from_big(-r.clone()),
        }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational");
        match self {
            Rational::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Rational::Big(r) => Self::from_big(r.recip()),
        }
    }
    fn is_unit_sign(&self) -> bool {
        match self {
            Rational::Small(n, d) => *d == 1 && (*n == 1 || *n == -1),
            Rational::Big(r) => r.is_integer() && r.abs().is_one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_reduces() {
        let a = Rational::new(2, 4);
        assert_eq!(a, Rational::Small(1, 2));
        let b = a.add(&Rational::new(1, 3));
        assert_eq!(b, Rational::new(5, 6));
        assert_eq!(b.mul(&b.inv()), Rational::one());
        assert!(Rational::new(-3, -3).is_unit_sign());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_i64(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq.mul(&big.inv());
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(..)));
        assert!(matches!(Rational::from_i64(i64::MIN).neg(), Rational::Big(_)));
    }

    #[test]
    fn f2_is_characteristic_two() {
        assert!(F2::from_i64(2).is_zero());
        assert_eq!(F2::one().add(&F2::one()), F2::zero());
        assert_eq!(F2::from_i64(-1), F2::one());
    }
}
