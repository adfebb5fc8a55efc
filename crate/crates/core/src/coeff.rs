//! Exact rational scalars.
//!
//! [`Field`] lists the operations the rest of the crate relies on; [`Rational`]
//! is the only implementation shipped.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Operations required of a characteristic-zero coefficient field.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
}

/// Arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(k: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(k.into()))
    }

    pub fn from_biguint(k: BigUint) -> Self {
        Rational::from_integer(BigInt::from(k))
    }

    /// `p/q` reduced to lowest terms.
    pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let q = q.into();
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(p.into(), q)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn div(&self, other: &Rational) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Exact division by a positive integer such as a factorial.
    pub fn div_biguint(&self, k: &BigUint) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(
            &self.0 / BigRational::from_integer(BigInt::from(k.clone())),
        ))
    }

    pub fn mul_biguint(&self, k: &BigUint) -> Self {
        Rational(&self.0 * BigRational::from_integer(BigInt::from(k.clone())))
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        Rational::inv(self)
    }
}

impl From<i64> for Rational {
    fn from(k: i64) -> Self {
        Rational::from_integer(k)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $assign_tr<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Failure to read the `p/q` text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `k`, `-k`, `+k`, `p/q` with an optional sign on either part.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let parse_int = |x: &str| -> std::result::Result<BigInt, ParseRationalError> {
            let digits = x.strip_prefix(['+', '-']).unwrap_or(x);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            x.parse::<BigInt>().map_err(|_| bad())
        };
        let p = parse_int(p)?;
        let q = parse_int(q)?;
        Rational::ratio(p, q).map_err(|_| bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let half = r(2, 4);
        assert_eq!(half.numer(), &BigInt::from(1));
        assert_eq!(half.denom(), &BigInt::from(2));
        assert_eq!(&r(1, 3) + &r(1, 6), r(1, 2));
        let inv = r(-2, 3).inv().unwrap();
        assert_eq!(inv.numer(), &BigInt::from(-3));
        assert_eq!(inv.denom(), &BigInt::from(2));
        assert_eq!(r(3, -6).to_string(), "-1/2");
        assert_eq!(r(0, -5), Rational::zero());
        assert_eq!(r(0, -5).denom(), &BigInt::from(1));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Rational::ratio(1, 0), Err(Error::DivisionByZero));
        assert_eq!(Rational::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn text_form() {
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from(7));
        assert_eq!("-3/6".parse::<Rational>().unwrap(), r(-1, 2));
        assert_eq!("+4/2".parse::<Rational>().unwrap(), Rational::from(2));
        assert_eq!(r(5, 1).to_string(), "5");
        assert_eq!(r(-5, 3).to_string(), "-5/3");
        for bad in ["", "1/0", "a", "1/", "/2", "1.5", "--1", "1/2/3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} parsed");
        }
        let big = "123456789012345678901234567891/2";
        assert_eq!(big.parse::<Rational>().unwrap().to_string(), big);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| r(p, q))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, Rational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Rational::one());
            }
        }

        #[test]
        fn canonical_form_is_unique(p in -40i64..40, q in 1i64..30, k in 1i64..9, flip in any::<bool>()) {
            let s = if flip { -1 } else { 1 };
            let a = r(p, q);
            let b = r(s * k * p, s * k * q);
            prop_assert_eq!(a.numer(), b.numer());
            prop_assert_eq!(a.denom(), b.denom());
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }
    }
}
