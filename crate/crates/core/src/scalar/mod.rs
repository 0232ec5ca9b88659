//! Exact scalars: the rationals and real or imaginary quadratic extensions
//! `Q(sqrt(d))`, together with Laurent polynomials over them.

mod laurent;
mod rho;

pub use laurent::LaurentPoly;
pub use rho::RhoOperator;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: sqrt({left}) against sqrt({right})")]
    BackendMismatch { left: i64, right: i64 },
    #[error("scalar does not lie in the configured field {0}")]
    NotInField(String),
    #[error("radicand {0} must be a square-free integer other than 0 and 1")]
    InvalidRadicand(i64),
}

/// The ground field all structure constants live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    /// `Q(sqrt(d))` for a square-free `d` that is not a perfect square.
    Quadratic(i64),
}

impl Field {
    pub fn quadratic(d: i64) -> Result<Field, ScalarError> {
        if d == 0 || d == 1 || !is_square_free(d) {
            return Err(ScalarError::InvalidRadicand(d));
        }
        Ok(Field::Quadratic(d))
    }

    pub fn radicand(&self) -> Option<i64> {
        match self {
            Field::Rationals => None,
            Field::Quadratic(d) => Some(*d),
        }
    }

    /// Degree of the field over `Q`.
    pub fn degree(&self) -> usize {
        match self {
            Field::Rationals => 1,
            Field::Quadratic(_) => 2,
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (x.radicand(), self) {
            (None, _) => true,
            (Some(d), Field::Quadratic(e)) => d == *e,
            (Some(_), Field::Rationals) => false,
        }
    }

    pub fn check(&self, x: &Scalar) -> Result<(), ScalarError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(ScalarError::NotInField(x.to_string()))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

fn is_square_free(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    // -1 is square-free and not a square; 1 is handled by the caller
    true
}

/// An exact field element.
///
/// Values whose irrational part vanishes are always stored as
/// [`Scalar::Rational`], so rationals are shared by every backend and equal
/// values have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    /// `x + y*sqrt(d)` with `y != 0`.
    Quadratic {
        x: BigRational,
        y: BigRational,
        d: i64,
    },
}

/// The four arithmetic operations exposed through [`Scalar::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar::Rational(BigRational::from_integer(n))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Scalar {
        Scalar::Rational(q)
    }

    /// Builds `x + y*sqrt(d)` in canonical form.
    pub fn quadratic(x: BigRational, y: BigRational, d: i64) -> Scalar {
        if y.is_zero() {
            Scalar::Rational(x)
        } else {
            Scalar::Quadratic { x, y, d }
        }
    }

    pub fn sqrt(d: i64) -> Scalar {
        Scalar::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    pub fn radicand(&self) -> Option<i64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Quadratic { d, .. } => Some(*d),
        }
    }

    /// Rational and irrational components `(x, y)` of `x + y*sqrt(d)`.
    pub fn parts(&self) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(q) => (q.clone(), BigRational::zero()),
            Scalar::Quadratic { x, y, .. } => (x.clone(), y.clone()),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Quadratic { .. } => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.as_integer().and_then(|n| n.to_i64())
    }

    fn common_radicand(&self, other: &Scalar) -> Result<Option<i64>, ScalarError> {
        match (self.radicand(), other.radicand()) {
            (Some(a), Some(b)) if a != b => Err(ScalarError::BackendMismatch { left: a, right: b }),
            (Some(a), _) | (_, Some(a)) => Ok(Some(a)),
            (None, None) => Ok(None),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            _ => {
                let d = self.common_radicand(other)?.expect("quadratic operand");
                let (x1, y1) = self.parts();
                let (x2, y2) = other.parts();
                Ok(Scalar::quadratic(x1 + x2, y1 + y2, d))
            }
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Rational(a), Scalar::Quadratic { x, y, d })
            | (Scalar::Quadratic { x, y, d }, Scalar::Rational(a)) => {
                Ok(Scalar::quadratic(a * x, a * y, *d))
            }
            _ => {
                let d = self.common_radicand(other)?.expect("quadratic operand");
                let (x1, y1) = self.parts();
                let (x2, y2) = other.parts();
                let dd = BigRational::from_integer(BigInt::from(d));
                let x = &x1 * &x2 + dd * &y1 * &y2;
                let y = x1 * y2 + x2 * y1;
                Ok(Scalar::quadratic(x, y, d))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.common_radicand(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn arith(op: ArithOp, x: &Scalar, y: &Scalar) -> Result<Scalar, ScalarError> {
        match op {
            ArithOp::Add => x.checked_add(y),
            ArithOp::Sub => x.checked_sub(y),
            ArithOp::Mul => x.checked_mul(y),
            ArithOp::Div => x.checked_div(y),
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(q.recip()))
                }
            }
            Scalar::Quadratic { x, y, d } => {
                // x^2 - d y^2 is nonzero because d is not a square
                let n = self.norm();
                Ok(Scalar::quadratic(x / &n, -(y / &n), *d))
            }
        }
    }

    /// Galois conjugate `x - y*sqrt(d)`.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::Quadratic { x, y, d } => Scalar::quadratic(x.clone(), -y.clone(), *d),
        }
    }

    /// Field norm `x^2 - d*y^2`.
    pub fn norm(&self) -> BigRational {
        match self {
            Scalar::Rational(q) => q * q,
            Scalar::Quadratic { x, y, d } => {
                x * x - BigRational::from_integer(BigInt::from(*d)) * y * y
            }
        }
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Sign of the first nonzero rational component (rational part first,
    /// then the `sqrt(d)` coefficient); zero for zero.
    pub fn leading_sign(&self) -> i32 {
        let (x, y) = self.parts();
        for c in [x, y] {
            if c.is_positive() {
                return 1;
            }
            if c.is_negative() {
                return -1;
            }
        }
        0
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write_rational(f, q),
            Scalar::Quadratic { x, y, d } => {
                let mut started = false;
                if !x.is_zero() {
                    write_rational(f, x)?;
                    started = true;
                }
                let mag = y.abs();
                if y.is_negative() {
                    write!(f, "-")?;
                } else if started {
                    write!(f, "+")?;
                }
                if !mag.is_one() {
                    write_rational(f, &mag)?;
                    write!(f, "*")?;
                }
                write!(f, "sqrt({d})")
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Quadratic { x, y, d } => Scalar::Quadratic {
                x: -x,
                y: -y,
                d: *d,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// Operator forms panic on backend mismatch or division by zero, in the same
// way integer division panics; the `checked_*` methods report these instead.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($method)),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

/// Integer part helper used by lattice code: `Some(n)` iff `q` is an integer
/// that fits in `i64`.
pub(crate) fn rational_to_i64(q: &BigRational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn rational_product() {
        assert_eq!(q(2, 3) * q(3, 4), q(1, 2));
    }

    #[test]
    fn quadratic_product_hand_expanded() {
        // (1 + sqrt2)(-1 + sqrt2) = (-1 + 2) + (1 - 1) sqrt2
        let a = Scalar::one() + Scalar::sqrt(2);
        let b = Scalar::from_int(-1) + Scalar::sqrt(2);
        assert_eq!(a * b, Scalar::one());
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(
            Scalar::arith(ArithOp::Div, &Scalar::one(), &Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_radicands_are_rejected() {
        let err = Scalar::sqrt(2).checked_add(&Scalar::sqrt(3)).unwrap_err();
        assert_eq!(err, ScalarError::BackendMismatch { left: 2, right: 3 });
    }

    #[test]
    fn vanishing_irrational_part_collapses_to_rational() {
        let s = Scalar::sqrt(5) - Scalar::sqrt(5);
        assert_eq!(s, Scalar::zero());
        assert!(matches!(s, Scalar::Rational(_)));
    }

    #[test]
    fn inverse_and_powers() {
        let u = Scalar::one() + Scalar::sqrt(2);
        assert_eq!(u.inv().unwrap(), Scalar::sqrt(2) - Scalar::one());
        assert_eq!(u.pow(2).unwrap(), Scalar::from_int(3) + Scalar::from_int(2) * Scalar::sqrt(2));
        assert_eq!(u.pow(-1).unwrap() * u.clone(), Scalar::one());
        assert_eq!(Scalar::zero().pow(-1), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(-3, 6).to_string(), "-1/2");
        assert_eq!(Scalar::from_int(4).to_string(), "4");
        assert_eq!((Scalar::one() + Scalar::sqrt(2)).to_string(), "1+sqrt(2)");
        assert_eq!((q(1, 2) - q(3, 4) * Scalar::sqrt(2)).to_string(), "1/2-3/4*sqrt(2)");
        assert_eq!((-Scalar::sqrt(-1)).to_string(), "-sqrt(-1)");
    }

    #[test]
    fn radicand_validation() {
        assert!(Field::quadratic(2).is_ok());
        assert!(Field::quadratic(-1).is_ok());
        assert!(Field::quadratic(4).is_err());
        assert!(Field::quadratic(12).is_err());
        assert!(Field::quadratic(1).is_err());
    }

    #[test]
    fn leading_sign_rules() {
        assert_eq!(q(-2, 3).leading_sign(), -1);
        assert_eq!(Scalar::sqrt(2).leading_sign(), 1);
        assert_eq!((-Scalar::sqrt(2)).leading_sign(), -1);
        assert_eq!(Scalar::zero().leading_sign(), 0);
    }
}
