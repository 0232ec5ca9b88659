use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Scalar, ScalarError};

/// A Laurent polynomial `sum c_i t^i` with finitely many nonzero coefficients.
///
/// Zero coefficients are never stored, so structural equality is value
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> LaurentPoly {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: Scalar, exp: i64) -> LaurentPoly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64) -> LaurentPoly {
        LaurentPoly::monomial(Scalar::one(), exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(terms: I) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(Scalar::is_one)
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `Some((c, e))` when the polynomial is the single term `c t^e`.
    pub fn as_monomial(&self) -> Option<(&Scalar, i64)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&exp) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.coeffs.remove(&exp);
                }
            }
            None => {
                self.coeffs.insert(exp, c.clone());
            }
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, ScalarError> {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            if let Some(v) = out.coeffs.get_mut(&e) {
                *v = v.checked_add(c)?;
                if v.is_zero() {
                    out.coeffs.remove(&e);
                }
            } else {
                out.coeffs.insert(e, c.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, ScalarError> {
        let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let prod = c1.checked_mul(c2)?;
                let slot = out.entry(e1 + e2).or_insert_with(Scalar::zero);
                *slot = slot.checked_add(&prod)?;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly { coeffs: out })
    }

    pub fn scale(&self, s: &Scalar) -> LaurentPoly {
        if s.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The formal derivative `d/dt`.
    pub fn derivative(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms()
                .filter(|(e, _)| *e != 0)
                .map(|(e, c)| (e - 1, c * Scalar::from_int(e))),
        )
    }

    /// Integer powers; negative exponents require a monomial.
    pub fn pow(&self, n: i64) -> Result<LaurentPoly, ScalarError> {
        if n < 0 {
            let (c, e) = self.as_monomial().ok_or(ScalarError::DivisionByZero)?;
            return Ok(LaurentPoly::monomial(c.pow(n)?, e * n));
        }
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Radicand shared by all coefficients, if any is irrational.
    pub fn radicand(&self) -> Option<i64> {
        self.coeffs.values().find_map(Scalar::radicand)
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms are written from the highest exponent down, e.g. `2t^3 - 1/2t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let (negative, mag) = match c {
                Scalar::Rational(q) if q < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, -c)
                }
                _ => (false, c.clone()),
            };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coeff_text = match &mag {
                Scalar::Quadratic { .. } => format!("({mag})"),
                Scalar::Rational(_) => mag.to_string(),
            };
            match *e {
                0 => write!(f, "{coeff_text}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff_text}")?;
                    }
                    if *e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl From<Scalar> for LaurentPoly {
    fn from(c: Scalar) -> LaurentPoly {
        LaurentPoly::constant(c)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("laurent add: {e}"))
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(&-rhs).unwrap_or_else(|e| panic!("laurent sub: {e}"))
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("laurent mul: {e}"))
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: i64) -> LaurentPoly {
        LaurentPoly::t_pow(e)
    }

    #[test]
    fn difference_of_squares() {
        let a = &t(1) + &t(-1);
        let b = &t(1) - &t(-1);
        assert_eq!(&a * &b, &t(2) - &t(-2));
    }

    #[test]
    fn unit_law_and_cancellation() {
        let f = LaurentPoly::from_terms([(3, Scalar::from_int(2)), (-1, Scalar::from_ratio(-1, 2))]);
        assert_eq!(&f * &LaurentPoly::one(), f);
        let a = LaurentPoly::monomial(Scalar::from_int(2), 3);
        let b = LaurentPoly::monomial(Scalar::from_ratio(1, 2), -3);
        assert_eq!(&a * &b, LaurentPoly::one());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let f = &t(2) - &t(2);
        assert!(f.is_zero());
        assert_eq!(LaurentPoly::monomial(Scalar::zero(), 4), LaurentPoly::zero());
    }

    #[test]
    fn display() {
        let f = LaurentPoly::from_terms([(3, Scalar::from_int(2)), (-1, Scalar::from_ratio(-1, 2))]);
        assert_eq!(f.to_string(), "2t^3 - 1/2t^-1");
        let g = LaurentPoly::from_terms([
            (1, Scalar::one() + Scalar::sqrt(2)),
            (0, Scalar::from_int(-1)),
        ]);
        assert_eq!(g.to_string(), "(1+sqrt(2))t - 1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!((-t(1)).to_string(), "-t");
    }

    #[test]
    fn backend_mismatch_in_product() {
        let a = LaurentPoly::constant(Scalar::sqrt(2));
        let b = LaurentPoly::constant(Scalar::sqrt(3));
        assert!(matches!(a.checked_mul(&b), Err(ScalarError::BackendMismatch { .. })));
    }

    #[test]
    fn derivative_and_pow() {
        let f = &t(3) + &t(-2);
        let df = LaurentPoly::from_terms([(2, Scalar::from_int(3)), (-3, Scalar::from_int(-2))]);
        assert_eq!(f.derivative(), df);
        let m = LaurentPoly::monomial(Scalar::from_int(2), 1);
        assert_eq!(m.pow(-2).unwrap(), LaurentPoly::monomial(Scalar::from_ratio(1, 4), -2));
        assert!(f.pow(-1).is_err());
    }
}
