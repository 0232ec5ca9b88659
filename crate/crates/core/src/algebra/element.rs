use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::gamma::GammaElement;
use crate::scalar::{LaurentPoly, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    L,
    H,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::L => "L",
            Kind::H => "H",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A basis vector `L(gamma;t)` or `H(gamma;t)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub kind: Kind,
    pub gamma: GammaElement,
    pub t: i64,
}

impl Basis {
    pub fn new(kind: Kind, gamma: GammaElement, t: i64) -> Basis {
        Basis { kind, gamma, t }
    }

    pub fn l(gamma: &[i64], t: i64) -> Basis {
        Basis::new(Kind::L, GammaElement::new(gamma.to_vec()), t)
    }

    pub fn h(gamma: &[i64], t: i64) -> Basis {
        Basis::new(Kind::H, GammaElement::new(gamma.to_vec()), t)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({};{})", self.kind, self.gamma, self.t)
    }
}

/// Finitely supported map `(kind, gamma) -> LaurentPoly` with no zero values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<(Kind, GammaElement), LaurentPoly>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn basis(b: &Basis) -> Element {
        let mut e = Element::zero();
        e.add_poly(b.kind, &b.gamma, &LaurentPoly::t_pow(b.t));
        e
    }

    pub fn from_monomials<'a, I>(items: I) -> Element
    where
        I: IntoIterator<Item = (&'a Basis, &'a Scalar)>,
    {
        let mut e = Element::zero();
        for (b, c) in items {
            e.add_monomial(b, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((Kind, &GammaElement), &LaurentPoly)> + '_ {
        self.terms.iter().map(|((k, g), f)| ((*k, g), f))
    }

    /// Coefficients on basis vectors, in canonical order.
    pub fn monomials(&self) -> impl Iterator<Item = (Basis, &Scalar)> + '_ {
        self.terms.iter().flat_map(|((k, g), f)| {
            f.terms().map(move |(i, c)| (Basis::new(*k, g.clone(), i), c))
        })
    }

    pub fn num_monomials(&self) -> usize {
        self.terms.values().map(LaurentPoly::len).sum()
    }

    pub fn poly(&self, kind: Kind, gamma: &GammaElement) -> LaurentPoly {
        self.terms
            .get(&(kind, gamma.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn coeff(&self, b: &Basis) -> Scalar {
        self.terms
            .get(&(b.kind, b.gamma.clone()))
            .map_or_else(Scalar::zero, |f| f.coeff(b.t))
    }

    pub fn add_poly(&mut self, kind: Kind, gamma: &GammaElement, f: &LaurentPoly) {
        if f.is_zero() {
            return;
        }
        let key = (kind, gamma.clone());
        let sum = match self.terms.get(&key) {
            Some(old) => old + f,
            None => f.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add_monomial(&mut self, b: &Basis, c: &Scalar) {
        if !c.is_zero() {
            self.add_poly(b.kind, &b.gamma, &LaurentPoly::monomial(c.clone(), b.t));
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        for ((k, g), f) in other.terms() {
            self.add_poly(k, g, f);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        if s.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(k, f)| (k.clone(), f.scale(s))).collect(),
        }
    }

    /// Multiplies every component by a Laurent polynomial.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Element {
        let mut out = Element::zero();
        for ((k, g), f) in self.terms() {
            out.add_poly(k, g, &(f * p));
        }
        out
    }

    pub fn filter_kind(&self, kind: Kind) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|((k, _), _)| *k == kind)
                .map(|(k, f)| (k.clone(), f.clone()))
                .collect(),
        }
    }

    /// Distinct lattice indices in the support.
    pub fn gammas(&self) -> Vec<GammaElement> {
        let mut out: Vec<GammaElement> = self.terms.keys().map(|(_, g)| g.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Single-monomial view `c * b`.
    pub fn as_monomial(&self) -> Option<(Basis, Scalar)> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((k, g), f) = self.terms.iter().next()?;
        let (c, i) = f.as_monomial()?;
        Some((Basis::new(*k, g.clone(), i), c.clone()))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (b, c)) in self.monomials().enumerate() {
            let neg = c.leading_sign() < 0;
            let mag = if neg { -c } else { c.clone() };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                let s = mag.to_string();
                if s[1..].contains(['+', '-']) {
                    write!(f, "({s})*")?;
                } else {
                    write!(f, "{s}*")?;
                }
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(&-rhs);
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self.add_assign(&rhs);
        self
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl std::iter::Sum for Element {
    fn sum<I: Iterator<Item = Element>>(iter: I) -> Element {
        let mut out = Element::zero();
        for e in iter {
            out.add_assign(&e);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_zeros() {
        let b = Basis::l(&[1], 2);
        let x = &Element::basis(&b) - &Element::basis(&b);
        assert!(x.is_zero());
        assert_eq!(x, Element::zero());
    }

    #[test]
    fn display_is_sorted() {
        let x = Element::from_monomials([
            (&Basis::h(&[0], 3), &Scalar::from_ratio(3, 2)),
            (&Basis::l(&[1], 0), &Scalar::one()),
            (&Basis::l(&[-1], 2), &Scalar::from_int(-2)),
        ]);
        assert_eq!(x.to_string(), "-2*L(-1;2) + L(1;0) + 3/2*H(0;3)");
        let y = Element::basis(&Basis::l(&[0, 1], 0)).scale(&(Scalar::one() + Scalar::sqrt(2)));
        assert_eq!(y.to_string(), "(1+sqrt(2))*L(0,1;0)");
        assert_eq!(Element::zero().to_string(), "0");
    }

    #[test]
    fn monomial_view() {
        let x = Element::basis(&Basis::h(&[2], -1)).scale(&Scalar::from_int(4));
        assert_eq!(x.as_monomial(), Some((Basis::h(&[2], -1), Scalar::from_int(4))));
        assert_eq!(x.coeff(&Basis::h(&[2], -1)), Scalar::from_int(4));
        assert!(x.coeff(&Basis::l(&[2], -1)).is_zero());
    }
}
