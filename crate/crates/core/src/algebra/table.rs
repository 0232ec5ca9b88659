use std::collections::BTreeMap;

use crate::scalar::Scalar;

use super::{AlgebraError, Basis, Element, TruncationBox};

/// A linear map given by its values on the basis of a box; basis vectors of
/// the box without an entry map to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisTable {
    domain: TruncationBox,
    values: BTreeMap<Basis, Element>,
}

impl BasisTable {
    pub fn new(domain: TruncationBox) -> BasisTable {
        BasisTable {
            domain,
            values: BTreeMap::new(),
        }
    }

    pub fn from_fn<F>(domain: TruncationBox, mut f: F) -> BasisTable
    where
        F: FnMut(&Basis) -> Element,
    {
        let mut t = BasisTable::new(domain);
        for b in t.domain.basis() {
            let v = f(&b);
            t.insert(b, v).expect("basis vector of the domain");
        }
        t
    }

    pub fn try_from_fn<F, E>(domain: TruncationBox, mut f: F) -> Result<BasisTable, E>
    where
        F: FnMut(&Basis) -> Result<Element, E>,
    {
        let mut t = BasisTable::new(domain);
        for b in t.domain.basis() {
            let v = f(&b)?;
            t.insert(b, v).expect("basis vector of the domain");
        }
        Ok(t)
    }

    pub fn domain(&self) -> &TruncationBox {
        &self.domain
    }

    pub fn insert(&mut self, b: Basis, v: Element) -> Result<(), AlgebraError> {
        if !self.domain.contains(&b) {
            return Err(AlgebraError::SupportOutsideBox(b.to_string()));
        }
        if v.is_zero() {
            self.values.remove(&b);
        } else {
            self.values.insert(b, v);
        }
        Ok(())
    }

    /// Value on a basis vector of the domain.
    pub fn get(&self, b: &Basis) -> Result<Element, AlgebraError> {
        if !self.domain.contains(b) {
            return Err(AlgebraError::SupportOutsideBox(b.to_string()));
        }
        Ok(self.values.get(b).cloned().unwrap_or_default())
    }

    /// Nonzero entries in basis order.
    pub fn entries(&self) -> impl Iterator<Item = (&Basis, &Element)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn apply(&self, x: &Element) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (b, c) in x.monomials() {
            out.add_assign(&self.get(&b)?.scale(c));
        }
        Ok(out)
    }

    pub fn map_values<F: FnMut(&Basis, &Element) -> Element>(&self, mut f: F) -> BasisTable {
        BasisTable::from_fn(self.domain.clone(), |b| {
            let v = self.values.get(b).cloned().unwrap_or_default();
            f(b, &v)
        })
    }

    pub fn sub(&self, other: &BasisTable) -> BasisTable {
        self.map_values(|b, v| v - &other.get(b).unwrap_or_default())
    }

    pub fn add(&self, other: &BasisTable) -> BasisTable {
        self.map_values(|b, v| v + &other.get(b).unwrap_or_default())
    }

    pub fn scale(&self, s: &Scalar) -> BasisTable {
        self.map_values(|_, v| v.scale(s))
    }

    /// First entry whose value leaves the closure box of the domain.
    pub fn first_value_outside_padded(&self) -> Option<&Basis> {
        self.values
            .iter()
            .find(|(_, v)| !self.domain.padded_supports(v))
            .map(|(b, _)| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_entries_are_zero_and_domain_is_enforced() {
        let bx = TruncationBox::new(vec![(-1, 1)], (0, 0), 1).unwrap();
        let mut t = BasisTable::new(bx);
        t.insert(Basis::l(&[1], 0), Element::basis(&Basis::h(&[1], 0))).unwrap();
        assert!(t.get(&Basis::l(&[0], 0)).unwrap().is_zero());
        assert!(t.get(&Basis::l(&[2], 0)).is_err());
        assert!(t.insert(Basis::l(&[2], 0), Element::zero()).is_err());
        let x = &Element::basis(&Basis::l(&[1], 0)).scale(&Scalar::from_int(3))
            + &Element::basis(&Basis::l(&[0], 0));
        assert_eq!(t.apply(&x).unwrap(), Element::basis(&Basis::h(&[1], 0)).scale(&Scalar::from_int(3)));
    }
}
