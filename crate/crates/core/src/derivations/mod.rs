//! Derivations: the four degree-zero families, inner derivations, tables, and
//! the Leibniz checker.

mod decompose;

pub use decompose::{
    decompose_degree_zero, direct_sum_check, homogeneous_parts, inner_witness_nonzero_degree,
    Decomposition, DirectSumReport,
};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Basis, BasisTable, Element, Kind, TruncationBox};
use crate::gamma::{GSymbol, GammaElement, PolyHom};
use crate::scalar::{LaurentPoly, RhoOperator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degree must be nonzero")]
    ZeroDegree,
    #[error("not a derivation: Leibniz rule fails at ({0}, {1})")]
    NotADerivation(Basis, Basis),
    #[error("inner witness disagrees with the table at {0}")]
    DisagreementAfterWitness(Basis),
    #[error("map is not homogeneous of degree zero")]
    NotDegreeZero,
    #[error("image of {0} is not of the form f L + g H")]
    ShapeViolation(Basis),
    #[error("nonzero residual after removing the four families, first at {0}")]
    NonZeroResidual(Basis, Box<BasisTable>),
    #[error("box too small: {0}")]
    BoxTooSmall(String),
    #[error("parameter rank {found} does not match lattice rank {expected}")]
    RankMismatch { expected: usize, found: usize },
}

/// A derivation given symbolically or by a table of basis values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationSpec {
    Inner(Element),
    DPhi(PolyHom),
    DG(GSymbol),
    DB(LaurentPoly),
    DRho(RhoOperator),
    Sum(Vec<DerivationSpec>),
    Table(BasisTable),
}

impl DerivationSpec {
    pub fn zero() -> DerivationSpec {
        DerivationSpec::Sum(Vec::new())
    }

    pub fn check_params(&self, alg: &Algebra) -> Result<(), DerivationError> {
        match self {
            DerivationSpec::Inner(x) => alg.check_element(x).map_err(Into::into),
            DerivationSpec::DPhi(phi) if phi.values.len() != alg.rank() => {
                Err(DerivationError::RankMismatch {
                    expected: alg.rank(),
                    found: phi.values.len(),
                })
            }
            DerivationSpec::Table(t) if t.domain().rank() != alg.rank() => {
                Err(DerivationError::RankMismatch {
                    expected: alg.rank(),
                    found: t.domain().rank(),
                })
            }
            DerivationSpec::Sum(parts) => parts.iter().try_for_each(|p| p.check_params(alg)),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, alg: &Algebra, x: &Element) -> Result<Element, DerivationError> {
        alg.check_element(x)?;
        self.check_params(alg)?;
        self.apply_unchecked(alg, x)
    }

    fn apply_unchecked(&self, alg: &Algebra, x: &Element) -> Result<Element, DerivationError> {
        let mut out = Element::zero();
        match self {
            DerivationSpec::Inner(z) => return Ok(alg.bracket_unchecked(z, x)),
            DerivationSpec::DPhi(phi) => {
                for ((k, g), f) in x.terms() {
                    out.add_poly(k, g, &(&phi.eval(g) * f));
                }
            }
            DerivationSpec::DG(sym) => {
                for ((k, g), f) in x.terms() {
                    if k == Kind::L {
                        out.add_poly(Kind::H, g, &(&sym.eval(alg.gamma(), g) * f));
                    }
                }
            }
            DerivationSpec::DB(b) => {
                for ((k, g), f) in x.terms() {
                    if k == Kind::H {
                        out.add_poly(k, g, &(b * f));
                    }
                }
            }
            DerivationSpec::DRho(rho) => {
                for ((k, g), f) in x.terms() {
                    out.add_poly(k, g, &rho.apply(f));
                }
            }
            DerivationSpec::Sum(parts) => {
                for p in parts {
                    out.add_assign(&p.apply_unchecked(alg, x)?);
                }
            }
            DerivationSpec::Table(t) => return Ok(t.apply(x)?),
        }
        Ok(out)
    }

    /// Values on the basis of `domain`.
    pub fn table(&self, alg: &Algebra, domain: &TruncationBox) -> Result<BasisTable, DerivationError> {
        self.check_params(alg)?;
        BasisTable::try_from_fn(domain.clone(), |b| self.apply_unchecked(alg, &Element::basis(b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizFailure {
    pub x: Basis,
    pub y: Basis,
    pub lhs: Element,
    pub rhs: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationReport {
    pub pairs_checked: u64,
    pub pairs_skipped: u64,
    pub first_failure: Option<LeibnizFailure>,
}

impl DerivationReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Leibniz rule at one pair: `None` if `D[x,y]` cannot be evaluated (a table
/// is undefined there), otherwise the failure if there is one.
pub fn leibniz_at(
    alg: &Algebra,
    d: &DerivationSpec,
    x: &Basis,
    y: &Basis,
) -> Result<Option<Option<LeibnizFailure>>, DerivationError> {
    d.check_params(alg)?;
    let dx = d.apply_unchecked(alg, &Element::basis(x))?;
    let dy = d.apply_unchecked(alg, &Element::basis(y))?;
    Ok(leibniz_with(alg, d, x, y, &dx, &dy))
}

fn leibniz_with(
    alg: &Algebra,
    d: &DerivationSpec,
    x: &Basis,
    y: &Basis,
    dx: &Element,
    dy: &Element,
) -> Option<Option<LeibnizFailure>> {
    let lhs = match alg.bracket_basis(x, y) {
        None => Element::zero(),
        Some((c, z)) => d.apply_unchecked(alg, &Element::basis(&z)).ok()?.scale(&c),
    };
    let rhs = &alg.bracket_unchecked(dx, &Element::basis(y)) + &alg.bracket_unchecked(&Element::basis(x), dy);
    Some((lhs != rhs).then(|| LeibnizFailure {
        x: x.clone(),
        y: y.clone(),
        lhs,
        rhs,
    }))
}

/// Checks `D[x,y] = [Dx,y] + [x,Dy]` on all unordered pairs of box basis
/// vectors. For tables, pairs whose bracket leaves the table domain are
/// skipped.
pub fn check_derivation(
    alg: &Algebra,
    d: &DerivationSpec,
    bx: &TruncationBox,
) -> Result<DerivationReport, DerivationError> {
    d.check_params(alg)?;
    let basis = bx.basis();
    let images = basis
        .iter()
        .map(|b| d.apply_unchecked(alg, &Element::basis(b)))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<(u64, u64, Option<LeibnizFailure>)> = (0..basis.len())
        .into_par_iter()
        .map(|i| {
            let (mut checked, mut skipped, mut first) = (0, 0, None);
            for j in i + 1..basis.len() {
                match leibniz_with(alg, d, &basis[i], &basis[j], &images[i], &images[j]) {
                    None => skipped += 1,
                    Some(res) => {
                        checked += 1;
                        if first.is_none() {
                            first = res;
                        }
                    }
                }
            }
            (checked, skipped, first)
        })
        .collect();
    let mut report = DerivationReport {
        pairs_checked: 0,
        pairs_skipped: 0,
        first_failure: None,
    };
    for (c, s, f) in rows {
        report.pairs_checked += c;
        report.pairs_skipped += s;
        if report.first_failure.is_none() {
            report.first_failure = f;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degree {
    Of(GammaElement),
    Mixed,
    ZeroMap,
}

/// The common grade shift of all basis images, if there is one.
pub fn degree_of(
    alg: &Algebra,
    d: &DerivationSpec,
    bx: &TruncationBox,
) -> Result<Degree, DerivationError> {
    d.check_params(alg)?;
    let mut shift: Option<GammaElement> = None;
    for b in bx.basis() {
        let img = d.apply_unchecked(alg, &Element::basis(&b))?;
        for g in img.gammas() {
            let s = &g - &b.gamma;
            match &shift {
                None => shift = Some(s),
                Some(prev) if *prev != s => return Ok(Degree::Mixed),
                _ => {}
            }
        }
    }
    Ok(shift.map_or(Degree::ZeroMap, Degree::Of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaConfig;
    use crate::scalar::Scalar;

    fn z() -> Algebra {
        Algebra::new(GammaConfig::integers())
    }

    fn bx() -> TruncationBox {
        TruncationBox::new(vec![(-2, 2)], (-2, 2), 2).unwrap()
    }

    fn e(b: Basis) -> Element {
        Element::basis(&b)
    }

    #[test]
    fn family_actions() {
        let a = z();
        let rho = DerivationSpec::DRho(RhoOperator::euler());
        assert_eq!(
            rho.apply(&a, &e(Basis::l(&[4], 5))).unwrap(),
            e(Basis::l(&[4], 5)).scale(&Scalar::from_int(5))
        );
        let dg = DerivationSpec::DG(GSymbol::new(LaurentPoly::one(), LaurentPoly::zero()));
        assert_eq!(dg.apply(&a, &e(Basis::l(&[2], 3))).unwrap(), e(Basis::h(&[2], 3)));
        assert!(dg.apply(&a, &e(Basis::h(&[2], 3))).unwrap().is_zero());
        let inner = DerivationSpec::Inner(a.l00());
        assert_eq!(
            inner.apply(&a, &e(Basis::l(&[3], 1))).unwrap(),
            e(Basis::l(&[3], 1)).scale(&Scalar::from_int(-3))
        );
    }

    #[test]
    fn families_are_derivations() {
        let a = z();
        let specs = [
            DerivationSpec::DPhi(PolyHom::new(vec![LaurentPoly::t_pow(1)])),
            DerivationSpec::DG(GSymbol::new(LaurentPoly::t_pow(-1), LaurentPoly::one())),
            DerivationSpec::DB(LaurentPoly::t_pow(2)),
            DerivationSpec::DRho(RhoOperator::new(LaurentPoly::t_pow(2))),
            DerivationSpec::Inner(&e(Basis::l(&[1], 1)) + &e(Basis::h(&[-1], 0))),
            DerivationSpec::zero(),
        ];
        for d in &specs {
            let r = check_derivation(&a, d, &bx()).unwrap();
            assert!(r.passed(), "{d:?}");
            assert_eq!(r.pairs_skipped, 0);
        }
    }

    #[test]
    fn broken_table_fails() {
        let a = z();
        let mut t = BasisTable::new(bx());
        t.insert(Basis::l(&[1], 0), e(Basis::l(&[1], 0))).unwrap();
        let d = DerivationSpec::Table(t);
        let r = check_derivation(&a, &d, &bx()).unwrap();
        let f = r.first_failure.unwrap();
        assert!(f.x == Basis::l(&[1], 0) || f.y == Basis::l(&[1], 0));
        let f = leibniz_at(&a, &d, &Basis::l(&[1], 0), &Basis::l(&[-1], 0)).unwrap().unwrap().unwrap();
        assert_eq!(f.rhs, e(Basis::l(&[0], 0)).scale(&Scalar::from_int(2)));
        assert!(f.lhs.is_zero());
    }

    #[test]
    fn degrees() {
        let a = z();
        let phi = DerivationSpec::DPhi(PolyHom::new(vec![LaurentPoly::one()]));
        assert_eq!(degree_of(&a, &phi, &bx()).unwrap(), Degree::Of(GammaElement::new(vec![0])));
        let inner = DerivationSpec::Inner(e(Basis::l(&[2], 0)));
        assert_eq!(degree_of(&a, &inner, &bx()).unwrap(), Degree::Of(GammaElement::new(vec![2])));
        let mixed = DerivationSpec::Inner(&e(Basis::l(&[1], 0)) + &e(Basis::l(&[2], 0)));
        assert_eq!(degree_of(&a, &mixed, &bx()).unwrap(), Degree::Mixed);
        assert_eq!(degree_of(&a, &DerivationSpec::zero(), &bx()).unwrap(), Degree::ZeroMap);
    }

    #[test]
    fn inner_degree_zero_overlaps_dphi() {
        let a = z();
        for k in -2..=2 {
            let inner = DerivationSpec::Inner(e(Basis::l(&[0], k)));
            let phi = DerivationSpec::DPhi(PolyHom::new(vec![LaurentPoly::monomial(Scalar::from_int(-1), k)]));
            assert_eq!(inner.table(&a, &bx()).unwrap(), phi.table(&a, &bx()).unwrap());
        }
    }
}
