use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Algebra, Basis, BasisTable, Element, Kind, TruncationBox};
use crate::gamma::{GSymbol, GammaElement, PolyHom};
use crate::linalg::Matrix;
use crate::scalar::{LaurentPoly, RhoOperator, Scalar};

use super::{check_derivation, degree_of, Degree, DerivationError, DerivationSpec};

/// Splits a table by grade shift: the part at `g` sends `X(a;i)` to the grade
/// `a + g` component of its image.
pub fn homogeneous_parts(
    alg: &Algebra,
    d: &BasisTable,
) -> Result<BTreeMap<GammaElement, BasisTable>, DerivationError> {
    if let Some(b) = d.first_value_outside_padded() {
        return Err(crate::algebra::AlgebraError::SupportOutsideBox(format!(
            "image of {b} leaves the closure box"
        ))
        .into());
    }
    let mut parts: BTreeMap<GammaElement, BasisTable> = BTreeMap::new();
    for (b, v) in d.entries() {
        for (shift_target, piece) in alg.graded_decompose(v) {
            let shift = &shift_target - &b.gamma;
            parts
                .entry(shift)
                .or_insert_with(|| BasisTable::new(d.domain().clone()))
                .insert(b.clone(), piece)?;
        }
    }
    Ok(parts)
}

/// For a derivation of nonzero degree `g` returns `w = D(L(0;0)) / g` and
/// checks that `ad w` reproduces the table on its domain.
pub fn inner_witness_nonzero_degree(
    alg: &Algebra,
    d: &BasisTable,
    degree: &GammaElement,
) -> Result<Element, DerivationError> {
    if degree.is_zero() {
        return Err(DerivationError::ZeroDegree);
    }
    let spec = DerivationSpec::Table(d.clone());
    let report = check_derivation(alg, &spec, d.domain())?;
    if let Some(f) = report.first_failure {
        return Err(DerivationError::NotADerivation(f.x, f.y));
    }
    let l00 = Basis::new(Kind::L, alg.gamma().zero(), 0);
    if !d.domain().contains(&l00) {
        return Err(DerivationError::BoxTooSmall("L(0;0) is not in the box".into()));
    }
    let inv = alg.embed(degree).inv().map_err(crate::algebra::AlgebraError::from)?;
    let w = d.get(&l00)?.scale(&inv);
    for b in d.domain().basis() {
        if alg.bracket_unchecked(&w, &Element::basis(&b)) != d.get(&b)? {
            return Err(DerivationError::DisagreementAfterWitness(b));
        }
    }
    Ok(w)
}

/// Parameters of `D_phi + D_g + D_b + D^rho` together with what is left over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub phi: PolyHom,
    pub g: GSymbol,
    pub b: LaurentPoly,
    pub rho: RhoOperator,
    pub residual: BasisTable,
}

impl Decomposition {
    pub fn as_spec(&self) -> DerivationSpec {
        DerivationSpec::Sum(vec![
            DerivationSpec::DPhi(self.phi.clone()),
            DerivationSpec::DG(self.g.clone()),
            DerivationSpec::DB(self.b.clone()),
            DerivationSpec::DRho(self.rho.clone()),
        ])
    }
}

/// Degrees of the box ordered by distance from 0, positive first.
fn degrees_by_size(bx: &TruncationBox) -> Vec<i64> {
    let mut ts: Vec<i64> = bx.t_values().collect();
    ts.sort_by_key(|t| (t.abs(), -t));
    ts
}

fn need(bx: &TruncationBox, b: Basis) -> Result<Basis, DerivationError> {
    if bx.contains(&b) {
        Ok(b)
    } else {
        Err(DerivationError::BoxTooSmall(format!("{b} is not in the box")))
    }
}

/// Recovers `rho`, then `phi`, then `g`, then `b` from a degree-zero
/// derivation table, in that order, and returns the residual.
pub fn decompose_degree_zero(alg: &Algebra, d: &BasisTable) -> Result<Decomposition, DerivationError> {
    let bx = d.domain().clone();
    let spec = DerivationSpec::Table(d.clone());
    match degree_of(alg, &spec, &bx)? {
        Degree::Of(g) if g.is_zero() => {}
        Degree::ZeroMap => {}
        _ => return Err(DerivationError::NotDegreeZero),
    }
    let report = check_derivation(alg, &spec, &bx)?;
    if let Some(f) = report.first_failure {
        return Err(DerivationError::NotADerivation(f.x, f.y));
    }
    for (b, v) in d.entries() {
        if b.kind == Kind::H && !v.filter_kind(Kind::L).is_zero() {
            return Err(DerivationError::ShapeViolation(b.clone()));
        }
    }
    let zero = alg.gamma().zero();
    let ts = degrees_by_size(&bx);
    let t0 = ts[0];

    // rho from D(L(0;i)) = L_0 rho(t^i) + g_0 H(0;i), i != 0
    let i = if bx.t_values().contains(&1) {
        1
    } else {
        *ts.iter().find(|t| **t != 0).ok_or_else(|| {
            DerivationError::BoxTooSmall("need a nonzero Laurent degree to read rho".into())
        })?
    };
    let l0i = need(&bx, Basis::new(Kind::L, zero.clone(), i))?;
    let p = d
        .get(&l0i)?
        .poly(Kind::L, &zero)
        .shift(1 - i)
        .scale(&Scalar::from_ratio(1, i));
    let rho = RhoOperator::new(p);
    let d1 = d.sub(&DerivationSpec::DRho(rho.clone()).table(alg, &bx)?);

    // phi on generators from the diagonal L coefficient
    let mut phi_values = Vec::with_capacity(alg.rank());
    for k in 0..alg.rank() {
        let e = GammaElement::unit(alg.rank(), k);
        let b = need(&bx, Basis::new(Kind::L, e.clone(), t0))?;
        phi_values.push(d1.get(&b)?.poly(Kind::L, &e).shift(-t0));
    }
    let phi = PolyHom::new(phi_values);
    let d2 = d1.sub(&DerivationSpec::DPhi(phi.clone()).table(alg, &bx)?);

    // g fitted through 0 and the first generator
    let e1 = GammaElement::unit(alg.rank(), 0);
    let at0 = need(&bx, Basis::new(Kind::L, zero.clone(), t0))?;
    let at1 = need(&bx, Basis::new(Kind::L, e1.clone(), t0))?;
    let c = d2.get(&at0)?.poly(Kind::H, &zero).shift(-t0);
    let g1 = d2.get(&at1)?.poly(Kind::H, &e1).shift(-t0);
    let inv = alg.embed(&e1).inv().map_err(crate::algebra::AlgebraError::from)?;
    let g = GSymbol::new(c.clone(), (&g1 - &c).scale(&inv));
    let d3 = d2.sub(&DerivationSpec::DG(g.clone()).table(alg, &bx)?);

    // b from D(H(0;t0))
    let h0 = need(&bx, Basis::new(Kind::H, zero.clone(), t0))?;
    let b = d3.get(&h0)?.poly(Kind::H, &zero).shift(-t0);
    let residual = d3.sub(&DerivationSpec::DB(b.clone()).table(alg, &bx)?);

    let first = residual.entries().next().map(|(b, _)| b.clone());
    if let Some(first) = first {
        return Err(DerivationError::NonZeroResidual(first, Box::new(residual)));
    }
    Ok(Decomposition {
        phi,
        g,
        b,
        rho,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectSumReport {
    /// Laurent degrees allowed in each unknown parameter.
    pub window: (i64, i64),
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    /// Families with a nonzero component in some kernel vector.
    pub underconstrained: Vec<String>,
}

impl DirectSumReport {
    pub fn trivial(&self) -> bool {
        self.rank == self.unknowns
    }
}

/// Solves `D_phi + D_g + D_b + D^rho = 0` on the box for parameters with
/// Laurent degrees in the closure window and reports the kernel.
pub fn direct_sum_check(alg: &Algebra, bx: &TruncationBox) -> DirectSumReport {
    let window = bx.padded().t_bounds();
    let degrees: Vec<i64> = (window.0..=window.1).collect();
    let rank = alg.rank();
    // (family label, spec with a single monomial parameter)
    let mut columns: Vec<(&'static str, DerivationSpec)> = Vec::new();
    for k in 0..rank {
        for &m in &degrees {
            let mut phi = PolyHom::zero(rank);
            phi.values[k] = LaurentPoly::t_pow(m);
            columns.push(("phi", DerivationSpec::DPhi(phi)));
        }
    }
    for &m in &degrees {
        columns.push(("g", DerivationSpec::DG(GSymbol::new(LaurentPoly::t_pow(m), LaurentPoly::zero()))));
    }
    for &m in &degrees {
        columns.push(("g", DerivationSpec::DG(GSymbol::new(LaurentPoly::zero(), LaurentPoly::t_pow(m)))));
    }
    for &m in &degrees {
        columns.push(("b", DerivationSpec::DB(LaurentPoly::t_pow(m))));
    }
    for &m in &degrees {
        columns.push(("rho", DerivationSpec::DRho(RhoOperator::new(LaurentPoly::t_pow(m)))));
    }
    let basis = bx.basis();
    let mut rows: BTreeMap<(usize, Basis), BTreeMap<usize, Scalar>> = BTreeMap::new();
    for (col, (_, spec)) in columns.iter().enumerate() {
        for (k, b) in basis.iter().enumerate() {
            let img = spec
                .apply_unchecked(alg, &Element::basis(b))
                .expect("family derivations are total");
            for (z, c) in img.monomials() {
                rows.entry((k, z)).or_default().insert(col, c.clone());
            }
        }
    }
    let equations = rows.len();
    let mut m = Matrix::new(columns.len());
    for row in rows.into_values() {
        m.push_row(row);
    }
    let red = m.rref();
    let mut under = BTreeSet::new();
    for v in red.nullspace() {
        for (c, x) in v.iter().enumerate() {
            if !x.is_zero() {
                under.insert(columns[c].0);
            }
        }
    }
    let order = ["phi", "g", "b", "rho"];
    DirectSumReport {
        window,
        unknowns: columns.len(),
        equations,
        rank: red.rank(),
        underconstrained: order
            .iter()
            .filter(|f| under.contains(*f))
            .map(|f| f.to_string())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaConfig;

    fn z() -> Algebra {
        Algebra::new(GammaConfig::integers())
    }

    fn bx() -> TruncationBox {
        TruncationBox::new(vec![(-2, 2)], (-2, 2), 2).unwrap()
    }

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Scalar::from_int(c))))
    }

    #[test]
    fn recovers_single_families() {
        let a = z();
        let phi = DerivationSpec::DPhi(PolyHom::new(vec![LaurentPoly::one()]));
        let dec = decompose_degree_zero(&a, &phi.table(&a, &bx()).unwrap()).unwrap();
        assert_eq!(dec.phi, PolyHom::new(vec![LaurentPoly::one()]));
        assert!(dec.g.is_zero() && dec.b.is_zero() && dec.rho.is_zero());

        let rho = DerivationSpec::DRho(RhoOperator::euler());
        let dec = decompose_degree_zero(&a, &rho.table(&a, &bx()).unwrap()).unwrap();
        assert_eq!(dec.rho, RhoOperator::euler());
        assert!(dec.phi.is_zero() && dec.g.is_zero() && dec.b.is_zero());

        let db = DerivationSpec::DB(LaurentPoly::t_pow(2));
        let dec = decompose_degree_zero(&a, &db.table(&a, &bx()).unwrap()).unwrap();
        assert_eq!(dec.b, LaurentPoly::t_pow(2));
        assert!(dec.phi.is_zero() && dec.g.is_zero() && dec.rho.is_zero());
    }

    #[test]
    fn recovers_sum() {
        let a = z();
        let phi = PolyHom::new(vec![poly(&[(0, 2), (-1, 1)])]);
        let g = GSymbol::new(poly(&[(1, 3)]), poly(&[(0, -1)]));
        let b = poly(&[(2, 5), (0, 1)]);
        let rho = RhoOperator::new(poly(&[(1, 1), (2, -2)]));
        let spec = DerivationSpec::Sum(vec![
            DerivationSpec::DPhi(phi.clone()),
            DerivationSpec::DG(g.clone()),
            DerivationSpec::DB(b.clone()),
            DerivationSpec::DRho(rho.clone()),
        ]);
        let dec = decompose_degree_zero(&a, &spec.table(&a, &bx()).unwrap()).unwrap();
        assert_eq!((dec.phi, dec.g, dec.b, dec.rho), (phi, g, b, rho));
        assert!(dec.residual.is_zero());
    }

    #[test]
    fn rejects_non_degree_zero_and_non_derivations() {
        let a = z();
        let inner = DerivationSpec::Inner(Element::basis(&Basis::l(&[1], 0)));
        assert_eq!(
            decompose_degree_zero(&a, &inner.table(&a, &bx()).unwrap()),
            Err(DerivationError::NotDegreeZero)
        );
        let mut t = BasisTable::new(bx());
        t.insert(Basis::l(&[1], 0), Element::basis(&Basis::l(&[1], 0))).unwrap();
        assert!(matches!(
            decompose_degree_zero(&a, &t),
            Err(DerivationError::NotADerivation(..))
        ));
    }

    #[test]
    fn inner_witness_examples() {
        let a = z();
        let g1 = GammaElement::new(vec![1]);
        for w in [Basis::l(&[1], 2), Basis::h(&[1], 0)] {
            let t = DerivationSpec::Inner(Element::basis(&w)).table(&a, &bx()).unwrap();
            assert_eq!(inner_witness_nonzero_degree(&a, &t, &g1).unwrap(), Element::basis(&w));
        }
        let t = DerivationSpec::zero().table(&a, &bx()).unwrap();
        assert_eq!(
            inner_witness_nonzero_degree(&a, &t, &GammaElement::new(vec![0])),
            Err(DerivationError::ZeroDegree)
        );
    }

    #[test]
    fn parts_of_inner_sum() {
        let a = z();
        let x = &Element::basis(&Basis::l(&[1], 0)) + &Element::basis(&Basis::l(&[2], 1));
        let t = DerivationSpec::Inner(x).table(&a, &bx()).unwrap();
        let parts = homogeneous_parts(&a, &t).unwrap();
        assert_eq!(parts.len(), 2);
        for (g, w) in [(1, Basis::l(&[1], 0)), (2, Basis::l(&[2], 1))] {
            let expect = DerivationSpec::Inner(Element::basis(&w)).table(&a, &bx()).unwrap();
            assert_eq!(parts[&GammaElement::new(vec![g])], expect);
        }
    }

    #[test]
    fn direct_sum() {
        let a = z();
        let r = direct_sum_check(&a, &bx());
        assert!(r.trivial(), "{r:?}");
        let only_zero = TruncationBox::new(vec![(0, 0)], (-1, 1), 1).unwrap();
        let r = direct_sum_check(&a, &only_zero);
        assert!(r.underconstrained.contains(&"phi".to_string()));
        let no_one = TruncationBox::new(vec![(-2, 2)], (0, 0), 2).unwrap();
        let r = direct_sum_check(&a, &no_one);
        assert!(r.underconstrained.contains(&"rho".to_string()));
    }
}
