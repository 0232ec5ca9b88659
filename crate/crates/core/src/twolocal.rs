//! 2-local derivations on finite sample sets.
//!
//! A witness is `ad(w) + D_phi + D_g + D_b + D^rho` with `w` supported in the
//! box and the family parameters drawn from a finite window of Laurent degrees.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Basis, Element, Kind, TruncationBox};
use crate::derivations::DerivationSpec;
use crate::gamma::{GSymbol, GammaElement, PolyHom};
use crate::linalg::Matrix;
use crate::scalar::{LaurentPoly, RhoOperator, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoLocalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("samples and values differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("anchor sample {0} is missing")]
    AnchorMissing(Basis),
    #[error("no witness for the anchor pair")]
    NoWitnessForAnchorPair,
    #[error("no single derivation matches every sample; first mismatch at sample {0}")]
    ResidualNonZero(usize),
}

/// Values of a (possibly nonlinear) map on finitely many points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TwoLocalTable {
    pub samples: Vec<Element>,
    pub values: Vec<Element>,
}

impl TwoLocalTable {
    pub fn new(samples: Vec<Element>, values: Vec<Element>) -> Result<TwoLocalTable, TwoLocalError> {
        if samples.len() != values.len() {
            return Err(TwoLocalError::LengthMismatch(samples.len(), values.len()));
        }
        Ok(TwoLocalTable { samples, values })
    }

    /// Restriction of a derivation to the given points.
    pub fn restrict(alg: &Algebra, d: &DerivationSpec, samples: Vec<Element>) -> TwoLocalTable {
        let values = samples
            .iter()
            .map(|s| d.apply(alg, s).expect("derivation defined on samples"))
            .collect();
        TwoLocalTable { samples, values }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn validate(&self, alg: &Algebra, bx: &TruncationBox) -> Result<(), TwoLocalError> {
        for s in &self.samples {
            alg.check_element(s)?;
            bx.require_support(s)?;
        }
        for v in &self.values {
            alg.check_element(v)?;
        }
        Ok(())
    }
}

/// One scalar unknown of the degree-zero part of a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Param {
    Phi(usize, i64),
    GConst(i64),
    GAlpha(i64),
    B(i64),
    Rho(i64),
}

/// Where witnesses are searched: `ad(w)` with `w` supported in the box, plus
/// the four degree-zero families with Laurent parameters whose exponents lie
/// in `degrees`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSpace {
    pub degrees: Option<(i64, i64)>,
}

impl WitnessSpace {
    pub fn new(degrees: (i64, i64)) -> WitnessSpace {
        WitnessSpace { degrees: Some(degrees) }
    }

    /// Family parameters with exponents in the box's t-range.
    pub fn for_box(bx: &TruncationBox) -> WitnessSpace {
        WitnessSpace::new(bx.t_bounds())
    }

    pub fn inner_only() -> WitnessSpace {
        WitnessSpace { degrees: None }
    }

    fn params(&self, rank: usize) -> Vec<Param> {
        let Some((lo, hi)) = self.degrees else { return Vec::new() };
        let mut out = Vec::new();
        for e in lo..=hi {
            out.extend((0..rank).map(|k| Param::Phi(k, e)));
            out.extend([Param::GConst(e), Param::GAlpha(e), Param::B(e), Param::Rho(e)]);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSpec {
    pub inner: Element,
    pub phi: PolyHom,
    pub g: GSymbol,
    pub b: LaurentPoly,
    pub rho: RhoOperator,
}

impl WitnessSpec {
    pub fn zero(rank: usize) -> WitnessSpec {
        WitnessSpec {
            inner: Element::zero(),
            phi: PolyHom::zero(rank),
            g: GSymbol::default(),
            b: LaurentPoly::zero(),
            rho: RhoOperator::default(),
        }
    }

    pub fn derivation(&self) -> DerivationSpec {
        DerivationSpec::Sum(vec![
            DerivationSpec::Inner(self.inner.clone()),
            DerivationSpec::DPhi(self.phi.clone()),
            DerivationSpec::DG(self.g.clone()),
            DerivationSpec::DB(self.b.clone()),
            DerivationSpec::DRho(self.rho.clone()),
        ])
    }

    fn add(&mut self, p: Param, c: &Scalar) {
        let m = LaurentPoly::monomial(c.clone(), match p {
            Param::Phi(_, e) | Param::GConst(e) | Param::GAlpha(e) | Param::B(e) | Param::Rho(e) => e,
        });
        match p {
            Param::Phi(k, _) => {
                let mut v = self.phi.values.clone();
                v[k] = &v[k] + &m;
                self.phi = PolyHom::new(v);
            }
            Param::GConst(_) => self.g = self.g.add(&GSymbol::new(m, LaurentPoly::zero())),
            Param::GAlpha(_) => self.g = self.g.add(&GSymbol::new(LaurentPoly::zero(), m)),
            Param::B(_) => self.b = &self.b + &m,
            Param::Rho(_) => self.rho = RhoOperator::new(&self.rho.p + &m),
        }
    }
}

fn unit_spec(rank: usize, p: Param) -> DerivationSpec {
    let mut w = WitnessSpec::zero(rank);
    w.add(p, &Scalar::one());
    match p {
        Param::Phi(..) => DerivationSpec::DPhi(w.phi),
        Param::GConst(_) | Param::GAlpha(_) => DerivationSpec::DG(w.g),
        Param::B(_) => DerivationSpec::DB(w.b),
        Param::Rho(_) => DerivationSpec::DRho(w.rho),
    }
}

/// Column images of the witness parameters at one point: `[b_k, x]` for each
/// box basis vector, then one column per family parameter.
fn columns_at(alg: &Algebra, basis: &[Basis], params: &[Param], x: &Element) -> Vec<Element> {
    let mut cols: Vec<Element> = basis
        .iter()
        .map(|b| alg.bracket_unchecked(&Element::basis(b), x))
        .collect();
    for p in params {
        cols.push(unit_spec(alg.rank(), *p).apply(alg, x).expect("families are total"));
    }
    cols
}

/// Solves for witness parameters matching `values[k]` at `cols[k]`.
fn solve(rank: usize, basis: &[Basis], params: &[Param], points: &[(&[Element], &Element)]) -> Option<WitnessSpec> {
    let ncols = basis.len() + params.len();
    let mut rows: BTreeMap<(usize, Basis), BTreeMap<usize, Scalar>> = BTreeMap::new();
    let mut rhs: BTreeMap<(usize, Basis), Scalar> = BTreeMap::new();
    for (p, (cols, value)) in points.iter().enumerate() {
        for (c, img) in cols.iter().enumerate() {
            for (z, s) in img.monomials() {
                rows.entry((p, z)).or_default().insert(c, s.clone());
            }
        }
        for (z, s) in value.monomials() {
            rows.entry((p, z.clone())).or_default();
            rhs.insert((p, z), s.clone());
        }
    }
    let mut m = Matrix::new(ncols);
    let mut b = Vec::with_capacity(rows.len());
    for (key, row) in rows {
        b.push(rhs.remove(&key).unwrap_or_else(Scalar::zero));
        m.push_row(row);
    }
    let sol = m.solve(&b)?;
    let v = sol.particular;
    let mut w = WitnessSpec::zero(rank);
    w.inner = Element::from_monomials(basis.iter().zip(&v[..basis.len()]));
    for (p, c) in params.iter().zip(&v[basis.len()..]) {
        if !c.is_zero() {
            w.add(*p, c);
        }
    }
    Some(w)
}

struct Prepared {
    rank: usize,
    basis: Vec<Basis>,
    params: Vec<Param>,
    columns: Vec<Vec<Element>>,
}

fn prepare(
    alg: &Algebra,
    delta: &TwoLocalTable,
    bx: &TruncationBox,
    space: &WitnessSpace,
) -> Result<Prepared, TwoLocalError> {
    delta.validate(alg, bx)?;
    let basis = bx.basis();
    let params = space.params(alg.rank());
    let columns = delta
        .samples
        .par_iter()
        .map(|s| columns_at(alg, &basis, &params, s))
        .collect();
    Ok(Prepared {
        rank: alg.rank(),
        basis,
        params,
        columns,
    })
}

impl Prepared {
    fn solve_for(&self, delta: &TwoLocalTable, idx: &[usize]) -> Option<WitnessSpec> {
        let points: Vec<(&[Element], &Element)> = idx
            .iter()
            .map(|&k| (self.columns[k].as_slice(), &delta.values[k]))
            .collect();
        solve(self.rank, &self.basis, &self.params, &points)
    }
}

/// A witness derivation agreeing with `delta` at samples `x` and `y`. Among
/// all solutions the one with free parameters set to zero is returned.
pub fn find_pair_witness(
    alg: &Algebra,
    delta: &TwoLocalTable,
    x: usize,
    y: usize,
    bx: &TruncationBox,
    space: &WitnessSpace,
) -> Result<Option<WitnessSpec>, TwoLocalError> {
    let prep = prepare(alg, delta, bx, space)?;
    Ok(prep.solve_for(delta, &[x, y]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLocalReport {
    pub pairs: usize,
    pub failing: Vec<(usize, usize)>,
}

impl TwoLocalReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }
}

pub fn verify_two_local(
    alg: &Algebra,
    delta: &TwoLocalTable,
    bx: &TruncationBox,
    space: &WitnessSpace,
) -> Result<TwoLocalReport, TwoLocalError> {
    let prep = prepare(alg, delta, bx, space)?;
    let n = delta.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let failing = pairs
        .par_iter()
        .filter(|(i, j)| prep.solve_for(delta, &[*i, *j]).is_none())
        .copied()
        .collect();
    Ok(TwoLocalReport {
        pairs: pairs.len(),
        failing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub witness: WitnessSpec,
    pub derivation: DerivationSpec,
    /// `delta(s) - D(s)` for every sample; all zero on success.
    pub residuals: Vec<Element>,
    /// Whether the first solution for the anchor pair already matched every
    /// sample, before re-solving jointly.
    pub anchor_witness_sufficient: bool,
}

/// Certifies that `delta` agrees on all samples with one derivation that is a
/// witness for the anchor pair `(L(0;i), L(e_1;j))`.
///
/// The anchor system is underdetermined (for instance `D_b` and the inner
/// parts of `H` kill both anchors), so when the first anchor solution leaves
/// a residual the witness is re-solved against all samples at once; any such
/// solution is still a witness for the anchor pair.
pub fn certify_two_local(
    alg: &Algebra,
    delta: &TwoLocalTable,
    bx: &TruncationBox,
    space: &WitnessSpace,
    anchors: (i64, i64),
) -> Result<Certificate, TwoLocalError> {
    let prep = prepare(alg, delta, bx, space)?;
    let rank = alg.rank();
    let a0 = Basis::new(Kind::L, GammaElement::zero(rank), anchors.0);
    let a1 = Basis::new(Kind::L, GammaElement::unit(rank, 0), anchors.1);
    let find = |b: &Basis| {
        let e = Element::basis(b);
        delta
            .samples
            .iter()
            .position(|s| *s == e)
            .ok_or_else(|| TwoLocalError::AnchorMissing(b.clone()))
    };
    let (x, y) = (find(&a0)?, find(&a1)?);
    let anchor = prep
        .solve_for(delta, &[x, y])
        .ok_or(TwoLocalError::NoWitnessForAnchorPair)?;
    let residuals_of = |w: &WitnessSpec| -> Vec<Element> {
        let d = w.derivation();
        delta
            .samples
            .iter()
            .zip(&delta.values)
            .map(|(s, v)| v - &d.apply(alg, s).expect("total"))
            .collect()
    };
    let residuals = residuals_of(&anchor);
    let (witness, residuals, sufficient) = if residuals.iter().all(Element::is_zero) {
        (anchor, residuals, true)
    } else {
        let all: Vec<usize> = std::iter::once(x)
            .chain(std::iter::once(y))
            .chain((0..delta.len()).filter(|k| *k != x && *k != y))
            .collect();
        match prep.solve_for(delta, &all) {
            Some(w) => {
                let r = residuals_of(&w);
                (w, r, false)
            }
            None => {
                let first = residuals.iter().position(|r| !r.is_zero()).unwrap_or(0);
                return Err(TwoLocalError::ResidualNonZero(first));
            }
        }
    };
    Ok(Certificate {
        derivation: witness.derivation(),
        witness,
        residuals,
        anchor_witness_sufficient: sufficient,
    })
}
