//! Biderivations, commuting linear maps and commutative post-Lie products,
//! all given by their values on basis vectors of a box.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Basis, BasisTable, Element, Kind, TruncationBox};
use crate::gamma::GammaElement;
use crate::random;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiderError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("not a biderivation: identity {} fails at ({}, {}, {})", .0.identity, .0.x, .0.y, .0.z)]
    NotABiderivation(TripleFailure),
    #[error("f({0}, {1}) differs from the inner value")]
    NonInnerResidual(Basis, Basis, Option<TripleFailure>),
    #[error("box too small: {0}")]
    BoxTooSmall(String),
    #[error("not a commuting map: fails at ({0}, {1})")]
    NotCommuting(Basis, Basis),
    #[error("residual value at {0} is not central")]
    NonCentralResidual(Basis),
}

/// A bilinear map given on pairs of basis vectors of its domain; missing
/// pairs map to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearTable {
    domain: TruncationBox,
    values: BTreeMap<(Basis, Basis), Element>,
}

impl BilinearTable {
    pub fn new(domain: TruncationBox) -> BilinearTable {
        BilinearTable {
            domain,
            values: BTreeMap::new(),
        }
    }

    pub fn from_fn<F: FnMut(&Basis, &Basis) -> Element>(domain: TruncationBox, mut f: F) -> BilinearTable {
        let mut t = BilinearTable::new(domain);
        let basis = t.domain.basis();
        for x in &basis {
            for y in &basis {
                let v = f(x, y);
                if !v.is_zero() {
                    t.values.insert((x.clone(), y.clone()), v);
                }
            }
        }
        t
    }

    /// `lambda [x, y]` on the domain.
    pub fn inner(alg: &Algebra, domain: TruncationBox, lambda: &Scalar) -> BilinearTable {
        BilinearTable::from_fn(domain, |x, y| match alg.bracket_basis(x, y) {
            Some((c, z)) => Element::basis(&z).scale(&(&c * lambda)),
            None => Element::zero(),
        })
    }

    pub fn domain(&self) -> &TruncationBox {
        &self.domain
    }

    pub fn insert(&mut self, x: Basis, y: Basis, v: Element) -> Result<(), AlgebraError> {
        for b in [&x, &y] {
            if !self.domain.contains(b) {
                return Err(AlgebraError::SupportOutsideBox(b.to_string()));
            }
        }
        if v.is_zero() {
            self.values.remove(&(x, y));
        } else {
            self.values.insert((x, y), v);
        }
        Ok(())
    }

    pub fn get(&self, x: &Basis, y: &Basis) -> Result<Element, AlgebraError> {
        for b in [x, y] {
            if !self.domain.contains(b) {
                return Err(AlgebraError::SupportOutsideBox(b.to_string()));
            }
        }
        Ok(self.values.get(&(x.clone(), y.clone())).cloned().unwrap_or_default())
    }

    /// Nonzero entries in pair order.
    pub fn entries(&self) -> impl Iterator<Item = (&(Basis, Basis), &Element)> {
        self.values.iter()
    }

    /// Bilinear extension.
    pub fn apply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (a, c) in x.monomials() {
            for (b, d) in y.monomials() {
                out.add_assign(&self.get(&a, &b)?.scale(&(c * d)));
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

/// The failing identity (1 or 2 for biderivations, 1 to 3 for post-Lie
/// products) and its arguments; `z` repeats `y` for two-argument identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleFailure {
    pub identity: u8,
    pub x: Basis,
    pub y: Basis,
    pub z: Basis,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripleReport {
    pub checked: u64,
    pub skipped: u64,
    pub failures: u64,
    pub first_failure: Option<TripleFailure>,
}

impl TripleReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn merge(mut self, other: TripleReport) -> TripleReport {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }

    fn record(&mut self, ok: Option<bool>, fail: impl FnOnce() -> TripleFailure) {
        match ok {
            None => self.skipped += 1,
            Some(true) => self.checked += 1,
            Some(false) => {
                self.checked += 1;
                self.failures += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(fail());
                }
            }
        }
    }
}

fn monomial(v: Option<(Scalar, Basis)>) -> Element {
    match v {
        Some((c, b)) => Element::basis(&b).scale(&c),
        None => Element::zero(),
    }
}

/// Sweeps `check(x, y, z)` over basis triples of `bx` in parallel, keeping
/// the canonical order for the first failure.
fn sweep_triples<F>(bx: &TruncationBox, check: F) -> TripleReport
where
    F: Fn(&Basis, &Basis, &Basis, &mut TripleReport) + Sync,
{
    let basis = bx.basis();
    basis
        .par_iter()
        .map(|x| {
            let mut r = TripleReport::default();
            for y in &basis {
                for z in &basis {
                    check(x, y, z, &mut r);
                }
            }
            r
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(TripleReport::default(), TripleReport::merge)
}

/// `f([x,y],z) = [x,f(y,z)] + [f(x,z),y]` for one triple; `None` when an
/// argument leaves the table domain.
pub fn first_identity_at(alg: &Algebra, f: &BilinearTable, x: &Basis, y: &Basis, z: &Basis) -> Option<bool> {
    let xy = monomial(alg.bracket_basis(x, y));
    let lhs = f.apply(&xy, &Element::basis(z)).ok()?;
    let a = alg.bracket_unchecked(&Element::basis(x), &f.get(y, z).ok()?);
    let b = alg.bracket_unchecked(&f.get(x, z).ok()?, &Element::basis(y));
    Some(lhs == a + b)
}

/// `f(x,[y,z]) = [f(x,y),z] + [y,f(x,z)]` for one triple.
pub fn second_identity_at(alg: &Algebra, f: &BilinearTable, x: &Basis, y: &Basis, z: &Basis) -> Option<bool> {
    let yz = monomial(alg.bracket_basis(y, z));
    let lhs = f.apply(&Element::basis(x), &yz).ok()?;
    let a = alg.bracket_unchecked(&f.get(x, y).ok()?, &Element::basis(z));
    let b = alg.bracket_unchecked(&Element::basis(y), &f.get(x, z).ok()?);
    Some(lhs == a + b)
}

/// Both biderivation identities on all triples of `bx` whose brackets stay in
/// the table domain.
pub fn check_biderivation(alg: &Algebra, f: &BilinearTable, bx: &TruncationBox) -> TripleReport {
    sweep_triples(bx, |x, y, z, r| {
        let mk = |identity| move || TripleFailure {
            identity,
            x: x.clone(),
            y: y.clone(),
            z: z.clone(),
        };
        r.record(first_identity_at(alg, f, x, y, z), mk(1));
        r.record(second_identity_at(alg, f, x, y, z), mk(2));
    })
}

/// The default reference pair `(L(0;0), L(e_1;0))`.
pub fn default_reference(rank: usize) -> (Basis, Basis) {
    (
        Basis::new(Kind::L, GammaElement::zero(rank), 0),
        Basis::new(Kind::L, GammaElement::unit(rank, 0), 0),
    )
}

/// Reads `lambda` off the reference pair (or the first pair of the box with a
/// nonzero bracket), then checks `f = lambda [.,.]` on every pair of the box.
pub fn extract_inner_coefficient(
    alg: &Algebra,
    f: &BilinearTable,
    bx: &TruncationBox,
    reference: Option<(Basis, Basis)>,
) -> Result<Scalar, BiderError> {
    let basis = bx.basis();
    let reference = reference.unwrap_or_else(|| default_reference(alg.rank()));
    let nonzero = |(x, y): &(Basis, Basis)| {
        bx.contains(x) && bx.contains(y) && alg.bracket_basis(x, y).is_some()
    };
    let pair = if nonzero(&reference) {
        reference
    } else {
        basis
            .iter()
            .flat_map(|x| basis.iter().map(move |y| (x.clone(), y.clone())))
            .find(nonzero)
            .ok_or_else(|| BiderError::BoxTooSmall("no pair with nonzero bracket".into()))?
    };
    let (c, w) = alg.bracket_basis(&pair.0, &pair.1).expect("nonzero bracket");
    let value = f.get(&pair.0, &pair.1)?;
    let lambda = &value.coeff(&w) / &c;
    // away from the central family the reference value must already be inner
    let rest = &value - &Element::basis(&w).scale(&(&lambda * &c));
    if rest
        .monomials()
        .any(|(b, _)| b.kind == Kind::L || !b.gamma.is_zero())
    {
        let report = check_biderivation(alg, f, bx);
        if let Some(fail) = report.first_failure {
            return Err(BiderError::NotABiderivation(fail));
        }
    }
    for x in &basis {
        for y in &basis {
            let expected = monomial(alg.bracket_basis(x, y)).scale(&lambda);
            if f.get(x, y)? != expected {
                let report = check_biderivation(alg, f, bx);
                return Err(BiderError::NonInnerResidual(x.clone(), y.clone(), report.first_failure));
            }
        }
    }
    Ok(lambda)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommutingReport {
    pub pairs: u64,
    pub first_failure: Option<(Basis, Basis)>,
    pub spot_checks: u64,
    pub spot_failure: Option<Element>,
}

impl CommutingReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none() && self.spot_failure.is_none()
    }
}

/// `[phi(x), y] + [phi(y), x] = 0`.
pub fn commuting_at(alg: &Algebra, phi: &BasisTable, x: &Basis, y: &Basis) -> Result<bool, AlgebraError> {
    let a = alg.bracket_unchecked(&phi.get(x)?, &Element::basis(y));
    let b = alg.bracket_unchecked(&phi.get(y)?, &Element::basis(x));
    Ok((a + b).is_zero())
}

/// Polarized commuting identity on all basis pairs of `bx`, plus `spots`
/// random elements checked against `[phi(x), x] = 0` directly.
pub fn check_commuting(
    alg: &Algebra,
    phi: &BasisTable,
    bx: &TruncationBox,
    seed: u64,
    spots: usize,
) -> Result<CommutingReport, AlgebraError> {
    let basis = bx.basis();
    let rows: Vec<(u64, Option<(Basis, Basis)>)> = basis
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut first = None;
            for y in &basis[i..] {
                if first.is_none() && !commuting_at(alg, phi, x, y)? {
                    first = Some((x.clone(), y.clone()));
                }
            }
            Ok(((basis.len() - i) as u64, first))
        })
        .collect::<Result<_, AlgebraError>>()?;
    let mut report = CommutingReport::default();
    for (n, first) in rows {
        report.pairs += n;
        if report.first_failure.is_none() {
            report.first_failure = first;
        }
    }
    let mut rng = random::rng(seed);
    let field = alg.gamma().field();
    for _ in 0..spots {
        let n = rng.gen_range(2..=5);
        let x = random::element(&mut rng, field, bx, n);
        report.spot_checks += 1;
        if !alg.bracket_unchecked(&phi.apply(&x)?, &x).is_zero() && report.spot_failure.is_none() {
            report.spot_failure = Some(x);
        }
    }
    Ok(report)
}

fn is_central_on(alg: &Algebra, v: &Element, basis: &[Basis]) -> bool {
    basis
        .iter()
        .all(|b| alg.bracket_unchecked(v, &Element::basis(b)).is_zero())
}

/// `phi = lambda id + tau` with `tau` central-valued. `lambda` is the
/// coefficient of `b` in `phi(b)` for the first `L` basis vector `b`.
pub fn decompose_commuting(
    alg: &Algebra,
    phi: &BasisTable,
    bx: &TruncationBox,
) -> Result<(Scalar, BasisTable), BiderError> {
    let basis = bx.basis();
    let zero = Basis::new(Kind::L, GammaElement::zero(alg.rank()), 0);
    let anchor = if bx.contains(&zero) {
        zero
    } else {
        basis[0].clone()
    };
    let lambda = phi.get(&anchor)?.coeff(&anchor);
    let tau = phi.map_values(|b, v| v - &Element::basis(b).scale(&lambda));
    for (b, v) in tau.entries() {
        if !is_central_on(alg, v, &basis) {
            return Err(BiderError::NonCentralResidual(b.clone()));
        }
    }
    if let Some((x, y)) = check_commuting(alg, phi, bx, 0, 0)?.first_failure {
        return Err(BiderError::NotCommuting(x, y));
    }
    Ok((lambda, tau))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PostLieReport {
    pub identities: [TripleReport; 3],
    /// The product vanishes on the whole table domain.
    pub trivial: bool,
}

impl PostLieReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(TripleReport::passed)
    }
}

/// `x.y = y.x`.
pub fn post_lie_commutative_at(p: &BilinearTable, x: &Basis, y: &Basis) -> Option<bool> {
    Some(p.get(x, y).ok()? == p.get(y, x).ok()?)
}

/// `[x,y].z = x.(y.z) - y.(x.z)`.
pub fn post_lie_second_at(alg: &Algebra, p: &BilinearTable, x: &Basis, y: &Basis, z: &Basis) -> Option<bool> {
    let (ex, ey, ez) = (Element::basis(x), Element::basis(y), Element::basis(z));
    let lhs = p.apply(&monomial(alg.bracket_basis(x, y)), &ez).ok()?;
    let a = p.apply(&ex, &p.get(y, z).ok()?).ok()?;
    let b = p.apply(&ey, &p.get(x, z).ok()?).ok()?;
    Some(lhs == a - b)
}

/// `x.[y,z] = [x.y,z] + [y,x.z]`.
pub fn post_lie_third_at(alg: &Algebra, p: &BilinearTable, x: &Basis, y: &Basis, z: &Basis) -> Option<bool> {
    let lhs = p.apply(&Element::basis(x), &monomial(alg.bracket_basis(y, z))).ok()?;
    let a = alg.bracket_unchecked(&p.get(x, y).ok()?, &Element::basis(z));
    let b = alg.bracket_unchecked(&Element::basis(y), &p.get(x, z).ok()?);
    Some(lhs == a + b)
}

pub fn check_post_lie(alg: &Algebra, p: &BilinearTable, bx: &TruncationBox) -> PostLieReport {
    let basis = bx.basis();
    let mut comm = TripleReport::default();
    for x in &basis {
        for y in &basis {
            comm.record(post_lie_commutative_at(p, x, y), || TripleFailure {
                identity: 1,
                x: x.clone(),
                y: y.clone(),
                z: y.clone(),
            });
        }
    }
    let mk = |identity, x: &Basis, y: &Basis, z: &Basis| TripleFailure {
        identity,
        x: x.clone(),
        y: y.clone(),
        z: z.clone(),
    };
    let second = sweep_triples(bx, |x, y, z, r| r.record(post_lie_second_at(alg, p, x, y, z), || mk(2, x, y, z)));
    let third = sweep_triples(bx, |x, y, z, r| r.record(post_lie_third_at(alg, p, x, y, z), || mk(3, x, y, z)));
    PostLieReport {
        identities: [comm, second, third],
        trivial: p.is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaConfig;

    fn alg() -> Algebra {
        Algebra::new(GammaConfig::integers())
    }

    fn small() -> TruncationBox {
        TruncationBox::new(vec![(-2, 2)], (-1, 1), 2).unwrap()
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn l(g: i64, t: i64) -> Basis {
        Basis::l(&[g], t)
    }

    fn h(g: i64, t: i64) -> Basis {
        Basis::h(&[g], t)
    }

    #[test]
    fn inner_and_zero_biderivations() {
        let a = alg();
        let bx = small();
        let f = BilinearTable::inner(&a, bx.clone(), &s(5));
        let r = check_biderivation(&a, &f, &bx);
        assert!(r.passed());
        assert!(r.checked > 0 && r.skipped > 0);
        assert_eq!(extract_inner_coefficient(&a, &f, &bx, None).unwrap(), s(5));
        let zero = BilinearTable::new(bx.clone());
        assert!(check_biderivation(&a, &zero, &bx).passed());
        assert_eq!(extract_inner_coefficient(&a, &zero, &bx, None).unwrap(), s(0));
        let f3 = BilinearTable::inner(&a, bx.clone(), &s(3));
        assert_eq!(extract_inner_coefficient(&a, &f3, &bx, None).unwrap(), s(3));
    }

    #[test]
    fn perturbed_biderivation_fails_at_named_triple() {
        let a = alg();
        let bx = small();
        let mut f = BilinearTable::inner(&a, bx.clone(), &s(1));
        let v = f.get(&l(1, 0), &l(2, 0)).unwrap() + Element::basis(&l(3, 0));
        f.insert(l(1, 0), l(2, 0), v).unwrap();
        // L(3;0) is outside the small box; the value is checked in a bigger domain
        let big = TruncationBox::new(vec![(-3, 3)], (-1, 1), 3).unwrap();
        let mut g = BilinearTable::inner(&a, big.clone(), &s(1));
        let v = g.get(&l(1, 0), &l(2, 0)).unwrap() + Element::basis(&l(3, 0));
        g.insert(l(1, 0), l(2, 0), v).unwrap();
        let named = [
            first_identity_at(&a, &g, &l(1, 0), &l(2, 0), &l(0, 0)),
            second_identity_at(&a, &g, &l(1, 0), &l(2, 0), &l(0, 0)),
        ];
        assert!(named.contains(&Some(false)));
        assert!(!check_biderivation(&a, &g, &big).passed());
        assert!(!check_biderivation(&a, &f, &bx).passed());
    }

    #[test]
    fn central_residual_is_not_inner() {
        let a = alg();
        let bx = small();
        let mut f = BilinearTable::inner(&a, bx.clone(), &s(2));
        let v = f.get(&l(1, 0), &l(-1, 1)).unwrap() + Element::basis(&h(0, 1));
        f.insert(l(1, 0), l(-1, 1), v).unwrap();
        match extract_inner_coefficient(&a, &f, &bx, None) {
            Err(BiderError::NonInnerResidual(x, y, fail)) => {
                assert_eq!((x, y), (l(1, 0), l(-1, 1)));
                assert!(fail.is_some());
            }
            other => panic!("{other:?}"),
        }
        assert!(!check_biderivation(&a, &f, &bx).passed());
    }

    #[test]
    fn inner_biderivations_satisfy_the_bracket_swap_identity() {
        // [f(b1,b2),[b3,b4]] = [[b1,b2], f(b3,b4)]
        let a = alg();
        let bx = TruncationBox::new(vec![(-1, 1)], (-1, 1), 1).unwrap();
        let lambda = Scalar::from_ratio(-7, 3);
        let f = BilinearTable::inner(&a, bx.clone(), &lambda);
        let basis = bx.basis();
        for b1 in &basis {
            for b2 in &basis {
                let f12 = f.get(b1, b2).unwrap();
                let br12 = monomial(a.bracket_basis(b1, b2));
                for b3 in &basis {
                    for b4 in &basis {
                        let f34 = f.get(b3, b4).unwrap();
                        let br34 = monomial(a.bracket_basis(b3, b4));
                        assert_eq!(a.bracket(&f12, &br34).unwrap(), a.bracket(&br12, &f34).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn central_arguments_and_commuting_pairs_give_zero() {
        let a = alg();
        let bx = small();
        let f = BilinearTable::inner(&a, bx.clone(), &s(4));
        let lambda = extract_inner_coefficient(&a, &f, &bx, None).unwrap();
        for c in crate::algebra::central_subspace(&a, &bx) {
            for b in bx.basis() {
                let e = Element::basis(&b);
                assert!(f.apply(&e, &c).unwrap().is_zero());
                assert!(f.apply(&c, &e).unwrap().is_zero());
                assert!(a.bracket(&e, &c).unwrap().scale(&lambda).is_zero());
            }
        }
        for x in bx.basis() {
            for y in bx.basis() {
                if a.bracket_basis(&x, &y).is_none() {
                    assert!(f.get(&x, &y).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn reference_pair_fallback() {
        let a = alg();
        let bx = TruncationBox::new(vec![(1, 2)], (0, 0), 2).unwrap();
        let f = BilinearTable::inner(&a, bx.clone(), &s(6));
        assert_eq!(extract_inner_coefficient(&a, &f, &bx, None).unwrap(), s(6));
        let flat = TruncationBox::new(vec![(0, 0)], (0, 1), 1).unwrap();
        let z = BilinearTable::new(flat.clone());
        assert!(matches!(
            extract_inner_coefficient(&a, &z, &flat, None),
            Err(BiderError::BoxTooSmall(_))
        ));
    }

    fn identity(bx: &TruncationBox) -> BasisTable {
        BasisTable::from_fn(bx.clone(), Element::basis)
    }

    #[test]
    fn commuting_examples() {
        let a = alg();
        let bx = small();
        let seven = identity(&bx).scale(&s(7));
        assert!(check_commuting(&a, &seven, &bx, 1, 5).unwrap().passed());

        let mut plus_central = identity(&bx);
        plus_central
            .insert(l(1, 0), Element::basis(&l(1, 0)) + Element::basis(&h(0, 0)))
            .unwrap();
        assert!(check_commuting(&a, &plus_central, &bx, 1, 5).unwrap().passed());

        let mut bad = identity(&bx);
        bad.insert(l(1, 0), Element::basis(&l(2, 0))).unwrap();
        assert!(!commuting_at(&a, &bad, &l(1, 0), &l(0, 0)).unwrap());
        let r = check_commuting(&a, &bad, &bx, 1, 0).unwrap();
        assert!(r.first_failure.is_some());
    }

    #[test]
    fn decompose_commuting_examples() {
        let a = alg();
        let bx = small();
        let central = Element::basis(&h(0, 1));
        let phi = identity(&bx).scale(&s(2)).map_values(|_, v| v + &central);
        let (lambda, tau) = decompose_commuting(&a, &phi, &bx).unwrap();
        assert_eq!(lambda, s(2));
        assert!(tau.entries().all(|(_, v)| *v == central));
        assert_eq!(tau.entries().count(), bx.basis().len());

        let (lambda, tau) = decompose_commuting(&a, &identity(&bx), &bx).unwrap();
        assert_eq!(lambda, s(1));
        assert!(tau.is_zero());

        let mut noncentral = identity(&bx);
        noncentral
            .insert(l(-1, 0), Element::basis(&l(-1, 0)) + Element::basis(&h(1, 0)))
            .unwrap();
        assert_eq!(
            decompose_commuting(&a, &noncentral, &bx),
            Err(BiderError::NonCentralResidual(l(-1, 0)))
        );
    }

    #[test]
    fn post_lie_examples() {
        let a = alg();
        let bx = TruncationBox::new(vec![(-1, 2)], (-1, 1), 2).unwrap();
        let zero = BilinearTable::new(bx.clone());
        let r = check_post_lie(&a, &zero, &bx);
        assert!(r.passed() && r.trivial);

        let br = BilinearTable::inner(&a, bx.clone(), &s(3));
        let r = check_post_lie(&a, &br, &bx);
        assert!(!r.identities[0].passed());
        assert!(r.identities[0].first_failure.is_some());
        assert_eq!(post_lie_commutative_at(&br, &l(1, 0), &l(2, 0)), Some(false));

        let constant = BilinearTable::from_fn(bx.clone(), |_, _| Element::basis(&h(0, 0)));
        let r = check_post_lie(&a, &constant, &bx);
        assert!(r.identities[0].passed());
        assert!(!r.identities[1].passed());
    }
}
