//! Automorphisms `theta(X(a;i)) = s b^i chi(a) X(a/s; psi i + phi(a))` and
//! their parameter group.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Basis, BasisTable, Element, Kind, TruncationBox};
use crate::gamma::{Character, GammaConfig, GammaElement, GammaError, IntHom, LatticeMap};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("invalid automorphism parameters: {0}")]
    InvalidParams(String),
    #[error("image of {0} is not a single monomial of the same kind")]
    NotMonomialShape(Basis),
    #[error("extracted data violates the multiplicative law: {0}")]
    LawViolation(String),
    #[error("extracted parameters do not reproduce the map at {0}")]
    RoundTripMismatch(Basis),
    #[error("box too small: {0}")]
    BoxTooSmall(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

/// `(a, phi, chi, psi, b)` with `a` in the scaling group, `phi` in
/// `Hom(Gamma, Z)`, `chi` a character, `psi = +-1` and `b` nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismParams {
    pub a: Scalar,
    pub phi: IntHom,
    pub chi: Character,
    pub psi: i64,
    pub b: Scalar,
}

impl AutomorphismParams {
    pub fn new(
        cfg: &GammaConfig,
        a: Scalar,
        phi: IntHom,
        chi: Character,
        psi: i64,
        b: Scalar,
    ) -> Result<AutomorphismParams, AutError> {
        let p = AutomorphismParams { a, phi, chi, psi, b };
        p.validate(cfg)?;
        Ok(p)
    }

    pub fn identity(rank: usize) -> AutomorphismParams {
        AutomorphismParams {
            a: Scalar::one(),
            phi: IntHom::zero(rank),
            chi: Character::trivial(rank),
            psi: 1,
            b: Scalar::one(),
        }
    }

    pub fn validate(&self, cfg: &GammaConfig) -> Result<(), AutError> {
        let bad = |m: String| Err(AutError::InvalidParams(m));
        let field = cfg.field();
        if self.phi.values.len() != cfg.rank() || self.chi.values.len() != cfg.rank() {
            return bad(format!("phi and chi need {} generator values", cfg.rank()));
        }
        if self.psi != 1 && self.psi != -1 {
            return bad(format!("psi must be 1 or -1, got {}", self.psi));
        }
        if self.b.is_zero() {
            return bad("b must be nonzero".into());
        }
        for s in std::iter::once(&self.a).chain(&self.chi.values).chain(std::iter::once(&self.b)) {
            if !field.contains(s) {
                return bad(format!("{s} is not in {field}"));
            }
        }
        if self.chi.values.iter().any(Scalar::is_zero) {
            return bad("character values must be nonzero".into());
        }
        if self.a.is_zero() || !cfg.scaling_group_contains(&self.a)? {
            return bad(format!("a = {} is not in the scaling group", self.a));
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.phi.is_zero() && self.chi.is_trivial() && self.psi == 1 && self.b.is_one()
    }
}

/// Precomputed action of one parameter tuple.
struct Action<'p> {
    p: &'p AutomorphismParams,
    div_a: LatticeMap,
}

impl<'p> Action<'p> {
    fn new(cfg: &GammaConfig, p: &'p AutomorphismParams) -> Result<Action<'p>, AutError> {
        p.validate(cfg)?;
        let inv = p.a.inv().map_err(AlgebraError::from)?;
        Ok(Action {
            p,
            div_a: cfg.iota(&inv)?,
        })
    }

    /// `(coefficient, image basis)` of one basis vector.
    fn basis(&self, x: &Basis) -> (Scalar, Basis) {
        let p = self.p;
        let coeff = &(&p.a * &p.b.pow(x.t).expect("b nonzero")) * &p.chi.eval(&x.gamma);
        let t = p.psi * x.t + p.phi.eval(&x.gamma);
        (coeff, Basis::new(x.kind, self.div_a.apply(&x.gamma), t))
    }

    fn element(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (b, c) in x.monomials() {
            let (s, img) = self.basis(&b);
            out.add_monomial(&img, &(&s * c));
        }
        out
    }
}

pub fn apply_automorphism(
    cfg: &GammaConfig,
    p: &AutomorphismParams,
    x: &Element,
) -> Result<Element, AutError> {
    Ok(Action::new(cfg, p)?.element(x))
}

/// Values of the automorphism on the basis of `domain`.
pub fn automorphism_table(
    cfg: &GammaConfig,
    p: &AutomorphismParams,
    domain: &TruncationBox,
) -> Result<BasisTable, AutError> {
    let act = Action::new(cfg, p)?;
    Ok(BasisTable::from_fn(domain.clone(), |b| act.element(&Element::basis(b))))
}

/// `p1 p2`, the parameters of `theta_{p1} o theta_{p2}`.
pub fn compose_params(
    cfg: &GammaConfig,
    p1: &AutomorphismParams,
    p2: &AutomorphismParams,
) -> Result<AutomorphismParams, AutError> {
    p1.validate(cfg)?;
    p2.validate(cfg)?;
    let div_a2 = cfg.iota(&p2.a.inv().map_err(AlgebraError::from)?)?;
    let phi = p1.phi.compose(&div_a2).add(&p2.phi.scale(p1.psi));
    let chi = Character::power_of(&p1.b, &p2.phi)
        .map_err(AlgebraError::from)?
        .mul(&p2.chi)
        .mul(&p1.chi.compose(&div_a2));
    let b = &p1.b.pow(p2.psi).map_err(AlgebraError::from)? * &p2.b;
    AutomorphismParams::new(cfg, &p1.a * &p2.a, phi, chi, p1.psi * p2.psi, b)
}

pub fn invert_params(cfg: &GammaConfig, p: &AutomorphismParams) -> Result<AutomorphismParams, AutError> {
    p.validate(cfg)?;
    let mul_a = cfg.iota(&p.a)?;
    let phi = p.phi.compose(&mul_a).scale(-p.psi);
    let chi = Character::power_of(&p.b, &phi)
        .map_err(AlgebraError::from)?
        .mul(&p.chi.compose(&mul_a))
        .inv();
    let b = p.b.pow(-p.psi).map_err(AlgebraError::from)?;
    AutomorphismParams::new(cfg, p.a.inv().map_err(AlgebraError::from)?, phi, chi, p.psi, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismReport {
    pub pairs_checked: u64,
    pub pairs_skipped: u64,
    pub first_failure: Option<(Basis, Basis)>,
    pub injective: bool,
}

impl AutomorphismReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none() && self.injective
    }
}

/// Bracket preservation on all pairs of box basis vectors whose bracket lies
/// in the table domain, and injectivity on the box.
pub fn check_automorphism(
    alg: &Algebra,
    theta: &BasisTable,
    bx: &TruncationBox,
) -> Result<AutomorphismReport, AutError> {
    let basis = bx.basis();
    let images = basis.iter().map(|b| theta.get(b)).collect::<Result<Vec<_>, _>>()?;
    let mut report = AutomorphismReport {
        pairs_checked: 0,
        pairs_skipped: 0,
        first_failure: None,
        injective: true,
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lhs = match alg.bracket_basis(&basis[i], &basis[j]) {
                None => Element::zero(),
                Some((c, z)) => match theta.get(&z) {
                    Ok(v) => v.scale(&c),
                    Err(_) => {
                        report.pairs_skipped += 1;
                        continue;
                    }
                },
            };
            report.pairs_checked += 1;
            if report.first_failure.is_none() && lhs != alg.bracket(&images[i], &images[j])? {
                report.first_failure = Some((basis[i].clone(), basis[j].clone()));
            }
        }
    }
    let mut index: BTreeMap<Basis, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for img in &images {
        let row: BTreeMap<usize, Scalar> = img
            .monomials()
            .map(|(z, c)| {
                let n = index.len();
                (*index.entry(z).or_insert(n), c.clone())
            })
            .collect();
        rows.push(row);
    }
    let mut m = Matrix::new(index.len());
    for r in rows {
        m.push_row(r);
    }
    report.injective = m.rank() == basis.len();
    Ok(report)
}

fn monomial_image(theta: &BasisTable, b: &Basis) -> Result<(Scalar, Basis), AutError> {
    match theta.get(b)?.as_monomial() {
        Some((img, c)) if img.kind == b.kind => Ok((c, img)),
        _ => Err(AutError::NotMonomialShape(b.clone())),
    }
}

/// Reads `(a, phi, chi, psi, b)` off a table of monomial shape and checks
/// that the extracted data reproduces the table.
pub fn extract_params(alg: &Algebra, theta: &BasisTable) -> Result<AutomorphismParams, AutError> {
    let cfg = alg.gamma();
    let dom = theta.domain();
    let zero = cfg.zero();
    let need = |b: Basis| -> Result<Basis, AutError> {
        if dom.contains(&b) {
            Ok(b)
        } else {
            Err(AutError::BoxTooSmall(format!("{b} is not in the box")))
        }
    };
    let (a, img) = monomial_image(theta, &need(Basis::new(Kind::L, zero.clone(), 0))?)?;
    if !img.gamma.is_zero() || img.t != 0 {
        return Err(AutError::LawViolation(format!("L(0;0) maps to {img}")));
    }
    // mu and epsilon on every L index of the domain
    let mut mu: BTreeMap<(GammaElement, i64), Scalar> = BTreeMap::new();
    let mut eps: BTreeMap<(GammaElement, i64), i64> = BTreeMap::new();
    for b in dom.basis().into_iter().filter(|b| b.kind == Kind::L) {
        let (c, img) = monomial_image(theta, &b)?;
        if &cfg.embed(&img.gamma) * &a != cfg.embed(&b.gamma) {
            return Err(AutError::LawViolation(format!("{b} maps to {img}, expected index a^-1 ({})", b.gamma)));
        }
        mu.insert((b.gamma.clone(), b.t), &c / &a);
        eps.insert((b.gamma.clone(), b.t), img.t);
    }
    for ((g1, i), m1) in &mu {
        for ((g2, j), m2) in &mu {
            let key = (g1 + g2, i + j);
            if let Some(m12) = mu.get(&key) {
                if m1 * m2 != *m12 || eps[&(g1.clone(), *i)] + eps[&(g2.clone(), *j)] != eps[&key] {
                    return Err(AutError::LawViolation(format!(
                        "indices ({g1};{i}) and ({g2};{j})"
                    )));
                }
            }
        }
    }
    let ts: Vec<i64> = dom.t_values().collect();
    let step = if ts.contains(&1) {
        1
    } else if ts.contains(&-1) {
        -1
    } else {
        return Err(AutError::BoxTooSmall("need Laurent degree 1 or -1".into()));
    };
    let key = (zero.clone(), step);
    let psi = eps[&key] * step;
    let b = mu[&key].pow(step).map_err(AlgebraError::from)?;
    let mut phi = Vec::new();
    let mut chi = Vec::new();
    for k in 0..cfg.rank() {
        let e = (GammaElement::unit(cfg.rank(), k), 0);
        let (Some(m), Some(x)) = (mu.get(&e), eps.get(&e)) else {
            return Err(AutError::BoxTooSmall(format!("L({};0) is not in the box", e.0)));
        };
        chi.push(m.clone());
        phi.push(*x);
    }
    let chi = Character::new(chi).map_err(|_| AutError::LawViolation("zero character value".into()))?;
    let p = AutomorphismParams::new(cfg, a, IntHom::new(phi), chi, psi, b)
        .map_err(|e| AutError::LawViolation(e.to_string()))?;
    let act = Action::new(cfg, &p)?;
    for b in dom.basis() {
        if act.element(&Element::basis(&b)) != theta.get(&b)? {
            return Err(AutError::RoundTripMismatch(b));
        }
    }
    Ok(p)
}

/// The isomorphism `X(x;i) -> s X(x/s;i)` from the algebra over `cfg` to the
/// one over `other`, where `s other = cfg`; `scaled = false` drops the factor
/// `s` in front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingMap {
    pub a: Scalar,
    pub lattice: LatticeMap,
    pub scaled: bool,
}

impl ScalingMap {
    pub fn new(cfg: &GammaConfig, other: &GammaConfig, a: Scalar, scaled: bool) -> Result<ScalingMap, AutError> {
        if !other.scales_onto(&a, cfg) {
            return Err(AutError::InvalidParams(format!("{a} does not scale onto the lattice")));
        }
        let lattice = cfg.scaled_into(&a.inv().map_err(AlgebraError::from)?, other)?;
        Ok(ScalingMap { a, lattice, scaled })
    }

    pub fn apply(&self, x: &Element) -> Element {
        let s = if self.scaled { self.a.clone() } else { Scalar::one() };
        let mut out = Element::zero();
        for (b, c) in x.monomials() {
            let img = Basis::new(b.kind, self.lattice.apply(&b.gamma), b.t);
            out.add_monomial(&img, &(&s * c));
        }
        out
    }

    /// First box pair where `f[x,y] != [fx, fy]`, and the number of pairs.
    pub fn check(&self, source: &Algebra, target: &Algebra, bx: &TruncationBox) -> (u64, Option<(Basis, Basis)>) {
        let basis = bx.basis();
        let mut pairs = 0;
        for x in &basis {
            for y in &basis {
                pairs += 1;
                let lhs = self.apply(&source.bracket_unchecked(&Element::basis(x), &Element::basis(y)));
                let rhs = target.bracket_unchecked(&self.apply(&Element::basis(x)), &self.apply(&Element::basis(y)));
                if lhs != rhs {
                    return (pairs, Some((x.clone(), y.clone())));
                }
            }
        }
        (pairs, None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingIsomorphism {
    pub map: ScalingMap,
    pub pairs_checked: u64,
    pub first_failure: Option<(Basis, Basis)>,
}

/// Finds `s` with `s other = cfg` and checks the induced map on a box.
pub fn isomorphism_by_scaling(
    cfg: &GammaConfig,
    other: &GammaConfig,
    bx: &TruncationBox,
) -> Option<ScalingIsomorphism> {
    let a = cfg.find_scaling(other)?;
    let map = ScalingMap::new(cfg, other, a, true).ok()?;
    let (pairs_checked, first_failure) = map.check(&Algebra::new(cfg.clone()), &Algebra::new(other.clone()), bx);
    Some(ScalingIsomorphism {
        map,
        pairs_checked,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::scalar::Field;

    fn zcfg() -> GammaConfig {
        GammaConfig::integers()
    }

    fn q2() -> GammaConfig {
        GammaConfig::quadratic_integers(2).unwrap()
    }

    fn bx1() -> TruncationBox {
        TruncationBox::new(vec![(-2, 2)], (-2, 2), 2).unwrap()
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn params(a: Scalar, phi: i64, psi: i64, b: Scalar) -> AutomorphismParams {
        AutomorphismParams::new(&zcfg(), a, IntHom::new(vec![phi]), Character::trivial(1), psi, b).unwrap()
    }

    #[test]
    fn family_actions() {
        let cfg = zcfg();
        let x = Element::basis(&Basis::l(&[2], 3));
        let p = params(s(1), 0, 1, s(5));
        assert_eq!(apply_automorphism(&cfg, &p, &x).unwrap(), x.scale(&s(125)));
        let p = params(s(1), 2, 1, s(1));
        assert_eq!(apply_automorphism(&cfg, &p, &x).unwrap(), Element::basis(&Basis::l(&[2], 7)));
        let p = params(s(-1), 0, 1, s(1));
        assert_eq!(apply_automorphism(&cfg, &p, &x).unwrap(), Element::basis(&Basis::l(&[-2], 3)).scale(&s(-1)));
    }

    #[test]
    fn invalid_a_is_rejected() {
        let r = AutomorphismParams::new(&zcfg(), s(2), IntHom::zero(1), Character::trivial(1), 1, s(1));
        assert!(matches!(r, Err(AutError::InvalidParams(_))));
    }

    #[test]
    fn compose_example() {
        let cfg = zcfg();
        let p1 = params(s(1), 0, -1, s(2));
        let p2 = params(s(1), 0, -1, s(3));
        let c = compose_params(&cfg, &p1, &p2).unwrap();
        assert_eq!(c, params(s(1), 0, 1, Scalar::from_ratio(3, 2)));
        let x = Element::basis(&Basis::l(&[1], 1));
        let lhs = apply_automorphism(&cfg, &p1, &apply_automorphism(&cfg, &p2, &x).unwrap()).unwrap();
        assert_eq!(lhs, x.scale(&Scalar::from_ratio(3, 2)));
        let id = AutomorphismParams::identity(1);
        assert_eq!(compose_params(&cfg, &p1, &id).unwrap(), p1);
    }

    #[test]
    fn compose_unit_scalings() {
        let cfg = q2();
        let u = Scalar::one() + Scalar::sqrt(2);
        let p = AutomorphismParams::new(&cfg, u.clone(), IntHom::zero(2), Character::trivial(2), 1, s(1)).unwrap();
        let c = compose_params(&cfg, &p, &p).unwrap();
        assert_eq!(c.a, s(3) + Scalar::sqrt(2) * s(2));
    }

    #[test]
    fn functorial_and_invertible_on_random_params() {
        for (cfg, bx) in [
            (zcfg(), bx1()),
            (q2(), TruncationBox::new(vec![(-1, 1), (-1, 1)], (-1, 1), 1).unwrap()),
        ] {
            let mut rng = random::rng(7);
            for _ in 0..5 {
                let p1 = random::aut_params(&mut rng, &cfg);
                let p2 = random::aut_params(&mut rng, &cfg);
                let c = compose_params(&cfg, &p1, &p2).unwrap();
                for b in bx.basis() {
                    let x = Element::basis(&b);
                    let two = apply_automorphism(&cfg, &p1, &apply_automorphism(&cfg, &p2, &x).unwrap()).unwrap();
                    assert_eq!(two, apply_automorphism(&cfg, &c, &x).unwrap());
                }
                let q = invert_params(&cfg, &p1).unwrap();
                assert!(compose_params(&cfg, &p1, &q).unwrap().is_identity());
                assert!(compose_params(&cfg, &q, &p1).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn inverse_of_b_family() {
        let cfg = zcfg();
        let p = params(s(1), 0, 1, s(4));
        assert_eq!(invert_params(&cfg, &p).unwrap(), params(s(1), 0, 1, Scalar::from_ratio(1, 4)));
        let id = AutomorphismParams::identity(1);
        assert_eq!(invert_params(&cfg, &id).unwrap(), id);
    }

    #[test]
    fn check_and_extract() {
        let alg = Algebra::new(zcfg());
        let bx = bx1();
        let p = params(s(-1), 0, 1, s(1));
        let t = automorphism_table(alg.gamma(), &p, &bx).unwrap();
        assert!(check_automorphism(&alg, &t, &bx).unwrap().passed());
        assert_eq!(extract_params(&alg, &t).unwrap(), p);

        let id = BasisTable::from_fn(bx.clone(), Element::basis);
        assert!(check_automorphism(&alg, &id, &bx).unwrap().passed());
        assert!(extract_params(&alg, &id).unwrap().is_identity());

        let mut bad = id.clone();
        bad.insert(Basis::l(&[1], 0), Element::basis(&Basis::l(&[1], 0)).scale(&s(2))).unwrap();
        let r = check_automorphism(&alg, &bad, &bx).unwrap();
        assert!(r.first_failure.is_some());
    }

    #[test]
    fn extract_random_over_quadratic_lattice() {
        let cfg = q2();
        let alg = Algebra::new(cfg.clone());
        let bx = TruncationBox::new(vec![(-1, 1), (-1, 1)], (-1, 1), 1).unwrap();
        let mut rng = random::rng(11);
        for _ in 0..5 {
            let p = random::aut_params(&mut rng, &cfg);
            let t = automorphism_table(&cfg, &p, &bx).unwrap();
            assert_eq!(extract_params(&alg, &t).unwrap(), p);
        }
        let _ = Field::Rationals;
    }

    #[test]
    fn non_monomial_table() {
        let alg = Algebra::new(zcfg());
        let mut t = BasisTable::from_fn(bx1(), Element::basis);
        t.insert(
            Basis::l(&[1], 0),
            &Element::basis(&Basis::l(&[1], 0)) + &Element::basis(&Basis::h(&[1], 0)),
        )
        .unwrap();
        assert_eq!(extract_params(&alg, &t), Err(AutError::NotMonomialShape(Basis::l(&[1], 0))));
    }

    #[test]
    fn scaling_isomorphism_needs_the_factor() {
        let two = GammaConfig::new(Field::Rationals, vec![s(2)]).unwrap();
        let three = GammaConfig::new(Field::Rationals, vec![s(3)]).unwrap();
        let bx = bx1();
        let iso = isomorphism_by_scaling(&two, &three, &bx).unwrap();
        assert_eq!(iso.map.a, Scalar::from_ratio(2, 3));
        assert!(iso.first_failure.is_none());
        let bare = ScalingMap::new(&two, &three, Scalar::from_ratio(2, 3), false).unwrap();
        let (_, fail) = bare.check(&Algebra::new(two.clone()), &Algebra::new(three.clone()), &bx);
        assert!(fail.is_some());
        let same = isomorphism_by_scaling(&zcfg(), &zcfg(), &bx).unwrap();
        assert!(same.map.a.is_one());
        assert!(isomorphism_by_scaling(&zcfg(), &q2(), &bx).is_none());
    }
}
