//! Seeded generators for random test inputs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Basis, Element, TruncationBox};
use crate::autos::AutomorphismParams;
use crate::gamma::{Character, GSymbol, GammaConfig, IntHom, PolyHom};
use crate::scalar::{Field, LaurentPoly, RhoOperator, Scalar};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= 5`, `1 <= q <= 4`.
pub fn rational<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let q = rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// A field element; over a quadratic field both components are drawn.
pub fn scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    match field.radicand() {
        None => rational(rng),
        Some(d) => {
            let x = rational(rng);
            let y = if rng.gen_bool(0.5) { rational(rng) } else { Scalar::zero() };
            &x + &(&y * &Scalar::sqrt(d))
        }
    }
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    loop {
        let s = scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Up to `max_terms` terms with degrees in `degrees`.
pub fn laurent<R: Rng>(rng: &mut R, field: Field, degrees: (i64, i64), max_terms: usize) -> LaurentPoly {
    let n = rng.gen_range(0..=max_terms);
    LaurentPoly::from_terms((0..n).map(|_| (rng.gen_range(degrees.0..=degrees.1), scalar(rng, field))))
}

pub fn nonzero_laurent<R: Rng>(rng: &mut R, field: Field, degrees: (i64, i64), max_terms: usize) -> LaurentPoly {
    loop {
        let p = laurent(rng, field, degrees, max_terms.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

/// Combination of `terms` distinct basis vectors of the box with nonzero
/// coefficients.
pub fn element<R: Rng>(rng: &mut R, field: Field, bx: &TruncationBox, terms: usize) -> Element {
    element_from(rng, field, &bx.basis(), terms)
}

/// Same as [`element`] with the basis vectors drawn from `pool`.
pub fn element_from<R: Rng>(rng: &mut R, field: Field, pool: &[Basis], terms: usize) -> Element {
    let picks: Vec<&Basis> = pool.choose_multiple(rng, terms.min(pool.len())).collect();
    let mut e = Element::zero();
    for b in picks {
        e.add_monomial(b, &nonzero_scalar(rng, field));
    }
    e
}

pub fn poly_hom<R: Rng>(rng: &mut R, field: Field, rank: usize, degrees: (i64, i64)) -> PolyHom {
    PolyHom::new((0..rank).map(|_| laurent(rng, field, degrees, 2)).collect())
}

pub fn gsymbol<R: Rng>(rng: &mut R, field: Field, degrees: (i64, i64)) -> GSymbol {
    GSymbol::new(laurent(rng, field, degrees, 2), laurent(rng, field, degrees, 2))
}

pub fn rho<R: Rng>(rng: &mut R, field: Field, degrees: (i64, i64)) -> RhoOperator {
    RhoOperator::new(laurent(rng, field, degrees, 2))
}

pub fn int_hom<R: Rng>(rng: &mut R, rank: usize, bound: i64) -> IntHom {
    IntHom::new((0..rank).map(|_| rng.gen_range(-bound..=bound)).collect())
}

pub fn character<R: Rng>(rng: &mut R, field: Field, rank: usize) -> Character {
    Character::new((0..rank).map(|_| nonzero_scalar(rng, field)).collect()).expect("nonzero values")
}

/// Random automorphism parameters; `a` is drawn from the scaling group
/// elements found within a small radius, with a random sign.
pub fn aut_params<R: Rng>(rng: &mut R, cfg: &GammaConfig) -> AutomorphismParams {
    let field = cfg.field();
    let sample = cfg.scaling_group_sample(2);
    let mut a = sample.choose(rng).cloned().unwrap_or_else(Scalar::one);
    if rng.gen_bool(0.5) {
        a = -a;
    }
    AutomorphismParams::new(
        cfg,
        a,
        int_hom(rng, cfg.rank(), 2),
        character(rng, field, cfg.rank()),
        if rng.gen_bool(0.5) { 1 } else { -1 },
        nonzero_scalar(rng, field),
    )
    .expect("valid by construction")
}
