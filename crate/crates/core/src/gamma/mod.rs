//! The grading group: a finitely generated free abelian group embedded in
//! the ground field, together with its homomorphism spaces and the group of
//! scalings that preserve it.

mod gspace;
mod homs;

pub use gspace::{check_g_table, solve_g_space, GSpace, GTable};
pub use homs::{Character, GSymbol, IntHom, PolyHom};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{rational_to_i64, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("at least one generator is required")]
    EmptyGenerators,
    #[error("{field} supports at most {max} independent generators, got {rank}")]
    TooManyGenerators { field: Field, max: usize, rank: usize },
    #[error("generators are linearly dependent over Q")]
    DependentGenerators,
    #[error("generator {0} does not lie in the configured field")]
    GeneratorNotInField(String),
    #[error("{0} is not an integer combination of the generators")]
    NotInGamma(String),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("{0} does not preserve the lattice")]
    NotInScalingGroup(String),
    #[error("expected {expected} coordinates, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("box too small: {0}")]
    BoxTooSmall(String),
}

/// Coordinates of a lattice element with respect to the configured generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaElement(Vec<i64>);

impl GammaElement {
    pub fn new(coords: Vec<i64>) -> GammaElement {
        GammaElement(coords)
    }

    pub fn zero(rank: usize) -> GammaElement {
        GammaElement(vec![0; rank])
    }

    pub fn unit(rank: usize, k: usize) -> GammaElement {
        let mut v = vec![0; rank];
        v[k] = 1;
        GammaElement(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> GammaElement {
        GammaElement(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Add for &GammaElement {
    type Output = GammaElement;
    fn add(self, rhs: &GammaElement) -> GammaElement {
        debug_assert_eq!(self.rank(), rhs.rank());
        GammaElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &GammaElement {
    type Output = GammaElement;
    fn sub(self, rhs: &GammaElement) -> GammaElement {
        debug_assert_eq!(self.rank(), rhs.rank());
        GammaElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &GammaElement {
    type Output = GammaElement;
    fn neg(self) -> GammaElement {
        GammaElement(self.0.iter().map(|a| -a).collect())
    }
}

/// Integer matrix acting on coordinate vectors; column `k` is the image of
/// the `k`-th generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    columns: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn identity(rank: usize) -> LatticeMap {
        LatticeMap {
            columns: (0..rank).map(|k| GammaElement::unit(rank, k).0).collect(),
        }
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn apply(&self, x: &GammaElement) -> GammaElement {
        let rows = self.columns.first().map_or(0, Vec::len);
        let mut out = vec![0i64; rows];
        for (n, col) in x.0.iter().zip(&self.columns) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += n * c;
            }
        }
        GammaElement(out)
    }
}

/// Search radius, in generator coordinates, used by [`GammaConfig::find_scaling`]
/// for rank-two lattices.
pub const SCALING_SEARCH_BOUND: i64 = 40;

/// `Gamma = Z g_1 + ... + Z g_k` inside the ground field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaConfig {
    field: Field,
    generators: Vec<Scalar>,
    // inverse of the generator matrix in the basis (1, sqrt d), rank 2 only
    inverse: Option<[[BigRational; 2]; 2]>,
}

impl GammaConfig {
    pub fn new(field: Field, generators: Vec<Scalar>) -> Result<GammaConfig, GammaError> {
        if generators.is_empty() {
            return Err(GammaError::EmptyGenerators);
        }
        for g in &generators {
            if !field.contains(g) {
                return Err(GammaError::GeneratorNotInField(g.to_string()));
            }
        }
        if generators.len() > field.degree() {
            return Err(GammaError::TooManyGenerators {
                field,
                max: field.degree(),
                rank: generators.len(),
            });
        }
        let inverse = match generators.len() {
            1 => {
                if generators[0].is_zero() {
                    return Err(GammaError::DependentGenerators);
                }
                None
            }
            _ => {
                let (x1, y1) = generators[0].parts();
                let (x2, y2) = generators[1].parts();
                let det = &x1 * &y2 - &x2 * &y1;
                if det.is_zero() {
                    return Err(GammaError::DependentGenerators);
                }
                Some([[&y2 / &det, -(&x2 / &det)], [-(&y1 / &det), &x1 / &det]])
            }
        };
        Ok(GammaConfig {
            field,
            generators,
            inverse,
        })
    }

    /// `Gamma = Z` inside the rationals.
    pub fn integers() -> GammaConfig {
        GammaConfig::new(Field::Rationals, vec![Scalar::one()]).expect("valid")
    }

    /// `Gamma = Z + Z sqrt(d)` inside `Q(sqrt(d))`.
    pub fn quadratic_integers(d: i64) -> Result<GammaConfig, GammaError> {
        let field = Field::quadratic(d).map_err(|_| GammaError::DependentGenerators)?;
        GammaConfig::new(field, vec![Scalar::one(), Scalar::sqrt(d)])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[Scalar] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn zero(&self) -> GammaElement {
        GammaElement::zero(self.rank())
    }

    pub fn check_rank(&self, x: &GammaElement) -> Result<(), GammaError> {
        if x.rank() == self.rank() {
            Ok(())
        } else {
            Err(GammaError::RankMismatch {
                expected: self.rank(),
                found: x.rank(),
            })
        }
    }

    /// `n -> sum n_k g_k`.
    pub fn embed(&self, x: &GammaElement) -> Scalar {
        match (x.0.as_slice(), self.generators.as_slice()) {
            ([n], [g]) => g * Scalar::from_int(*n),
            _ => x
                .0
                .iter()
                .zip(&self.generators)
                .filter(|(n, _)| **n != 0)
                .map(|(n, g)| g * Scalar::from_int(*n))
                .sum(),
        }
    }

    /// Inverts the embedding.
    pub fn coords_of(&self, x: &Scalar) -> Result<GammaElement, GammaError> {
        let not_in = || GammaError::NotInGamma(x.to_string());
        if !self.field.contains(x) {
            return Err(not_in());
        }
        match &self.inverse {
            None => {
                let q = x.checked_div(&self.generators[0]).map_err(|_| not_in())?;
                let n = q.as_rational().and_then(rational_to_i64).ok_or_else(not_in)?;
                Ok(GammaElement(vec![n]))
            }
            Some(inv) => {
                let (u, v) = x.parts();
                let n1 = &inv[0][0] * &u + &inv[0][1] * &v;
                let n2 = &inv[1][0] * &u + &inv[1][1] * &v;
                let n1 = rational_to_i64(&n1).ok_or_else(not_in)?;
                let n2 = rational_to_i64(&n2).ok_or_else(not_in)?;
                Ok(GammaElement(vec![n1, n2]))
            }
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.coords_of(x).is_ok()
    }

    /// Matrix of `x -> a x` from `self` into `target`, if `a * self` lies in
    /// `target`.
    pub fn scaled_into(&self, a: &Scalar, target: &GammaConfig) -> Result<LatticeMap, GammaError> {
        let columns = self
            .generators
            .iter()
            .map(|g| target.coords_of(&(a * g)).map(|c| c.0))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LatticeMap { columns })
    }

    /// `true` iff `a * self == target` as subsets of the field.
    pub fn scales_onto(&self, a: &Scalar, target: &GammaConfig) -> bool {
        if a.is_zero() || self.field != target.field || self.rank() != target.rank() {
            return false;
        }
        let Ok(inv) = a.inv() else { return false };
        self.scaled_into(a, target).is_ok() && target.scaled_into(&inv, self).is_ok()
    }

    /// Membership in `A = {a : a Gamma = Gamma}`.
    pub fn scaling_group_contains(&self, a: &Scalar) -> Result<bool, GammaError> {
        if a.is_zero() {
            return Err(GammaError::ZeroScalar);
        }
        Ok(self.scales_onto(a, self))
    }

    /// The lattice automorphism `alpha -> a alpha` for `a` in the scaling group.
    pub fn iota(&self, a: &Scalar) -> Result<LatticeMap, GammaError> {
        if !self.scaling_group_contains(a)? {
            return Err(GammaError::NotInScalingGroup(a.to_string()));
        }
        self.scaled_into(a, self)
    }

    pub fn iota_apply(&self, a: &Scalar, x: &GammaElement) -> Result<GammaElement, GammaError> {
        self.check_rank(x)?;
        if !self.scaling_group_contains(a)? {
            return Err(GammaError::NotInScalingGroup(a.to_string()));
        }
        self.coords_of(&(a * self.embed(x)))
    }

    /// Some `a` with `a * other == self`, normalized so that its first nonzero
    /// rational component is positive.
    ///
    /// Rank one is decided exactly. For rank two the candidates
    /// `a = delta / other.g_1` are enumerated over lattice points `delta` of
    /// `self` with coordinates bounded by [`SCALING_SEARCH_BOUND`], in order of
    /// increasing max-norm, and the first hit is returned.
    pub fn find_scaling(&self, other: &GammaConfig) -> Option<Scalar> {
        if self.field != other.field || self.rank() != other.rank() {
            return None;
        }
        let normalize = |a: Scalar| if a.leading_sign() < 0 { -a } else { a };
        let g1 = &other.generators[0];
        if self.rank() == 1 {
            let a = &self.generators[0] / g1;
            return other.scales_onto(&a, self).then(|| normalize(a));
        }
        for radius in 1..=SCALING_SEARCH_BOUND {
            for m1 in -radius..=radius {
                for m2 in -radius..=radius {
                    if m1.abs().max(m2.abs()) != radius {
                        continue;
                    }
                    let delta = self.embed(&GammaElement(vec![m1, m2]));
                    let a = &delta / g1;
                    if other.scales_onto(&a, self) {
                        return Some(normalize(a));
                    }
                }
            }
        }
        None
    }

    /// Elements of the scaling group of the form `delta / g_1` found within
    /// the given coordinate radius, sign-normalized and deduplicated.
    pub fn scaling_group_sample(&self, radius: i64) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::new();
        let g1 = &self.generators[0];
        let points = crate::algebra::lattice_points(&vec![(-radius, radius); self.rank()]);
        for p in points {
            if p.is_zero() {
                continue;
            }
            let a = self.embed(&p) / g1;
            if a.leading_sign() > 0 && self.scales_onto(&a, self) && !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }
}
