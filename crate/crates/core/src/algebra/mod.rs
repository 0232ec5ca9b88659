//! Elements of the loop Heisenberg-Virasoro algebra and its bracket.
//!
//! The algebra has basis `L(a;i)`, `H(a;i)` for `a` in the lattice and `i` an
//! integer, with
//!
//! ```text
//! [L(a;i), L(b;j)] = (a - b) L(a+b; i+j)
//! [L(a;i), H(b;j)] = -b H(a+b; i+j)
//! [H(a;i), H(b;j)] = 0
//! ```
//!
//! An element stores, for each kind and lattice index, the Laurent polynomial
//! `f` such that the component is `X_a f = sum_i f_i X(a;i)`.

mod boxes;
mod checks;
mod element;
mod table;

pub use boxes::{lattice_points, TruncationBox};
pub use checks::{
    central_subspace, check_h_ideal, check_jacobi, check_perfect, is_central, JacobiReport,
    PerfectReport, PerfectWitness,
};
pub use element::{Basis, Element, Kind};
pub use table::BasisTable;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gamma::{GammaConfig, GammaElement, GammaError};
use crate::scalar::{LaurentPoly, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("element does not match the algebra configuration: {0}")]
    ConfigMismatch(String),
    #[error("support outside the truncation box: {0}")]
    SupportOutsideBox(String),
    #[error("box too small: {0}")]
    BoxTooSmall(String),
    #[error("invalid truncation box: {0}")]
    InvalidBox(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

/// The algebra attached to a lattice configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    gamma: GammaConfig,
}

impl Algebra {
    pub fn new(gamma: GammaConfig) -> Algebra {
        Algebra { gamma }
    }

    pub fn gamma(&self) -> &GammaConfig {
        &self.gamma
    }

    pub fn rank(&self) -> usize {
        self.gamma.rank()
    }

    pub fn embed(&self, x: &GammaElement) -> Scalar {
        self.gamma.embed(x)
    }

    /// Rejects elements whose lattice coordinates or coefficients do not fit
    /// this algebra.
    pub fn check_element(&self, x: &Element) -> Result<(), AlgebraError> {
        let field = self.gamma.field();
        for ((_, g), f) in x.terms() {
            if g.rank() != self.rank() {
                return Err(AlgebraError::ConfigMismatch(format!(
                    "lattice index ({g}) has rank {}, expected {}",
                    g.rank(),
                    self.rank()
                )));
            }
            for (_, c) in f.terms() {
                field.check(c)?;
            }
        }
        Ok(())
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        let ys: Vec<_> = y
            .terms()
            .map(|((k, g), f)| (k, g, self.embed(g), f))
            .collect();
        let mut out = Element::zero();
        for ((k1, a), f) in x.terms() {
            let ea = self.embed(a);
            for (k2, b, eb, g) in &ys {
                let (coef, kind) = match (k1, *k2) {
                    (Kind::L, Kind::L) => (&ea - eb, Kind::L),
                    (Kind::L, Kind::H) => (-eb, Kind::H),
                    (Kind::H, Kind::L) => (ea.clone(), Kind::H),
                    (Kind::H, Kind::H) => continue,
                };
                if coef.is_zero() {
                    continue;
                }
                out.add_poly(kind, &(a + b), &(f * g).scale(&coef));
            }
        }
        out
    }

    /// Bracket of two basis vectors as `coefficient * basis`, or `None` when
    /// it vanishes.
    pub fn bracket_basis(&self, x: &Basis, y: &Basis) -> Option<(Scalar, Basis)> {
        let (coef, kind) = match (x.kind, y.kind) {
            (Kind::L, Kind::L) => (self.embed(&(&x.gamma - &y.gamma)), Kind::L),
            (Kind::L, Kind::H) => (-self.embed(&y.gamma), Kind::H),
            (Kind::H, Kind::L) => (self.embed(&x.gamma), Kind::H),
            (Kind::H, Kind::H) => return None,
        };
        if coef.is_zero() {
            return None;
        }
        Some((
            coef,
            Basis {
                kind,
                gamma: &x.gamma + &y.gamma,
                t: x.t + y.t,
            },
        ))
    }

    /// Splits `x` into its homogeneous components for the lattice grading.
    pub fn graded_decompose(&self, x: &Element) -> BTreeMap<GammaElement, Element> {
        let mut out: BTreeMap<GammaElement, Element> = BTreeMap::new();
        for ((k, g), f) in x.terms() {
            out.entry(g.clone()).or_default().add_poly(k, g, f);
        }
        out
    }

    /// `L(0;0)`.
    pub fn l00(&self) -> Element {
        Element::basis(&Basis::new(Kind::L, self.gamma.zero(), 0))
    }
}

/// Image in the quotient by the ideal spanned by the `H` generators.
pub fn quotient_mod_h(x: &Element) -> Element {
    x.filter_kind(Kind::L)
}

/// `X_a f` as an element.
pub fn component(kind: Kind, gamma: GammaElement, f: LaurentPoly) -> Element {
    let mut e = Element::zero();
    e.add_poly(kind, &gamma, &f);
    e
}
