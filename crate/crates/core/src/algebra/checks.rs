use std::cmp::Reverse;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::{Algebra, AlgebraError, Basis, Element, Kind, TruncationBox};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiReport {
    pub pairs: u64,
    pub triples: u64,
    pub antisymmetry_failures: u64,
    pub jacobi_failures: u64,
    pub first_antisymmetry_failure: Option<(Basis, Basis)>,
    pub first_jacobi_failure: Option<(Basis, Basis, Basis)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry_failures == 0 && self.jacobi_failures == 0
    }
}

fn as_element(v: Option<(Scalar, Basis)>) -> Element {
    match v {
        Some((c, b)) => Element::basis(&b).scale(&c),
        None => Element::zero(),
    }
}

/// `[[x,y],z]` as at most one monomial.
fn double_bracket(alg: &Algebra, x: &Basis, y: &Basis, z: &Basis) -> Option<(Scalar, Basis)> {
    let (c1, w) = alg.bracket_basis(x, y)?;
    let (c2, v) = alg.bracket_basis(&w, z)?;
    Some((c1 * c2, v))
}

fn jacobi_holds(alg: &Algebra, x: &Basis, y: &Basis, z: &Basis) -> bool {
    // all three terms live at the same lattice index and degree, so only the
    // kind distinguishes them
    let mut l = Scalar::zero();
    let mut h = Scalar::zero();
    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
        if let Some((s, v)) = double_bracket(alg, a, b, c) {
            match v.kind {
                Kind::L => l = &l + &s,
                Kind::H => h = &h + &s,
            }
        }
    }
    l.is_zero() && h.is_zero()
}

/// Antisymmetry on all basis pairs and the Jacobi identity on all basis
/// triples of the box.
pub fn check_jacobi(alg: &Algebra, bx: &TruncationBox) -> JacobiReport {
    let basis = bx.basis();
    let per_row: Vec<_> = basis
        .par_iter()
        .map(|x| {
            let mut anti = 0u64;
            let mut first_anti = None;
            for y in &basis {
                let lhs = as_element(alg.bracket_basis(x, y));
                let rhs = -as_element(alg.bracket_basis(y, x));
                if lhs != rhs {
                    anti += 1;
                    first_anti.get_or_insert((x.clone(), y.clone()));
                }
            }
            let mut fails = 0u64;
            let mut first = None;
            for y in &basis {
                for z in &basis {
                    if !jacobi_holds(alg, x, y, z) {
                        fails += 1;
                        first.get_or_insert((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
            (anti, first_anti, fails, first)
        })
        .collect();
    let n = basis.len() as u64;
    let mut report = JacobiReport {
        pairs: n * n,
        triples: n * n * n,
        antisymmetry_failures: 0,
        jacobi_failures: 0,
        first_antisymmetry_failure: None,
        first_jacobi_failure: None,
    };
    for (anti, first_anti, fails, first) in per_row {
        report.antisymmetry_failures += anti;
        report.jacobi_failures += fails;
        if report.first_antisymmetry_failure.is_none() {
            report.first_antisymmetry_failure = first_anti;
        }
        if report.first_jacobi_failure.is_none() {
            report.first_jacobi_failure = first;
        }
    }
    report
}

/// `true` iff `x` commutes with every basis vector of the box.
pub fn is_central(alg: &Algebra, x: &Element, bx: &TruncationBox) -> Result<bool, AlgebraError> {
    alg.check_element(x)?;
    bx.require_support(x)?;
    Ok(bx
        .basis()
        .iter()
        .all(|b| alg.bracket_unchecked(x, &Element::basis(b)).is_zero()))
}

/// Basis of the box-supported elements commuting with every box basis vector.
pub fn central_subspace(alg: &Algebra, bx: &TruncationBox) -> Vec<Element> {
    let basis = bx.basis();
    let mut rows: BTreeMap<(usize, Basis), BTreeMap<usize, Scalar>> = BTreeMap::new();
    for (j, x) in basis.iter().enumerate() {
        for (k, b) in basis.iter().enumerate() {
            if let Some((c, z)) = alg.bracket_basis(x, b) {
                rows.entry((k, z)).or_default().insert(j, c);
            }
        }
    }
    let mut m = Matrix::new(basis.len());
    for row in rows.into_values() {
        m.push_row(row);
    }
    m.nullspace()
        .into_iter()
        .map(|v| Element::from_monomials(basis.iter().zip(&v)))
        .collect()
}

/// `target = coeff * [left, right]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectWitness {
    pub target: Basis,
    pub coeff: Scalar,
    pub left: Basis,
    pub right: Basis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectReport {
    pub witnesses: Vec<PerfectWitness>,
}

fn verify_witness(alg: &Algebra, w: &PerfectWitness) -> bool {
    match alg.bracket_basis(&w.left, &w.right) {
        Some((c, z)) => z == w.target && &c * &w.coeff == Scalar::one(),
        None => false,
    }
}

/// Degrees to try for a split `t = j + (t - j)`, starting from 0.
fn split_degrees(bx: &TruncationBox) -> Vec<i64> {
    let (lo, hi) = bx.padded().t_bounds();
    let mut js: Vec<i64> = (lo..=hi).collect();
    js.sort_by_key(|j| (j.abs(), Reverse(*j)));
    js
}

fn witness_for(
    alg: &Algebra,
    bx: &TruncationBox,
    target: &Basis,
    betas: &[crate::gamma::GammaElement],
    js: &[i64],
) -> Option<PerfectWitness> {
    let zero = alg.gamma().zero();
    let mk = |coeff: Scalar, left: Basis, right: Basis| {
        let w = PerfectWitness {
            target: target.clone(),
            coeff,
            left,
            right,
        };
        (bx.padded_contains(&w.left) && bx.padded_contains(&w.right) && verify_witness(alg, &w))
            .then_some(w)
    };
    if !target.gamma.is_zero() {
        // [L(0;j), X(a;t-j)] = -a X(a;t)
        let inv = (-alg.embed(&target.gamma)).inv().ok()?;
        return js.iter().find_map(|&j| {
            mk(
                inv.clone(),
                Basis::new(Kind::L, zero.clone(), j),
                Basis::new(target.kind, target.gamma.clone(), target.t - j),
            )
        });
    }
    for beta in betas {
        let eb = alg.embed(beta);
        for &j in js {
            let found = match target.kind {
                // [L(b;j), L(-b;t-j)] = 2b L(0;t)
                Kind::L => mk(
                    (&eb + &eb).inv().ok()?,
                    Basis::new(Kind::L, beta.clone(), j),
                    Basis::new(Kind::L, -beta, target.t - j),
                ),
                // [L(-b;j), H(b;t-j)] = -b H(0;t)
                Kind::H => mk(
                    (-&eb).inv().ok()?,
                    Basis::new(Kind::L, -beta, j),
                    Basis::new(Kind::H, beta.clone(), target.t - j),
                ),
            };
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// Exhibits every box basis vector as a multiple of a bracket of two vectors
/// from the closure box.
pub fn check_perfect(alg: &Algebra, bx: &TruncationBox) -> Result<PerfectReport, AlgebraError> {
    let mut betas: Vec<_> = bx.gamma_points().into_iter().filter(|g| !g.is_zero()).collect();
    if betas.is_empty() {
        return Err(AlgebraError::BoxTooSmall("box has no nonzero lattice index".into()));
    }
    betas.sort_by_key(|b| {
        let l1: i64 = b.coords().iter().map(|c| c.abs()).sum();
        (l1, Reverse(b.clone()))
    });
    let js = split_degrees(bx);
    let mut witnesses = Vec::new();
    for target in bx.basis() {
        match witness_for(alg, bx, &target, &betas, &js) {
            Some(w) => witnesses.push(w),
            None => {
                return Err(AlgebraError::BoxTooSmall(format!(
                    "no bracket witness for {target} in the closure box"
                )))
            }
        }
    }
    Ok(PerfectReport { witnesses })
}

/// Checks that `[b, h]` has only `H` terms for box basis `b` and `H` basis
/// vectors `h`; returns the number of pairs or the first offending pair.
pub fn check_h_ideal(alg: &Algebra, bx: &TruncationBox) -> Result<u64, (Basis, Basis)> {
    let basis = bx.basis();
    let mut pairs = 0;
    for b in &basis {
        for h in basis.iter().filter(|h| h.kind == Kind::H) {
            pairs += 2;
            for (x, y) in [(b, h), (h, b)] {
                if let Some((_, z)) = alg.bracket_basis(x, y) {
                    if z.kind != Kind::H {
                        return Err((x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    Ok(pairs)
}
