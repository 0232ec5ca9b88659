use std::collections::BTreeMap;

use crate::algebra::TruncationBox;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::{GammaConfig, GammaElement, GammaError, GSymbol};

/// A scalar-valued function on the lattice points of a box.
pub type GTable = BTreeMap<GammaElement, Scalar>;

/// Solution space of `(a - b) g(a + b) = a g(a) - b g(b)` restricted to a box.
///
/// The relation preserves the Laurent degree, so each coefficient of a
/// Laurent-valued solution is an independent scalar solution; the scalar
/// solution space dimension is the rank of the module of solutions.
#[derive(Debug, Clone)]
pub struct GSpace {
    pub points: Vec<GammaElement>,
    pub basis: Vec<GTable>,
    pub equations: usize,
}

impl GSpace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn as_rows(&self, extra: &[GTable]) -> Matrix {
        let mut m = Matrix::new(self.points.len());
        for t in self.basis.iter().chain(extra) {
            let row: Vec<Scalar> = self
                .points
                .iter()
                .map(|p| t.get(p).cloned().unwrap_or_else(Scalar::zero))
                .collect();
            m.push_dense(&row);
        }
        m
    }

    /// Membership of an arbitrary table in the span of the basis.
    pub fn contains(&self, table: &GTable) -> bool {
        self.as_rows(&[]).rank() == self.as_rows(std::slice::from_ref(table)).rank()
    }

    /// Table of a parametric symbol with constant coefficients.
    pub fn tabulate(&self, cfg: &GammaConfig, sym: &GSymbol) -> GTable {
        self.points
            .iter()
            .map(|p| (p.clone(), sym.eval(cfg, p).coeff(0)))
            .collect()
    }

    /// `true` iff the solution space is exactly the span of `alpha -> 1` and
    /// `alpha -> alpha`.
    pub fn is_parametric(&self, cfg: &GammaConfig) -> bool {
        let one = self.tabulate(cfg, &GSymbol::new(Scalar::one().into(), Default::default()));
        let alpha = self.tabulate(cfg, &GSymbol::new(Default::default(), Scalar::one().into()));
        self.rank() == 2 && self.contains(&one) && self.contains(&alpha)
    }
}

/// Checks the relation for a candidate table on all pairs inside its domain;
/// returns the first violating pair.
pub fn check_g_table(cfg: &GammaConfig, table: &GTable) -> Result<(), (GammaElement, GammaElement)> {
    for (a, ga) in table {
        for (b, gb) in table {
            let s = a + b;
            let Some(gs) = table.get(&s) else { continue };
            let (ea, eb) = (cfg.embed(a), cfg.embed(b));
            if (&ea - &eb) * gs != &ea * ga - &eb * gb {
                return Err((a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

pub fn solve_g_space(cfg: &GammaConfig, bx: &TruncationBox) -> Result<GSpace, GammaError> {
    let points = bx.gamma_points();
    let zero = cfg.zero();
    if points.len() < 3 || !points.contains(&zero) {
        return Err(GammaError::BoxTooSmall(
            "need at least three lattice points including 0".into(),
        ));
    }
    let index: BTreeMap<&GammaElement, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut m = Matrix::new(points.len());
    let mut equations = 0;
    for a in &points {
        for b in &points {
            let s = a + b;
            let Some(&is) = index.get(&s) else { continue };
            let (ea, eb) = (cfg.embed(a), cfg.embed(b));
            // (ea - eb) g_s - ea g_a + eb g_b = 0
            let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (col, v) in [(is, &ea - &eb), (index[a], -&ea), (index[b], eb.clone())] {
                let slot = row.entry(col).or_insert_with(Scalar::zero);
                *slot = &*slot + &v;
            }
            m.push_row(row);
            equations += 1;
        }
    }
    let basis = m
        .nullspace()
        .into_iter()
        .map(|v| points.iter().cloned().zip(v).collect())
        .collect();
    Ok(GSpace {
        points,
        basis,
        equations,
    })
}
