//! Exact Gaussian elimination over [`Scalar`] with sparse rows.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type SparseRow = BTreeMap<usize, Scalar>;

#[derive(Debug, Clone, Default)]
pub struct Matrix {
    ncols: usize,
    rows: Vec<SparseRow>,
}

/// Reduced row echelon form: `rows[k]` has leading one at `pivots[k]`.
#[derive(Debug, Clone)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<SparseRow>,
    pub pivots: Vec<usize>,
}

/// A particular solution together with a basis of the homogeneous solutions.
#[derive(Debug, Clone)]
pub struct Solution {
    pub particular: Vec<Scalar>,
    pub nullspace: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn new(ncols: usize) -> Matrix {
        Matrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Matrix {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::new(ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged matrix");
            m.push_dense(r);
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, mut row: SparseRow) {
        row.retain(|c, v| {
            assert!(*c < self.ncols, "column {c} out of range");
            !v.is_zero()
        });
        self.rows.push(row);
    }

    pub fn push_dense(&mut self, row: &[Scalar]) {
        self.push_row(
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect(),
        );
    }

    pub fn rref(&self) -> Rref {
        rref_rows(self.rows.clone(), self.ncols)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.rref().nullspace()
    }

    /// Solves `M v = rhs`; `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Solution> {
        assert_eq!(rhs.len(), self.rows.len(), "rhs length");
        let aug = self.ncols;
        let rows: Vec<SparseRow> = self
            .rows
            .iter()
            .zip(rhs)
            .map(|(r, b)| {
                let mut r = r.clone();
                if !b.is_zero() {
                    r.insert(aug, b.clone());
                }
                r
            })
            .collect();
        let red = rref_rows(rows, aug + 1);
        if red.pivots.last() == Some(&aug) {
            return None;
        }
        let mut particular = vec![Scalar::zero(); self.ncols];
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            if let Some(b) = row.get(&aug) {
                particular[p] = b.clone();
            }
        }
        let homogeneous = Rref {
            ncols: self.ncols,
            rows: red
                .rows
                .into_iter()
                .map(|mut r| {
                    r.remove(&aug);
                    r
                })
                .collect(),
            pivots: red.pivots,
        };
        Some(Solution {
            particular,
            nullspace: homogeneous.nullspace(),
        })
    }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|c| !is_pivot[*c]).collect()
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.free_columns()
            .into_iter()
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.ncols];
                v[free] = Scalar::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if let Some(c) = row.get(&free) {
                        v[p] = -c;
                    }
                }
                v
            })
            .collect()
    }
}

fn rref_rows(mut rows: Vec<SparseRow>, ncols: usize) -> Rref {
    rows.retain(|r| !r.is_empty());
    let mut pivot_rows: Vec<SparseRow> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        // sparsest candidate keeps fill-in down
        let pick = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.contains_key(&col))
            .min_by_key(|(_, r)| r.len())
            .map(|(i, _)| i);
        let Some(i) = pick else { continue };
        let mut prow = rows.swap_remove(i);
        let inv = prow[&col].inv().expect("nonzero pivot");
        for v in prow.values_mut() {
            *v = &*v * &inv;
        }
        for r in rows.iter_mut().chain(pivot_rows.iter_mut()) {
            if let Some(f) = r.get(&col).cloned() {
                eliminate(r, &prow, &f);
            }
        }
        rows.retain(|r| !r.is_empty());
        pivot_rows.push(prow);
        pivots.push(col);
    }
    Rref {
        ncols,
        rows: pivot_rows,
        pivots,
    }
}

/// `row -= factor * pivot`.
fn eliminate(row: &mut SparseRow, pivot: &SparseRow, factor: &Scalar) {
    for (c, v) in pivot {
        let delta = v * factor;
        match row.get_mut(c) {
            Some(x) => {
                *x = &*x - &delta;
                if x.is_zero() {
                    row.remove(c);
                }
            }
            None => {
                row.insert(*c, -delta);
            }
        }
    }
}

/// Dense dot product helper.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_nullspace() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for row in [[1, 2, 3], [2, 4, 6], [1, 0, 1]] {
            let r: Vec<Scalar> = row.iter().map(|&x| s(x)).collect();
            assert!(dot(&r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[1, 1], &[1, -1]]);
        let sol = m.solve(&[s(3), s(1)]).unwrap();
        assert_eq!(sol.particular, vec![s(2), s(1)]);
        assert!(sol.nullspace.is_empty());

        let m = mat(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[s(1), s(3)]).is_none());
        let sol = m.solve(&[s(1), s(2)]).unwrap();
        assert_eq!(sol.nullspace.len(), 1);
    }

    #[test]
    fn works_over_quadratic_field() {
        let r2 = Scalar::sqrt(2);
        let m = Matrix::from_dense(&[vec![r2.clone(), s(1)], vec![s(2), r2.clone()]]);
        // second row is sqrt2 times the first
        assert_eq!(m.rank(), 1);
    }
}
