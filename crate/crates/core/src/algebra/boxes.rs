use crate::gamma::GammaElement;

use super::{AlgebraError, Basis, Element, Kind};

/// All integer points of a product of closed intervals, lexicographic.
pub fn lattice_points(bounds: &[(i64, i64)]) -> Vec<GammaElement> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &(lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(GammaElement::new).collect()
}

/// A finite window of basis indices together with the closure box obtained by
/// widening every interval by `pad`.
///
/// Construction checks that the bracket of two box basis vectors lands in the
/// closure box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationBox {
    gamma_bounds: Vec<(i64, i64)>,
    t_bounds: (i64, i64),
    pad: i64,
}

impl TruncationBox {
    pub fn new(
        gamma_bounds: Vec<(i64, i64)>,
        t_bounds: (i64, i64),
        pad: i64,
    ) -> Result<TruncationBox, AlgebraError> {
        if gamma_bounds.is_empty() {
            return Err(AlgebraError::InvalidBox("no lattice coordinates".into()));
        }
        if pad < 0 {
            return Err(AlgebraError::InvalidBox(format!("negative pad {pad}")));
        }
        for &(lo, hi) in gamma_bounds.iter().chain(std::iter::once(&t_bounds)) {
            if lo > hi {
                return Err(AlgebraError::InvalidBox(format!("empty interval [{lo},{hi}]")));
            }
            // [lo, hi] + [lo, hi] must sit inside [lo - pad, hi + pad]
            if 2 * lo < lo - pad || 2 * hi > hi + pad {
                return Err(AlgebraError::InvalidBox(format!(
                    "pad {pad} does not absorb sums of [{lo},{hi}]"
                )));
            }
        }
        Ok(TruncationBox {
            gamma_bounds,
            t_bounds,
            pad,
        })
    }

    pub fn rank(&self) -> usize {
        self.gamma_bounds.len()
    }

    pub fn gamma_bounds(&self) -> &[(i64, i64)] {
        &self.gamma_bounds
    }

    pub fn t_bounds(&self) -> (i64, i64) {
        self.t_bounds
    }

    pub fn pad(&self) -> i64 {
        self.pad
    }

    /// The closure box as a box in its own right, with the same pad.
    pub fn padded(&self) -> TruncationBox {
        let widen = |(lo, hi): (i64, i64)| (lo - self.pad, hi + self.pad);
        TruncationBox {
            gamma_bounds: self.gamma_bounds.iter().copied().map(widen).collect(),
            t_bounds: widen(self.t_bounds),
            pad: self.pad,
        }
    }

    /// Intersection with another box of the same rank; `None` if empty.
    pub fn intersect(&self, other: &TruncationBox) -> Option<TruncationBox> {
        let meet = |a: (i64, i64), b: (i64, i64)| {
            let r = (a.0.max(b.0), a.1.min(b.1));
            (r.0 <= r.1).then_some(r)
        };
        let gamma_bounds = self
            .gamma_bounds
            .iter()
            .zip(&other.gamma_bounds)
            .map(|(a, b)| meet(*a, *b))
            .collect::<Option<Vec<_>>>()?;
        let t_bounds = meet(self.t_bounds, other.t_bounds)?;
        TruncationBox::new(gamma_bounds, t_bounds, self.pad).ok()
    }

    pub fn gamma_points(&self) -> Vec<GammaElement> {
        lattice_points(&self.gamma_bounds)
    }

    pub fn t_values(&self) -> std::ops::RangeInclusive<i64> {
        self.t_bounds.0..=self.t_bounds.1
    }

    /// Box basis: all `L` vectors then all `H` vectors, each ordered by
    /// lattice index and then Laurent degree.
    pub fn basis(&self) -> Vec<Basis> {
        let points = self.gamma_points();
        let mut out = Vec::with_capacity(2 * points.len() * self.t_values().count());
        for kind in [Kind::L, Kind::H] {
            for g in &points {
                for t in self.t_values() {
                    out.push(Basis::new(kind, g.clone(), t));
                }
            }
        }
        out
    }

    pub fn contains_gamma(&self, g: &GammaElement) -> bool {
        g.rank() == self.rank()
            && g
                .coords()
                .iter()
                .zip(&self.gamma_bounds)
                .all(|(c, (lo, hi))| lo <= c && c <= hi)
    }

    pub fn contains(&self, b: &Basis) -> bool {
        self.contains_gamma(&b.gamma) && self.t_bounds.0 <= b.t && b.t <= self.t_bounds.1
    }

    pub fn padded_contains(&self, b: &Basis) -> bool {
        let p = self.pad;
        b.gamma.rank() == self.rank()
            && b
                .gamma
                .coords()
                .iter()
                .zip(&self.gamma_bounds)
                .all(|(c, (lo, hi))| lo - p <= *c && *c <= hi + p)
            && self.t_bounds.0 - p <= b.t
            && b.t <= self.t_bounds.1 + p
    }

    pub fn supports(&self, x: &Element) -> bool {
        x.monomials().all(|(b, _)| self.contains(&b))
    }

    pub fn padded_supports(&self, x: &Element) -> bool {
        x.monomials().all(|(b, _)| self.padded_contains(&b))
    }

    pub fn require_support(&self, x: &Element) -> Result<(), AlgebraError> {
        match x.monomials().find(|(b, _)| !self.contains(b)) {
            Some((b, _)) => Err(AlgebraError::SupportOutsideBox(b.to_string())),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_points_are_lexicographic() {
        let pts = lattice_points(&[(0, 1), (-1, 0)]);
        let coords: Vec<_> = pts.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(coords, vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]);
    }

    #[test]
    fn pad_must_absorb_one_bracket() {
        assert!(TruncationBox::new(vec![(-3, 3)], (-3, 3), 3).is_ok());
        assert!(TruncationBox::new(vec![(-3, 3)], (-3, 3), 2).is_err());
        assert!(TruncationBox::new(vec![(0, 2)], (0, 0), 2).is_ok());
        assert!(TruncationBox::new(vec![(2, 1)], (0, 0), 5).is_err());
    }

    #[test]
    fn basis_counts_and_order() {
        let bx = TruncationBox::new(vec![(-3, 3)], (-3, 3), 3).unwrap();
        let b = bx.basis();
        assert_eq!(b.len(), 98);
        let mut sorted = b.clone();
        sorted.sort();
        assert_eq!(b, sorted);
        assert!(bx.padded_contains(&Basis::l(&[-6], 6)));
        assert!(!bx.contains(&Basis::l(&[-6], 6)));
    }

    #[test]
    fn intersection() {
        let a = TruncationBox::new(vec![(-3, 3)], (-3, 3), 3).unwrap();
        let b = TruncationBox::new(vec![(-2, 2)], (-1, 1), 2).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.gamma_bounds(), &[(-2, 2)]);
        assert_eq!(c.t_bounds(), (-1, 1));
    }
}
