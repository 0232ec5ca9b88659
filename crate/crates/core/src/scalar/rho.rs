use std::fmt;

use super::{LaurentPoly, Scalar};

/// The derivation `p(t) d/dt` of the Laurent polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RhoOperator {
    pub p: LaurentPoly,
}

impl RhoOperator {
    pub fn new(p: LaurentPoly) -> RhoOperator {
        RhoOperator { p }
    }

    /// `t d/dt`.
    pub fn euler() -> RhoOperator {
        RhoOperator::new(LaurentPoly::t_pow(1))
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    /// Image of `t^i`, namely `i * p(t) * t^(i-1)`.
    pub fn apply_monomial(&self, i: i64) -> LaurentPoly {
        if i == 0 {
            return LaurentPoly::zero();
        }
        self.p.shift(i - 1).scale(&Scalar::from_int(i))
    }

    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        &self.p * &f.derivative()
    }

    pub fn scale(&self, s: &Scalar) -> RhoOperator {
        RhoOperator::new(self.p.scale(s))
    }
}

impl fmt::Display for RhoOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) d/dt", self.p)
    }
}
