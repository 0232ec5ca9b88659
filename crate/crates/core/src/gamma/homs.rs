use crate::scalar::{LaurentPoly, Scalar, ScalarError};

use super::{GammaConfig, GammaElement, LatticeMap};

/// `phi in Hom(Gamma, Z)`, stored by its values on the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntHom {
    pub values: Vec<i64>,
}

impl IntHom {
    pub fn new(values: Vec<i64>) -> IntHom {
        IntHom { values }
    }

    pub fn zero(rank: usize) -> IntHom {
        IntHom { values: vec![0; rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn eval(&self, x: &GammaElement) -> i64 {
        x.coords().iter().zip(&self.values).map(|(n, v)| n * v).sum()
    }

    /// `phi o m`.
    pub fn compose(&self, m: &LatticeMap) -> IntHom {
        IntHom {
            values: m.columns().iter().map(|c| self.eval(&GammaElement::new(c.clone()))).collect(),
        }
    }

    pub fn add(&self, other: &IntHom) -> IntHom {
        IntHom {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> IntHom {
        IntHom {
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }
}

/// `phi in Hom_Z(Gamma, F[t, t^-1])`, stored by its values on the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyHom {
    pub values: Vec<LaurentPoly>,
}

impl PolyHom {
    pub fn new(values: Vec<LaurentPoly>) -> PolyHom {
        PolyHom { values }
    }

    pub fn zero(rank: usize) -> PolyHom {
        PolyHom {
            values: vec![LaurentPoly::zero(); rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LaurentPoly::is_zero)
    }

    pub fn eval(&self, x: &GammaElement) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (n, v) in x.coords().iter().zip(&self.values) {
            if *n != 0 {
                out = &out + &v.scale(&Scalar::from_int(*n));
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> PolyHom {
        PolyHom {
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &PolyHom) -> PolyHom {
        PolyHom {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// `alpha -> embed(alpha) * p` on every generator, i.e. `alpha -> alpha p`.
    pub fn embedding_times(cfg: &GammaConfig, p: &LaurentPoly) -> PolyHom {
        PolyHom {
            values: cfg.generators().iter().map(|g| p.scale(g)).collect(),
        }
    }
}

/// A character `chi: Gamma -> F*`, stored by its values on the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    pub values: Vec<Scalar>,
}

impl Character {
    pub fn new(values: Vec<Scalar>) -> Result<Character, ScalarError> {
        if values.iter().any(Scalar::is_zero) {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Character { values })
    }

    pub fn trivial(rank: usize) -> Character {
        Character {
            values: vec![Scalar::one(); rank],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }

    pub fn eval(&self, x: &GammaElement) -> Scalar {
        x.coords()
            .iter()
            .zip(&self.values)
            .filter(|(n, _)| **n != 0)
            .map(|(n, v)| v.pow(*n).expect("character values are nonzero"))
            .product()
    }

    /// `chi o m`.
    pub fn compose(&self, m: &LatticeMap) -> Character {
        Character {
            values: m.columns().iter().map(|c| self.eval(&GammaElement::new(c.clone()))).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Character) -> Character {
        Character {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inv(&self) -> Character {
        Character {
            values: self.values.iter().map(|v| v.inv().expect("nonzero")).collect(),
        }
    }

    /// `alpha -> b^phi(alpha)`.
    pub fn power_of(b: &Scalar, phi: &IntHom) -> Result<Character, ScalarError> {
        let values = phi.values.iter().map(|&e| b.pow(e)).collect::<Result<Vec<_>, _>>()?;
        Character::new(values)
    }
}

/// `alpha -> c + d * embed(alpha)`, the parametric family solving
/// `(a - b) g(a + b) = a g(a) - b g(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GSymbol {
    pub c: LaurentPoly,
    pub d: LaurentPoly,
}

impl GSymbol {
    pub fn new(c: LaurentPoly, d: LaurentPoly) -> GSymbol {
        GSymbol { c, d }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }

    pub fn eval(&self, cfg: &GammaConfig, x: &GammaElement) -> LaurentPoly {
        if self.d.is_zero() {
            return self.c.clone();
        }
        &self.c + &self.d.scale(&cfg.embed(x))
    }

    pub fn scale(&self, s: &Scalar) -> GSymbol {
        GSymbol {
            c: self.c.scale(s),
            d: self.d.scale(s),
        }
    }

    pub fn add(&self, other: &GSymbol) -> GSymbol {
        GSymbol {
            c: &self.c + &other.c,
            d: &self.d + &other.d,
        }
    }

    /// Checks the defining relation on every pair drawn from `points` whose
    /// sum is again in `points`; returns the first failing pair.
    pub fn check_relation(
        &self,
        cfg: &GammaConfig,
        points: &[GammaElement],
    ) -> Result<(), (GammaElement, GammaElement)> {
        for a in points {
            for b in points {
                let s = a + b;
                if !points.contains(&s) {
                    continue;
                }
                let (ea, eb) = (cfg.embed(a), cfg.embed(b));
                let lhs = self.eval(cfg, &s).scale(&(&ea - &eb));
                let rhs = &self.eval(cfg, a).scale(&ea) - &self.eval(cfg, b).scale(&eb);
                if lhs != rhs {
                    return Err((a.clone(), b.clone()));
                }
            }
        }
        Ok(())
    }
}
