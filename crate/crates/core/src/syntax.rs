//! Parser for the expression language; see `docs/grammar.md`.
//!
//! Columns in errors are 1-based character positions; a problem at the end
//! of the input is reported one past the last character.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{Algebra, Basis, Element, Kind};
use crate::gamma::{GammaConfig, GammaElement};
use crate::scalar::{Field, LaurentPoly, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("{value} at column {column} is not in the lattice")]
    NotInGamma { column: usize, value: String },
    #[error("at column {column}: {source}")]
    Scalar { column: usize, source: ScalarError },
}

impl ParseError {
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. }
            | ParseError::NotInGamma { column, .. }
            | ParseError::Scalar { column, .. } => *column,
        }
    }
}

fn syntax<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        column,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number {q}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let num: BigInt = digits(&mut i).parse().expect("digits");
            let mut den = BigInt::from(1);
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                den = digits(&mut i).parse().expect("digits");
                if den == BigInt::from(0) {
                    return Err(ParseError::Scalar {
                        column: col,
                        source: ScalarError::DivisionByZero,
                    });
                }
            }
            out.push((Tok::Num(BigRational::new(num, den)), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push((Tok::Ident(word), col));
        } else if "+-*^()[],;".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return syntax(col, format!("unexpected character '{c}'"));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

/// A parsed value: the parser keeps scalars and polynomials apart from
/// algebra elements so that `t^2*L(1;0)` and `2*3` both make sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(Scalar),
    Poly(LaurentPoly),
    Element(Element),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Poly(_) => "polynomial",
            Value::Element(_) => "element",
        }
    }

    fn into_poly(self) -> Option<LaurentPoly> {
        match self {
            Value::Scalar(s) => Some(LaurentPoly::constant(s)),
            Value::Poly(p) => Some(p),
            Value::Element(_) => None,
        }
    }

    /// Scalars and polynomials only convert when zero.
    pub fn into_element(self) -> Option<Element> {
        match self {
            Value::Element(e) => Some(e),
            Value::Scalar(s) if s.is_zero() => Some(Element::zero()),
            Value::Poly(p) if p.is_zero() => Some(Element::zero()),
            _ => None,
        }
    }

    /// Demotes constant polynomials to scalars.
    fn normalize(self) -> Value {
        match self {
            Value::Poly(p) => match p.as_monomial() {
                Some((c, 0)) => Value::Scalar(c.clone()),
                None if p.is_zero() => Value::Scalar(Scalar::zero()),
                _ => Value::Poly(p),
            },
            v => v,
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alg: Option<&'a Algebra>,
    field: Option<Field>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            syntax(self.col(), format!("expected '{c}', found {}", self.peek().describe()))
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Tok::Sym('+') => 1,
                Tok::Sym('-') => -1,
                _ => return Ok(acc),
            };
            let col = self.col();
            self.bump();
            let rhs = self.term()?;
            let rhs = if sign < 0 { negate(rhs) } else { rhs };
            acc = add(acc, rhs, col)?;
        }
    }

    /// Juxtaposition multiplies only in front of `t`, as in `2t^3`.
    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == "t")
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let col = self.col();
            if *self.peek() == Tok::Sym('*') {
                self.bump();
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let rhs = self.unary()?;
            acc = mul(acc, rhs, col)?;
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(negate(self.unary()?))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let e = self.int()?;
        let err = |source| ParseError::Scalar { column: col, source };
        match base {
            Value::Scalar(s) => Ok(Value::Scalar(s.pow(e).map_err(err)?)),
            Value::Poly(p) => Ok(Value::Poly(p.pow(e).map_err(err)?).normalize()),
            Value::Element(_) => syntax(col, "an element cannot be raised to a power"),
        }
    }

    /// Optionally signed integer literal.
    fn int(&mut self) -> Result<i64, ParseError> {
        let col = self.col();
        let neg = match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                true
            }
            Tok::Sym('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        match self.bump() {
            (Tok::Num(q), c) => {
                if !q.is_integer() {
                    return syntax(c, format!("expected an integer, found {q}"));
                }
                let n: i64 = q
                    .to_integer()
                    .try_into()
                    .map_err(|_| ParseError::Syntax {
                        column: c,
                        message: "integer out of range".into(),
                    })?;
                Ok(if neg { -n } else { n })
            }
            (t, c) => syntax(if neg { c } else { col }, format!("expected an integer, found {}", t.describe())),
        }
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num(q) => Ok(Value::Scalar(Scalar::from_rational(q))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Sym('[') => {
                let x = self.expr()?;
                let xcol = col + 1;
                self.expect(',')?;
                let ycol = self.col();
                let y = self.expr()?;
                self.expect(']')?;
                let alg = self.alg.expect("brackets only parse with an algebra");
                let x = element(x, xcol)?;
                let y = element(y, ycol)?;
                Ok(Value::Element(alg.bracket_unchecked(&x, &y)))
            }
            Tok::Ident(w) if w == "t" => Ok(Value::Poly(LaurentPoly::t_pow(1))),
            Tok::Ident(w) if w == "sqrt" => {
                self.expect('(')?;
                let dcol = self.col();
                let d = self.int()?;
                self.expect(')')?;
                let field = Field::quadratic(d).map_err(|source| ParseError::Scalar { column: dcol, source })?;
                match self.field {
                    Some(f) if f != field => Err(ParseError::Scalar {
                        column: col,
                        source: ScalarError::BackendMismatch {
                            left: f.radicand().unwrap_or(1),
                            right: d,
                        },
                    }),
                    _ => {
                        self.field = Some(field);
                        Ok(Value::Scalar(Scalar::sqrt(d)))
                    }
                }
            }
            Tok::Ident(w) if (w == "L" || w == "H") && self.alg.is_some() => {
                let kind = if w == "L" { Kind::L } else { Kind::H };
                self.generator(kind)
            }
            t => syntax(col, format!("unexpected {}", t.describe())),
        }
    }

    /// `(g1,...,gk; i)` after `L` or `H`.
    fn generator(&mut self, kind: Kind) -> Result<Value, ParseError> {
        let alg = self.alg.expect("checked by caller");
        let cfg = alg.gamma();
        self.expect('(')?;
        let start = self.col();
        let mut items = vec![];
        loop {
            let col = self.col();
            let v = self.expr()?;
            match v {
                Value::Scalar(s) => items.push((s, col)),
                other => return syntax(col, format!("lattice entry must be a scalar, found a {}", other.kind())),
            }
            match self.peek() {
                Tok::Sym(',') => {
                    self.bump();
                }
                Tok::Sym(';') => {
                    self.bump();
                    break;
                }
                t => return syntax(self.col(), format!("expected ',' or ';', found {}", t.describe())),
            }
        }
        let t = self.int()?;
        self.expect(')')?;
        let all_int = items.iter().all(|(s, _)| s.as_i64().is_some());
        let gamma = if items.len() == cfg.rank() && all_int {
            GammaElement::new(items.iter().map(|(s, _)| s.as_i64().unwrap()).collect())
        } else if items.len() == 1 {
            let (s, col) = &items[0];
            if !cfg.field().contains(s) {
                return Err(ParseError::Scalar {
                    column: *col,
                    source: ScalarError::NotInField(s.to_string()),
                });
            }
            cfg.coords_of(s).map_err(|_| ParseError::NotInGamma {
                column: *col,
                value: s.to_string(),
            })?
        } else {
            return syntax(start, format!("expected {} lattice coordinates or one lattice value", cfg.rank()));
        };
        Ok(Value::Element(Element::basis(&Basis::new(kind, gamma, t))))
    }
}

fn element(v: Value, col: usize) -> Result<Element, ParseError> {
    let kind = v.kind();
    v.into_element()
        .map_or_else(|| syntax(col, format!("expected an element, found a {kind}")), Ok)
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(-s),
        Value::Poly(p) => Value::Poly(-p),
        Value::Element(e) => Value::Element(-e),
    }
}

fn add(x: Value, y: Value, col: usize) -> Result<Value, ParseError> {
    Ok(match (x, y) {
        (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a + b),
        (Value::Element(a), Value::Element(b)) => Value::Element(a + b),
        (Value::Element(a), v) | (v, Value::Element(a)) => match v.into_element() {
            Some(b) => Value::Element(a + b),
            None => return syntax(col, "cannot add a nonzero scalar or polynomial to an element"),
        },
        (a, b) => Value::Poly(a.into_poly().unwrap() + b.into_poly().unwrap()).normalize(),
    })
}

fn mul(x: Value, y: Value, col: usize) -> Result<Value, ParseError> {
    Ok(match (x, y) {
        (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a * b),
        (Value::Element(_), Value::Element(_)) => {
            return syntax(col, "elements multiply only through the bracket [x, y]")
        }
        (Value::Element(e), v) | (v, Value::Element(e)) => {
            Value::Element(e.mul_poly(&v.into_poly().expect("not an element")))
        }
        (a, b) => Value::Poly(a.into_poly().unwrap() * b.into_poly().unwrap()).normalize(),
    })
}

fn run(src: &str, alg: Option<&Algebra>) -> Result<Value, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        alg,
        field: alg.map(|a| a.gamma().field()),
    };
    if *p.peek() == Tok::End {
        return syntax(p.col(), "empty expression");
    }
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return syntax(p.col(), format!("unexpected {}", p.peek().describe()));
    }
    Ok(v)
}

/// Parses a value in the algebra over `cfg`.
pub fn parse_value(cfg: &GammaConfig, src: &str) -> Result<Value, ParseError> {
    run(src, Some(&Algebra::new(cfg.clone())))
}

/// Parses an element of the algebra over `cfg`.
pub fn parse_expression(cfg: &GammaConfig, src: &str) -> Result<Element, ParseError> {
    let v = parse_value(cfg, src)?;
    let kind = v.kind();
    v.into_element()
        .map_or_else(|| syntax(1, format!("expected an element, found a {kind}")), Ok)
}

impl FromStr for Scalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Scalar, ParseError> {
        match run(s, None)? {
            Value::Scalar(x) => Ok(x),
            v => syntax(1, format!("expected a scalar, found a {}", v.kind())),
        }
    }
}

impl FromStr for LaurentPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<LaurentPoly, ParseError> {
        match run(s, None)? {
            Value::Scalar(x) => Ok(LaurentPoly::constant(x)),
            Value::Poly(p) => Ok(p),
            Value::Element(_) => unreachable!("no generators without an algebra"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GammaConfig {
        GammaConfig::integers()
    }

    fn q2() -> GammaConfig {
        GammaConfig::quadratic_integers(2).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            parse_expression(&z(), "[L(2;0), L(1;1)]").unwrap(),
            Element::basis(&Basis::l(&[3], 1))
        );
        assert_eq!(
            parse_expression(&z(), "H(0;3) + 1/2*H(0;3)").unwrap(),
            Element::basis(&Basis::h(&[0], 3)).scale(&Scalar::from_ratio(3, 2))
        );
        let e = parse_expression(&z(), "L(1;0").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { column: 6, .. }), "{e:?}");
    }

    #[test]
    fn polynomial_coefficients() {
        let e = parse_expression(&z(), "(t^2 - 3t^-1)*L(1;0) + t*H(-2;1)").unwrap();
        let mut want = Element::zero();
        want.add_monomial(&Basis::l(&[1], 2), &Scalar::one());
        want.add_monomial(&Basis::l(&[1], -1), &Scalar::from_int(-3));
        want.add_monomial(&Basis::h(&[-2], 2), &Scalar::one());
        assert_eq!(e, want);
    }

    #[test]
    fn lattice_values_and_errors() {
        let cfg = q2();
        let a = parse_expression(&cfg, "L(1+sqrt(2);0)").unwrap();
        assert_eq!(a, Element::basis(&Basis::l(&[1, 1], 0)));
        assert_eq!(parse_expression(&cfg, "L(1,1;0)").unwrap(), a);
        assert!(matches!(
            parse_expression(&cfg, "L(1/2;0)"),
            Err(ParseError::NotInGamma { column: 3, .. })
        ));
        assert!(matches!(
            parse_expression(&z(), "L(1/2;0)"),
            Err(ParseError::NotInGamma { .. })
        ));
        assert!(matches!(
            parse_expression(&cfg, "sqrt(3)*L(1;0)"),
            Err(ParseError::Scalar {
                column: 1,
                source: ScalarError::BackendMismatch { .. }
            })
        ));
        assert!(matches!(
            parse_expression(&z(), "sqrt(2)*L(1;0)"),
            Err(ParseError::Scalar { .. })
        ));
    }

    #[test]
    fn syntax_error_columns() {
        for (src, col) in [("L(1;0) +", 9), ("L(1;0) $", 8), ("[L(1;0) L(2;0)]", 9), ("", 1), ("L(1;x)", 5)] {
            let e = parse_expression(&z(), src).unwrap_err();
            assert_eq!(e.column(), col, "{src}: {e}");
        }
        assert!(parse_expression(&z(), "L(1;0)*L(2;0)").is_err());
        assert!(parse_expression(&z(), "2 + L(1;0)").is_err());
        assert!(parse_expression(&z(), "3").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let cfg = q2();
        let src = "-2*L(-1,0;2) + (1+sqrt(2))*L(0,1;0) + 3/2*sqrt(2)*H(0,0;3) - (1-sqrt(2))*H(1,1;-1)";
        let e = parse_expression(&cfg, src).unwrap();
        assert_eq!(parse_expression(&cfg, &e.to_string()).unwrap(), e);
        assert_eq!(parse_expression(&cfg, "0").unwrap(), Element::zero());
    }

    #[test]
    fn scalar_and_poly_from_str() {
        assert_eq!("3/4".parse::<Scalar>().unwrap(), Scalar::from_ratio(3, 4));
        assert_eq!(
            "1-2*sqrt(5)".parse::<Scalar>().unwrap(),
            Scalar::one() - Scalar::sqrt(5) * Scalar::from_int(2)
        );
        let p: LaurentPoly = "2t^3 - 1/2t^-1".parse().unwrap();
        assert_eq!(p.to_string(), "2t^3 - 1/2t^-1");
        assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
        assert!("t".parse::<Scalar>().is_err());
        assert!("sqrt(2)*sqrt(3)".parse::<Scalar>().is_err());
        assert!("sqrt(4)".parse::<Scalar>().is_err());
    }
}
