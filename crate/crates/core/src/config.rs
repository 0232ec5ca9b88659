//! The algebra config file (`"schema": 1`).
//!
//! ```json
//! {
//!   "schema": 1,
//!   "field": "rationals",
//!   "gamma": {"generators": ["1"]},
//!   "box": {"gamma": [[-3, 3]], "t": [-3, 3], "pad": 3},
//!   "anchors": [0, 0],
//!   "reference_pair": [{"kind": "L", "gamma": [0], "t": 0}, {"kind": "L", "gamma": [1], "t": 0}]
//! }
//! ```
//! `field` is `"rationals"` or `{"quadratic": d}`; `anchors` and
//! `reference_pair` are optional.

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{Basis, TruncationBox};
use crate::gamma::GammaConfig;
use crate::io::{BasisRef, BoxJson};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config error at line {line}, column {column}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraConfig {
    pub gamma: GammaConfig,
    pub bx: TruncationBox,
    pub anchors: (i64, i64),
    pub reference_pair: Option<(Basis, Basis)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    schema: u32,
    field: Value,
    gamma: RawGamma,
    #[serde(rename = "box")]
    bx: BoxJson,
    anchors: Option<(i64, i64)>,
    reference_pair: Option<(BasisRef, BasisRef)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGamma {
    generators: Vec<String>,
}

/// Position of the first occurrence of `"key"` in `src`, for diagnostics on
/// values that parse as JSON but are rejected afterwards.
fn locate(src: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    for (n, line) in src.lines().enumerate() {
        if let Some(c) = line.find(&needle) {
            return (n + 1, line[..c].chars().count() + 1);
        }
    }
    (1, 1)
}

impl AlgebraConfig {
    pub fn parse(src: &str) -> Result<AlgebraConfig, ConfigError> {
        let raw: Raw = serde_json::from_str(src).map_err(|e| ConfigError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let fail = |key: &str, message: String| {
            let (line, column) = locate(src, key);
            ConfigError { line, column, message }
        };
        if raw.schema != 1 {
            return Err(fail("schema", format!("unsupported schema {}", raw.schema)));
        }
        let field = match &raw.field {
            Value::String(s) if s == "rationals" => Field::Rationals,
            Value::Object(o) if o.len() == 1 && o.contains_key("quadratic") => {
                let d = o["quadratic"]
                    .as_i64()
                    .ok_or_else(|| fail("quadratic", "radicand must be an integer".into()))?;
                Field::quadratic(d).map_err(|e| fail("quadratic", e.to_string()))?
            }
            _ => return Err(fail("field", "expected \"rationals\" or {\"quadratic\": d}".into())),
        };
        let generators = raw
            .gamma
            .generators
            .iter()
            .map(|g| g.parse::<Scalar>().map_err(|e| fail("generators", format!("{g:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let gamma = GammaConfig::new(field, generators).map_err(|e| fail("generators", e.to_string()))?;
        let bx = raw.bx.to_box().map_err(|e| fail("box", e.to_string()))?;
        if bx.rank() != gamma.rank() {
            return Err(fail(
                "box",
                format!("box has {} lattice coordinates, lattice rank is {}", bx.rank(), gamma.rank()),
            ));
        }
        let reference_pair = match raw.reference_pair {
            None => None,
            Some((x, y)) => {
                let x = x.to_basis().map_err(|e| fail("reference_pair", e.to_string()))?;
                let y = y.to_basis().map_err(|e| fail("reference_pair", e.to_string()))?;
                for b in [&x, &y] {
                    if !bx.contains(b) {
                        return Err(fail("reference_pair", format!("{b} is not in the box")));
                    }
                }
                Some((x, y))
            }
        };
        Ok(AlgebraConfig {
            gamma,
            bx,
            anchors: raw.anchors.unwrap_or((0, 0)),
            reference_pair,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<AlgebraConfig, ConfigError> {
        let src = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: 0,
            column: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        AlgebraConfig::parse(&src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: &str = r#"{
  "schema": 1,
  "field": "rationals",
  "gamma": {"generators": ["1"]},
  "box": {"gamma": [[-3, 3]], "t": [-3, 3], "pad": 3}
}"#;

    #[test]
    fn parses_the_integer_config() {
        let c = AlgebraConfig::parse(Z).unwrap();
        assert_eq!(c.gamma, GammaConfig::integers());
        assert_eq!(c.bx.basis().len(), 98);
        assert_eq!(c.anchors, (0, 0));
    }

    #[test]
    fn quadratic_config() {
        let src = Z
            .replace("\"rationals\"", "{\"quadratic\": 2}")
            .replace("[\"1\"]", "[\"1\", \"sqrt(2)\"]")
            .replace("[[-3, 3]]", "[[-1, 1], [-1, 1]]");
        let c = AlgebraConfig::parse(&src).unwrap();
        assert_eq!(c.gamma, GammaConfig::quadratic_integers(2).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = AlgebraConfig::parse(&Z.replace("\"pad\": 3}", "\"pad\": 3,}")).unwrap_err();
        assert_eq!(e.line, 5);
        let e = AlgebraConfig::parse(&Z.replace("[\"1\"]", "[\"1\", \"2\"]")).unwrap_err();
        assert_eq!((e.line, e.column), (4, 13));
        let e = AlgebraConfig::parse(&Z.replace("\"schema\": 1", "\"schema\": 2")).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = AlgebraConfig::parse(&Z.replace("[[-3, 3]]", "[[-3, 3], [0, 0]]")).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(AlgebraConfig::parse(&Z.replace("\"schema\"", "\"schemaa\"")).is_err());
    }
}
