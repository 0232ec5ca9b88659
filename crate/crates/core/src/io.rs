//! JSON forms of elements, tables, derivations and automorphism parameters.
//!
//! Scalars and Laurent polynomials travel as strings in the expression
//! syntax, so every value survives a round trip exactly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Basis, BasisTable, Element, Kind, TruncationBox};
use crate::autos::AutomorphismParams;
use crate::bider::BilinearTable;
use crate::derivations::{Decomposition, DerivationSpec};
use crate::gamma::{Character, GSymbol, GammaConfig, GammaElement, IntHom, PolyHom};
use crate::scalar::{LaurentPoly, RhoOperator, Scalar};
use crate::twolocal::{Certificate, TwoLocalTable, WitnessSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> IoError {
        IoError::Json(e.to_string())
    }
}

fn invalid<T>(m: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Invalid(m.into()))
}

pub fn scalar_from(s: &str) -> Result<Scalar, IoError> {
    s.parse().map_err(|e| IoError::Invalid(format!("scalar {s:?}: {e}")))
}

pub fn laurent_from(s: &str) -> Result<LaurentPoly, IoError> {
    s.parse().map_err(|e| IoError::Invalid(format!("polynomial {s:?}: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisRef {
    pub kind: String,
    pub gamma: Vec<i64>,
    pub t: i64,
}

impl From<&Basis> for BasisRef {
    fn from(b: &Basis) -> BasisRef {
        BasisRef {
            kind: b.kind.as_str().into(),
            gamma: b.gamma.coords().to_vec(),
            t: b.t,
        }
    }
}

fn kind_from(s: &str) -> Result<Kind, IoError> {
    match s {
        "L" => Ok(Kind::L),
        "H" => Ok(Kind::H),
        _ => invalid(format!("kind must be \"L\" or \"H\", got {s:?}")),
    }
}

impl BasisRef {
    pub fn to_basis(&self) -> Result<Basis, IoError> {
        Ok(Basis::new(kind_from(&self.kind)?, GammaElement::new(self.gamma.clone()), self.t))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermJson {
    kind: String,
    gamma: Vec<i64>,
    coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementJson {
    terms: Vec<TermJson>,
}

pub fn element_to_json(x: &Element) -> Value {
    let terms: Vec<TermJson> = x
        .terms()
        .map(|((kind, gamma), f)| TermJson {
            kind: kind.as_str().into(),
            gamma: gamma.coords().to_vec(),
            coeff: f.to_string(),
        })
        .collect();
    json!({ "terms": terms })
}

pub fn element_from_json(v: &Value) -> Result<Element, IoError> {
    let e: ElementJson = serde_json::from_value(v.clone())?;
    let mut out = Element::zero();
    for t in e.terms {
        let f = laurent_from(&t.coeff)?;
        out.add_poly(kind_from(&t.kind)?, &GammaElement::new(t.gamma), &f);
    }
    Ok(out)
}

pub fn box_to_json(bx: &TruncationBox) -> Value {
    json!({
        "gamma": bx.gamma_bounds().iter().map(|&(lo, hi)| [lo, hi]).collect::<Vec<_>>(),
        "t": [bx.t_bounds().0, bx.t_bounds().1],
        "pad": bx.pad(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxJson {
    pub gamma: Vec<[i64; 2]>,
    pub t: [i64; 2],
    pub pad: i64,
}

impl BoxJson {
    pub fn to_box(&self) -> Result<TruncationBox, IoError> {
        TruncationBox::new(self.gamma.iter().map(|g| (g[0], g[1])).collect(), (self.t[0], self.t[1]), self.pad)
            .map_err(|e| IoError::Invalid(e.to_string()))
    }
}

pub fn box_from_json(v: &Value) -> Result<TruncationBox, IoError> {
    serde_json::from_value::<BoxJson>(v.clone())?.to_box()
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value, IoError> {
    v.get(key).map_or_else(|| invalid(format!("missing field {key:?}")), Ok)
}

fn str_field<'v>(v: &'v Value, key: &str) -> Result<&'v str, IoError> {
    field(v, key)?
        .as_str()
        .map_or_else(|| invalid(format!("field {key:?} must be a string")), Ok)
}

fn array<'v>(v: &'v Value, key: &str) -> Result<&'v Vec<Value>, IoError> {
    field(v, key)?
        .as_array()
        .map_or_else(|| invalid(format!("field {key:?} must be an array")), Ok)
}

fn basis_from(v: &Value) -> Result<Basis, IoError> {
    serde_json::from_value::<BasisRef>(v.clone())?.to_basis()
}

/// `{"box": ..., "entries": [{"basis": <basis-ref>, "value": <element>}]}`
pub fn table_to_json(t: &BasisTable) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .map(|(b, v)| json!({ "basis": BasisRef::from(b), "value": element_to_json(v) }))
        .collect();
    json!({ "box": box_to_json(t.domain()), "entries": entries })
}

pub fn table_from_json(v: &Value) -> Result<BasisTable, IoError> {
    let mut t = BasisTable::new(box_from_json(field(v, "box")?)?);
    for e in array(v, "entries")? {
        let b = basis_from(field(e, "basis")?)?;
        let x = element_from_json(field(e, "value")?)?;
        let x = &t.get(&b).map_err(|e| IoError::Invalid(e.to_string()))? + &x;
        t.insert(b, x).map_err(|e| IoError::Invalid(e.to_string()))?;
    }
    Ok(t)
}

/// `{"box": ..., "entries": [{"i": <basis-ref>, "j": <basis-ref>, "value": <element>}]}`
pub fn bilinear_to_json(t: &BilinearTable) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .map(|((x, y), v)| json!({ "i": BasisRef::from(x), "j": BasisRef::from(y), "value": element_to_json(v) }))
        .collect();
    json!({ "box": box_to_json(t.domain()), "entries": entries })
}

pub fn bilinear_from_json(v: &Value) -> Result<BilinearTable, IoError> {
    let mut t = BilinearTable::new(box_from_json(field(v, "box")?)?);
    for e in array(v, "entries")? {
        let x = basis_from(field(e, "i")?)?;
        let y = basis_from(field(e, "j")?)?;
        let val = element_from_json(field(e, "value")?)?;
        let val = &t.get(&x, &y).map_err(|e| IoError::Invalid(e.to_string()))? + &val;
        t.insert(x, y, val).map_err(|e| IoError::Invalid(e.to_string()))?;
    }
    Ok(t)
}

fn poly_list(p: &PolyHom) -> Vec<String> {
    p.values.iter().map(|f| f.to_string()).collect()
}

fn gsymbol_json(g: &GSymbol) -> Value {
    json!({ "c": g.c.to_string(), "d": g.d.to_string() })
}

pub fn derivation_to_json(d: &DerivationSpec) -> Value {
    match d {
        DerivationSpec::Inner(x) => json!({ "inner": element_to_json(x) }),
        DerivationSpec::DPhi(p) => json!({ "dphi": poly_list(p) }),
        DerivationSpec::DG(g) => json!({ "dg": gsymbol_json(g) }),
        DerivationSpec::DB(b) => json!({ "db": b.to_string() }),
        DerivationSpec::DRho(r) => json!({ "drho": r.p.to_string() }),
        DerivationSpec::Sum(parts) => json!({ "sum": parts.iter().map(derivation_to_json).collect::<Vec<_>>() }),
        DerivationSpec::Table(t) => json!({ "table": table_to_json(t) }),
    }
}

fn gsymbol_from(v: &Value) -> Result<GSymbol, IoError> {
    Ok(GSymbol::new(laurent_from(str_field(v, "c")?)?, laurent_from(str_field(v, "d")?)?))
}

pub fn derivation_from_json(v: &Value) -> Result<DerivationSpec, IoError> {
    let Some(obj) = v.as_object().filter(|o| o.len() == 1) else {
        return invalid("a derivation is an object with exactly one key");
    };
    let (key, body) = obj.iter().next().expect("one key");
    fn as_str<'v>(key: &str, b: &'v Value) -> Result<&'v str, IoError> {
        b.as_str().map_or_else(|| invalid(format!("{key} takes a string")), Ok)
    }
    Ok(match key.as_str() {
        "inner" => DerivationSpec::Inner(element_from_json(body)?),
        "dphi" => {
            let items = body.as_array().map_or_else(|| invalid("dphi takes a list of polynomials"), Ok)?;
            let values = items
                .iter()
                .map(|p| laurent_from(as_str(key, p)?))
                .collect::<Result<Vec<_>, _>>()?;
            DerivationSpec::DPhi(PolyHom::new(values))
        }
        "dg" => DerivationSpec::DG(gsymbol_from(body)?),
        "db" => DerivationSpec::DB(laurent_from(as_str(key, body)?)?),
        "drho" => DerivationSpec::DRho(RhoOperator::new(laurent_from(as_str(key, body)?)?)),
        "sum" => {
            let items = body.as_array().map_or_else(|| invalid("sum takes a list"), Ok)?;
            DerivationSpec::Sum(items.iter().map(derivation_from_json).collect::<Result<_, _>>()?)
        }
        "table" => DerivationSpec::Table(table_from_json(body)?),
        other => return invalid(format!("unknown derivation kind {other:?}")),
    })
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    json!({
        "phi": poly_list(&d.phi),
        "g": gsymbol_json(&d.g),
        "b": d.b.to_string(),
        "rho": d.rho.p.to_string(),
        "residual": table_to_json(&d.residual),
    })
}

pub fn two_local_from_json(v: &Value) -> Result<TwoLocalTable, IoError> {
    let read = |key| {
        array(v, key)?
            .iter()
            .map(element_from_json)
            .collect::<Result<Vec<_>, _>>()
    };
    TwoLocalTable::new(read("samples")?, read("values")?).map_err(|e| IoError::Invalid(e.to_string()))
}

pub fn two_local_to_json(t: &TwoLocalTable) -> Value {
    json!({
        "samples": t.samples.iter().map(element_to_json).collect::<Vec<_>>(),
        "values": t.values.iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

pub fn witness_to_json(w: &WitnessSpec) -> Value {
    json!({
        "inner": element_to_json(&w.inner),
        "phi": poly_list(&w.phi),
        "g": gsymbol_json(&w.g),
        "b": w.b.to_string(),
        "rho": w.rho.p.to_string(),
    })
}

pub fn certificate_to_json(c: &Certificate, samples: &[Element]) -> Value {
    let residuals: Vec<Value> = samples
        .iter()
        .zip(&c.residuals)
        .map(|(s, r)| json!({ "sample": s.to_string(), "residual": element_to_json(r), "zero": r.is_zero() }))
        .collect();
    json!({
        "witness": witness_to_json(&c.witness),
        "derivation": derivation_to_json(&c.derivation),
        "residuals": residuals,
        "anchor_witness_sufficient": c.anchor_witness_sufficient,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsJson {
    pub a: String,
    pub phi: Vec<i64>,
    pub chi: Vec<String>,
    pub psi: i64,
    pub b: String,
}

pub fn params_to_json(p: &AutomorphismParams) -> Value {
    serde_json::to_value(ParamsJson {
        a: p.a.to_string(),
        phi: p.phi.values.clone(),
        chi: p.chi.values.iter().map(Scalar::to_string).collect(),
        psi: p.psi,
        b: p.b.to_string(),
    })
    .expect("plain data")
}

pub fn params_from_json(cfg: &GammaConfig, v: &Value) -> Result<AutomorphismParams, IoError> {
    let p: ParamsJson = serde_json::from_value(v.clone())?;
    let chi = p.chi.iter().map(|s| scalar_from(s)).collect::<Result<Vec<_>, _>>()?;
    let chi = Character::new(chi).map_err(|e| IoError::Invalid(e.to_string()))?;
    AutomorphismParams::new(cfg, scalar_from(&p.a)?, IntHom::new(p.phi), chi, p.psi, scalar_from(&p.b)?)
        .map_err(|e| IoError::Invalid(e.to_string()))
}
