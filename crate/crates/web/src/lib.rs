//! Browser bindings for the static demo in `www/`.
//!
//! Each entry point takes the algebra config as JSON text and returns JSON
//! text. The plain functions below do the work so they can be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use lhv_core::algebra::{Algebra, Basis, Kind};
use lhv_core::autos::{apply_automorphism, invert_params};
use lhv_core::config::AlgebraConfig;
use lhv_core::gamma::GammaElement;
use lhv_core::io;
use lhv_core::syntax::parse_expression;

fn config(src: &str) -> Result<AlgebraConfig, String> {
    AlgebraConfig::parse(src).map_err(|e| e.to_string())
}

pub fn evaluate_json(config_src: &str, expr: &str) -> Result<Value, String> {
    let cfg = config(config_src)?;
    let x = parse_expression(&cfg.gamma, expr).map_err(|e| e.to_string())?;
    Ok(json!({ "text": x.to_string(), "element": io::element_to_json(&x) }))
}

/// Applies theta to the expression, then theta inverse to the result.
pub fn automorphism_json(config_src: &str, params_src: &str, expr: &str) -> Result<Value, String> {
    let cfg = config(config_src)?;
    let raw: Value = serde_json::from_str(params_src).map_err(|e| e.to_string())?;
    let p = io::params_from_json(&cfg.gamma, &raw).map_err(|e| e.to_string())?;
    let q = invert_params(&cfg.gamma, &p).map_err(|e| e.to_string())?;
    let x = parse_expression(&cfg.gamma, expr).map_err(|e| e.to_string())?;
    let y = apply_automorphism(&cfg.gamma, &p, &x).map_err(|e| e.to_string())?;
    let back = apply_automorphism(&cfg.gamma, &q, &y).map_err(|e| e.to_string())?;
    Ok(json!({
        "image": y.to_string(),
        "inverse": io::params_to_json(&q),
        "round_trip": back.to_string(),
        "round_trip_ok": back == x,
    }))
}

fn kind(s: &str) -> Result<Kind, String> {
    match s {
        "L" => Ok(Kind::L),
        "H" => Ok(Kind::H),
        _ => Err(format!("unknown kind {s:?}")),
    }
}

/// Coefficients of [X(a e1;i), Y(b e1;j)] for a, b in -n..=n.
pub fn bracket_grid_json(config_src: &str, x: &str, y: &str, i: i64, j: i64, n: i64) -> Result<Value, String> {
    let cfg = config(config_src)?;
    if !(0..=8).contains(&n) {
        return Err("grid radius must be between 0 and 8".into());
    }
    let (kx, ky) = (kind(x)?, kind(y)?);
    let alg = Algebra::new(cfg.gamma.clone());
    let e1 = GammaElement::unit(alg.rank(), 0);
    let labels: Vec<String> = (-n..=n).map(|k| alg.embed(&e1.scale(k)).to_string()).collect();
    let rows: Vec<Vec<Value>> = (-n..=n)
        .map(|a| {
            (-n..=n)
                .map(|b| {
                    let bx = Basis::new(kx, e1.scale(a), i);
                    let by = Basis::new(ky, e1.scale(b), j);
                    match alg.bracket_basis(&bx, &by) {
                        Some((c, z)) => json!({ "coeff": c.to_string(), "basis": z.to_string() }),
                        None => json!({ "coeff": "0", "basis": null }),
                    }
                })
                .collect()
        })
        .collect();
    Ok(json!({ "labels": labels, "rows": rows }))
}

fn finish(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn evaluate(config_src: &str, expr: &str) -> Result<String, JsValue> {
    finish(evaluate_json(config_src, expr))
}

#[wasm_bindgen]
pub fn automorphism(config_src: &str, params_src: &str, expr: &str) -> Result<String, JsValue> {
    finish(automorphism_json(config_src, params_src, expr))
}

#[wasm_bindgen]
pub fn bracket_grid(config_src: &str, x: &str, y: &str, i: i32, j: i32, n: i32) -> Result<String, JsValue> {
    finish(bracket_grid_json(config_src, x, y, i.into(), j.into(), n.into()))
}
