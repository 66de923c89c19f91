//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Every export returns a JSON string; failures come back as `{"error": ...}`.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use ncycle::constructor::{cyclotomic_construct, GSpec};
use ncycle::families::{
    family_char3, family_even_q, family_v_trinomial, index2_binomial, index3_trinomial, BinomialParams, TrinomialParams,
};
use ncycle::report::{verify_form, verify_poly, Report};
use ncycle::{FieldCtx, FieldSpec, IndexForm, SparsePoly};

/// Largest field the page will tabulate.
pub const DEMO_LIMIT: u64 = 1 << 16;

#[derive(Serialize)]
struct Output<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    valid: Option<bool>,
    passed: bool,
    report: &'a Report,
}

fn field(text: &str, modulus: &str) -> Result<FieldCtx, String> {
    let mut spec: FieldSpec = text.parse().map_err(|e: ncycle::Error| e.to_string())?;
    if !modulus.trim().is_empty() {
        spec = spec.with_modulus_text(modulus).map_err(|e| e.to_string())?;
    }
    let ctx = spec.build().map_err(|e| e.to_string())?;
    if ctx.order() > DEMO_LIMIT {
        return Err(format!("the demo handles fields of order at most {DEMO_LIMIT}"));
    }
    Ok(ctx.with_log_table())
}

fn to_json(result: Result<String, String>) -> String {
    result.unwrap_or_else(|e| serde_json::json!({ "error": e }).to_string())
}

fn emit(h: Option<String>, valid: Option<bool>, report: &Report) -> Result<String, String> {
    let passed = report.passed() && valid.unwrap_or(true);
    serde_json::to_string(&Output { h, valid, passed, report }).map_err(|e| e.to_string())
}

fn param(params: &str, key: &str) -> Result<u64, String> {
    params
        .split(',')
        .filter_map(|kv| kv.split_once('='))
        .find(|(k, _)| k.trim() == key)
        .ok_or_else(|| format!("missing parameter {key}"))?
        .1
        .trim()
        .parse()
        .map_err(|_| format!("parameter {key} is not an integer"))
}

pub fn verify_inner(field_text: &str, modulus: &str, poly: &str, n: u32) -> Result<String, String> {
    let ctx = field(field_text, modulus)?;
    let f = SparsePoly::parse(poly, &ctx).map_err(|e| e.to_string())?;
    let rep = verify_poly(&f, n, &ctx).map_err(|e| e.to_string())?;
    emit(None, None, &rep)
}

pub fn family_inner(name: &str, params: &str, field_text: &str) -> Result<String, String> {
    let p = |k| param(params, k);
    let (form, ctx, n): (IndexForm, FieldCtx, u32) = match name {
        "char3-quad" | "even-q-tri" | "v-tri" => {
            let q = p("q")?;
            let (base, k) = if name == "char3-quad" { (q, 6) } else { (q, 2) };
            let order = (base as u128).checked_pow(k).filter(|&o| o <= DEMO_LIMIT as u128).ok_or("field too large")?;
            let pf = ncycle::arith::prime_factors(base);
            let prime = *pf.first().ok_or("q must be a prime power")?;
            let m = (order as f64).log(prime as f64).round() as usize;
            let ctx = field(&format!("{prime}^{m}"), "")?;
            let form = match name {
                "char3-quad" => family_char3(q, &ctx),
                "even-q-tri" => family_even_q(q, p("a")?, &ctx),
                _ => family_v_trinomial(q, p("a")?, p("v")?, &ctx),
            }
            .map_err(|e| e.to_string())?;
            (form, ctx, 3)
        }
        "idx2-binomial" | "idx3-trinomial" => {
            let ctx = field(field_text, "")?;
            let el = |k| p(k).and_then(|v| ctx.elem(v).map_err(|e| e.to_string()));
            let n = p("n").unwrap_or(3) as u32;
            let r = p("r").unwrap_or(1);
            let out = if name == "idx2-binomial" {
                index2_binomial(&BinomialParams { a: el("a")?, b: el("b")?, r, n }, &ctx)
            } else {
                index3_trinomial(&TrinomialParams { a: el("a")?, b: el("b")?, c: el("c")?, r, n }, &ctx)
            }
            .map_err(|e| e.to_string())?;
            (out.form, ctx, n)
        }
        other => return Err(format!("unknown family {other:?}")),
    };
    let rep = verify_form(&form, n, &ctx).map_err(|e| e.to_string())?;
    emit(Some(form.h_poly().to_string()), None, &rep)
}

pub fn construct_inner(field_text: &str, sigma: &str, mvec: &str, r: u64, n: u32) -> Result<String, String> {
    let ctx = field(field_text, "")?;
    let spec = GSpec::parse(sigma, mvec).map_err(|e| e.to_string())?;
    let built = cyclotomic_construct(&spec, r, n, &ctx).map_err(|e| e.to_string())?;
    let rep = verify_form(&built.form, n, &ctx).map_err(|e| e.to_string())?;
    emit(Some(built.form.h_poly().to_string()), Some(built.valid), &rep)
}

/// Verifies `poly` over `field` (`"p^m"`); `modulus` may be empty.
#[wasm_bindgen]
pub fn verify(field: &str, modulus: &str, poly: &str, n: u32) -> String {
    to_json(verify_inner(field, modulus, poly, n))
}

/// Builds a family member from `"k=v,k=v"` parameters.
#[wasm_bindgen]
pub fn family(name: &str, params: &str, field: &str) -> String {
    to_json(family_inner(name, params, field))
}

/// Builds `x^r h(x^s)` from a target permutation of `mu_ell`.
#[wasm_bindgen]
pub fn construct(field: &str, sigma: &str, mvec: &str, r: u32, n: u32) -> String {
    to_json(construct_inner(field, sigma, mvec, r as u64, n))
}
