//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every function returns a JSON string; errors come back as `{"error": ...}`.

use k3series::kkv::compute_gv_table;
use k3series::ray_series::{series_records, RayComputation, RayContext};
use k3series::algebra::rational::rat;
use k3series::algebra::Series;
use k3series::vafa_witten::{theorem_check, VwRay};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_H: usize = 30;
const MAX_RAY_WORK: i64 = 40;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// `{"h_max": .., "rows": [[n_{g,h} as strings]]}`.
#[wasm_bindgen]
pub fn kkv_table(h_max: usize) -> String {
    if h_max > MAX_H {
        return error(format!("h_max is limited to {MAX_H} in the browser"));
    }
    match compute_gv_table(h_max) {
        Ok(t) => {
            let rows: Vec<Vec<String>> = t.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            json!({ "h_max": h_max, "rows": rows }).to_string()
        }
        Err(e) => error(e),
    }
}

/// Ray series for one primitive class: records `{d, n, coefficient}` per series.
#[wasm_bindgen]
pub fn ray_series(h0: i64, d_max: i64, q_min: i64, q_max: i64) -> String {
    let ctx = match RayContext::new(h0, d_max, q_min, q_max) {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    if ctx.required_h_max() > MAX_RAY_WORK || q_max - q_min > 2 * MAX_RAY_WORK {
        return error("ray too large for the browser demo; use the CLI");
    }
    let result = compute_gv_table(ctx.required_h_max().max(0) as usize)
        .map_err(|e| e.to_string())
        .and_then(|gv| RayComputation::new(ctx, &gv).map_err(|e| e.to_string()));
    let comp = match result {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    let recs = |s: Series| serde_json::to_value(series_records(&s, q_min, q_max)).unwrap_or(Value::Null);
    let chain = comp.identity_report().map(|r| r.chain_holds()).unwrap_or(false);
    json!({
        "h0": h0,
        "d_max": d_max,
        "q_min": q_min,
        "q_max": q_max,
        "f_gw_red": recs(comp.f_gw_red()),
        "z_chi": recs(comp.z_chi()),
        "z_naive": recs(comp.z_naive()),
        "z_twistor": recs(comp.z_twistor()),
        "identity_chain": chain,
    })
    .to_string()
}

/// VW extraction for `vw` given as `"num/den"` strings separated by commas.
#[wasm_bindgen]
pub fn vw_check(chi0: i64, vw: &str) -> String {
    let values: Result<Vec<_>, String> = vw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (n, d) = s.split_once('/').unwrap_or((s, "1"));
            match (n.trim().parse::<i64>(), d.trim().parse::<i64>()) {
                (Ok(n), Ok(d)) if d != 0 => Ok(rat(n, d)),
                _ => Err(format!("cannot parse {s:?} as a fraction")),
            }
        })
        .collect();
    let values = match values {
        Ok(v) if v.len() > 10 => return error("at most 10 multiplicities in the browser"),
        Ok(v) => v,
        Err(e) => return error(e),
    };
    let report = match VwRay::new(chi0, values).and_then(|r| theorem_check(&r)) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    json!({
        "chi0": chi0,
        "exp_identity": report.exp_identity,
        "pass": report.pass(),
        "records": report.records(),
    })
    .to_string()
}
