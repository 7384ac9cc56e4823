//! Three operations of `invgen-core` for a static web page. Each returns a
//! JSON string; the `*_json` functions carry the logic and are usable
//! natively, the exported wrappers turn errors into JS exceptions.

use invgen::chebotarev::cheb_report;
use invgen::harness::experiments::{agl_trend, binomial_row, parse_rational};
use invgen::invariable::ClassCoverageTable;
use invgen::{load_group, GroupDescriptor};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::value::RawValue;
use wasm_bindgen::prelude::*;

/// Simulation budget per call; the page runs on the main thread.
pub const MAX_TRIALS: u64 = 200_000;
pub const MAX_AGL_Q: usize = 32;

#[derive(Serialize)]
struct ChebOut {
    group: String,
    order: usize,
    r: usize,
    /// Exact integers, unbounded in size.
    c_num: Option<Box<RawValue>>,
    c_den: Option<Box<RawValue>>,
    c_exact: Option<f64>,
    c_mc: f64,
    stderr: f64,
    trials: u64,
    seed: u64,
    ratio_sqrt: f64,
    min_k_29: Option<u32>,
}

fn digits(x: &BigInt) -> Box<RawValue> {
    RawValue::from_string(x.to_string()).expect("an integer is valid JSON")
}

pub fn chebotarev_json(descriptor: &str, trials: u64, seed: u64) -> Result<String, String> {
    if trials == 0 || trials > MAX_TRIALS {
        return Err(format!("trials must be between 1 and {MAX_TRIALS}"));
    }
    let desc: GroupDescriptor = serde_json::from_str(descriptor).map_err(|e| e.to_string())?;
    let g = load_group(&desc).map_err(|e| e.to_string())?;
    let table = ClassCoverageTable::new(&g).map_err(|e| e.to_string())?;
    let rep = cheb_report(&g, &table, trials, seed).map_err(|e| e.to_string())?;
    let out = ChebOut {
        group: rep.group,
        order: rep.order,
        r: rep.r,
        c_num: rep.c_exact.as_ref().map(|c| digits(c.numer())),
        c_den: rep.c_exact.as_ref().map(|c| digits(c.denom())),
        c_exact: rep.c_exact.as_ref().map(invgen::chebotarev::to_f64),
        c_mc: rep.c_mc,
        stderr: rep.mc_stderr,
        trials: rep.trials,
        seed: rep.seed,
        ratio_sqrt: rep.ratio_sqrt,
        min_k_29: rep.min_k_29,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// `qs` is a comma-separated list of prime powers.
pub fn agl_trend_json(qs: &str) -> Result<String, String> {
    let qs = qs
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad q: {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(q) = qs.iter().find(|&&q| q > MAX_AGL_Q) {
        return Err(format!("q = {q} exceeds {MAX_AGL_Q}"));
    }
    let rows = agl_trend(&qs).map_err(|e| e.to_string())?;
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// `epsilon` and `p` as `a/b`, integers or decimals.
pub fn binomial_json(epsilon: &str, p: &str, l: u32) -> Result<String, String> {
    let eps = parse_rational(epsilon).map_err(|e| e.to_string())?;
    let p = parse_rational(p).map_err(|e| e.to_string())?;
    let row = binomial_row(&eps, &p, l.into()).map_err(|e| e.to_string())?;
    serde_json::to_string(&row).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn chebotarev(descriptor: &str, trials: u32, seed: u32) -> Result<String, JsError> {
    chebotarev_json(descriptor, trials.into(), seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = aglTrend)]
pub fn agl_trend_js(qs: &str) -> Result<String, JsError> {
    agl_trend_json(qs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = binomialTail)]
pub fn binomial_js(epsilon: &str, p: &str, l: u32) -> Result<String, JsError> {
    binomial_json(epsilon, p, l).map_err(|e| JsError::new(&e))
}
