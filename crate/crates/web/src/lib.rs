//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every exported function returns a JSON string. The `*_json` functions are
//! the same operations with plain Rust errors, usable from native code.

use gspi_core::experiment::{mixture_figure, profile_figures};
use gspi_core::{BinningScheme, ModelParams};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest graph the page will sample; keeps a click under a few seconds.
pub const MAX_NODES: usize = 2000;

fn check_size(n: usize, graphs: usize) -> Result<(), String> {
    if n > MAX_NODES || graphs == 0 || graphs > 500 {
        return Err(format!("need n <= {MAX_NODES} and 1..=500 graphs"));
    }
    Ok(())
}

pub fn params_json(n: usize, c0: f64, factor: f64) -> Result<String, String> {
    let p = ModelParams::from_factor(n, c0, factor).map_err(|e| e.to_string())?;
    serde_json::to_string(&p).map_err(|e| e.to_string())
}

/// Averaged distance histogram and `d = 2` path-count histogram per class.
pub fn profiles_json(n: usize, c0: f64, factor: f64, graphs: usize, seed: u64) -> Result<String, String> {
    check_size(n, graphs)?;
    let params = ModelParams::from_factor(n, c0, factor).map_err(|e| e.to_string())?;
    let figs = profile_figures(&params, graphs, seed, BinningScheme::RAW).map_err(|e| e.to_string())?;
    let (d_one, d_two) = figs.distance_curves();
    let (x_one, x_two) = figs.path_count_curves();
    Ok(json!({
        "params": params,
        "distance": { "one_cluster": d_one, "two_cluster": d_two },
        "path_count": { "one_cluster": x_one, "two_cluster": x_two },
    })
    .to_string())
}

/// Empirical two-cluster `d = 2` path-count histogram against the mixture prediction.
pub fn mixture_json(n: usize, p2: f64, q2: f64, graphs: usize, seed: u64) -> Result<String, String> {
    check_size(n, graphs)?;
    let fig = mixture_figure(n, p2, q2, graphs, seed, 40).map_err(|e| e.to_string())?;
    Ok(json!({
        "empirical": fig.empirical,
        "prediction": fig.prediction,
        "mixture": fig.mixture,
        "smoothed_maxima": fig.smoothed_maxima(),
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = deriveParams)]
pub fn derive_params(n: usize, c0: f64, factor: f64) -> Result<String, JsValue> {
    js(params_json(n, c0, factor))
}

#[wasm_bindgen(js_name = profileCurves)]
pub fn profile_curves(n: usize, c0: f64, factor: f64, graphs: usize, seed: u32) -> Result<String, JsValue> {
    js(profiles_json(n, c0, factor, graphs, seed as u64))
}

#[wasm_bindgen(js_name = mixtureCurves)]
pub fn mixture_curves(n: usize, p2: f64, q2: f64, graphs: usize, seed: u32) -> Result<String, JsValue> {
    js(mixture_json(n, p2, q2, graphs, seed as u64))
}
