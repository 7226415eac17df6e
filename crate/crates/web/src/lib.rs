//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; the plain-Rust functions in [`demo`]
//! do the work so they can be tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn to_js(result: Result<String, String>) -> Result<String, JsError> {
    result.map_err(|e| JsError::new(&e))
}

/// Expected intra, overall and inter-category distances for two categories.
#[wasm_bindgen(js_name = expectationCurve)]
pub fn expectation_curve(category_size: usize, p_max: usize) -> Result<String, JsError> {
    to_js(demo::expectation_curve(category_size, p_max))
}

/// Sample a block model graph and run one detector on it.
#[wasm_bindgen(js_name = sbmDetection)]
#[allow(clippy::too_many_arguments)]
pub fn sbm_detection(
    communities: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    algo: &str,
    weight: &str,
    mode: &str,
    sticky_ties: bool,
    seed: u32,
) -> Result<String, JsError> {
    let detector = demo::DetectorSpec {
        algo,
        weight,
        mode,
        sticky_ties,
    };
    to_js(demo::sbm_detection(
        communities,
        size,
        p_in,
        p_out,
        &detector,
        u64::from(seed),
    ))
}

/// Generate rankings, threshold their similarity graph and detect categories.
#[wasm_bindgen(js_name = rankingDetection)]
#[allow(clippy::too_many_arguments)]
pub fn ranking_detection(
    categories: usize,
    category_size: usize,
    p: usize,
    voters: usize,
    epsilon: Option<f64>,
    algo: &str,
    weight: &str,
    mode: &str,
    sticky_ties: bool,
    seed: u32,
) -> Result<String, JsError> {
    let detector = demo::DetectorSpec {
        algo,
        weight,
        mode,
        sticky_ties,
    };
    to_js(demo::ranking_detection(
        categories,
        category_size,
        p,
        voters,
        epsilon,
        &detector,
        u64::from(seed),
    ))
}
