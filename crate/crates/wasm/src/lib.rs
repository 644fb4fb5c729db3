// SPDX-License-Identifier: Apache-2.0

//! Browser bindings for the demo page in `www/`. Every export takes plain
//! numbers or strings and returns a JSON string, so the page needs no glue
//! beyond `JSON.parse`.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Select representative of a grid chain and the boundary-mass check.
/// `theta` is a JSON array (flat with `dims`, or nested).
#[wasm_bindgen(js_name = gridCheck)]
pub fn grid_check(p: i64, dims: &str, theta: &str) -> Result<String, JsError> {
    js(demo::grid_check(p, dims, theta))
}

/// Repair of a seeded random 1-chain, or of a bundle of `k` parallel edges
/// when `seed` is negative.
#[wasm_bindgen(js_name = repairDemo)]
pub fn repair_demo(p: i64, seed: f64, k: u32, max_edges: u32) -> Result<String, JsError> {
    js(demo::repair_demo(p, seed, k as usize, max_edges as usize))
}

/// Flat norm of a dipole δ_b − δ_a at distance `length` (a rational string),
/// classically and mod p.
#[wasm_bindgen(js_name = dipoleFlatNorm)]
pub fn dipole_flat_norm(length: &str, weight: i64, p: i64) -> Result<String, JsError> {
    js(demo::dipole_flat_norm(length, weight, p))
}
