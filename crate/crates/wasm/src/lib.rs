//! Browser bindings for the testers.
//!
//! Three operations, each taking a JSON function spec (as accepted by the
//! command-line `--spec` flag) and returning a JSON string:
//!
//! - [`describe`]: exact distances and the dependency set;
//! - [`run_tester`]: one seeded tester run with its witness;
//! - [`rejection_curve`]: rejection rate against exact distance as a base
//!   function is perturbed further and further.
//!
//! The logic lives in plain Rust functions in [`api`] so it can be tested
//! natively; the exported wrappers only convert errors.

use wasm_bindgen::prelude::*;

pub mod api;

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn describe(spec_json: &str) -> Result<String, JsError> {
    js(api::describe(spec_json))
}

#[wasm_bindgen]
pub fn run_tester(
    spec_json: &str,
    tester: &str,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<String, JsError> {
    js(api::run_tester(spec_json, tester, eps, delta, seed))
}

#[wasm_bindgen]
pub fn rejection_curve(
    spec_json: &str,
    tester: &str,
    eps: f64,
    delta: f64,
    points: u32,
    trials: u32,
    seed: u64,
) -> Result<String, JsError> {
    js(api::rejection_curve(
        spec_json, tester, eps, delta, points, trials, seed,
    ))
}
