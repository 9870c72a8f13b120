//! Browser bindings for compound-kit. Each export takes matrix text (CSV)
//! and returns text; errors come back as JS exceptions carrying the message.
//!
//! The plain functions are what the bindings call, so they can be tested natively.

use compound_kit::io::{format_matrix, parse_matrix_str, MatrixFormat};
use compound_kit::{compound, inverse_compound, is_decomposable, Error, Matrix, RecoveryOutcome, TolerancePolicy};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn describe(e: Error) -> String {
    format!("{}: {e}", e.tag())
}

fn rows(x: &Matrix) -> Vec<Vec<f64>> {
    x.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// C_k of a CSV matrix, as CSV.
pub fn compound_text(csv: &str, k: usize) -> Result<String, String> {
    let x = parse_matrix_str(csv, MatrixFormat::Csv).map_err(describe)?;
    let c = compound(&x, k).map_err(describe)?;
    Ok(format_matrix(&c, MatrixFormat::Csv))
}

/// Recovers A (n x m) from M = C_k(A) given as CSV.
pub fn inverse_json(csv: &str, n: usize, m: usize, k: usize, seed: u64) -> Result<String, String> {
    let mat = parse_matrix_str(csv, MatrixFormat::Csv).map_err(describe)?;
    let rec = inverse_compound(&mat, n, m, k, &TolerancePolicy::with_seed(seed)).map_err(describe)?;
    let family = match &rec.outcome {
        RecoveryOutcome::RankOneFamily(fam) => json!({
            "u": rows(&fam.u),
            "sigma": rows(&fam.sigma),
            "v": rows(&fam.v),
        }),
        _ => serde_json::Value::Null,
    };
    Ok(json!({
        "outcome": rec.outcome.tag(),
        "sign_ambiguous": rec.outcome.sign_ambiguous(),
        "a": rows(&rec.outcome.representative()),
        "family": family,
        "inferred_r": rec.report.inferred_r,
        "residual": rec.report.reconstruction_residual,
        "resamples": rec.report.resample_count,
    })
    .to_string())
}

/// Whether a k-vector in R^n (coordinates in lexicographic order) is a single wedge.
pub fn decomposability_json(coords: &str, n: usize, k: usize) -> Result<String, String> {
    let x = parse_matrix_str(coords, MatrixFormat::Csv).map_err(describe)?;
    let z = compound_kit::Vector::from_iterator(x.len(), x.transpose().iter().copied());
    let d = is_decomposable(&z, n, k, &TolerancePolicy::default()).map_err(describe)?;
    Ok(json!({
        "decomposable": d.decomposable,
        "kernel_dim": d.kernel.ncols(),
        "kernel": rows(&d.kernel),
    })
    .to_string())
}

#[wasm_bindgen(js_name = compound)]
pub fn compound_js(csv: &str, k: usize) -> Result<String, JsError> {
    compound_text(csv, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = inverseCompound)]
pub fn inverse_js(csv: &str, n: usize, m: usize, k: usize, seed: u32) -> Result<String, JsError> {
    inverse_json(csv, n, m, k, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = isDecomposable)]
pub fn decomposable_js(coords: &str, n: usize, k: usize) -> Result<String, JsError> {
    decomposability_json(coords, n, k).map_err(|e| JsError::new(&e))
}
