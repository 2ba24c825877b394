//! Browser bindings for the demo page in `www/`.
//!
//! Every entry point takes plain strings and numbers and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use std::sync::Arc;

use egh_core::harness::IdealFile;
use egh_core::lpp::binomial_representation;
use egh_core::verify::egh_full_check;
use egh_core::{lpp_defect, macaulay_bound, DegreeVector, RingContext};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Hilbert function of `R/I` and its lex-plus-powers match, for an ideal
/// given in the `{"p","n","vars","regular_sequence","extras"}` format.
#[wasm_bindgen]
pub fn hilbert(ideal_json: &str) -> String {
    respond((|| {
        let inst = IdealFile::from_json(ideal_json)
            .and_then(|f| f.to_instance())
            .map_err(|e| e.to_string())?;
        let full = egh_full_check(&inst).map_err(|e| e.to_string())?;
        Ok(json!({
            "hilbert_function": inst.hilbert_function(),
            "socle_degree": inst.socle_degree(),
            "lpp": full,
        }))
    })())
}

/// `(x^a)` plus the `defect` greatest standard monomials of degree `degree`.
#[wasm_bindgen]
pub fn lpp(n: usize, a_csv: &str, defect: usize, degree: u32) -> String {
    respond((|| {
        let a = if a_csv.trim().is_empty() {
            if n == 0 {
                return Err("n must be positive".to_string());
            }
            DegreeVector::quadrics(n)
        } else {
            let a = a_csv
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            DegreeVector::new(a).map_err(|e| e.to_string())?
        };
        let ctx = Arc::new(RingContext::new(n, 101).map_err(|e| e.to_string())?);
        let l = lpp_defect(&ctx, a.clone(), degree, defect).map_err(|e| e.to_string())?;
        let top = a.socle_degree() + 1;
        Ok(json!({
            "ideal": l.to_string(),
            "piece_dims": (0..=top).map(|d| l.piece_dim(d)).collect::<Vec<_>>(),
            "hilbert_function": l.hilbert_function(top),
        }))
    })())
}

/// The `d`-th binomial representation of `h` and the bound `h^<d>`.
#[wasm_bindgen]
pub fn macaulay(h: u32, d: u32) -> String {
    respond((|| {
        if d == 0 {
            return Err("d must be at least 1".to_string());
        }
        let terms: Vec<Value> = binomial_representation(h as u64, d)
            .into_iter()
            .map(|(b, k)| json!([b, k]))
            .collect();
        Ok(json!({
            "h": h,
            "d": d,
            "representation": terms,
            "bound": macaulay_bound(h as u64, d),
        }))
    })())
}
