//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Each export has a plain Rust twin returning `Result<_, String>` so the
//! logic is testable off the wasm target.

use wasm_bindgen::prelude::*;

use tembed::embedding::{embedding_at, Mode};
use tembed::render::edge_list;
use tembed::rings::{parse_positive as parse_a, Complex64};
use tembed::verify::{run_suite, Suite, VerifyParams};
use tembed::wavefield::{fundamental, ResidueClass};

/// Largest stage the page may request; keeps a single call interactive.
pub const MAX_STAGE: i64 = 200;

fn stage(n: i64, limit: i64) -> Result<i64, String> {
    if (1..=limit).contains(&n) {
        Ok(n)
    } else {
        Err(format!("n must be in 1..={limit}, got {n}"))
    }
}

/// Edge endpoints of the embedding followed by those of the origami map,
/// each edge as `x1, y1, x2, y2`. Both halves have the same length.
pub fn segments(a: &str, n: i64) -> Result<Vec<f64>, String> {
    let a = parse_a(a).map_err(|e| e.to_string())?;
    let e = embedding_at::<Complex64>(&a, stage(n, MAX_STAGE)?).map_err(|e| e.to_string())?;
    let edges = edge_list(&e);
    let mut out = Vec::with_capacity(8 * edges.len());
    for pick in [Embedding::t as Pick, Embedding::o as Pick] {
        for &(u, v) in &edges {
            let (p, q) = (pick(&e, u.0, u.1).unwrap(), pick(&e, v.0, v.1).unwrap());
            out.extend([p.re, p.im, q.re, q.im]);
        }
    }
    Ok(out)
}

type Embedding = tembed::embedding::Embedding<Complex64>;
type Pick = fn(&Embedding, i64, i64) -> Option<&Complex64>;

/// Layer `layer` of the fundamental solution of class `class` ("00", "01",
/// "10" or "11") as a `(2 layer + 3)²` row-major grid over
/// `-(layer+1) <= j, k <= layer+1`, rows by decreasing `k`. Sites off the
/// lattice are NaN.
pub fn field_layer(a: &str, class: &str, layer: i64) -> Result<Vec<f64>, String> {
    let a = parse_a(a).map_err(|e| e.to_string())?;
    let bits: Vec<i64> = class.chars().filter_map(|c| c.to_digit(2).map(i64::from)).collect();
    let class = match bits[..] {
        [eps, eta] if class.len() == 2 => ResidueClass::new(eps, eta).map_err(|e| e.to_string())?,
        _ => return Err(format!("class must be one of 00, 01, 10, 11, got {class:?}")),
    };
    let layer = stage(layer, 120)?;
    let field = fundamental::<f64>(&a, class, layer).map_err(|e| e.to_string())?;
    let r = layer + 1;
    let mut out = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
    for k in (-r..=r).rev() {
        for j in -r..=r {
            out.push(if (j + k + layer).rem_euclid(2) == 1 { field.value(j, k, layer) } else { f64::NAN });
        }
    }
    Ok(out)
}

/// JSON report of the recurrence-versus-formula comparison up to stage `n`.
pub fn theorem_report(a: &str, n: i64, exact: bool) -> Result<String, String> {
    let a = parse_a(a).map_err(|e| e.to_string())?;
    let (mode, limit) = if exact { (Mode::Exact, 14) } else { (Mode::Float, MAX_STAGE) };
    let params = VerifyParams::new(stage(n, limit)?, a, mode, 1e-9, 0).map_err(|e| e.to_string())?;
    run_suite(Suite::Theorem, &params).map(|r| r.to_json()).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = segments)]
pub fn js_segments(a: &str, n: i32) -> Result<Vec<f64>, JsError> {
    segments(a, n.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = fieldLayer)]
pub fn js_field_layer(a: &str, class: &str, layer: i32) -> Result<Vec<f64>, JsError> {
    field_layer(a, class, layer.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = theoremReport)]
pub fn js_theorem_report(a: &str, n: i32, exact: bool) -> Result<String, JsError> {
    theorem_report(a, n.into(), exact).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segments_halves_match() {
        let s = segments("1", 3).unwrap();
        assert_eq!(s.len() % 8, 0);
        // Stage 1 is the square with its four spokes.
        assert_eq!(segments("0.7", 1).unwrap().len(), 8 * 8);
        assert!(s.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn field_grid_shape() {
        let g = field_layer("1", "00", 2).unwrap();
        assert_eq!(g.len(), 7 * 7);
        // (j, k) = (1, 0) sits in row k = 0 (index 3), column j = 1 (index 4).
        assert_eq!(g[3 * 7 + 4], 0.5);
        assert!(field_layer("1", "21", 2).is_err());
    }

    #[test]
    fn theorem_report_passes() {
        let json = theorem_report("7/10", 5, true).unwrap();
        assert!(json.contains("\"passed\": true"));
        assert!(theorem_report("-1", 5, true).is_err());
        assert!(theorem_report("1", 40, true).is_err());
    }
}
