//! Browser bindings: compute an attainable set, draw it, ask it questions.
//!
//! Everything crosses the boundary as strings; descriptions travel as the
//! same JSON the command-line tool prints, so the page can keep one around
//! and query it without recomputing.

use wasm_bindgen::prelude::*;

use surfrep::attainable::{lpq, membership, AttainablePoint, AttainableSetDescription};
use surfrep::encoding::{export_json, parse_class, parse_complex, parse_rational, parse_weights};
use surfrep::instances::builtin;
use surfrep::pipeline::{run_attainable, BoundSource, PipelineError, PipelineOptions};
use surfrep::render::{render_ascii, render_svg};
use surfrep::weights::validate_weight_function;

struct Input {
    complex: surfrep::complex::ComplexSpec,
    class: Option<surfrep::homology::ClassExpression>,
    weights: Option<surfrep::weights::WeightFunction>,
}

fn load(source: &str, class: &str, weights: &str) -> Result<Input, String> {
    let source = source.trim();
    let mut input = if source.starts_with('@') {
        let b = builtin(source).map_err(|e| e.to_string())?;
        Input {
            complex: b.complex,
            class: b.class,
            weights: b.weights,
        }
    } else {
        Input {
            complex: parse_complex(source).map_err(|e| e.to_string())?,
            class: None,
            weights: None,
        }
    };
    // blank fields fall back to the built-in defaults
    if !class.trim().is_empty() {
        input.class = Some(parse_class(class, &input.complex).map_err(|e| e.to_string())?);
    }
    if !weights.trim().is_empty() {
        input.weights = Some(parse_weights(weights, &input.complex).map_err(|e| e.to_string())?);
    }
    Ok(input)
}

/// Attainable-set JSON; `max_degree = 0` means "use the weights".
pub fn attainable_json(source: &str, class: &str, weights: &str, max_degree: u32) -> Result<String, String> {
    let input = load(source, class, weights)?;
    let class = input.class.unwrap_or_default();
    let bound = match (max_degree, input.weights) {
        (0, Some(w)) => BoundSource::Weights(w),
        (0, None) => BoundSource::MaxDegree(0),
        (d, _) => BoundSource::MaxDegree(d as u64),
    };
    match run_attainable(&input.complex, &class, &bound, &PipelineOptions::default()) {
        Ok(r) => Ok(export_json(&r.description)),
        Err(PipelineError::InvalidWeights(report)) => Err(format!("invalid weights:\n{}", export_json(&*report))),
        Err(e) => Err(e.to_string()),
    }
}

pub fn weights_json(source: &str, weights: &str) -> Result<String, String> {
    let input = load(source, "", weights)?;
    let w = input.weights.ok_or("no weight function given")?;
    let report = validate_weight_function(&input.complex, &w).map_err(|e| e.to_string())?;
    Ok(export_json(&report))
}

fn description(json: &str) -> Result<AttainableSetDescription, String> {
    serde_json::from_str(json).map_err(|e| e.to_string())
}

pub fn picture(json: &str, chi_max: i32, g_max: i32, svg: bool) -> Result<String, String> {
    let d = description(json)?;
    Ok(if svg {
        render_svg(&d, chi_max as i64, g_max as i64)
    } else {
        render_ascii(&d, chi_max as i64, g_max as i64)
    })
}

pub fn contains(json: &str, chi_minus: i32, genus: i32) -> Result<bool, String> {
    Ok(membership(&description(json)?, AttainablePoint::new(chi_minus as i64, genus as i64)))
}

pub fn lpq_value(json: &str, p: &str, q: &str) -> Result<String, String> {
    let d = description(json)?;
    let p = parse_rational(p).ok_or_else(|| format!("`{p}` is not a rational"))?;
    let q = parse_rational(q).ok_or_else(|| format!("`{q}` is not a rational"))?;
    Ok(lpq(&d, &p, &q).to_string())
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn attainable(source: &str, class: &str, weights: &str, max_degree: u32) -> Result<String, JsValue> {
    js(attainable_json(source, class, weights, max_degree))
}

#[wasm_bindgen]
pub fn check_weights(source: &str, weights: &str) -> Result<String, JsValue> {
    js(weights_json(source, weights))
}

#[wasm_bindgen]
pub fn render(description: &str, chi_max: i32, g_max: i32, svg: bool) -> Result<String, JsValue> {
    js(picture(description, chi_max, g_max, svg))
}

#[wasm_bindgen]
pub fn is_attainable(description: &str, chi_minus: i32, genus: i32) -> Result<bool, JsValue> {
    js(contains(description, chi_minus, genus))
}

#[wasm_bindgen]
pub fn l_pq(description: &str, p: &str, q: &str) -> Result<String, JsValue> {
    js(lpq_value(description, p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagons_round_trip() {
        let d = attainable_json("@three-octagons", "", "", 0).unwrap();
        assert!(d.contains("\"certified\": true"));
        assert!(contains(&d, 8, 5).unwrap());
        assert!(!contains(&d, 6, 5).unwrap());
        assert_eq!(lpq_value(&d, "1", "0").unwrap(), "6");
        assert_eq!(picture(&d, 10, 6, true).unwrap().matches("class=\"cross\"").count(), 4);
        assert!(weights_json("@three-octagons", "").unwrap().contains("\"valid\": true"));
    }

    #[test]
    fn errors_are_messages() {
        assert!(attainable_json("((p)", "", "", 3).is_err());
        assert!(attainable_json("@handlebody", "", "", 0).is_err());
        assert!(weights_json("@handlebody", "").is_err());
        assert!(lpq_value("{}", "1", "1").is_err());
    }
}
