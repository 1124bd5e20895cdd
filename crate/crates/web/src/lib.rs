//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes strings and numbers and returns a JSON string with an
//! `ok` field; the `*_value` functions behind them are plain Rust and are what
//! the tests call.

use fixloc::classes::ClassDegree;
use fixloc::localization::{ev_zero, localization_sum, verify_model, LocalizationError, Model, VerifyOutcome};
use fixloc::models::{builtin_from_spec, load_model_str};
use fixloc::numcheck::{dh_closed_form, dh_localization, dh_quadrature, QuadratureSpec};
use fixloc::poly::format_rational;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_CURVE_POINTS: usize = 400;
const MAX_VERIFY_DEGREE: u32 = 24;

fn error(kind: &str, message: impl ToString) -> Value {
    json!({ "ok": false, "kind": kind, "error": message.to_string() })
}

/// A builtin spec such as `cpn:2`, or a model document when the text starts
/// with `{`.
fn load(model: &str) -> Result<Model, Value> {
    let text = model.trim();
    let loaded = if text.starts_with('{') {
        load_model_str(text)
    } else {
        builtin_from_spec(text)
    };
    loaded.map_err(|e| error("input", e))
}

pub fn compute_value(model: &str, class: &str) -> Value {
    let m = match load(model) {
        Ok(m) => m,
        Err(e) => return e,
    };
    let c = match m.parse_class(class) {
        Ok(c) => c,
        Err(e) => return error("input", e),
    };
    let pieces = match c.degree() {
        ClassDegree::Zero => Vec::new(),
        ClassDegree::Homogeneous(d) => vec![(d, c.clone())],
        ClassDegree::Inhomogeneous => c.homogeneous_parts(),
    };
    let mut parts = Vec::new();
    for (degree, piece) in pieces {
        match localization_sum(&m, &piece) {
            Ok(sum) => parts.push(json!({
                "degree": degree,
                "sum": sum.to_string(),
                "number": (degree == m.q).then(|| format_rational(&ev_zero(&sum))),
            })),
            Err(e @ LocalizationError::NotPolynomial(_)) => return error("not_polynomial", e),
            Err(e) => return error("input", e),
        }
    }
    json!({ "ok": true, "model": m.name, "k": m.k, "q": m.q, "class": c.to_string(), "parts": parts })
}

pub fn verify_value(model: &str, max_degree: Option<u32>) -> Value {
    let m = match load(model) {
        Ok(m) => m,
        Err(e) => return e,
    };
    let max_degree = max_degree.unwrap_or(m.q).min(MAX_VERIFY_DEGREE);
    let report = verify_model(&m, max_degree);
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let detail = match &e.outcome {
                VerifyOutcome::Polynomial { sum, .. } => sum.to_string(),
                VerifyOutcome::NotPolynomial { remainder } => format!("not a polynomial: {remainder}"),
                VerifyOutcome::Error(msg) => msg.clone(),
            };
            json!({ "class": e.class, "degree": e.degree, "passed": e.passed(), "detail": detail })
        })
        .collect();
    json!({
        "ok": true,
        "model": report.model,
        "q": report.q,
        "max_degree": max_degree,
        "passed": report.passed(),
        "entries": entries,
    })
}

/// Quadrature, fixed-point sum and closed form of `∫_{S²} e^{tz}` at
/// `points` evenly spaced values of `t`; `t = 0` is skipped.
pub fn dh_curve_value(t_min: f64, t_max: f64, points: usize, n_theta: usize, n_phi: usize) -> Value {
    if !(t_min.is_finite() && t_max.is_finite()) || t_min >= t_max {
        return error("input", "need finite t_min < t_max");
    }
    if !(2..=MAX_CURVE_POINTS).contains(&points) {
        return error("input", format!("points must be in 2..={MAX_CURVE_POINTS}"));
    }
    let mut rows = Vec::new();
    for i in 0..points {
        let t = t_min + (t_max - t_min) * i as f64 / (points - 1) as f64;
        if t == 0.0 {
            continue;
        }
        let spec = match QuadratureSpec::new(t, n_theta, n_phi, 1.0) {
            Ok(s) => s,
            Err(e) => return error("input", e),
        };
        let (Ok(quadrature), Ok(localization)) = (dh_quadrature(&spec), dh_localization(t)) else {
            continue;
        };
        rows.push(json!({
            "t": t,
            "quadrature": quadrature,
            "localization": localization,
            "closed_form": dh_closed_form(t),
            "error": (quadrature - localization).abs(),
        }));
    }
    json!({ "ok": true, "n_theta": n_theta, "n_phi": n_phi, "points": rows })
}

#[wasm_bindgen]
pub fn compute(model: &str, class: &str) -> String {
    compute_value(model, class).to_string()
}

/// `max_degree < 0` means the model's `q`.
#[wasm_bindgen]
pub fn verify(model: &str, max_degree: i32) -> String {
    verify_value(model, u32::try_from(max_degree).ok()).to_string()
}

#[wasm_bindgen]
pub fn dh_curve(t_min: f64, t_max: f64, points: usize, n_theta: usize, n_phi: usize) -> String {
    dh_curve_value(t_min, t_max, points, n_theta, n_phi).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compute_builtin() {
        let v = compute_value("cpn:2", "p1");
        assert_eq!(v["ok"], true);
        assert_eq!(v["parts"][0]["number"], "3");
    }

    #[test]
    fn compute_document() {
        let doc = fixloc::models::save_model(&builtin_from_spec("s2").unwrap());
        assert_eq!(compute_value(&doc, "e")["parts"][0]["number"], "2");
    }

    #[test]
    fn compute_errors() {
        assert_eq!(compute_value("nosuch", "e")["kind"], "input");
        assert_eq!(compute_value("cp2", "p1 +")["kind"], "input");
        let mut broken = builtin_from_spec("cp2").unwrap();
        broken.components.pop();
        let doc = fixloc::models::save_model(&broken);
        assert_eq!(compute_value(&doc, "1")["kind"], "not_polynomial");
    }

    #[test]
    fn verify_reports() {
        let v = verify_value("cp2", None);
        assert_eq!(v["passed"], true);
        assert_eq!(v["max_degree"], 4);
        assert!(verify("s2", 4).contains("\"passed\":true"));
    }

    #[test]
    fn curve_matches_fixed_points() {
        let v = dh_curve_value(-2.0, 2.0, 5, 512, 64);
        let rows = v["points"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        for r in rows {
            assert!(r["error"].as_f64().unwrap() < 1e-6);
        }
        assert_eq!(dh_curve_value(1.0, 0.0, 5, 512, 64)["ok"], false);
        assert_eq!(dh_curve_value(0.0, 1.0, 5, 7, 64)["ok"], false);
    }
}
