//! WebAssembly bindings behind the static demo page in `www/`.
//!
//! Every export takes plain strings and returns a JSON document so the page
//! only needs `JSON.parse`. Errors surface as thrown JavaScript exceptions.

use std::collections::BTreeSet;

use flatfix::axioms::{render_axioms, DocFormat};
use flatfix::normal::{preprocess, render_pure, to_disjunctive, to_nabla, to_pure_disjunction};
use flatfix::pipeline::{run_pipeline, PipelineOptions};
use flatfix::semantics::{eval, Env, KripkeModel};
use flatfix::syntax::{parse, Signatures};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn fail(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn load(sigs: &str) -> Result<Signatures, JsError> {
    Signatures::load(sigs).map_err(fail)
}

/// All four normal forms of `formula`, with `x` as the fixpoint variable of
/// the pure form.
pub fn normalize_json(formula: &str, x: &str, sigs: &str) -> Result<serde_json::Value, String> {
    let sigs = Signatures::load(sigs).map_err(|e| e.to_string())?;
    let f = parse(formula, &sigs).map_err(|e| e.to_string())?;
    let acts = f.actions();
    let nabla = to_nabla(&f).map_err(|e| e.to_string())?;
    let disjunctive = to_disjunctive(&nabla).map_err(|e| e.to_string())?;
    let pure = to_pure_disjunction(&nabla, &acts).map_err(|e| e.to_string());
    let pure_x = preprocess(&f, x, &acts).map(|p| render_pure(&p.pure, x).to_string());
    Ok(json!({
        "input": f.to_string(),
        "nabla": nabla.to_string(),
        "disjunctive": disjunctive.to_string(),
        "pure": pure.map(|p| p.to_string()).unwrap_or_else(|e| format!("({e})")),
        "pure_x": pure_x.unwrap_or_else(|e| format!("({e})")),
    }))
}

#[wasm_bindgen]
pub fn normalize(formula: &str, x: &str, sigs: &str) -> Result<String, JsError> {
    normalize_json(formula, x, sigs)
        .map(|v| v.to_string())
        .map_err(|e| JsError::new(&e))
}

/// Representation, simulation and both axiom systems for every connective in
/// `sigs`.
#[wasm_bindgen]
pub fn pipeline(sigs: &str, lean: bool) -> Result<String, JsError> {
    let table = load(sigs)?;
    let opts = PipelineOptions {
        lean,
        ..Default::default()
    };
    let mut docs = Vec::new();
    for sig in table.iter() {
        let p = run_pipeline(sig, None, opts).map_err(fail)?;
        let kff = render_axioms(std::slice::from_ref(&p.kff), &table, DocFormat::Text);
        let kplus = render_axioms(std::slice::from_ref(&p.kplus), &table, DocFormat::Text);
        docs.push(json!({
            "connective": sig.to_string(),
            "actions": p.actions.iter().map(|a| a.as_str()).collect::<Vec<_>>(),
            "pure": render_pure(&p.pre.pure, &sig.x).to_string(),
            "represent": p.rep.system.render_text(),
            "simulate": p.sim.system.render_text(),
            "kff": kff,
            "kffplus": kplus,
        }));
    }
    Ok(json!(docs).to_string())
}

/// Truth set of `formula` on the model given as JSON, as a list of state ids.
#[wasm_bindgen]
pub fn evaluate(model: &str, formula: &str, sigs: &str) -> Result<String, JsError> {
    let table = load(sigs)?;
    let m = KripkeModel::from_json(model).map_err(fail)?;
    let f = parse(formula, &table).map_err(fail)?;
    let set = eval(&m, &Env::new(), &f, &table).map_err(fail)?;
    let states: BTreeSet<i64> = set.iter().map(|i| m.id(i)).collect();
    Ok(json!({"formula": f.to_string(), "states": states, "shown": m.show(set)}).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_forms_of_a_diamond() {
        let v = normalize_json("<a>p", "x", "").unwrap();
        assert_eq!(v["nabla"], "nab a {T, p}");
        assert!(normalize_json("<a>(", "x", "").is_err());
    }

    #[test]
    fn pipeline_and_evaluate() {
        let sigs = "delta(x; p) := p | <a>x";
        let docs: serde_json::Value =
            serde_json::from_str(&pipeline(sigs, false).unwrap()).unwrap();
        assert_eq!(
            docs[0]["simulate"],
            "*y_g = (p & nab a {}) | (p & nab a {T}) | nab a {T, y_g}\n"
        );
        assert!(docs[0]["kffplus"].as_str().unwrap().contains("sharp-least"));
        let model = r#"{"states":[0,1,2],"relations":{"a":[[0,1],[1,2]]},"valuation":{"p":[2]}}"#;
        let v: serde_json::Value =
            serde_json::from_str(&evaluate(model, "sharp delta(p)", sigs).unwrap()).unwrap();
        assert_eq!(v["states"], json!([0, 1, 2]));
    }
}
