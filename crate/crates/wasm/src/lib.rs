//! Browser bindings. Each export takes system text and returns a JSON string.

use chordal_td::polygraph::{chordal_complete, find_peo, sparsity, system_graph, to_dot, treewidth_bound};
use chordal_td::{decompose as wang, parse_system_in, render_tree, ChordalityCertificate, CoefficientField};
use chordal_td::{DecomposeOptions, PivotStrategy, PolySystem, Var};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn names(vars: &[Var], system: &PolySystem) -> Vec<String> {
    vars.iter().map(|&v| system.var_name(v)).collect()
}

fn load(text: &str, field: &str) -> Result<PolySystem, String> {
    let field = CoefficientField::parse(field).map_err(|e| e.to_string())?;
    parse_system_in(text, field).map_err(|e| e.to_string())
}

/// Graph, chordality certificate, sparsity and DOT of a system over Q.
pub fn analyze_json(text: &str) -> Result<String, String> {
    let s = load(text, "q")?;
    let g = system_graph(&s, true);
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|&(a, b)| json!([s.var_name(a), s.var_name(b), g.weight(a, b).unwrap_or(1)]))
        .collect();
    let chordality = match find_peo(&g.unweighted()) {
        ChordalityCertificate::Chordal { peo } => json!({"chordal": true, "peo": names(&peo, &s)}),
        ChordalityCertificate::NotChordal { cycle } => json!({"chordal": false, "cycle": names(&cycle, &s)}),
    };
    let sparsity = match sparsity(&s.polys) {
        Ok(sp) => {
            let (v, w) = sp.as_f64();
            json!({"s_v": sp.s_v.to_string(), "s_v_w": sp.s_v_w.to_string(), "s_v_decimal": v, "s_v_w_decimal": w})
        }
        Err(e) => json!({"error": e.to_string()}),
    };
    let vertices: Vec<String> = g.vertices().iter().map(|&v| s.var_name(v)).collect();
    Ok(json!({
        "vertices": vertices,
        "edges": edges,
        "chordality": chordality,
        "sparsity": sparsity,
        "dot": to_dot(&g, Some(&s.vars)),
    })
    .to_string())
}

/// Greedy chordal completion with fill edges, the resulting PEO and treewidth.
pub fn complete_json(text: &str) -> Result<String, String> {
    let s = load(text, "q")?;
    let g = system_graph(&s, false);
    let c = chordal_complete(&g, None).map_err(|e| e.to_string())?;
    let fill: Vec<Value> = c.fill.iter().map(|&(a, b)| json!([s.var_name(a), s.var_name(b)])).collect();
    let exact = if g.num_vertices() <= 10 { treewidth_bound(&g, true).ok() } else { None };
    Ok(json!({
        "fill": fill,
        "peo": names(&c.order, &s),
        "treewidth_bound": treewidth_bound(&g, false).map_err(|e| e.to_string())?,
        "treewidth_exact": exact,
    })
    .to_string())
}

/// Wang's method; returns the decomposition tree document.
pub fn decompose_json(text: &str, field: &str, pivot: &str) -> Result<String, String> {
    let s = load(text, field)?;
    let strategy: PivotStrategy = pivot.parse().map_err(|e: chordal_td::Error| e.to_string())?;
    let tree = wang(&s, strategy, DecomposeOptions::default()).map_err(|e| e.to_string())?;
    Ok(render_tree(&tree))
}

#[wasm_bindgen]
pub fn analyze(text: &str) -> Result<String, JsValue> {
    analyze_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn complete(text: &str) -> Result<String, JsValue> {
    complete_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decompose(text: &str, field: &str, pivot: &str) -> Result<String, JsValue> {
    decompose_json(text, field, pivot).map_err(|e| JsValue::from_str(&e))
}
