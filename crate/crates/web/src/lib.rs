//! Browser bindings for the demo page in `www/`. Every export takes plain
//! numbers or JSON text and returns JSON text; errors come back as
//! `{"error": "..."}`.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use ybx::classify::{class_rows, enumerate_order};
use ybx::{CycleSet, LeftBrace, ZGroupBraceSpec};

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct Stage {
    size: usize,
    classes: Vec<usize>,
}

/// Socle and retraction data of `B(p,k,t)` and of its cycle set `A_g`.
pub fn bpkt_report(p: u32, k: u32, t: u32, g: u32) -> Result<Value, String> {
    let brace = LeftBrace::bpkt(p as u64, k, t).map_err(err)?;
    if brace.order() > 729 {
        return Err(format!("B({p},{k},{t}) has {} elements; the page stops at 729", brace.order()));
    }
    let set = CycleSet::from_brace_uniconnected(&brace, g as usize).map_err(err)?;
    let tower = set.retraction_tower();
    let stages: Vec<Stage> = tower
        .sizes()
        .into_iter()
        .zip(tower.canonical_partitions())
        .map(|(size, classes)| Stage { size, classes })
        .collect();
    Ok(json!({
        "order": brace.order(),
        "socle": brace.socle().elements(),
        "lambda_orbits": brace.lambda_orbits(),
        "socle_tower": brace.socle_tower(),
        "mpl": tower.mpl(),
        "stages": stages,
    }))
}

/// The classification table for odd order `n`.
pub fn classify_report(n: u32) -> Result<Value, String> {
    if n > 243 {
        return Err("orders above 243 are left to the command-line tool".into());
    }
    let families = enumerate_order(n as u64).map_err(err)?;
    let rows = class_rows(&families);
    let specs: Vec<&ZGroupBraceSpec> = families.iter().map(|f| &f.spec).collect();
    Ok(json!({ "rows": rows, "specs": specs }))
}

/// Table of the uniconnected cycle set `A_g` of a spec, with its tower.
pub fn cycle_set_report(spec_json: &str, g: u32) -> Result<Value, String> {
    let spec: ZGroupBraceSpec = serde_json::from_str(spec_json).map_err(err)?;
    let brace = spec.build().map_err(err)?;
    if brace.order() > 243 {
        return Err("the table view stops at 243 elements".into());
    }
    let set = CycleSet::from_brace_uniconnected(&brace, g as usize).map_err(err)?;
    Ok(json!({
        "n": set.size(),
        "table": set.table(),
        "mpl": set.mpl(),
        "sizes": set.retraction_tower().sizes(),
        "formula_mpl": spec.mpl_formula().map_err(err)?,
    }))
}

#[wasm_bindgen]
pub fn bpkt(p: u32, k: u32, t: u32, g: u32) -> String {
    respond(bpkt_report(p, k, t, g))
}

#[wasm_bindgen]
pub fn classify(n: u32) -> String {
    respond(classify_report(n))
}

#[wasm_bindgen]
pub fn cycle_set(spec_json: &str, g: u32) -> String {
    respond(cycle_set_report(spec_json, g))
}
