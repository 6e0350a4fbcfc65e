//! WebAssembly bindings for the browser demo. Every export takes plain text
//! inputs and returns a JSON document with an `ok` flag.

use onco_rewriter::metrics::path_metrics;
use onco_rewriter::model::{load_model, load_thesaurus, model_signature};
use onco_rewriter::modext::{extract_module, strip_disjoints};
use onco_rewriter::ontogen::{el_conformance_report, generate_ontology, serialize_axioms};
use onco_rewriter::query::{RenderStyle, RewriteOptions, Rewriter, Stage};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const FIXTURES: [(&str, &str); 7] = [
    ("cabio.json", include_str!("../../../fixtures/cabio.json")),
    ("cabio.thesaurus", include_str!("../../../fixtures/cabio.thesaurus")),
    ("cabio_query_c.txt", include_str!("../../../fixtures/cabio_query_c.txt")),
    ("diamond.json", include_str!("../../../fixtures/diamond.json")),
    ("diamond.thesaurus", include_str!("../../../fixtures/diamond.thesaurus")),
    ("specimen.json", include_str!("../../../fixtures/specimen.json")),
    ("specimen.query", "Specimen and hasAttribute some Identifier"),
];

fn failure(stage: Stage, message: impl ToString) -> Value {
    json!({ "ok": false, "stage": stage.label(), "error": message.to_string() })
}

/// Bundled example input by file name.
#[wasm_bindgen]
pub fn fixture(name: &str) -> Option<String> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, text)| text.to_string())
}

#[wasm_bindgen]
pub fn fixture_names() -> String {
    json!(FIXTURES.iter().map(|(n, _)| *n).collect::<Vec<_>>()).to_string()
}

/// Rewrites `query`, reporting every candidate with its stage outputs.
#[wasm_bindgen]
pub fn rewrite(model: &str, thesaurus: &str, query: &str, max_nodes: usize) -> String {
    rewrite_value(model, thesaurus, query, max_nodes).to_string()
}

/// Generated ontology and thesaurus module as functional-syntax documents.
#[wasm_bindgen]
pub fn ontology(model: &str, thesaurus: &str) -> String {
    ontology_value(model, thesaurus).to_string()
}

#[wasm_bindgen]
pub fn metrics(model: &str, max_nodes: usize) -> String {
    metrics_value(model, max_nodes).to_string()
}

pub fn rewrite_value(model: &str, thesaurus: &str, query: &str, max_nodes: usize) -> Value {
    let model = match load_model(model) {
        Ok(m) => m,
        Err(e) => return failure(Stage::Setup, e),
    };
    let thesaurus = match load_thesaurus(thesaurus) {
        Ok(t) => t,
        Err(e) => return failure(Stage::Setup, e),
    };
    let rewriter = match Rewriter::new(model, &thesaurus) {
        Ok(r) => r,
        Err(e) => return failure(Stage::Setup, e),
    };
    let options = RewriteOptions { max_nodes: max_nodes.max(2), ..RewriteOptions::default() };
    match rewriter.rewrite(query, &options) {
        Ok(outputs) => {
            let candidates: Vec<Value> = outputs
                .iter()
                .map(|o| {
                    let s = &o.stages;
                    json!({
                        "xml": o.xml,
                        "concepts": o.provenance.concepts,
                        "paths": o.provenance.paths,
                        "stages": [
                            ["parse", s.parsed.render(RenderStyle::Abstract)],
                            ["umlExtract", s.uml.render(RenderStyle::Abstract)],
                            ["valueExtract", s.stripped.render(RenderStyle::Abstract)],
                            ["pathFind", s.expanded.render(RenderStyle::Concrete)],
                            ["valueReinsert", s.reinserted.render(RenderStyle::Concrete)],
                            ["mcc", s.mcc.to_string()],
                        ],
                    })
                })
                .collect();
            json!({ "ok": true, "candidates": candidates })
        }
        Err(e) => failure(e.stage, e.source),
    }
}

pub fn ontology_value(model: &str, thesaurus: &str) -> Value {
    let model = match load_model(model) {
        Ok(m) => m,
        Err(e) => return failure(Stage::Setup, e),
    };
    let thesaurus = match load_thesaurus(thesaurus) {
        Ok(t) => t,
        Err(e) => return failure(Stage::Setup, e),
    };
    if let Err(e) = model.validate_annotations(&thesaurus) {
        return failure(Stage::Setup, e);
    }
    let module = extract_module(&strip_disjoints(&thesaurus), &model_signature(&model));
    let generated = match generate_ontology(&model, Some(&module)) {
        Ok(o) => o,
        Err(e) => return failure(Stage::Setup, e),
    };
    let module_axioms = module.to_axiom_set();
    let mut merged = generated.clone();
    merged.merge(&module_axioms);
    let report = el_conformance_report(&merged);
    json!({
        "ok": true,
        "ontology": serialize_axioms(&generated),
        "module": serialize_axioms(&module_axioms),
        "ontologyAxioms": generated.len(),
        "moduleAxioms": module_axioms.len(),
        "elConformant": report.is_conformant(),
        "violations": report.violations,
    })
}

pub fn metrics_value(model: &str, max_nodes: usize) -> Value {
    let model = match load_model(model) {
        Ok(m) => m,
        Err(e) => return failure(Stage::Setup, e),
    };
    let m = path_metrics(&model, max_nodes.max(2));
    json!({
        "ok": true,
        "maxNodes": m.max_nodes,
        "longestPath": m.longest_path,
        "journeys": m.journey_count,
        "paths": m.path_count,
        "avgPathsPerJourney": m.avg_paths_per_journey(),
        "avgNodesPerPath": m.avg_nodes_per_path(),
    })
}
