use onco_rewriter_web::{fixture, fixture_names, metrics_value, ontology_value, rewrite_value};

fn cabio() -> (String, String) {
    (fixture("cabio.json").unwrap(), fixture("cabio.thesaurus").unwrap())
}

#[test]
fn every_listed_fixture_is_bundled() {
    let names: Vec<String> = serde_json::from_str(&fixture_names()).unwrap();
    assert!(names.len() >= 6);
    for name in names {
        assert!(fixture(&name).is_some_and(|t| !t.is_empty()), "{name}");
    }
    assert!(fixture("missing.json").is_none());
}

#[test]
fn rewrite_reports_stages_for_query_c() {
    let (model, thesaurus) = cabio();
    let v = rewrite_value(&model, &thesaurus, &fixture("cabio_query_c.txt").unwrap(), 16);
    assert_eq!(v["ok"], true, "{v}");
    let candidates = v["candidates"].as_array().unwrap();
    assert_eq!(candidates.len(), 1);
    let stages = candidates[0]["stages"].as_array().unwrap();
    let labels: Vec<&str> = stages.iter().map(|s| s[0].as_str().unwrap()).collect();
    assert_eq!(labels, ["parse", "umlExtract", "valueExtract", "pathFind", "valueReinsert", "mcc"]);
    assert!(stages[3][1]
        .as_str()
        .unwrap()
        .contains("hasAssociation(relativeLocationCollection) some c:GeneRelativeLocation"));
    assert!(candidates[0]["xml"].as_str().unwrap().contains(r#"value="TGFB1""#));
}

#[test]
fn rewrite_failure_names_the_stage() {
    let (model, thesaurus) = cabio();
    let v = rewrite_value(&model, &thesaurus, "Chromosome and hasAttribute some Gene_Symbol", 16);
    assert_eq!((v["ok"].as_bool(), v["stage"].as_str()), (Some(false), Some("validate")));
    let v = rewrite_value("{", &thesaurus, "Gene", 16);
    assert_eq!(v["stage"], "setup");
}

#[test]
fn specimen_example_rewrites() {
    let v = rewrite_value(
        &fixture("specimen.json").unwrap(),
        &fixture("cabio.thesaurus").unwrap(),
        &fixture("specimen.query").unwrap(),
        16,
    );
    assert_eq!(v["ok"], true, "{v}");
    assert!(v["candidates"][0]["xml"].as_str().unwrap().contains("IS_NOT_NULL"));
}

#[test]
fn ontology_is_el_and_includes_module() {
    let (model, thesaurus) = cabio();
    let v = ontology_value(&model, &thesaurus);
    assert_eq!(v["ok"], true, "{v}");
    assert_eq!(v["elConformant"], true);
    assert!(v["ontology"].as_str().unwrap().contains("SubClassOf(c:Gene u:UMLClass)"));
    assert!(v["module"].as_str().unwrap().contains("SubClassOf(n:Gene_Symbol n:Name)"));
    assert!(v["moduleAxioms"].as_u64().unwrap() > 0);
}

#[test]
fn metrics_match_cli_values() {
    let v = metrics_value(&fixture("cabio.json").unwrap(), 16);
    assert_eq!((v["longestPath"].as_u64(), v["journeys"].as_u64(), v["paths"].as_u64()), (Some(3), Some(11), Some(11)));
    let v = metrics_value(&fixture("diamond.json").unwrap(), 1);
    assert_eq!(v["maxNodes"], 2);
}
