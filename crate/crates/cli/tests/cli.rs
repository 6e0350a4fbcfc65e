use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use onco_rewriter::cql::same_query;
use onco_rewriter::ontogen::{el_conformance_report, parse_axioms};

const BIN: &str = env!("CARGO_BIN_EXE_onco-rewriter");
const DIAMOND_QUERY: &str =
    r#"Sample and hasAssociation some (Study and hasAttribute some (Title and hasValue value "Cohort%"))"#;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // The binary may exit before reading stdin, e.g. on a usage error.
    if let Err(e) = child.stdin.take().unwrap().write_all(input.as_bytes()) {
        assert_eq!(e.kind(), std::io::ErrorKind::BrokenPipe, "{e}");
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn cabio(command: &str) -> Vec<String> {
    vec![command.into(), "--model".into(), fixture("cabio.json"), "--thesaurus".into(), fixture("cabio.thesaurus")]
}

fn args(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn ontogen_writes_two_el_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = cabio("ontogen");
    a.extend(["--out".into(), dir.path().display().to_string()]);
    let out = run(&args(&a));
    assert!(out.status.success(), "{}", stderr(&out));
    for name in ["ontology.axioms", "module.axioms"] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let axioms = parse_axioms(&text).unwrap();
        assert!(!axioms.is_empty(), "{name}");
        assert!(el_conformance_report(&axioms).is_conformant(), "{name}");
    }
}

#[test]
fn missing_model_is_usage_error() {
    let out = run(&["ontogen", "--model", "/nonexistent/model.json", "--thesaurus", &fixture("cabio.thesaurus")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/nonexistent/model.json"));
    let out = run(&["ontogen", "--thesaurus", &fixture("cabio.thesaurus")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--model"));
}

#[test]
fn bad_flags_are_usage_errors() {
    let mut a = cabio("rewrite");
    a.extend(["--query".into(), "Gene".into(), "--max-nodes".into(), "1".into()]);
    assert_eq!(run(&args(&a)).status.code(), Some(1));
    let mut a = cabio("rewrite");
    a.extend(["--query".into(), "Gene".into(), "--candidate-limit".into(), "0".into()]);
    assert_eq!(run(&args(&a)).status.code(), Some(1));
    let mut a = cabio("rewrite");
    a.extend(["--query".into(), "Gene".into(), "--selection".into(), "best".into()]);
    assert_eq!(run(&args(&a)).status.code(), Some(1));
    let mut a = cabio("classify");
    a.extend(["--format".into(), "csv".into()]);
    assert_eq!(run(&args(&a)).status.code(), Some(1));
}

#[test]
fn rewrite_reproduces_listing_from_file_argument_and_stdin() {
    let listing = fs::read_to_string(fixture("cabio_query_c.xml")).unwrap();
    let query = fs::read_to_string(fixture("cabio_query_c.txt")).unwrap();

    let mut a = cabio("rewrite");
    a.extend(["--query".into(), format!("@{}", fixture("cabio_query_c.txt"))]);
    let from_file = run(&args(&a));
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert!(same_query(&stdout(&from_file), &listing).unwrap());

    let mut a = cabio("rewrite");
    a.extend(["--query".into(), query.trim().to_string()]);
    let from_arg = run(&args(&a));
    assert_eq!(from_arg.stdout, from_file.stdout);

    let from_stdin = run_with_stdin(&args(&cabio("rewrite")), &query);
    assert_eq!(from_stdin.stdout, from_file.stdout);
}

#[test]
fn rewrite_writes_candidates_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "rewrite",
        "--model",
        &fixture("diamond.json"),
        "--thesaurus",
        &fixture("diamond.thesaurus"),
        "--query",
        DIAMOND_QUERY,
        "--out",
        &dir.path().display().to_string(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["provenance.json", "query-01.xml", "query-02.xml"]);
    let provenance: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("provenance.json")).unwrap()).unwrap();
    let candidates = provenance["candidates"].as_array().unwrap();
    assert_eq!(candidates.len(), 2);
    let roles: Vec<Vec<&str>> = candidates
        .iter()
        .map(|c| c["paths"][0]["steps"].as_array().unwrap().iter().map(|s| s["role"].as_str().unwrap()).collect())
        .collect();
    assert_eq!(roles, [["assay", "study"], ["batch", "study"]]);
    assert_eq!(candidates[1]["file"], "query-02.xml");
    assert!(fs::read_to_string(dir.path().join("query-02.xml")).unwrap().contains("roleName=\"batch\""));
}

#[test]
fn rejection_exits_two_with_stage_label() {
    let mut a = cabio("rewrite");
    a.extend(["--query".into(), "Chromosome and hasAttribute some Gene_Symbol".into()]);
    let out = run(&args(&a));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("validate"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let mut a = cabio("rewrite");
    a.extend(["--query".into(), "Gene and".into()]);
    let out = run(&args(&a));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse"));
}

#[test]
fn setup_failure_is_labelled() {
    let out = run(&[
        "rewrite",
        "--model",
        &fixture("cabio.json"),
        "--thesaurus",
        &fixture("diamond.thesaurus"),
        "--query",
        "Gene",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("setup"), "{}", stderr(&out));
}

#[test]
fn interactive_selection_prompts_and_emits_choice() {
    let base = [
        "rewrite",
        "--model",
        &fixture("diamond.json"),
        "--thesaurus",
        &fixture("diamond.thesaurus"),
        "--query",
        DIAMOND_QUERY,
        "--selection",
        "interactive",
    ];
    let out = run_with_stdin(&base, "2\n");
    assert!(out.status.success(), "{}", stderr(&out));
    let prompt = stderr(&out);
    assert!(prompt.contains("[1]") && prompt.contains("assay.study"), "{prompt}");
    assert!(prompt.contains("[2]") && prompt.contains("batch.study"), "{prompt}");
    let xml = stdout(&out);
    assert!(xml.contains("roleName=\"batch\"") && !xml.contains("roleName=\"assay\""));

    let out = run_with_stdin(&base, "9\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn interactive_selection_needs_query_flag() {
    let out = run_with_stdin(
        &[
            "rewrite",
            "--model",
            &fixture("diamond.json"),
            "--thesaurus",
            &fixture("diamond.thesaurus"),
            "--selection",
            "interactive",
        ],
        DIAMOND_QUERY,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn metrics_rows() {
    let out = run(&["metrics", "--model", &fixture("cabio.json"), "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "maxNodes,longestPath,journeyCount,pathCount,avgPathsPerJourney,avgNodesPerPath\n16,3,11,11,1.000000,2.363636\n"
    );

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    fs::write(
        &empty,
        r#"{"project":"empty","version":"0","packagePrefix":"org.example.empty","classes":[],"associations":[]}"#,
    )
    .unwrap();
    let out = run(&["metrics", "--model", &empty.display().to_string(), "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).ends_with("\n16,0,0,0,0.000000,0.000000\n"));
}

#[test]
fn bench_csv_has_every_stage() {
    let out = run(&["bench", "--repetitions", "1", "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("query,stage,mean_us,pathLength"));
    let stages: std::collections::BTreeSet<&str> = lines.map(|l| l.rsplit(',').nth(2).unwrap()).collect();
    assert_eq!(stages.len(), 8, "{stages:?}");
    assert_eq!(text.lines().count(), 1 + 10 * 8);
}

#[test]
fn bench_reads_a_query_suite() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.txt");
    fs::write(
        &suite,
        format!("# cabio suite\n{}\nGene\n", fs::read_to_string(fixture("cabio_query_c.txt")).unwrap().trim()),
    )
    .unwrap();
    let mut a = cabio("bench");
    a.extend([
        "--query".into(),
        format!("@{}", suite.display()),
        "--repetitions".into(),
        "1".into(),
        "--format".into(),
        "csv".into(),
    ]);
    let out = run(&args(&a));
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 1 + 2 * 8);
}

#[test]
fn classify_lists_inherited_edges() {
    let out = run(&args(&cabio("classify")));
    assert!(out.status.success());
    let text = stdout(&out);
    let block: Vec<&str> = text.split("class ").filter(|b| b.starts_with("c:SNPCytogeneticLocation\n")).collect();
    assert_eq!(block.len(), 1);
    assert!(block[0].contains("association c:Location_chromosome_Chromosome c:Chromosome"));
    assert!(block[0].contains("c:CytogeneticLocation"));
}
