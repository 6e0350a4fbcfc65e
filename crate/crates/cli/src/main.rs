//! `onco-rewriter` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O, 2 pipeline rejection, 3 internal
//! invariant violation.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use onco_rewriter::metrics::{path_metrics, stage_timings};
use onco_rewriter::model::{load_model, load_thesaurus, model_signature, Thesaurus, UmlModel};
use onco_rewriter::modext::{extract_module, strip_disjoints};
use onco_rewriter::ontogen::{generate_ontology, serialize_axioms};
use onco_rewriter::query::{RenderStyle, RewriteError, RewriteOptions, RewriteOutput, Rewriter, Selection, Stage};
use onco_rewriter::reasoner::DEFAULT_MAX_NODES;
use onco_rewriter::synth::{benchmark_model, benchmark_queries};
use onco_rewriter::QueryError;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "onco-rewriter",
    version,
    about = "Rewrite thesaurus-level queries over annotated UML models into CQL"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the model ontology and the thesaurus module.
    Ontogen(SourceArgs),
    /// Extract the thesaurus module for the model's annotation signature.
    Module(SourceArgs),
    /// Classify the model ontology merged with its thesaurus module.
    Classify(SourceArgs),
    /// Rewrite a query into one or more CQL documents.
    Rewrite(RewriteArgs),
    /// Path metrics of the model's association graph.
    Metrics(MetricsArgs),
    /// Per-stage timings over a query suite.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    thesaurus: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory for output files; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct RewriteArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    thesaurus: PathBuf,
    /// Query text, `@FILE` to read it from a file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    query: String,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES, value_parser = node_cap)]
    max_nodes: usize,
    #[arg(long, default_value_t = 64, value_parser = positive)]
    candidate_limit: usize,
    #[arg(long, default_value = "all", value_parser = selection)]
    selection: Selection,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES, value_parser = node_cap)]
    max_nodes: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Model to benchmark; the built-in 40-class model when absent.
    #[arg(long, requires_all = ["thesaurus", "query"])]
    model: Option<PathBuf>,
    #[arg(long, requires = "model")]
    thesaurus: Option<PathBuf>,
    /// `@FILE` with one query per line.
    #[arg(long, requires = "model")]
    query: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES, value_parser = node_cap)]
    max_nodes: usize,
    #[arg(long, default_value_t = 64, value_parser = positive)]
    candidate_limit: usize,
    #[arg(long, default_value_t = 20, value_parser = positive)]
    repetitions: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Xml,
    Axioms,
    Csv,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn node_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("`{s}` is not an integer of at least 2")),
    }
}

fn selection(s: &str) -> Result<Selection, String> {
    s.parse()
}

enum Failure {
    Usage(anyhow::Error),
    Rejected(RewriteError),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<RewriteError> for Failure {
    fn from(e: RewriteError) -> Self {
        if e.source.is_internal() {
            Failure::Internal(e.into())
        } else {
            Failure::Rejected(e)
        }
    }
}

fn setup_error(e: impl Into<QueryError>) -> Failure {
    RewriteError { stage: Stage::Setup, source: e.into() }.into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Ontogen(args) => cmd_ontogen(&args),
        Command::Module(args) => cmd_module(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Rewrite(args) => cmd_rewrite(&args),
        Command::Metrics(args) => cmd_metrics(&args),
        Command::Bench(args) => cmd_bench(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Rejected(e)) => {
            eprintln!("rejected at {e}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{}`", path.display()))
}

fn read_model(path: &Path) -> anyhow::Result<UmlModel> {
    load_model(&read(path)?).with_context(|| format!("invalid model `{}`", path.display()))
}

fn read_thesaurus(path: &Path) -> anyhow::Result<Thesaurus> {
    load_thesaurus(&read(path)?).with_context(|| format!("invalid thesaurus `{}`", path.display()))
}

fn read_query(arg: &str) -> anyhow::Result<String> {
    let text = if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("cannot read the query from standard input")?;
        s
    } else if let Some(path) = arg.strip_prefix('@') {
        read(Path::new(path))?
    } else {
        arg.to_string()
    };
    let text = text.trim().to_string();
    if text.is_empty() {
        bail!("empty query");
    }
    Ok(text)
}

fn check_format(output: &OutputArgs, allowed: &[Format]) -> anyhow::Result<()> {
    match output.format {
        Some(f) if !allowed.contains(&f) => {
            let name = f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            bail!("format `{name}` is not available for this command")
        }
        _ => Ok(()),
    }
}

/// Writes `files` under the output directory, or concatenates them to
/// standard output when none was given.
fn emit(output: &OutputArgs, files: &[(String, String)]) -> anyhow::Result<()> {
    match &output.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create `{}`", dir.display()))?;
            for (name, content) in files {
                let path = dir.join(name);
                fs::write(&path, content).with_context(|| format!("cannot write `{}`", path.display()))?;
            }
        }
        None => {
            let mut stdout = io::stdout().lock();
            let written = files
                .iter()
                .try_for_each(|(_, content)| stdout.write_all(content.as_bytes()))
                .and_then(|()| stdout.flush());
            match written {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn cmd_ontogen(args: &SourceArgs) -> Result<(), Failure> {
    check_format(&args.output, &[Format::Axioms])?;
    let model = read_model(&args.model)?;
    let thesaurus = read_thesaurus(&args.thesaurus)?;
    model.validate_annotations(&thesaurus).map_err(setup_error)?;
    let module = extract_module(&strip_disjoints(&thesaurus), &model_signature(&model));
    let ontology = generate_ontology(&model, Some(&module)).map_err(setup_error)?;
    emit(
        &args.output,
        &[
            ("ontology.axioms".into(), serialize_axioms(&ontology)),
            ("module.axioms".into(), serialize_axioms(&module.to_axiom_set())),
        ],
    )?;
    Ok(())
}

fn cmd_module(args: &SourceArgs) -> Result<(), Failure> {
    check_format(&args.output, &[Format::Axioms])?;
    let model = read_model(&args.model)?;
    let thesaurus = read_thesaurus(&args.thesaurus)?;
    model.validate_annotations(&thesaurus).map_err(setup_error)?;
    let module = extract_module(&strip_disjoints(&thesaurus), &model_signature(&model));
    emit(&args.output, &[("module.axioms".into(), serialize_axioms(&module.to_axiom_set()))])?;
    Ok(())
}

fn prepare(model: &Path, thesaurus: &Path) -> Result<Rewriter, Failure> {
    let model = read_model(model)?;
    let thesaurus = read_thesaurus(thesaurus)?;
    Rewriter::new(model, &thesaurus).map_err(setup_error)
}

fn cmd_classify(args: &SourceArgs) -> Result<(), Failure> {
    check_format(&args.output, &[Format::Axioms])?;
    let rewriter = prepare(&args.model, &args.thesaurus)?;
    let index = rewriter.index();
    let mut out = String::new();
    for class in index.classes() {
        let _ = writeln!(out, "class {class}");
        let supers: Vec<&str> = index.subsumers(class).iter().filter(|s| *s != class).map(String::as_str).collect();
        if !supers.is_empty() {
            let _ = writeln!(out, "  subClassOf {}", supers.join(" "));
        }
        for attribute in index.attributes_of(class) {
            let _ = writeln!(out, "  attribute {attribute}");
        }
        for edge in index.edges(class) {
            let _ = writeln!(out, "  association {} {}", edge.property, edge.range);
        }
    }
    emit(&args.output, &[("classification.txt".into(), out)])?;
    Ok(())
}

fn describe(output: &RewriteOutput) -> String {
    let mut parts: Vec<String> =
        output.provenance.concepts.iter().map(|c| format!("{}={}", c.concept, c.chosen)).collect();
    for path in &output.provenance.paths {
        let roles: Vec<&str> = path.steps.iter().map(|s| s.role.as_str()).collect();
        parts.push(format!("{} -{}-> {}", path.from, roles.join("."), path.to));
    }
    parts.join("; ")
}

fn prompt(candidates: &[RewriteOutput]) -> Option<usize> {
    let mut stderr = io::stderr().lock();
    let _ = writeln!(stderr, "{} candidate queries:", candidates.len());
    for (i, c) in candidates.iter().enumerate() {
        let _ = writeln!(stderr, "  [{}] {}", i + 1, describe(c));
    }
    let _ = write!(stderr, "choose 1-{}: ", candidates.len());
    let _ = stderr.flush();
    let mut line = String::new();
    io::stdin().lock().read_line(&mut line).ok()?;
    line.trim().parse::<usize>().ok().filter(|n| (1..=candidates.len()).contains(n)).map(|n| n - 1)
}

fn cmd_rewrite(args: &RewriteArgs) -> Result<(), Failure> {
    check_format(&args.output, &[Format::Xml])?;
    if args.selection == Selection::Interactive && args.query == "-" {
        return Err(
            anyhow!("interactive selection reads the choice from standard input; pass the query with --query").into()
        );
    }
    let text = read_query(&args.query)?;
    let rewriter = prepare(&args.model, &args.thesaurus)?;
    let options = RewriteOptions {
        max_nodes: args.max_nodes,
        candidate_limit: args.candidate_limit,
        selection: args.selection,
        direct_only: false,
    };
    let outputs = match args.selection {
        Selection::Interactive => rewriter.rewrite_with_chooser(&text, &options, &mut prompt)?,
        _ => rewriter.rewrite(&text, &options)?,
    };

    let width = outputs.len().to_string().len().max(2);
    let mut files = Vec::with_capacity(outputs.len() + 1);
    let mut records = Vec::with_capacity(outputs.len());
    for (i, output) in outputs.iter().enumerate() {
        let name = format!("query-{:0width$}.xml", i + 1);
        let s = &output.stages;
        records.push(json!({
            "file": name,
            "concepts": output.provenance.concepts,
            "paths": output.provenance.paths,
            "stages": {
                "umlExtract": s.uml.render(RenderStyle::Abstract),
                "valueExtract": s.stripped.render(RenderStyle::Abstract),
                "pathFind": s.expanded.render(RenderStyle::Concrete),
                "valueReinsert": s.reinserted.render(RenderStyle::Concrete),
                "mcc": s.mcc.to_string(),
            },
        }));
        files.push((name, output.xml.clone()));
    }
    if args.output.out.is_some() {
        let provenance = json!({ "query": text, "candidates": records });
        let mut body = serde_json::to_string_pretty(&provenance).map_err(|e| Failure::Internal(e.into()))?;
        body.push('\n');
        files.push(("provenance.json".into(), body));
    }
    emit(&args.output, &files)?;
    Ok(())
}

fn cmd_metrics(args: &MetricsArgs) -> Result<(), Failure> {
    check_format(&args.output, &[Format::Csv])?;
    let model = read_model(&args.model)?;
    let metrics = path_metrics(&model, args.max_nodes);
    let (name, body) = match args.output.format {
        Some(Format::Csv) => ("metrics.csv", metrics.to_csv()),
        _ => ("metrics.txt", metrics.to_text()),
    };
    emit(&args.output, &[(name.into(), body)])?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    check_format(&args.output, &[Format::Csv])?;
    let (rewriter, queries) = match (&args.model, &args.thesaurus, &args.query) {
        (Some(model), Some(thesaurus), Some(query)) => {
            let Some(path) = query.strip_prefix('@') else {
                return Err(anyhow!("bench expects --query @FILE with one query per line").into());
            };
            let suite = read(Path::new(path))?;
            let queries: Vec<String> = suite
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            (prepare(model, thesaurus)?, queries)
        }
        _ => {
            let (model, thesaurus) = benchmark_model();
            let (one, two) = benchmark_queries();
            (Rewriter::new(model, &thesaurus).map_err(setup_error)?, one.into_iter().chain(two).collect())
        }
    };
    let options = RewriteOptions {
        max_nodes: args.max_nodes,
        candidate_limit: args.candidate_limit,
        ..RewriteOptions::default()
    };
    let report = stage_timings(&queries, &rewriter, &options, args.repetitions);
    let (name, body) = match args.output.format {
        Some(Format::Csv) => ("bench.csv", report.to_csv()),
        _ => ("bench.txt", report.to_text()),
    };
    emit(&args.output, &[(name.into(), body)])?;
    Ok(())
}
