use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::cql::{to_xml, validate_grammar, CqlQuery};
use crate::error::QueryError;
use crate::model::{model_signature, Thesaurus, UmlModel};
use crate::modext::{extract_module, strip_disjoints, ThesaurusAxiomSet};
use crate::ontogen::{generate_ontology, AxiomSet};
use crate::reasoner::{classify, SubsumptionIndex, DEFAULT_MAX_NODES};

use super::mcc::{mcc_to_cql, to_mcc, MccComprehension};
use super::parser::parse_query;
use super::stages::{
    extract_data_values, extract_uml_limited, find_property_paths, reinsert_data_values, validate_semantics,
    Provenance, ValueBinding,
};
use super::QueryExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Stage {
    /// Model checks, module extraction, ontology generation and classification.
    Setup,
    Parse,
    UmlExtract,
    ValueExtract,
    Validate,
    PathFind,
    ValueReinsert,
    Mcc,
    Cql,
}

impl Stage {
    /// The eight rewriting stages in pipeline order.
    pub const PIPELINE: [Stage; 8] = [
        Stage::Parse,
        Stage::UmlExtract,
        Stage::ValueExtract,
        Stage::Validate,
        Stage::PathFind,
        Stage::ValueReinsert,
        Stage::Mcc,
        Stage::Cql,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Stage::Setup => "setup",
            Stage::Parse => "parse",
            Stage::UmlExtract => "umlExtract",
            Stage::ValueExtract => "valueExtract",
            Stage::Validate => "validate",
            Stage::PathFind => "pathFind",
            Stage::ValueReinsert => "valueReinsert",
            Stage::Mcc => "mcc",
            Stage::Cql => "cql",
        }
    }

    fn slot(self) -> Option<usize> {
        Stage::PIPELINE.iter().position(|s| *s == self)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{stage}: {source}")]
pub struct RewriteError {
    pub stage: Stage,
    #[source]
    pub source: QueryError,
}

impl RewriteError {
    fn at(stage: Stage) -> impl FnOnce(QueryError) -> RewriteError {
        move |source| RewriteError { stage, source }
    }
}

/// Wall-clock time spent in each pipeline stage, summed over candidates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageTimes {
    durations: [Duration; 8],
    /// The clock is only read when set, so untimed rewrites run on targets
    /// without one.
    enabled: bool,
}

impl StageTimes {
    pub fn get(&self, stage: Stage) -> Duration {
        stage.slot().map_or(Duration::ZERO, |i| self.durations[i])
    }

    pub fn total(&self) -> Duration {
        self.durations.iter().sum()
    }

    fn time<T>(&mut self, stage: Stage, f: impl FnOnce() -> T) -> T {
        if !self.enabled {
            return f();
        }
        let start = Instant::now();
        let out = f();
        if let Some(i) = stage.slot() {
            self.durations[i] += start.elapsed();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    #[default]
    All,
    First,
    Interactive,
}

impl std::str::FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Selection::All),
            "first" => Ok(Selection::First),
            "interactive" => Ok(Selection::Interactive),
            other => Err(format!("unknown selection `{other}` (expected all, first or interactive)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteOptions {
    pub max_nodes: usize,
    pub candidate_limit: usize,
    pub selection: Selection,
    /// Only single-edge associations; equivalent to `max_nodes = 2`.
    pub direct_only: bool,
}

impl Default for RewriteOptions {
    fn default() -> Self {
        RewriteOptions {
            max_nodes: DEFAULT_MAX_NODES,
            candidate_limit: 64,
            selection: Selection::All,
            direct_only: false,
        }
    }
}

/// Picks one of the ordered candidates, or `None` to abort.
pub type Chooser<'a> = dyn FnMut(&[RewriteOutput]) -> Option<usize> + 'a;

/// Intermediate results for one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutputs {
    pub parsed: QueryExpr,
    pub uml: QueryExpr,
    pub stripped: QueryExpr,
    pub bindings: Vec<ValueBinding>,
    pub expanded: QueryExpr,
    pub reinserted: QueryExpr,
    pub mcc: MccComprehension,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteOutput {
    pub cql: CqlQuery,
    pub xml: String,
    pub provenance: Provenance,
    pub stages: StageOutputs,
}

/// A model and thesaurus prepared for rewriting: the thesaurus module for the
/// model's annotations, the generated ontology (module included) and its
/// classification.
#[derive(Debug, Clone)]
pub struct Rewriter {
    model: UmlModel,
    module: ThesaurusAxiomSet,
    ontology: AxiomSet,
    index: SubsumptionIndex,
}

impl Rewriter {
    pub fn new(model: UmlModel, thesaurus: &Thesaurus) -> Result<Self, QueryError> {
        model.validate()?;
        model.validate_annotations(thesaurus)?;
        let module = extract_module(&strip_disjoints(thesaurus), &model_signature(&model));
        let mut ontology = generate_ontology(&model, Some(&module))?;
        ontology.merge(&module.to_axiom_set());
        let index = classify(&ontology)?;
        Ok(Rewriter { model, module, ontology, index })
    }

    pub fn model(&self) -> &UmlModel {
        &self.model
    }

    pub fn module(&self) -> &ThesaurusAxiomSet {
        &self.module
    }

    /// Generated ontology merged with the thesaurus module.
    pub fn ontology(&self) -> &AxiomSet {
        &self.ontology
    }

    pub fn index(&self) -> &SubsumptionIndex {
        &self.index
    }

    pub fn rewrite(&self, text: &str, options: &RewriteOptions) -> Result<Vec<RewriteOutput>, RewriteError> {
        self.run(text, options, None, &mut StageTimes::default())
    }

    pub fn rewrite_with_chooser(
        &self,
        text: &str,
        options: &RewriteOptions,
        chooser: &mut Chooser<'_>,
    ) -> Result<Vec<RewriteOutput>, RewriteError> {
        self.run(text, options, Some(chooser), &mut StageTimes::default())
    }

    /// Like [`Rewriter::rewrite`], also reporting per-stage times.
    pub fn rewrite_timed(
        &self,
        text: &str,
        options: &RewriteOptions,
    ) -> Result<(Vec<RewriteOutput>, StageTimes), RewriteError> {
        let mut times = StageTimes { enabled: true, ..StageTimes::default() };
        let out = self.run(text, options, None, &mut times)?;
        Ok((out, times))
    }

    fn run(
        &self,
        text: &str,
        options: &RewriteOptions,
        chooser: Option<&mut Chooser<'_>>,
        times: &mut StageTimes,
    ) -> Result<Vec<RewriteOutput>, RewriteError> {
        if options.selection == Selection::Interactive && chooser.is_none() {
            return Err(RewriteError { stage: Stage::Cql, source: QueryError::NoChooser });
        }
        let max_nodes = if options.direct_only { 2 } else { options.max_nodes };
        let limit = options.candidate_limit;

        let parsed = times.time(Stage::Parse, || parse_query(text)).map_err(RewriteError::at(Stage::Parse))?;
        let candidates = times
            .time(Stage::UmlExtract, || extract_uml_limited(&parsed, &self.index, Some(limit)))
            .map_err(RewriteError::at(Stage::UmlExtract))?;

        let mut outputs = Vec::new();
        let mut first_failure: Option<RewriteError> = None;
        let mut keep_failure = |e: RewriteError| -> Result<(), RewriteError> {
            if e.source.is_internal() {
                return Err(e);
            }
            first_failure.get_or_insert(e);
            Ok(())
        };

        for candidate in candidates {
            let uml = candidate.ast.clone();
            let (stripped, bindings) = times.time(Stage::ValueExtract, || extract_data_values(&candidate.ast));
            if let Err(r) = times.time(Stage::Validate, || validate_semantics(&stripped, &self.index)) {
                keep_failure(RewriteError { stage: Stage::Validate, source: r.into() })?;
                continue;
            }
            let stripped_candidate = super::CandidateQuery { ast: stripped.clone(), provenance: candidate.provenance };
            let expanded = match times
                .time(Stage::PathFind, || find_property_paths(&stripped_candidate, &self.index, max_nodes))
            {
                Ok(e) => e,
                Err(e) => {
                    keep_failure(RewriteError { stage: Stage::PathFind, source: e })?;
                    continue;
                }
            };
            if outputs.len() + expanded.len() > limit {
                return Err(RewriteError {
                    stage: Stage::PathFind,
                    source: QueryError::CandidateLimit { count: outputs.len() + expanded.len(), limit },
                });
            }
            for path_candidate in expanded {
                let reinserted = times
                    .time(Stage::ValueReinsert, || reinsert_data_values(&path_candidate.ast, &bindings))
                    .map_err(RewriteError::at(Stage::ValueReinsert))?;
                let mcc = times.time(Stage::Mcc, || to_mcc(&reinserted)).map_err(RewriteError::at(Stage::Mcc))?;
                let (cql, xml) = times
                    .time(Stage::Cql, || -> Result<_, QueryError> {
                        let cql = mcc_to_cql(&mcc, &self.model)?;
                        let report = validate_grammar(&cql);
                        if !report.is_valid() {
                            return Err(QueryError::Grammar(report.violations.join("; ")));
                        }
                        let xml = to_xml(&cql).map_err(|e| QueryError::Grammar(e.to_string()))?;
                        Ok((cql, xml))
                    })
                    .map_err(RewriteError::at(Stage::Cql))?;
                outputs.push(RewriteOutput {
                    cql,
                    xml,
                    provenance: path_candidate.provenance,
                    stages: StageOutputs {
                        parsed: parsed.clone(),
                        uml: uml.clone(),
                        stripped: stripped.clone(),
                        bindings: bindings.clone(),
                        expanded: path_candidate.ast,
                        reinserted,
                        mcc,
                    },
                });
            }
        }

        if outputs.is_empty() {
            return Err(first_failure.expect("a candidate exists and every candidate failed"));
        }
        match options.selection {
            Selection::All => Ok(outputs),
            Selection::First => {
                outputs.truncate(1);
                Ok(outputs)
            }
            Selection::Interactive => {
                let chooser = chooser.expect("checked above");
                match chooser(&outputs) {
                    Some(i) if i < outputs.len() => Ok(vec![outputs.swap_remove(i)]),
                    _ => Err(RewriteError { stage: Stage::Cql, source: QueryError::NoSelection }),
                }
            }
        }
    }
}

/// One-shot rewrite: prepares a [`Rewriter`] and runs `text` through it.
pub fn rewrite(
    text: &str,
    model: &UmlModel,
    thesaurus: &Thesaurus,
    options: &RewriteOptions,
) -> Result<Vec<RewriteOutput>, RewriteError> {
    Rewriter::new(model.clone(), thesaurus).map_err(RewriteError::at(Stage::Setup))?.rewrite(text, options)
}
