use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("malformed model document at {line}:{column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
    #[error("{location}: duplicate class `{name}`")]
    DuplicateClass { name: String, location: String },
    #[error("{location}: duplicate attribute `{attribute}` in class `{class}`")]
    DuplicateAttribute { class: String, attribute: String, location: String },
    #[error("{location}: association endpoint `{name}` is not a declared class")]
    DanglingEndpoint { name: String, location: String },
    #[error("{location}: superclass `{name}` is not a declared class")]
    UnknownSuperclass { name: String, location: String },
    #[error("{location}: role `{role}` declared twice on class `{source_class}`")]
    DuplicateRole { source_class: String, role: String, location: String },
    #[error("{location}: generalization cycle through `{name}`")]
    GeneralizationCycle { name: String, location: String },
    #[error("{location}: concept `{name}` is not in the thesaurus")]
    UnknownConcept { name: String, location: String },
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("line {line}: concept `{name}` used before being declared with CONCEPT")]
    UndeclaredConcept { name: String, line: usize },
    #[error("subsumption cycle through `{name}`")]
    SubsumptionCycle { name: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("annotation concept `{concept}` on `{element}` is not in the thesaurus module signature")]
    ConceptNotInModule { concept: String, element: String },
    #[error("generated name `{name}` is produced by both {first} and {second}")]
    NameCollision { name: String, first: String, second: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasonerError {
    #[error("axiom outside the supported EL fragment: {0}")]
    NonEl(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("path node cap must be at least 2, got {0}")]
    NodeCap(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CqlError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("root element must be CQLQuery in namespace {expected}, found `{found}`")]
    Namespace { expected: &'static str, found: String },
    #[error("unexpected element `{element}` inside `{parent}`")]
    UnknownElement { element: String, parent: String },
    #[error("unexpected attribute `{attribute}` on `{element}`")]
    UnknownAttribute { attribute: String, element: String },
    #[error("`{element}` is missing required `{what}`")]
    Missing { element: String, what: String },
    #[error("invalid value `{value}` for `{what}`")]
    InvalidValue { what: String, value: String },
    #[error("query violates the CQL grammar: {0}")]
    Grammar(String),
}

/// Why a resolved query cannot be satisfied by the model.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("`{attribute}` is not an attribute of `{class}`")]
    AttributeNotOf { class: String, attribute: String },
    #[error("no association path from `{from}` to `{to}`")]
    Unreachable { from: String, to: String },
    #[error("conjunction names several UML classes: {}", .0.join(", "))]
    ConflictingClasses(Vec<String>),
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown keyword `{word}` at offset {position}")]
    UnknownKeyword { position: usize, word: String },
    #[error("no UML class or attribute is annotated with `{concept}`")]
    NoUmlCandidate { concept: String },
    #[error("query rejected: {0}")]
    Rejected(#[from] Rejection),
    #[error("no association path from `{from}` to `{to}` within {max_nodes} nodes")]
    NoPath { from: String, to: String, max_nodes: usize },
    #[error("value binding for attribute #{attribute} does not resolve")]
    BindingUnresolved { attribute: usize },
    #[error("malformed query tree: {0}")]
    Malformed(String),
    #[error("comprehension does not match the model: {0}")]
    Mismatch(String),
    #[error("{count} candidate queries exceed the limit of {limit}")]
    CandidateLimit { count: usize, limit: usize },
    #[error("interactive selection requested without a chooser")]
    NoChooser,
    #[error("no candidate was selected")]
    NoSelection,
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error("generated CQL violates the grammar: {0}")]
    Grammar(String),
}

impl QueryError {
    /// Errors that signal a broken internal invariant rather than a query the
    /// model cannot answer.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            QueryError::Grammar(_)
                | QueryError::BindingUnresolved { .. }
                | QueryError::Reasoner(ReasonerError::NonEl(_))
        )
    }
}
