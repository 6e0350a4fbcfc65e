//! Rewrites concept-level queries over annotated UML information models into
//! CQL XML queries.
//!
//! The pipeline: a UML model is turned into an EL ontology ([`ontogen`]), a
//! thesaurus module is extracted for the model's annotation signature
//! ([`modext`]), both are classified ([`reasoner`]), and a user query is
//! rewritten stage by stage into one or more CQL documents ([`query`], [`cql`]).

pub mod cql;
pub mod error;
pub mod metrics;
pub mod model;
pub mod modext;
pub mod ontogen;
pub mod query;
pub mod reasoner;
pub mod synth;

pub use error::{CqlError, ModelError, OntologyError, QueryError, ReasonerError, Rejection};
