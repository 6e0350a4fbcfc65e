//! Concept-level queries and the rewriting pipeline that turns them into CQL.
//!
//! Stages, in order: parsing, UML extraction, data value extraction, semantic
//! validation, property path finding, data value re-insertion, translation to
//! a bag comprehension and translation of the comprehension to CQL.

mod mcc;
mod parser;
mod pipeline;
mod stages;

use std::fmt;

pub use mcc::{mcc_to_cql, predicate_for, to_mcc, MccComprehension, Monoid, Qualifier};
pub use parser::parse_query;
pub use pipeline::{
    rewrite, Chooser, RewriteError, RewriteOptions, RewriteOutput, Rewriter, Selection, Stage, StageOutputs, StageTimes,
};
pub use stages::{
    extract_data_values, extract_uml, find_property_paths, reinsert_data_values, validate_semantics, CandidateQuery,
    ConceptChoice, PathChoice, Position, Provenance, ValueBinding,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QueryExpr {
    /// Thesaurus concept as written by the user.
    Concept(String),
    And(Vec<QueryExpr>),
    HasAssociationSome(Box<QueryExpr>),
    HasAttributeSome(Box<QueryExpr>),
    HasValue(String),
    /// Resolved UML class, e.g. `c:SNP`.
    UmlClass(String),
    /// Resolved attribute class (`c:Gene_symbol`) with the attribute's own
    /// name (`symbol`).
    UmlAttribute {
        class: String,
        name: String,
    },
    /// One concrete association edge replacing part of a `hasAssociation`.
    AssocStep {
        property: String,
        role: String,
        filler: Box<QueryExpr>,
    },
}

impl QueryExpr {
    pub fn concept(name: impl Into<String>) -> Self {
        QueryExpr::Concept(name.into())
    }

    pub fn and(items: Vec<QueryExpr>) -> Self {
        QueryExpr::And(items)
    }

    pub fn has_association(filler: QueryExpr) -> Self {
        QueryExpr::HasAssociationSome(Box::new(filler))
    }

    pub fn has_attribute(filler: QueryExpr) -> Self {
        QueryExpr::HasAttributeSome(Box::new(filler))
    }

    pub fn value(literal: impl Into<String>) -> Self {
        QueryExpr::HasValue(literal.into())
    }

    /// Operands of nested conjunctions, flattened; a non-conjunction is its own
    /// single operand.
    pub fn conjuncts(&self) -> Vec<&QueryExpr> {
        fn walk<'a>(e: &'a QueryExpr, out: &mut Vec<&'a QueryExpr>) {
            match e {
                QueryExpr::And(items) => items.iter().for_each(|i| walk(i, out)),
                other => out.push(other),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn render(&self, style: RenderStyle) -> String {
        let mut out = String::new();
        render(self, style, &mut out);
        out
    }
}

/// How association steps are printed: `hasAssociation some` in both cases,
/// with the role name in parentheses for [`RenderStyle::Concrete`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    Abstract,
    Concrete,
}

fn render(e: &QueryExpr, style: RenderStyle, out: &mut String) {
    match e {
        QueryExpr::Concept(n) | QueryExpr::UmlClass(n) | QueryExpr::UmlAttribute { class: n, .. } => out.push_str(n),
        QueryExpr::And(items) => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(" and ");
                }
                if matches!(item, QueryExpr::And(_)) {
                    parenthesized(item, style, out);
                } else {
                    render(item, style, out);
                }
            }
        }
        QueryExpr::HasAssociationSome(f) => {
            out.push_str("hasAssociation some ");
            parenthesized(f, style, out);
        }
        QueryExpr::HasAttributeSome(f) => {
            out.push_str("hasAttribute some ");
            parenthesized(f, style, out);
        }
        QueryExpr::HasValue(v) => {
            out.push_str("hasValue value \"");
            for ch in v.chars() {
                if ch == '"' || ch == '\\' {
                    out.push('\\');
                }
                out.push(ch);
            }
            out.push('"');
        }
        QueryExpr::AssocStep { role, filler, .. } => {
            match style {
                RenderStyle::Abstract => out.push_str("hasAssociation some "),
                RenderStyle::Concrete => {
                    out.push_str("hasAssociation(");
                    out.push_str(role);
                    out.push_str(") some ");
                }
            }
            // An intermediate class followed by the next step prints as a flat chain.
            match filler.as_ref() {
                QueryExpr::And(items)
                    if items.len() == 2
                        && matches!(items[0], QueryExpr::UmlClass(_))
                        && matches!(items[1], QueryExpr::AssocStep { .. }) =>
                {
                    render(&items[0], style, out);
                    out.push_str(" and ");
                    render(&items[1], style, out);
                }
                other => parenthesized(other, style, out),
            }
        }
    }
}

fn parenthesized(e: &QueryExpr, style: RenderStyle, out: &mut String) {
    out.push('(');
    render(e, style, out);
    out.push(')');
}

impl fmt::Display for QueryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::Concrete))
    }
}
