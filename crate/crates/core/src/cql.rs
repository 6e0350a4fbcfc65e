//! CQL query AST, grammar validation and the XML wire format.
//!
//! Productions:
//!
//! ```text
//! CQLQuery    -> Target | Target QueryModifier
//! Target      -> Name Attribute | Name Association | Name Group   (bare Name also accepted)
//! Attribute   -> Name Predicate Value
//! Group       -> LogicalOp Attribute Group1 | LogicalOp Association Group1
//! Group1      -> Attribute Group1 | Association Group1 | Group | ε
//! Association -> RoleName | RoleName Association | RoleName Attribute | RoleName Group
//! QueryModifier -> DistinctAttribute | DistinctAttribute AttributeNames
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::CqlError;

pub const CQL_NAMESPACE: &str = "http://CQL.caBIG/1/gov.nih.nci.cagrid.CQLQuery";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Predicate {
    EqualTo,
    NotEqualTo,
    Like,
    IsNull,
    IsNotNull,
    LessThan,
    LessThanEqualTo,
    GreaterThan,
    GreaterThanEqualTo,
}

impl Predicate {
    pub const ALL: [Predicate; 9] = [
        Predicate::EqualTo,
        Predicate::NotEqualTo,
        Predicate::Like,
        Predicate::IsNull,
        Predicate::IsNotNull,
        Predicate::LessThan,
        Predicate::LessThanEqualTo,
        Predicate::GreaterThan,
        Predicate::GreaterThanEqualTo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Predicate::EqualTo => "EQUAL_TO",
            Predicate::NotEqualTo => "NOT_EQUAL_TO",
            Predicate::Like => "LIKE",
            Predicate::IsNull => "IS_NULL",
            Predicate::IsNotNull => "IS_NOT_NULL",
            Predicate::LessThan => "LESS_THAN",
            Predicate::LessThanEqualTo => "LESS_THAN_EQUAL_TO",
            Predicate::GreaterThan => "GREATER_THAN",
            Predicate::GreaterThanEqualTo => "GREATER_THAN_EQUAL_TO",
        }
    }

    /// Unary predicates carry no value.
    pub fn takes_value(self) -> bool {
        !matches!(self, Predicate::IsNull | Predicate::IsNotNull)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Predicate {
    type Err = CqlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| CqlError::InvalidValue { what: "predicate".into(), value: s.into() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LogicalOp {
    And,
    Or,
}

impl LogicalOp {
    pub fn as_str(self) -> &'static str {
        match self {
            LogicalOp::And => "AND",
            LogicalOp::Or => "OR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CqlAttribute {
    pub name: String,
    pub predicate: Predicate,
    pub value: Option<String>,
}

impl CqlAttribute {
    pub fn new(name: impl Into<String>, predicate: Predicate, value: Option<String>) -> Self {
        CqlAttribute { name: name.into(), predicate, value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CqlAssociation {
    pub name: String,
    pub role_name: String,
    pub child: Option<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CqlGroup {
    pub op: LogicalOp,
    pub items: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Constraint {
    Attribute(CqlAttribute),
    Association(Box<CqlAssociation>),
    Group(CqlGroup),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CqlTarget {
    pub name: String,
    pub child: Option<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QueryModifier {
    pub distinct_attribute: Option<String>,
    pub attribute_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CqlQuery {
    pub target: CqlTarget,
    pub modifier: Option<QueryModifier>,
}

impl CqlQuery {
    pub fn bare(target: impl Into<String>) -> Self {
        CqlQuery { target: CqlTarget { name: target.into(), child: None }, modifier: None }
    }
}

/// One violation per offending node, addressed by a slash path from the
/// target (e.g. `Target/Association[0]/Group/item[1]`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GrammarReport {
    pub violations: Vec<String>,
}

impl GrammarReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_grammar(query: &CqlQuery) -> GrammarReport {
    let mut out = Vec::new();
    if query.target.name.is_empty() {
        out.push("Target: empty name".to_string());
    }
    if let Some(child) = &query.target.child {
        check_constraint(child, "Target", &mut out);
    }
    if let Some(m) = &query.modifier {
        match &m.distinct_attribute {
            None => out.push("QueryModifier: DistinctAttribute is required".to_string()),
            Some(d) if d.is_empty() => out.push("QueryModifier: empty DistinctAttribute".to_string()),
            Some(_) => {}
        }
        if m.attribute_names.iter().any(String::is_empty) {
            out.push("QueryModifier: empty attribute name".to_string());
        }
    }
    GrammarReport { violations: out }
}

fn check_constraint(c: &Constraint, at: &str, out: &mut Vec<String>) {
    match c {
        Constraint::Attribute(a) => {
            let at = format!("{at}/Attribute");
            if a.name.is_empty() {
                out.push(format!("{at}: empty name"));
            }
            match (a.predicate.takes_value(), &a.value) {
                (true, None) => out.push(format!("{at}: predicate {} requires a value", a.predicate)),
                (false, Some(_)) => out.push(format!("{at}: predicate {} takes no value", a.predicate)),
                _ => {}
            }
        }
        Constraint::Association(a) => {
            let at = format!("{at}/Association");
            if a.name.is_empty() {
                out.push(format!("{at}: empty name"));
            }
            if a.role_name.is_empty() {
                out.push(format!("{at}: empty roleName"));
            }
            if let Some(child) = &a.child {
                check_constraint(child, &at, out);
            }
        }
        Constraint::Group(g) => {
            let at = format!("{at}/Group");
            if g.items.len() < 2 {
                out.push(format!("{at}: a group needs at least two items, found {}", g.items.len()));
            }
            if let Some(Constraint::Group(_)) = g.items.first() {
                out.push(format!("{at}: first item must be an Attribute or Association"));
            }
            for (i, item) in g.items.iter().enumerate() {
                if matches!(item, Constraint::Group(_)) && i + 1 != g.items.len() && i != 0 {
                    out.push(format!("{at}/item[{i}]: a nested Group may only be the last item"));
                }
                check_constraint(item, &format!("{at}/item[{i}]"), out);
            }
        }
    }
}

fn escape(value: &str, out: &mut String) {
    for ch in value.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
}

fn write_constraint(c: &Constraint, depth: usize, out: &mut String) {
    let indent = " ".repeat(depth);
    match c {
        Constraint::Attribute(a) => {
            out.push_str(&indent);
            out.push_str("<ns1:Attribute name=\"");
            escape(&a.name, out);
            out.push_str("\" predicate=\"");
            out.push_str(a.predicate.as_str());
            out.push('"');
            if let Some(v) = &a.value {
                out.push_str(" value=\"");
                escape(v, out);
                out.push('"');
            }
            out.push_str("/>\n");
        }
        Constraint::Association(a) => {
            out.push_str(&indent);
            out.push_str("<ns1:Association name=\"");
            escape(&a.name, out);
            out.push_str("\" roleName=\"");
            escape(&a.role_name, out);
            out.push('"');
            match &a.child {
                None => out.push_str("/>\n"),
                Some(child) => {
                    out.push_str(">\n");
                    write_constraint(child, depth + 1, out);
                    out.push_str(&indent);
                    out.push_str("</ns1:Association>\n");
                }
            }
        }
        Constraint::Group(g) => {
            out.push_str(&indent);
            out.push_str(&format!("<ns1:Group logicRelation=\"{}\">\n", g.op.as_str()));
            for item in &g.items {
                write_constraint(item, depth + 1, out);
            }
            out.push_str(&indent);
            out.push_str("</ns1:Group>\n");
        }
    }
}

/// Canonical serialization: UTF-8, LF line endings, one space of indentation
/// per nesting level, attributes in the order name, roleName, predicate, value.
pub fn to_xml(query: &CqlQuery) -> Result<String, CqlError> {
    let report = validate_grammar(query);
    if !report.is_valid() {
        return Err(CqlError::Grammar(report.violations.join("; ")));
    }
    let mut out = String::new();
    out.push_str(&format!("<ns1:CQLQuery xmlns:ns1=\"{CQL_NAMESPACE}\">\n"));
    out.push_str(" <ns1:Target name=\"");
    escape(&query.target.name, &mut out);
    out.push('"');
    match &query.target.child {
        None => out.push_str("/>\n"),
        Some(child) => {
            out.push_str(">\n");
            write_constraint(child, 2, &mut out);
            out.push_str(" </ns1:Target>\n");
        }
    }
    if let Some(m) = &query.modifier {
        out.push_str(" <ns1:QueryModifier>\n");
        if let Some(d) = &m.distinct_attribute {
            out.push_str("  <ns1:DistinctAttribute>");
            escape(d, &mut out);
            out.push_str("</ns1:DistinctAttribute>\n");
        }
        for n in &m.attribute_names {
            out.push_str("  <ns1:AttributeNames>");
            escape(n, &mut out);
            out.push_str("</ns1:AttributeNames>\n");
        }
        out.push_str(" </ns1:QueryModifier>\n");
    }
    out.push_str("</ns1:CQLQuery>\n");
    Ok(out)
}

type Node<'a, 'i> = roxmltree::Node<'a, 'i>;

fn element_children<'a, 'i>(node: Node<'a, 'i>) -> Result<Vec<Node<'a, 'i>>, CqlError> {
    let mut out = Vec::new();
    for child in node.children() {
        if child.is_element() {
            if child.tag_name().namespace() != Some(CQL_NAMESPACE) {
                return Err(CqlError::UnknownElement {
                    element: child.tag_name().name().to_string(),
                    parent: node.tag_name().name().to_string(),
                });
            }
            out.push(child);
        } else if child.is_text() && !child.text().unwrap_or_default().trim().is_empty() {
            return Err(CqlError::UnknownElement { element: "#text".into(), parent: node.tag_name().name().into() });
        }
    }
    Ok(out)
}

fn check_attributes(node: Node, allowed: &[&str]) -> Result<(), CqlError> {
    for attr in node.attributes() {
        if attr.namespace().is_some() || !allowed.contains(&attr.name()) {
            return Err(CqlError::UnknownAttribute {
                attribute: attr.name().to_string(),
                element: node.tag_name().name().to_string(),
            });
        }
    }
    Ok(())
}

fn required<'a>(node: Node<'a, '_>, attr: &str) -> Result<&'a str, CqlError> {
    node.attribute(attr)
        .ok_or_else(|| CqlError::Missing { element: node.tag_name().name().to_string(), what: attr.to_string() })
}

fn single_child(node: Node) -> Result<Option<Constraint>, CqlError> {
    let children = element_children(node)?;
    match children.as_slice() {
        [] => Ok(None),
        [only] => parse_constraint(*only).map(Some),
        [_, extra, ..] => Err(CqlError::UnknownElement {
            element: extra.tag_name().name().to_string(),
            parent: node.tag_name().name().to_string(),
        }),
    }
}

fn parse_constraint(node: Node) -> Result<Constraint, CqlError> {
    match node.tag_name().name() {
        "Attribute" => {
            check_attributes(node, &["name", "predicate", "value"])?;
            if !element_children(node)?.is_empty() {
                return Err(CqlError::UnknownElement { element: "child".into(), parent: "Attribute".into() });
            }
            Ok(Constraint::Attribute(CqlAttribute {
                name: required(node, "name")?.to_string(),
                predicate: required(node, "predicate")?.parse()?,
                value: node.attribute("value").map(str::to_string),
            }))
        }
        "Association" => {
            check_attributes(node, &["name", "roleName"])?;
            Ok(Constraint::Association(Box::new(CqlAssociation {
                name: required(node, "name")?.to_string(),
                role_name: required(node, "roleName")?.to_string(),
                child: single_child(node)?,
            })))
        }
        "Group" => {
            check_attributes(node, &["logicRelation"])?;
            let op = match required(node, "logicRelation")? {
                "AND" => LogicalOp::And,
                "OR" => LogicalOp::Or,
                other => return Err(CqlError::InvalidValue { what: "logicRelation".into(), value: other.into() }),
            };
            let items = element_children(node)?.into_iter().map(parse_constraint).collect::<Result<_, _>>()?;
            Ok(Constraint::Group(CqlGroup { op, items }))
        }
        other => Err(CqlError::UnknownElement {
            element: other.to_string(),
            parent: node.parent_element().map(|p| p.tag_name().name().to_string()).unwrap_or_default(),
        }),
    }
}

fn text_of(node: Node) -> Result<String, CqlError> {
    if node.children().any(|c| c.is_element()) {
        return Err(CqlError::UnknownElement { element: "child".into(), parent: node.tag_name().name().into() });
    }
    Ok(node.text().unwrap_or_default().trim().to_string())
}

/// Parses a CQL document. Any namespace prefix is accepted as long as it is
/// bound to the CQL namespace. Grammar violations are errors.
pub fn parse_xml(document: &str) -> Result<CqlQuery, CqlError> {
    let doc = roxmltree::Document::parse(document).map_err(|e| CqlError::Xml(e.to_string()))?;
    let root = doc.root_element();
    let tag = root.tag_name();
    if tag.namespace() != Some(CQL_NAMESPACE) || tag.name() != "CQLQuery" {
        let found = match tag.namespace() {
            Some(ns) => format!("{{{ns}}}{}", tag.name()),
            None => tag.name().to_string(),
        };
        return Err(CqlError::Namespace { expected: CQL_NAMESPACE, found });
    }
    check_attributes(root, &[])?;
    let mut target = None;
    let mut modifier = None;
    for child in element_children(root)? {
        match child.tag_name().name() {
            "Target" if target.is_none() => {
                check_attributes(child, &["name"])?;
                target = Some(CqlTarget { name: required(child, "name")?.to_string(), child: single_child(child)? });
            }
            "QueryModifier" if target.is_some() && modifier.is_none() => {
                check_attributes(child, &[])?;
                let mut m = QueryModifier { distinct_attribute: None, attribute_names: Vec::new() };
                for item in element_children(child)? {
                    match item.tag_name().name() {
                        "DistinctAttribute" if m.distinct_attribute.is_none() => {
                            m.distinct_attribute = Some(text_of(item)?)
                        }
                        "AttributeNames" => m.attribute_names.push(text_of(item)?),
                        other => {
                            return Err(CqlError::UnknownElement {
                                element: other.to_string(),
                                parent: "QueryModifier".into(),
                            })
                        }
                    }
                }
                modifier = Some(m);
            }
            other => return Err(CqlError::UnknownElement { element: other.to_string(), parent: "CQLQuery".into() }),
        }
    }
    let target = target.ok_or_else(|| CqlError::Missing { element: "CQLQuery".into(), what: "Target".into() })?;
    let query = CqlQuery { target, modifier };
    let report = validate_grammar(&query);
    if !report.is_valid() {
        return Err(CqlError::Grammar(report.violations.join("; ")));
    }
    Ok(query)
}

/// Whitespace-insensitive comparison of two CQL documents.
pub fn same_query(a: &str, b: &str) -> Result<bool, CqlError> {
    Ok(parse_xml(a)? == parse_xml(b)?)
}
