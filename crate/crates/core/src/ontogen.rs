//! UML-to-OWL generation in the EL profile.
//!
//! Every class and attribute becomes a named OWL class under `u:UMLClass` or
//! `u:UMLAttribute`; associations become sub-properties of the transitive
//! `u:hasAssociation`; annotations are subsumptions into thesaurus concepts,
//! with qualifier lists encoded as nested `l:OWLList` cells.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use indexmap::IndexSet;

use crate::error::OntologyError;
use crate::model::{Annotation, UmlModel};
use crate::modext::ThesaurusAxiomSet;

pub const UML_CLASS: &str = "u:UMLClass";
pub const UML_ATTRIBUTE: &str = "u:UMLAttribute";
pub const OWL_LIST: &str = "l:OWLList";
pub const HAS_ASSOCIATION: &str = "u:hasAssociation";
pub const HAS_ATTRIBUTE: &str = "u:hasAttribute";
pub const HAS_CONTENTS: &str = "l:hasContents";
pub const HAS_NEXT: &str = "l:hasNext";
pub const HAS_VALUE: &str = "u:hasValue";

pub const UML_NAMESPACE: &str = "http://onco-rewriter.local/uml#";
pub const THESAURUS_NAMESPACE: &str = "http://onco-rewriter.local/thesaurus#";
pub const LIST_NAMESPACE: &str = "http://onco-rewriter.local/list#";

/// OWL class name for a UML class.
pub fn class_iri(class: &str) -> String {
    format!("c:{class}")
}

/// OWL class name for a UML attribute, `c:<Class>_<attribute>`.
pub fn attribute_iri(class: &str, attribute: &str) -> String {
    format!("c:{class}_{attribute}")
}

/// Object property name for an association, `c:<Domain>_<role>_<Range>`.
pub fn association_iri(source: &str, role: &str, target: &str) -> String {
    format!("c:{source}_{role}_{target}")
}

pub fn concept_iri(concept: &str) -> String {
    format!("n:{concept}")
}

/// Removes a `p:` prefix if present.
pub fn local_name(name: &str) -> &str {
    name.split_once(':').map_or(name, |(_, local)| local)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpr {
    Named(String),
    Conjunction(Vec<ClassExpr>),
    Existential(String, Box<ClassExpr>),
    /// `∃u:hasValue.<datatype>`
    DataExistential(String),
    /// Outside EL. Never produced by generation; exists so that parsed or
    /// hand-built axiom sets can be checked for conformance.
    #[doc(hidden)]
    Universal(String, Box<ClassExpr>),
}

impl ClassExpr {
    pub fn named(name: impl Into<String>) -> Self {
        ClassExpr::Named(name.into())
    }

    pub fn some(property: impl Into<String>, filler: ClassExpr) -> Self {
        ClassExpr::Existential(property.into(), Box::new(filler))
    }

    pub fn as_named(&self) -> Option<&str> {
        match self {
            ClassExpr::Named(n) => Some(n),
            _ => None,
        }
    }

    fn visit_names<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            ClassExpr::Named(n) => f(n),
            ClassExpr::Conjunction(items) => items.iter().for_each(|i| i.visit_names(f)),
            ClassExpr::Existential(_, filler) | ClassExpr::Universal(_, filler) => filler.visit_names(f),
            ClassExpr::DataExistential(_) => {}
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Named(n) => f.write_str(n),
            ClassExpr::Conjunction(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊓ ")?;
                    }
                    if matches!(item, ClassExpr::Conjunction(_)) {
                        write!(f, "({item})")?;
                    } else {
                        write!(f, "{item}")?;
                    }
                }
                Ok(())
            }
            ClassExpr::Existential(p, filler) => match **filler {
                ClassExpr::Conjunction(_) => write!(f, "∃{p}.({filler})"),
                _ => write!(f, "∃{p}.{filler}"),
            },
            ClassExpr::DataExistential(dt) => write!(f, "∃{HAS_VALUE}.{dt}"),
            ClassExpr::Universal(p, filler) => write!(f, "∀{p}.{filler}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    SubClassOf(ClassExpr, ClassExpr),
    SubPropertyOf(String, String),
    TransitiveProperty(String),
}

impl Axiom {
    pub fn sub_class(sub: impl Into<String>, sup: ClassExpr) -> Self {
        Axiom::SubClassOf(ClassExpr::Named(sub.into()), sup)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf(sub, sup) => write!(f, "{sub} ⊑ {sup}"),
            Axiom::SubPropertyOf(sub, sup) => write!(f, "{sub} ⊑ {sup}"),
            Axiom::TransitiveProperty(p) => write!(f, "Trans({p})"),
        }
    }
}

/// Ordered, duplicate-free axiom list with its namespace prefixes.
#[derive(Debug, Clone, Default)]
pub struct AxiomSet {
    axioms: IndexSet<Axiom>,
    prefixes: BTreeMap<String, String>,
}

// Order-sensitive, unlike `IndexSet` equality.
impl PartialEq for AxiomSet {
    fn eq(&self, other: &Self) -> bool {
        self.prefixes == other.prefixes && self.axioms.iter().eq(other.axioms.iter())
    }
}

impl Eq for AxiomSet {}

impl AxiomSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prefixes<I, K, V>(prefixes: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        AxiomSet {
            axioms: IndexSet::new(),
            prefixes: prefixes.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    /// Appends `axiom` unless already present; returns whether it was added.
    pub fn push(&mut self, axiom: Axiom) -> bool {
        self.axioms.insert(axiom)
    }

    pub fn set_prefix(&mut self, prefix: impl Into<String>, iri: impl Into<String>) {
        self.prefixes.insert(prefix.into(), iri.into());
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn iter(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    /// Appends the axioms and prefixes of `other`, keeping existing order.
    pub fn merge(&mut self, other: &AxiomSet) {
        for (k, v) in &other.prefixes {
            self.prefixes.entry(k.clone()).or_insert_with(|| v.clone());
        }
        for ax in &other.axioms {
            self.axioms.insert(ax.clone());
        }
    }

    /// Every class name mentioned in a class position.
    pub fn class_names(&self) -> IndexSet<&str> {
        let mut out = IndexSet::new();
        for ax in &self.axioms {
            if let Axiom::SubClassOf(sub, sup) = ax {
                sub.visit_names(&mut |n| {
                    out.insert(n);
                });
                sup.visit_names(&mut |n| {
                    out.insert(n);
                });
            }
        }
        out
    }
}

impl FromIterator<Axiom> for AxiomSet {
    fn from_iter<I: IntoIterator<Item = Axiom>>(iter: I) -> Self {
        AxiomSet { axioms: iter.into_iter().collect(), prefixes: BTreeMap::new() }
    }
}

impl<'a> IntoIterator for &'a AxiomSet {
    type Item = &'a Axiom;
    type IntoIter = indexmap::set::Iter<'a, Axiom>;
    fn into_iter(self) -> Self::IntoIter {
        self.axioms.iter()
    }
}

pub fn model_namespace(model: &UmlModel) -> String {
    let clean = |s: &str| s.split_whitespace().collect::<Vec<_>>().join("_");
    format!("http://onco-rewriter.local/model/{}/{}#", clean(&model.project), clean(&model.version))
}

/// Encodes an annotation: `n:P`, or `n:P ⊓ <list of qualifiers>`.
pub fn annotation_expr(annotation: &Annotation) -> ClassExpr {
    let primary = ClassExpr::Named(concept_iri(&annotation.primary));
    match qualifier_list(&annotation.qualifiers) {
        None => primary,
        Some(list) => ClassExpr::Conjunction(vec![primary, list]),
    }
}

fn qualifier_list(qualifiers: &[String]) -> Option<ClassExpr> {
    let (head, rest) = qualifiers.split_first()?;
    let mut cell = vec![ClassExpr::named(OWL_LIST), ClassExpr::some(HAS_CONTENTS, ClassExpr::Named(concept_iri(head)))];
    if let Some(next) = qualifier_list(rest) {
        cell.push(ClassExpr::some(HAS_NEXT, next));
    }
    Some(ClassExpr::Conjunction(cell))
}

/// Inverse of [`annotation_expr`].
pub fn recover_annotation(expr: &ClassExpr) -> Option<Annotation> {
    let concept = |e: &ClassExpr| e.as_named().and_then(|n| n.strip_prefix("n:")).map(str::to_string);
    match expr {
        ClassExpr::Named(_) => Some(Annotation::new(concept(expr)?)),
        ClassExpr::Conjunction(parts) if parts.len() == 2 => {
            let primary = concept(&parts[0])?;
            let mut qualifiers = Vec::new();
            let mut cell = &parts[1];
            loop {
                let ClassExpr::Conjunction(items) = cell else { return None };
                if items.first()?.as_named() != Some(OWL_LIST) {
                    return None;
                }
                match items.get(1)? {
                    ClassExpr::Existential(p, filler) if p == HAS_CONTENTS => qualifiers.push(concept(filler)?),
                    _ => return None,
                }
                match items.get(2) {
                    None if items.len() == 2 => break,
                    Some(ClassExpr::Existential(p, next)) if p == HAS_NEXT && items.len() == 3 => cell = next,
                    _ => return None,
                }
            }
            Some(Annotation { primary, qualifiers })
        }
        _ => None,
    }
}

fn upper_vocabulary() -> impl Iterator<Item = Axiom> {
    std::iter::once(Axiom::TransitiveProperty(HAS_ASSOCIATION.to_string()))
}

/// Generates the EL ontology for `model`.
///
/// When `module` is given, every annotation concept must be in its signature.
/// Axiom order: upper vocabulary first, then per class (in model order) its
/// class and annotation axioms, attribute axioms, own associations,
/// superclasses and materialized inherited associations and attributes.
pub fn generate_ontology(model: &UmlModel, module: Option<&ThesaurusAxiomSet>) -> Result<AxiomSet, OntologyError> {
    check_names(model)?;
    if let Some(module) = module {
        for class in &model.classes {
            let mut anns: Vec<(&Annotation, String)> =
                class.annotation.iter().map(|a| (a, class.name.clone())).collect();
            anns.extend(
                class
                    .attributes
                    .iter()
                    .filter_map(|at| at.annotation.as_ref().map(|a| (a, format!("{}.{}", class.name, at.name)))),
            );
            for (ann, element) in anns {
                if let Some(concept) = ann.concepts().find(|c| !module.covers(c)) {
                    return Err(OntologyError::ConceptNotInModule { concept: concept.to_string(), element });
                }
            }
        }
    }

    let mut out = AxiomSet::with_prefixes([
        ("c", model_namespace(model)),
        ("u", UML_NAMESPACE.to_string()),
        ("n", THESAURUS_NAMESPACE.to_string()),
        ("l", LIST_NAMESPACE.to_string()),
    ]);
    upper_vocabulary().for_each(|ax| {
        out.push(ax);
    });

    for class in &model.classes {
        let c = class_iri(&class.name);
        out.push(Axiom::sub_class(&c, ClassExpr::named(UML_CLASS)));
        if let Some(ann) = &class.annotation {
            out.push(Axiom::sub_class(&c, annotation_expr(ann)));
        }

        for attr in &class.attributes {
            let a = attribute_iri(&class.name, &attr.name);
            out.push(Axiom::sub_class(&a, ClassExpr::named(UML_ATTRIBUTE)));
            out.push(Axiom::sub_class(&a, ClassExpr::DataExistential(attr.datatype.xsd_name().to_string())));
            if let Some(ann) = &attr.annotation {
                out.push(Axiom::sub_class(&a, annotation_expr(ann)));
            }
            out.push(Axiom::sub_class(&c, ClassExpr::some(HAS_ATTRIBUTE, ClassExpr::Named(a))));
        }

        for assoc in model.associations.iter().filter(|a| a.source == class.name) {
            let p = association_iri(&assoc.source, &assoc.role_name, &assoc.target);
            out.push(Axiom::SubPropertyOf(p.clone(), HAS_ASSOCIATION.to_string()));
            out.push(Axiom::sub_class(&c, ClassExpr::some(p, ClassExpr::Named(class_iri(&assoc.target)))));
        }

        for sup in &class.superclasses {
            out.push(Axiom::sub_class(&c, ClassExpr::Named(class_iri(sup))));
        }
        let ancestors = model.ancestors(&class.name);
        for ancestor in &ancestors {
            for assoc in model.associations.iter().filter(|a| a.source == *ancestor) {
                let p = association_iri(&assoc.source, &assoc.role_name, &assoc.target);
                out.push(Axiom::sub_class(&c, ClassExpr::some(p, ClassExpr::Named(class_iri(&assoc.target)))));
            }
        }
        for ancestor in &ancestors {
            if let Some(anc) = model.class(ancestor) {
                for attr in &anc.attributes {
                    let a = attribute_iri(ancestor, &attr.name);
                    out.push(Axiom::sub_class(&c, ClassExpr::some(HAS_ATTRIBUTE, ClassExpr::Named(a))));
                }
            }
        }
    }
    Ok(out)
}

fn check_names(model: &UmlModel) -> Result<(), OntologyError> {
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut claim = |name: String, origin: String| -> Result<(), OntologyError> {
        match seen.get(&name) {
            Some(first) => Err(OntologyError::NameCollision { name, first: first.clone(), second: origin }),
            None => {
                seen.insert(name, origin);
                Ok(())
            }
        }
    };
    for class in &model.classes {
        claim(class_iri(&class.name), format!("class {}", class.name))?;
    }
    for class in &model.classes {
        for attr in &class.attributes {
            claim(attribute_iri(&class.name, &attr.name), format!("attribute {}.{}", class.name, attr.name))?;
        }
    }
    for a in &model.associations {
        claim(
            association_iri(&a.source, &a.role_name, &a.target),
            format!("association {}.{} -> {}", a.source, a.role_name, a.target),
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ElReport {
    pub violations: Vec<String>,
}

impl ElReport {
    pub fn is_conformant(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structural EL check: conjunction and existential restriction only, with
/// conjunctions of at least two operands.
pub fn el_conformance_report(axioms: &AxiomSet) -> ElReport {
    fn check(expr: &ClassExpr, axiom: usize, out: &mut Vec<String>) {
        match expr {
            ClassExpr::Named(_) | ClassExpr::DataExistential(_) => {}
            ClassExpr::Conjunction(items) => {
                if items.len() < 2 {
                    out.push(format!("axiom {axiom}: conjunction with {} operand(s)", items.len()));
                }
                items.iter().for_each(|i| check(i, axiom, out));
            }
            ClassExpr::Existential(_, filler) => check(filler, axiom, out),
            ClassExpr::Universal(p, _) => out.push(format!("axiom {axiom}: universal restriction on {p}")),
        }
    }
    let mut violations = Vec::new();
    for (i, ax) in axioms.iter().enumerate() {
        if let Axiom::SubClassOf(sub, sup) = ax {
            check(sub, i, &mut violations);
            check(sup, i, &mut violations);
        }
    }
    ElReport { violations }
}

fn write_expr(expr: &ClassExpr, out: &mut String) {
    match expr {
        ClassExpr::Named(n) => out.push_str(n),
        ClassExpr::Conjunction(items) => {
            out.push_str("ObjectIntersectionOf(");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_expr(item, out);
            }
            out.push(')');
        }
        ClassExpr::Existential(p, filler) => {
            out.push_str("ObjectSomeValuesFrom(");
            out.push_str(p);
            out.push(' ');
            write_expr(filler, out);
            out.push(')');
        }
        ClassExpr::DataExistential(dt) => {
            out.push_str("DataSomeValuesFrom(");
            out.push_str(HAS_VALUE);
            out.push(' ');
            out.push_str(dt);
            out.push(')');
        }
        ClassExpr::Universal(p, filler) => {
            out.push_str("ObjectAllValuesFrom(");
            out.push_str(p);
            out.push(' ');
            write_expr(filler, out);
            out.push(')');
        }
    }
}

pub fn axiom_line(axiom: &Axiom) -> String {
    let mut out = String::new();
    match axiom {
        Axiom::SubClassOf(sub, sup) => {
            out.push_str("SubClassOf(");
            write_expr(sub, &mut out);
            out.push(' ');
            write_expr(sup, &mut out);
            out.push(')');
        }
        Axiom::SubPropertyOf(sub, sup) => {
            out.push_str(&format!("SubObjectPropertyOf({sub} {sup})"));
        }
        Axiom::TransitiveProperty(p) => out.push_str(&format!("TransitiveObjectProperty({p})")),
    }
    out
}

/// Functional-style document: a header of `Prefix(p:=<iri>)` lines followed
/// by one axiom per line.
pub fn serialize_axioms(axioms: &AxiomSet) -> String {
    let mut out = String::new();
    for (prefix, iri) in &axioms.prefixes {
        out.push_str(&format!("Prefix({prefix}:=<{iri}>)\n"));
    }
    for ax in &axioms.axioms {
        out.push_str(&axiom_line(ax));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token::Atom(&line[s..i]));
            }
            match ch {
                '(' => tokens.push(Token::Open),
                ')' => tokens.push(Token::Close),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token::Atom(&line[s..]));
    }
    tokens
}

struct LineParser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    line: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, message: impl Into<String>) -> OntologyError {
        OntologyError::Parse { line: self.line, message: message.into() }
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn atom(&mut self) -> Result<&'a str, OntologyError> {
        match self.next() {
            Some(Token::Atom(a)) => Ok(a),
            other => Err(self.err(format!("expected a name, found {other:?}"))),
        }
    }

    fn expect(&mut self, want: Token<'static>) -> Result<(), OntologyError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(self.err(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<ClassExpr, OntologyError> {
        let head = self.atom()?;
        if self.peek() != Some(&Token::Open) {
            return Ok(ClassExpr::Named(head.to_string()));
        }
        self.expect(Token::Open)?;
        let expr = match head {
            "ObjectIntersectionOf" => {
                let mut items = Vec::new();
                while self.peek() != Some(&Token::Close) {
                    if self.peek().is_none() {
                        return Err(self.err("unterminated ObjectIntersectionOf"));
                    }
                    items.push(self.expr()?);
                }
                ClassExpr::Conjunction(items)
            }
            "ObjectSomeValuesFrom" => {
                let p = self.atom()?;
                ClassExpr::Existential(p.to_string(), Box::new(self.expr()?))
            }
            "ObjectAllValuesFrom" => {
                let p = self.atom()?;
                ClassExpr::Universal(p.to_string(), Box::new(self.expr()?))
            }
            "DataSomeValuesFrom" => {
                let p = self.atom()?;
                if p != HAS_VALUE {
                    return Err(self.err(format!("data restriction on `{p}`, only {HAS_VALUE} is supported")));
                }
                ClassExpr::DataExistential(self.atom()?.to_string())
            }
            other => return Err(self.err(format!("unknown class constructor `{other}`"))),
        };
        self.expect(Token::Close)?;
        Ok(expr)
    }

    fn axiom(&mut self) -> Result<Axiom, OntologyError> {
        let head = self.atom()?;
        self.expect(Token::Open)?;
        let axiom = match head {
            "SubClassOf" => {
                let sub = self.expr()?;
                Axiom::SubClassOf(sub, self.expr()?)
            }
            "SubObjectPropertyOf" => {
                let sub = self.atom()?.to_string();
                Axiom::SubPropertyOf(sub, self.atom()?.to_string())
            }
            "TransitiveObjectProperty" => Axiom::TransitiveProperty(self.atom()?.to_string()),
            other => return Err(self.err(format!("unknown axiom type `{other}`"))),
        };
        self.expect(Token::Close)?;
        if self.pos != self.tokens.len() {
            return Err(self.err("trailing tokens after axiom"));
        }
        Ok(axiom)
    }
}

pub fn parse_axioms(document: &str) -> Result<AxiomSet, OntologyError> {
    let mut out = AxiomSet::new();
    for (i, raw) in document.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("Prefix(") {
            let decl = rest.strip_suffix(">)").and_then(|r| r.split_once(":=<")).ok_or_else(|| {
                OntologyError::Parse { line: line_no, message: "malformed Prefix declaration".into() }
            })?;
            out.set_prefix(decl.0, decl.1);
            continue;
        }
        let mut parser = LineParser { tokens: tokenize(line), pos: 0, line: line_no };
        let axiom = parser.axiom()?;
        if !out.push(axiom) {
            return Err(OntologyError::Parse { line: line_no, message: "duplicate axiom".into() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Datatype, UmlAssociation, UmlAttribute, UmlClass};

    fn model(classes: Vec<UmlClass>, associations: Vec<UmlAssociation>) -> UmlModel {
        UmlModel { project: "t".into(), version: "1".into(), package_prefix: "t".into(), classes, associations }
    }

    #[test]
    fn empty_model_yields_upper_vocabulary_only() {
        let set = generate_ontology(&model(vec![], vec![]), None).unwrap();
        let axioms: Vec<_> = set.iter().cloned().collect();
        assert_eq!(axioms, vec![Axiom::TransitiveProperty(HAS_ASSOCIATION.into())]);
        assert!(el_conformance_report(&set).is_conformant());
    }

    #[test]
    fn attribute_class_collision_is_an_error() {
        let mut a = UmlClass::new("A");
        a.attributes.push(UmlAttribute { name: "b".into(), datatype: Datatype::String, annotation: None });
        let m = model(vec![a, UmlClass::new("A_b")], vec![]);
        assert!(matches!(generate_ontology(&m, None), Err(OntologyError::NameCollision { .. })));
    }

    #[test]
    fn qualifier_list_nests_one_cell_per_qualifier() {
        let ann = Annotation::qualified("P", ["Q1", "Q2", "Q3"]);
        let expr = annotation_expr(&ann);
        assert_eq!(
            expr.to_string(),
            "n:P ⊓ (l:OWLList ⊓ ∃l:hasContents.n:Q1 ⊓ ∃l:hasNext.(l:OWLList ⊓ ∃l:hasContents.n:Q2 ⊓ \
             ∃l:hasNext.(l:OWLList ⊓ ∃l:hasContents.n:Q3)))"
        );
        assert_eq!(recover_annotation(&expr), Some(ann));
        assert_eq!(recover_annotation(&ClassExpr::named("n:P")), Some(Annotation::new("P")));
    }

    #[test]
    fn universal_is_reported() {
        let set: AxiomSet =
            [Axiom::sub_class("c:A", ClassExpr::Universal("c:p".into(), Box::new(ClassExpr::named("c:B"))))]
                .into_iter()
                .collect();
        assert_eq!(el_conformance_report(&set).violations.len(), 1);
        assert!(el_conformance_report(&AxiomSet::new()).is_conformant());
    }

    #[test]
    fn empty_set_serializes_to_header_only() {
        let set = AxiomSet::with_prefixes([("n", THESAURUS_NAMESPACE)]);
        let doc = serialize_axioms(&set);
        assert_eq!(doc, format!("Prefix(n:=<{THESAURUS_NAMESPACE}>)\n"));
        assert_eq!(parse_axioms(&doc).unwrap(), set);
    }

    #[test]
    fn parse_errors_report_lines() {
        let doc = "Prefix(n:=<x>)\nSubClassOf(n:A n:B)\nSubClassOf(n:A\n";
        match parse_axioms(doc) {
            Err(OntologyError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_axioms("Frobnicate(n:A)\n").is_err());
        assert!(parse_axioms("SubClassOf(n:A DataSomeValuesFrom(u:other xsd:string))\n").is_err());
    }

    #[test]
    fn multiple_inheritance_emits_one_subsumption_per_superclass() {
        let mut c = UmlClass::new("C");
        c.superclasses = vec!["A".into(), "B".into()];
        let m = model(vec![UmlClass::new("A"), UmlClass::new("B"), c], vec![]);
        let set = generate_ontology(&m, None).unwrap();
        assert!(set.contains(&Axiom::sub_class("c:C", ClassExpr::named("c:A"))));
        assert!(set.contains(&Axiom::sub_class("c:C", ClassExpr::named("c:B"))));
    }
}
