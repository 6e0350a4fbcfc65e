//! Annotated UML information models and thesaurus fixtures.
//!
//! A model document is JSON with the fields `project`, `version`,
//! `packagePrefix`, `classes[]` and `associations[]`. A thesaurus document is
//! line oriented: `CONCEPT <name>`, `SUB <child> <parent>`, `DISJOINT <a> <b>`,
//! with `#` starting a comment.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Datatype {
    String,
    Integer,
    Float,
    Boolean,
    Date,
}

impl Datatype {
    pub fn xsd_name(self) -> &'static str {
        match self {
            Datatype::String => "xsd:string",
            Datatype::Integer => "xsd:integer",
            Datatype::Float => "xsd:double",
            Datatype::Boolean => "xsd:boolean",
            Datatype::Date => "xsd:dateTime",
        }
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Datatype::String => "string",
            Datatype::Integer => "integer",
            Datatype::Float => "float",
            Datatype::Boolean => "boolean",
            Datatype::Date => "date",
        };
        f.write_str(s)
    }
}

/// Primary concept plus an ordered list of qualifier concepts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub primary: String,
    #[serde(default)]
    pub qualifiers: Vec<String>,
}

impl Annotation {
    pub fn new(primary: impl Into<String>) -> Self {
        Annotation { primary: primary.into(), qualifiers: Vec::new() }
    }

    pub fn qualified<I, S>(primary: impl Into<String>, qualifiers: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Annotation { primary: primary.into(), qualifiers: qualifiers.into_iter().map(Into::into).collect() }
    }

    pub fn concepts(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.primary.as_str()).chain(self.qualifiers.iter().map(String::as_str))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UmlAttribute {
    pub name: String,
    pub datatype: Datatype,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UmlClass {
    pub name: String,
    #[serde(default)]
    pub superclasses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<Annotation>,
    #[serde(default)]
    pub attributes: Vec<UmlAttribute>,
}

impl UmlClass {
    pub fn new(name: impl Into<String>) -> Self {
        UmlClass { name: name.into(), superclasses: Vec::new(), annotation: None, attributes: Vec::new() }
    }

    pub fn attribute(&self, name: &str) -> Option<&UmlAttribute> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

/// A directed, navigable association end: `source --roleName--> target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UmlAssociation {
    pub source: String,
    #[serde(rename = "roleName")]
    pub role_name: String,
    pub target: String,
}

impl UmlAssociation {
    pub fn new(source: impl Into<String>, role_name: impl Into<String>, target: impl Into<String>) -> Self {
        UmlAssociation { source: source.into(), role_name: role_name.into(), target: target.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct UmlModel {
    pub project: String,
    pub version: String,
    pub package_prefix: String,
    #[serde(default)]
    pub classes: Vec<UmlClass>,
    #[serde(default)]
    pub associations: Vec<UmlAssociation>,
}

impl UmlModel {
    pub fn class(&self, name: &str) -> Option<&UmlClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Proper ancestors of `class` in breadth-first order over the declared
    /// superclass lists, each listed once.
    pub fn ancestors(&self, class: &str) -> Vec<&str> {
        let by_name: HashMap<&str, &UmlClass> = self.classes.iter().map(|c| (c.name.as_str(), c)).collect();
        let mut out: Vec<&str> = Vec::new();
        let mut seen: HashSet<&str> = HashSet::from([class]);
        let mut frontier: Vec<&str> = vec![class];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for name in frontier {
                let Some(c) = by_name.get(name) else { continue };
                for sup in &c.superclasses {
                    if seen.insert(sup.as_str()) {
                        out.push(sup.as_str());
                        next.push(sup.as_str());
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// True when `sub` equals `sup` or `sup` is one of its ancestors.
    pub fn is_subclass(&self, sub: &str, sup: &str) -> bool {
        sub == sup || self.ancestors(sub).contains(&sup)
    }

    /// Outgoing associations of `class`, own ones first, then those inherited
    /// from ancestors in ancestor order.
    pub fn outgoing(&self, class: &str) -> Vec<&UmlAssociation> {
        let mut owners = vec![class];
        owners.extend(self.ancestors(class));
        owners.iter().flat_map(|owner| self.associations.iter().filter(move |a| a.source == *owner)).collect()
    }

    /// Resolves an attribute on `class` or its ancestors, returning the owning
    /// class name with it.
    pub fn find_attribute(&self, class: &str, attribute: &str) -> Option<(&str, &UmlAttribute)> {
        let mut owners = vec![class];
        owners.extend(self.ancestors(class));
        owners.into_iter().find_map(|owner| {
            let c = self.class(owner)?;
            c.attribute(attribute).map(|a| (c.name.as_str(), a))
        })
    }

    pub fn qualified_name(&self, class: &str) -> String {
        if self.package_prefix.is_empty() {
            class.to_string()
        } else {
            format!("{}.{}", self.package_prefix, class)
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, class) in self.classes.iter().enumerate() {
            if class.name.is_empty() {
                return Err(ModelError::Invalid {
                    location: format!("classes[{i}].name"),
                    message: "empty class name".into(),
                });
            }
            if let Some(first) = index.insert(class.name.as_str(), i) {
                return Err(ModelError::DuplicateClass {
                    name: class.name.clone(),
                    location: format!("classes[{i}] (first declared at classes[{first}])"),
                });
            }
            let mut attrs = HashSet::new();
            for (j, attr) in class.attributes.iter().enumerate() {
                if attr.name.is_empty() {
                    return Err(ModelError::Invalid {
                        location: format!("classes[{i}].attributes[{j}].name"),
                        message: "empty attribute name".into(),
                    });
                }
                if !attrs.insert(attr.name.as_str()) {
                    return Err(ModelError::DuplicateAttribute {
                        class: class.name.clone(),
                        attribute: attr.name.clone(),
                        location: format!("classes[{i}].attributes[{j}]"),
                    });
                }
            }
        }
        for (i, class) in self.classes.iter().enumerate() {
            for (j, sup) in class.superclasses.iter().enumerate() {
                if !index.contains_key(sup.as_str()) {
                    return Err(ModelError::UnknownSuperclass {
                        name: sup.clone(),
                        location: format!("classes[{i}].superclasses[{j}]"),
                    });
                }
            }
        }
        let mut roles = HashSet::new();
        for (i, assoc) in self.associations.iter().enumerate() {
            for (field, end) in [("source", &assoc.source), ("target", &assoc.target)] {
                if !index.contains_key(end.as_str()) {
                    return Err(ModelError::DanglingEndpoint {
                        name: end.clone(),
                        location: format!("associations[{i}].{field}"),
                    });
                }
            }
            if assoc.role_name.is_empty() {
                return Err(ModelError::Invalid {
                    location: format!("associations[{i}].roleName"),
                    message: "empty role name".into(),
                });
            }
            if !roles.insert((assoc.source.as_str(), assoc.role_name.as_str())) {
                return Err(ModelError::DuplicateRole {
                    source_class: assoc.source.clone(),
                    role: assoc.role_name.clone(),
                    location: format!("associations[{i}]"),
                });
            }
        }
        if let Some(class) = self.generalization_cycle() {
            let i = index[class.as_str()];
            return Err(ModelError::GeneralizationCycle { name: class, location: format!("classes[{i}]") });
        }
        Ok(())
    }

    fn generalization_cycle(&self) -> Option<String> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: HashMap<&str, u8> = HashMap::new();
        let by_name: HashMap<&str, &UmlClass> = self.classes.iter().map(|c| (c.name.as_str(), c)).collect();
        for root in &self.classes {
            if state.get(root.name.as_str()).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack: Vec<(&str, usize)> = vec![(root.name.as_str(), 0)];
            state.insert(root.name.as_str(), 1);
            while let Some((name, next)) = stack.pop() {
                let sups = &by_name[name].superclasses;
                if next < sups.len() {
                    stack.push((name, next + 1));
                    let sup = sups[next].as_str();
                    match state.get(sup).copied().unwrap_or(0) {
                        0 => {
                            state.insert(sup, 1);
                            stack.push((sup, 0));
                        }
                        1 => return Some(sup.to_string()),
                        _ => {}
                    }
                } else {
                    state.insert(name, 2);
                }
            }
        }
        None
    }

    /// Checks every annotation concept against the thesaurus.
    pub fn validate_annotations(&self, thesaurus: &Thesaurus) -> Result<(), ModelError> {
        for (i, class) in self.classes.iter().enumerate() {
            if let Some(ann) = &class.annotation {
                check_annotation(ann, thesaurus, || format!("classes[{i}].annotation"))?;
            }
            for (j, attr) in class.attributes.iter().enumerate() {
                if let Some(ann) = &attr.annotation {
                    check_annotation(ann, thesaurus, || format!("classes[{i}].attributes[{j}].annotation"))?;
                }
            }
        }
        Ok(())
    }
}

fn check_annotation(ann: &Annotation, thesaurus: &Thesaurus, location: impl Fn() -> String) -> Result<(), ModelError> {
    for concept in ann.concepts() {
        if !thesaurus.contains(concept) {
            return Err(ModelError::UnknownConcept { name: concept.to_string(), location: location() });
        }
    }
    Ok(())
}

pub fn load_model(document: &str) -> Result<UmlModel, ModelError> {
    let model: UmlModel = serde_json::from_str(document).map_err(|e| ModelError::Malformed {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    model.validate()?;
    Ok(model)
}

/// Named concepts with told subsumption and disjointness axioms.
///
/// Subsumptions keep document order. Disjoint pairs are stored with the
/// lexicographically smaller name first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    concepts: BTreeSet<String>,
    subsumptions: Vec<(String, String)>,
    disjointness: Vec<(String, String)>,
}

impl Thesaurus {
    pub fn concepts(&self) -> &BTreeSet<String> {
        &self.concepts
    }

    pub fn subsumptions(&self) -> &[(String, String)] {
        &self.subsumptions
    }

    pub fn disjointness(&self) -> &[(String, String)] {
        &self.disjointness
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.concepts.contains(concept)
    }

    /// Builds a thesaurus from parts, enforcing the same invariants as
    /// [`load_thesaurus`].
    pub fn from_parts<C, S, D>(concepts: C, subsumptions: S, disjointness: D) -> Result<Self, ModelError>
    where
        C: IntoIterator<Item = String>,
        S: IntoIterator<Item = (String, String)>,
        D: IntoIterator<Item = (String, String)>,
    {
        let mut t = Thesaurus { concepts: concepts.into_iter().collect(), ..Default::default() };
        for (i, (child, parent)) in subsumptions.into_iter().enumerate() {
            t.add_subsumption(child, parent, i + 1)?;
        }
        for (i, (a, b)) in disjointness.into_iter().enumerate() {
            t.add_disjoint(a, b, i + 1)?;
        }
        t.check_acyclic()?;
        Ok(t)
    }

    fn require(&self, name: &str, line: usize) -> Result<(), ModelError> {
        if self.concepts.contains(name) {
            Ok(())
        } else {
            Err(ModelError::UndeclaredConcept { name: name.to_string(), line })
        }
    }

    fn add_subsumption(&mut self, child: String, parent: String, line: usize) -> Result<(), ModelError> {
        self.require(&child, line)?;
        self.require(&parent, line)?;
        if child != parent && !self.subsumptions.iter().any(|(c, p)| *c == child && *p == parent) {
            self.subsumptions.push((child, parent));
        }
        Ok(())
    }

    fn add_disjoint(&mut self, a: String, b: String, line: usize) -> Result<(), ModelError> {
        self.require(&a, line)?;
        self.require(&b, line)?;
        let pair = if a <= b { (a, b) } else { (b, a) };
        if !self.disjointness.contains(&pair) {
            self.disjointness.push(pair);
        }
        Ok(())
    }

    fn check_acyclic(&self) -> Result<(), ModelError> {
        let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (c, p) in &self.subsumptions {
            parents.entry(c.as_str()).or_default().push(p.as_str());
        }
        let mut state: HashMap<&str, u8> = HashMap::new();
        for start in parents.keys().copied() {
            if state.contains_key(start) {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state.insert(start, 1);
            while let Some((node, next)) = stack.pop() {
                let ps = parents.get(node).map(Vec::as_slice).unwrap_or(&[]);
                if next < ps.len() {
                    stack.push((node, next + 1));
                    let p = ps[next];
                    match state.get(p).copied().unwrap_or(0) {
                        0 => {
                            state.insert(p, 1);
                            stack.push((p, 0));
                        }
                        1 => return Err(ModelError::SubsumptionCycle { name: p.to_string() }),
                        _ => {}
                    }
                } else {
                    state.insert(node, 2);
                }
            }
        }
        Ok(())
    }
}

pub fn load_thesaurus(document: &str) -> Result<Thesaurus, ModelError> {
    let mut concepts = BTreeSet::new();
    let mut subs = Vec::new();
    let mut disjoints = Vec::new();
    for (i, raw) in document.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let malformed = |message: &str| ModelError::MalformedLine { line: line_no, message: message.to_string() };
        match fields.as_slice() {
            ["CONCEPT", name] => {
                concepts.insert(name.to_string());
            }
            ["SUB", child, parent] => subs.push((line_no, child.to_string(), parent.to_string())),
            ["DISJOINT", a, b] => disjoints.push((line_no, a.to_string(), b.to_string())),
            ["CONCEPT", ..] => return Err(malformed("CONCEPT takes exactly one name")),
            ["SUB", ..] => return Err(malformed("SUB takes exactly two names")),
            ["DISJOINT", ..] => return Err(malformed("DISJOINT takes exactly two names")),
            [keyword, ..] => return Err(malformed(&format!("unknown keyword `{keyword}`"))),
            [] => unreachable!(),
        }
    }
    let mut t = Thesaurus { concepts, ..Default::default() };
    for (line, child, parent) in subs {
        t.add_subsumption(child, parent, line)?;
    }
    for (line, a, b) in disjoints {
        t.add_disjoint(a, b, line)?;
    }
    t.check_acyclic()?;
    Ok(t)
}

/// The set of thesaurus concept names a model's annotations refer to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Signature(pub BTreeSet<String>);

impl Signature {
    pub fn contains(&self, concept: &str) -> bool {
        self.0.contains(concept)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for Signature {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Signature(iter.into_iter().map(Into::into).collect())
    }
}

pub fn model_signature(model: &UmlModel) -> Signature {
    let class_anns = model.classes.iter().filter_map(|c| c.annotation.as_ref());
    let attr_anns = model.classes.iter().flat_map(|c| c.attributes.iter().filter_map(|a| a.annotation.as_ref()));
    class_anns.chain(attr_anns).flat_map(Annotation::concepts).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_class_model() -> UmlModel {
        UmlModel {
            project: "p".into(),
            version: "1".into(),
            package_prefix: "org.example".into(),
            classes: vec![UmlClass::new("A"), UmlClass::new("B")],
            associations: vec![UmlAssociation::new("A", "b", "B")],
        }
    }

    #[test]
    fn empty_class_list_is_valid() {
        let m = load_model(r#"{"project":"x","version":"1","packagePrefix":"p","classes":[]}"#).unwrap();
        assert!(m.classes.is_empty());
        assert!(model_signature(&m).is_empty());
    }

    #[test]
    fn dangling_association_target() {
        let doc = r#"{"project":"x","version":"1","packagePrefix":"p",
            "classes":[{"name":"A"}],
            "associations":[{"source":"A","roleName":"b","target":"B"}]}"#;
        match load_model(doc) {
            Err(ModelError::DanglingEndpoint { name, location }) => {
                assert_eq!(name, "B");
                assert_eq!(location, "associations[0].target");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_class_and_role() {
        let mut m = two_class_model();
        m.classes.push(UmlClass::new("A"));
        assert!(matches!(m.validate(), Err(ModelError::DuplicateClass { .. })));

        let mut m = two_class_model();
        m.associations.push(UmlAssociation::new("A", "b", "A"));
        assert!(matches!(m.validate(), Err(ModelError::DuplicateRole { .. })));
    }

    #[test]
    fn generalization_cycle_rejected() {
        let mut m = two_class_model();
        m.classes[0].superclasses.push("B".into());
        m.classes[1].superclasses.push("A".into());
        assert!(matches!(m.validate(), Err(ModelError::GeneralizationCycle { .. })));
    }

    #[test]
    fn unknown_datatype_is_load_error() {
        let doc = r#"{"project":"x","version":"1","packagePrefix":"p",
            "classes":[{"name":"A","attributes":[{"name":"a","datatype":"decimal"}]}]}"#;
        assert!(matches!(load_model(doc), Err(ModelError::Malformed { .. })));
    }

    #[test]
    fn signature_of_single_qualified_class() {
        let mut m = two_class_model();
        m.classes[0].annotation = Some(Annotation::qualified("P", ["Q1", "Q2"]));
        let sig = model_signature(&m);
        assert_eq!(sig, ["P", "Q1", "Q2"].into_iter().collect());
    }

    #[test]
    fn thesaurus_single_concept() {
        let t = load_thesaurus("CONCEPT Only\n").unwrap();
        assert_eq!(t.concepts().len(), 1);
        assert!(t.subsumptions().is_empty());
    }

    #[test]
    fn thesaurus_cycle_rejected() {
        let doc = "CONCEPT A\nCONCEPT B\nSUB A B\nSUB B A\n";
        assert!(matches!(load_thesaurus(doc), Err(ModelError::SubsumptionCycle { .. })));
    }

    #[test]
    fn thesaurus_errors_carry_lines() {
        match load_thesaurus("CONCEPT A\n# note\nSUB A Missing\n") {
            Err(ModelError::UndeclaredConcept { name, line }) => {
                assert_eq!(name, "Missing");
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_thesaurus("CONCEPT\n"), Err(ModelError::MalformedLine { line: 1, .. })));
        assert!(matches!(load_thesaurus("EQUIV A B\n"), Err(ModelError::MalformedLine { line: 1, .. })));
    }

    #[test]
    fn inherited_outgoing_edges() {
        let mut m = two_class_model();
        m.classes.push(UmlClass { superclasses: vec!["A".into()], ..UmlClass::new("C") });
        let out: Vec<_> = m.outgoing("C").into_iter().map(|a| a.role_name.as_str()).collect();
        assert_eq!(out, ["b"]);
        assert!(m.is_subclass("C", "A"));
        assert!(!m.is_subclass("A", "C"));
    }
}
