//! Saturation reasoning over generated axiom sets.
//!
//! Left-hand sides are named classes, so named subsumption is the
//! reflexive-transitive closure of the told named superclasses after
//! conjunction decomposition. Existential restrictions on sub-properties of
//! `u:hasAssociation` and `u:hasAttribute` are inherited along that closure
//! and give the association graph and the attribute table.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::ReasonerError;
use crate::ontogen::{
    local_name, Axiom, AxiomSet, ClassExpr, HAS_ASSOCIATION, HAS_ATTRIBUTE, UML_ATTRIBUTE, UML_CLASS,
};

pub const DEFAULT_MAX_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AssocEdge {
    pub property: String,
    pub range: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubsumptionIndex {
    classes: BTreeSet<String>,
    subsumers: BTreeMap<String, BTreeSet<String>>,
    attribute_of: BTreeMap<String, BTreeSet<String>>,
    assoc_edges: BTreeMap<String, BTreeSet<AssocEdge>>,
    reach: BTreeMap<String, BTreeSet<String>>,
    roles: BTreeMap<String, String>,
    attribute_names: BTreeMap<String, String>,
}

static EMPTY_NAMES: BTreeSet<String> = BTreeSet::new();
static EMPTY_EDGES: BTreeSet<AssocEdge> = BTreeSet::new();

impl SubsumptionIndex {
    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn is_declared(&self, class: &str) -> bool {
        self.classes.contains(class)
    }

    fn require(&self, class: &str) -> Result<(), ReasonerError> {
        if self.is_declared(class) {
            Ok(())
        } else {
            Err(ReasonerError::UnknownClass(class.to_string()))
        }
    }

    /// Reflexive-transitive named superclasses of `class`.
    pub fn subsumers(&self, class: &str) -> &BTreeSet<String> {
        self.subsumers.get(class).unwrap_or(&EMPTY_NAMES)
    }

    /// Attribute classes of `class`, inherited ones included.
    pub fn attributes_of(&self, class: &str) -> &BTreeSet<String> {
        self.attribute_of.get(class).unwrap_or(&EMPTY_NAMES)
    }

    /// Outgoing association edges of `class` with their declared ranges.
    pub fn edges(&self, class: &str) -> &BTreeSet<AssocEdge> {
        self.assoc_edges.get(class).unwrap_or(&EMPTY_EDGES)
    }

    /// Classes reachable from `class` through one or more edges, following
    /// declared ranges.
    pub fn reachable_from(&self, class: &str) -> &BTreeSet<String> {
        self.reach.get(class).unwrap_or(&EMPTY_NAMES)
    }

    /// UML role name behind an association property.
    pub fn role_of<'a>(&'a self, property: &'a str) -> &'a str {
        self.roles.get(property).map(String::as_str).unwrap_or_else(|| local_name(property))
    }

    /// The UML attribute's own name behind an attribute class.
    pub fn attribute_name<'a>(&'a self, attribute_class: &'a str) -> &'a str {
        self.attribute_names.get(attribute_class).map(String::as_str).unwrap_or_else(|| local_name(attribute_class))
    }

    pub fn uml_classes(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().filter(|c| *c != UML_CLASS && self.subsumers(c).contains(UML_CLASS)).map(String::as_str)
    }

    pub fn uml_attributes(&self) -> impl Iterator<Item = &str> {
        self.classes
            .iter()
            .filter(|c| *c != UML_ATTRIBUTE && self.subsumers(c).contains(UML_ATTRIBUTE))
            .map(String::as_str)
    }

    /// Edge range `range` reaches `target` when either subsumes the other.
    pub fn range_matches(&self, range: &str, target: &str) -> bool {
        self.subsumers(target).contains(range) || self.subsumers(range).contains(target)
    }
}

#[derive(Default)]
struct Told<'a> {
    supers: BTreeMap<&'a str, Vec<&'a str>>,
    existentials: BTreeMap<&'a str, Vec<(&'a str, &'a str)>>,
}

impl<'a> Told<'a> {
    fn decompose(&mut self, sub: &'a str, expr: &'a ClassExpr) {
        match expr {
            ClassExpr::Named(n) => self.supers.entry(sub).or_default().push(n),
            ClassExpr::Conjunction(items) => items.iter().for_each(|i| self.decompose(sub, i)),
            ClassExpr::Existential(p, filler) => {
                if let ClassExpr::Named(f) = filler.as_ref() {
                    self.existentials.entry(sub).or_default().push((p, f));
                }
            }
            ClassExpr::DataExistential(_) | ClassExpr::Universal(..) => {}
        }
    }
}

fn collect_names<'a>(expr: &'a ClassExpr, out: &mut BTreeSet<&'a str>) -> Result<(), ReasonerError> {
    match expr {
        ClassExpr::Named(n) => {
            out.insert(n);
        }
        ClassExpr::Conjunction(items) => {
            for i in items {
                collect_names(i, out)?;
            }
        }
        ClassExpr::Existential(_, filler) => collect_names(filler, out)?,
        ClassExpr::DataExistential(_) => {}
        ClassExpr::Universal(p, _) => return Err(ReasonerError::NonEl(format!("universal restriction on {p}"))),
    }
    Ok(())
}

fn closure<'a>(start: &'a str, next: &BTreeMap<&'a str, Vec<&'a str>>) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = vec![start];
    while let Some(n) = queue.pop() {
        for &m in next.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(m) {
                queue.push(m);
            }
        }
    }
    seen
}

pub fn classify(axioms: &AxiomSet) -> Result<SubsumptionIndex, ReasonerError> {
    let mut names: BTreeSet<&str> = BTreeSet::from([UML_CLASS, UML_ATTRIBUTE]);
    let mut told = Told::default();
    let mut prop_supers: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for ax in axioms {
        match ax {
            Axiom::SubClassOf(sub, sup) => {
                let ClassExpr::Named(sub_name) = sub else {
                    return Err(ReasonerError::NonEl(format!("complex left-hand side in `{ax}`")));
                };
                names.insert(sub_name);
                collect_names(sup, &mut names)?;
                told.decompose(sub_name, sup);
            }
            Axiom::SubPropertyOf(sub, sup) => prop_supers.entry(sub.as_str()).or_default().push(sup.as_str()),
            Axiom::TransitiveProperty(_) => {}
        }
    }

    let mut index = SubsumptionIndex { classes: names.iter().map(|n| n.to_string()).collect(), ..Default::default() };

    // property -> (under hasAssociation, under hasAttribute)
    let mut property_kind: BTreeMap<&str, (bool, bool)> = BTreeMap::new();
    for list in told.existentials.values() {
        for &(p, _) in list {
            property_kind.entry(p).or_insert_with(|| {
                let sups = closure(p, &prop_supers);
                (sups.contains(HAS_ASSOCIATION), sups.contains(HAS_ATTRIBUTE))
            });
        }
    }

    for (&owner, list) in &told.existentials {
        for &(p, filler) in list {
            let (is_assoc, is_attr) = property_kind[p];
            if is_assoc {
                let affix = format!("{}_", local_name(owner));
                let suffix = format!("_{}", local_name(filler));
                let role = local_name(p).strip_prefix(&affix).and_then(|r| r.strip_suffix(&suffix));
                if let Some(role) = role.filter(|r| !r.is_empty()) {
                    index.roles.entry(p.to_string()).or_insert_with(|| role.to_string());
                }
            }
            if is_attr {
                let affix = format!("{}_", local_name(owner));
                if let Some(name) = local_name(filler).strip_prefix(&affix).filter(|n| !n.is_empty()) {
                    index.attribute_names.entry(filler.to_string()).or_insert_with(|| name.to_string());
                }
            }
        }
    }

    for &class in &names {
        let sups = closure(class, &told.supers);
        let mut edges = BTreeSet::new();
        let mut attrs = BTreeSet::new();
        for sup in &sups {
            for &(p, filler) in told.existentials.get(sup).map(Vec::as_slice).unwrap_or(&[]) {
                let (is_assoc, is_attr) = property_kind[p];
                if is_assoc {
                    edges.insert(AssocEdge { property: p.to_string(), range: filler.to_string() });
                }
                if is_attr {
                    attrs.insert(filler.to_string());
                }
            }
        }
        index.subsumers.insert(class.to_string(), sups.into_iter().map(str::to_string).collect());
        if !edges.is_empty() {
            index.assoc_edges.insert(class.to_string(), edges);
        }
        if !attrs.is_empty() {
            index.attribute_of.insert(class.to_string(), attrs);
        }
    }

    for class in &index.classes {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::from([class.as_str()]);
        while let Some(n) = queue.pop_front() {
            for e in index.edges(n) {
                if seen.insert(e.range.clone()) {
                    queue.push_back(&e.range);
                }
            }
        }
        if !seen.is_empty() {
            index.reach.insert(class.clone(), seen);
        }
    }
    Ok(index)
}

pub fn entails_subclass(index: &SubsumptionIndex, sub: &str, sup: &str) -> Result<bool, ReasonerError> {
    index.require(sub)?;
    index.require(sup)?;
    Ok(index.subsumers(sub).contains(sup))
}

/// True when a simple association path leads from `from` to `to`. The final
/// edge may land on a sub- or superclass of `to`; a class never reaches
/// itself.
pub fn association_reachable(index: &SubsumptionIndex, from: &str, to: &str) -> Result<bool, ReasonerError> {
    index.require(from)?;
    index.require(to)?;
    if from == to {
        return Ok(false);
    }
    let hit = |n: &str| index.edges(n).iter().any(|e| index.range_matches(&e.range, to));
    Ok(hit(from) || index.reachable_from(from).iter().any(|n| hit(n)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathStep {
    pub property: String,
    pub role: String,
    pub range: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AssociationPath {
    pub source: String,
    pub steps: Vec<PathStep>,
}

impl AssociationPath {
    /// Node count including both endpoints.
    pub fn node_count(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn intermediates(&self) -> impl Iterator<Item = &str> {
        let n = self.steps.len().saturating_sub(1);
        self.steps[..n].iter().map(|s| s.range.as_str())
    }

    fn sort_key(&self) -> (usize, Vec<(&str, &str)>) {
        (self.steps.len(), self.steps.iter().map(|s| (s.property.as_str(), s.range.as_str())).collect())
    }
}

/// All simple association paths from `from` to `to` with at most `max_nodes`
/// nodes, shortest first, then lexicographic on (property, range) steps.
///
/// Intermediate steps follow declared ranges; only the last step uses
/// subclass/superclass matching, and its range is reported as `to`.
pub fn find_paths(
    index: &SubsumptionIndex,
    from: &str,
    to: &str,
    max_nodes: usize,
) -> Result<Vec<AssociationPath>, ReasonerError> {
    if max_nodes < 2 {
        return Err(ReasonerError::NodeCap(max_nodes));
    }
    index.require(from)?;
    index.require(to)?;

    struct Search<'a> {
        index: &'a SubsumptionIndex,
        to: &'a str,
        max_nodes: usize,
        on_path: Vec<&'a str>,
        steps: Vec<&'a AssocEdge>,
        found: Vec<Vec<PathStep>>,
    }

    impl<'a> Search<'a> {
        fn step(&self, edge: &AssocEdge, range: &str) -> PathStep {
            PathStep {
                property: edge.property.clone(),
                role: self.index.role_of(&edge.property).to_string(),
                range: range.to_string(),
            }
        }

        fn visit(&mut self, node: &'a str) {
            let nodes_after = self.steps.len() + 2;
            for edge in self.index.edges(node) {
                let range = edge.range.as_str();
                if !self.on_path.contains(&self.to) && self.index.range_matches(range, self.to) {
                    let mut path: Vec<PathStep> = self.steps.iter().map(|e| self.step(e, &e.range)).collect();
                    path.push(self.step(edge, self.to));
                    self.found.push(path);
                }
                if range != self.to && nodes_after < self.max_nodes && !self.on_path.contains(&range) {
                    self.on_path.push(range);
                    self.steps.push(edge);
                    self.visit(range);
                    self.steps.pop();
                    self.on_path.pop();
                }
            }
        }
    }

    let mut search = Search { index, to, max_nodes, on_path: vec![from], steps: Vec::new(), found: Vec::new() };
    search.visit(from);
    let mut paths: Vec<AssociationPath> =
        search.found.into_iter().map(|steps| AssociationPath { source: from.to_string(), steps }).collect();
    paths.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(paths)
}
