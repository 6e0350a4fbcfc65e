#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use onco_rewriter::model::{load_model, load_thesaurus, Thesaurus, UmlModel};
use onco_rewriter::ontogen::{Axiom, AxiomSet, ClassExpr, HAS_ASSOCIATION, HAS_ATTRIBUTE};
use onco_rewriter::query::Rewriter;

pub const QUERY_C: &str = r#"Single_Nucleotide_Polymorphism and hasAssociation some (Gene and hasAttribute some (Gene_Symbol and hasValue value "TGFB1"))"#;

/// `(property, role, range)`.
pub type Step = (String, String, String);
pub type PathSet = BTreeSet<Vec<Step>>;

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn cabio() -> (UmlModel, Thesaurus) {
    (load_model(&fixture("cabio.json")).unwrap(), load_thesaurus(&fixture("cabio.thesaurus")).unwrap())
}

pub fn cabio_rewriter() -> Rewriter {
    let (model, thesaurus) = cabio();
    Rewriter::new(model, &thesaurus).unwrap()
}

pub fn rewriter_for(model: &str, thesaurus: &str) -> Rewriter {
    let model = load_model(&fixture(model)).unwrap();
    let thesaurus = load_thesaurus(&fixture(thesaurus)).unwrap();
    Rewriter::new(model, &thesaurus).unwrap()
}

/// Naive fixpoint over told axioms: subsumers, attribute classes and
/// association edges with declared ranges.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct NaiveClosure {
    pub subsumers: BTreeMap<String, BTreeSet<String>>,
    pub attributes: BTreeMap<String, BTreeSet<String>>,
    pub edges: BTreeMap<String, BTreeSet<(String, String)>>,
}

fn atoms(expr: &ClassExpr, named: &mut Vec<String>, some: &mut Vec<(String, String)>) {
    match expr {
        ClassExpr::Named(n) => named.push(n.clone()),
        ClassExpr::Conjunction(items) => items.iter().for_each(|i| atoms(i, named, some)),
        ClassExpr::Existential(p, f) => {
            if let ClassExpr::Named(n) = f.as_ref() {
                some.push((p.clone(), n.clone()));
            }
        }
        _ => {}
    }
}

fn names(expr: &ClassExpr, out: &mut BTreeSet<String>) {
    match expr {
        ClassExpr::Named(n) => {
            out.insert(n.clone());
        }
        ClassExpr::Conjunction(items) => items.iter().for_each(|i| names(i, out)),
        ClassExpr::Existential(_, f) => names(f, out),
        _ => {}
    }
}

pub fn naive_closure(axioms: &AxiomSet) -> NaiveClosure {
    let mut classes: BTreeSet<String> = BTreeSet::new();
    type Told = (Vec<String>, Vec<(String, String)>);
    let mut told: BTreeMap<String, Told> = BTreeMap::new();
    let mut sub_props: Vec<(String, String)> = Vec::new();
    for axiom in axioms.iter() {
        match axiom {
            Axiom::SubClassOf(lhs, rhs) => {
                names(lhs, &mut classes);
                names(rhs, &mut classes);
                let ClassExpr::Named(l) = lhs else { panic!("complex left-hand side") };
                let entry = told.entry(l.clone()).or_default();
                atoms(rhs, &mut entry.0, &mut entry.1);
            }
            Axiom::SubPropertyOf(a, b) => sub_props.push((a.clone(), b.clone())),
            Axiom::TransitiveProperty(_) => {}
        }
    }
    classes.insert("u:UMLClass".into());
    classes.insert("u:UMLAttribute".into());

    // Property hierarchy by repeated relaxation.
    let mut props: BTreeSet<String> = sub_props.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    for (_, some) in told.values() {
        props.extend(some.iter().map(|(p, _)| p.clone()));
    }
    let mut up: BTreeSet<(String, String)> = props.iter().map(|p| (p.clone(), p.clone())).collect();
    up.extend(sub_props.iter().cloned());
    loop {
        let snapshot: Vec<(String, String)> = up.iter().cloned().collect();
        let mut changed = false;
        for (a, b) in &snapshot {
            for (c, d) in &snapshot {
                if b == c && up.insert((a.clone(), d.clone())) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut subsumers: BTreeMap<String, BTreeSet<String>> =
        classes.iter().map(|c| (c.clone(), BTreeSet::from([c.clone()]))).collect();
    loop {
        let mut changed = false;
        for c in &classes {
            let current: Vec<String> = subsumers[c].iter().cloned().collect();
            for s in current {
                if let Some((named, _)) = told.get(&s) {
                    for n in named {
                        if subsumers.get_mut(c).unwrap().insert(n.clone()) {
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = NaiveClosure { subsumers, ..Default::default() };
    for c in &classes {
        let mut attrs = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for s in &out.subsumers[c] {
            let Some((_, some)) = told.get(s) else { continue };
            for (p, f) in some {
                if up.contains(&(p.clone(), HAS_ATTRIBUTE.to_string())) {
                    attrs.insert(f.clone());
                }
                if up.contains(&(p.clone(), HAS_ASSOCIATION.to_string())) {
                    edges.insert((p.clone(), f.clone()));
                }
            }
        }
        out.attributes.insert(c.clone(), attrs);
        out.edges.insert(c.clone(), edges);
    }
    out
}

/// All simple association paths from `from` to `to` by exhaustive search on
/// the model itself: own and inherited associations, declared targets in the
/// middle, subclass or superclass match at the end. Steps are
/// `(property, role, range)` with `c:` class names.
pub fn model_paths(model: &UmlModel, from: &str, to: &str, max_nodes: usize) -> PathSet {
    model_paths_from(model, from, max_nodes).remove(to).unwrap_or_default()
}

/// [`model_paths`] for every target class at once, keyed by target.
pub fn model_paths_from(model: &UmlModel, from: &str, max_nodes: usize) -> BTreeMap<String, PathSet> {
    let mut out: BTreeMap<String, PathSet> = BTreeMap::new();
    let mut queue: VecDeque<(Vec<String>, Vec<Step>)> = VecDeque::new();
    queue.push_back((vec![from.to_string()], Vec::new()));
    while let Some((nodes, steps)) = queue.pop_front() {
        if nodes.len() >= max_nodes {
            continue;
        }
        let here = nodes.last().unwrap().clone();
        for a in model.associations.iter().filter(|a| model.is_subclass(&here, &a.source)) {
            let property = format!("c:{}_{}_{}", a.source, a.role_name, a.target);
            let role = a.role_name.clone();
            for to in model.classes.iter().map(|c| c.name.as_str()) {
                if !nodes.iter().any(|n| n == to)
                    && (model.is_subclass(to, &a.target) || model.is_subclass(&a.target, to))
                {
                    let mut s = steps.clone();
                    s.push((property.clone(), role.clone(), format!("c:{to}")));
                    out.entry(to.to_string()).or_default().insert(s);
                }
            }
            if !nodes.contains(&a.target) {
                let mut n = nodes.clone();
                n.push(a.target.clone());
                let mut s = steps.clone();
                s.push((property, role, format!("c:{}", a.target)));
                queue.push_back((n, s));
            }
        }
    }
    out
}

/// Reflexive-transitive closure of named subsumptions by matrix relaxation.
pub fn brute_closure(concepts: &[String], subs: &[(String, String)]) -> BTreeSet<(String, String)> {
    let index: BTreeMap<&str, usize> = concepts.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let n = concepts.len();
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in subs {
        m[index[a.as_str()]][index[b.as_str()]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                let row = m[k].clone();
                for (cell, reach) in m[i].iter_mut().zip(row) {
                    *cell |= reach;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] {
                out.insert((concepts[i].clone(), concepts[j].clone()));
            }
        }
    }
    out
}

/// Path metrics by breadth-first expansion of explicit node lists:
/// (longest, journeys, paths, node total).
pub fn enumerate_metrics(adjacency: &[Vec<usize>], max_nodes: usize) -> (usize, usize, usize, usize) {
    let mut journeys = BTreeSet::new();
    let (mut longest, mut paths, mut total) = (0, 0, 0);
    for s in 0..adjacency.len() {
        let mut queue = VecDeque::from([vec![s]]);
        while let Some(path) = queue.pop_front() {
            if path.len() >= 2 {
                journeys.insert((s, *path.last().unwrap()));
                paths += 1;
                total += path.len();
                longest = longest.max(path.len());
            }
            if path.len() >= max_nodes {
                continue;
            }
            let next: BTreeSet<usize> = adjacency[*path.last().unwrap()].iter().copied().collect();
            for n in next {
                if !path.contains(&n) {
                    let mut p = path.clone();
                    p.push(n);
                    queue.push_back(p);
                }
            }
        }
    }
    (longest, journeys.len(), paths, total)
}

/// End-to-end soundness of one emitted query: grammar-valid, every association
/// follows an own or inherited role of its enclosing class to a compatible
/// class, and every attribute belongs to its enclosing class or an ancestor.
pub fn check_sound(cql: &onco_rewriter::cql::CqlQuery, model: &UmlModel) -> Result<(), String> {
    use onco_rewriter::cql::{validate_grammar, Constraint};

    fn local<'a>(model: &UmlModel, qualified: &'a str) -> Result<&'a str, String> {
        let prefix = format!("{}.", model.package_prefix);
        let name = qualified.strip_prefix(&prefix).ok_or_else(|| format!("`{qualified}` lacks the package prefix"))?;
        model.class(name).map(|_| name).ok_or_else(|| format!("`{name}` is not a model class"))
    }

    fn walk(c: &Constraint, class: &str, model: &UmlModel) -> Result<(), String> {
        match c {
            Constraint::Attribute(a) => model
                .find_attribute(class, &a.name)
                .map(|_| ())
                .ok_or_else(|| format!("`{class}` has no attribute `{}`", a.name)),
            Constraint::Association(a) => {
                let next = local(model, &a.name)?;
                let fits = model.outgoing(class).iter().any(|x| {
                    x.role_name == a.role_name
                        && (model.is_subclass(next, &x.target) || model.is_subclass(&x.target, next))
                });
                if !fits {
                    return Err(format!("`{class}.{}` cannot reach `{next}`", a.role_name));
                }
                a.child.as_ref().map_or(Ok(()), |c| walk(c, next, model))
            }
            Constraint::Group(g) => g.items.iter().try_for_each(|i| walk(i, class, model)),
        }
    }

    let report = validate_grammar(cql);
    if !report.is_valid() {
        return Err(report.violations.join("; "));
    }
    let root = local(model, &cql.target.name)?;
    cql.target.child.as_ref().map_or(Ok(()), |c| walk(c, root, model))
}
