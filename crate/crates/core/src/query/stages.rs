use serde::Serialize;

use crate::error::{QueryError, Rejection};
use crate::reasoner::{association_reachable, find_paths, PathStep, SubsumptionIndex};

use super::QueryExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Class,
    Attribute,
}

/// One thesaurus concept of the query and the UML element chosen for it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ConceptChoice {
    pub concept: String,
    pub position: Position,
    pub chosen: String,
}

/// The path chosen for one `hasAssociation` occurrence: `rank` indexes the
/// ordered list of `alternatives` paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PathChoice {
    pub from: String,
    pub to: String,
    pub rank: usize,
    pub alternatives: usize,
    pub steps: Vec<PathStep>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Provenance {
    pub concepts: Vec<ConceptChoice>,
    pub paths: Vec<PathChoice>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateQuery {
    pub ast: QueryExpr,
    pub provenance: Provenance,
}

/// Where a removed `hasValue` sat: `attribute` is the pre-order ordinal of its
/// `hasAttribute some` node, `slot` its index among that node's filler
/// conjuncts and `arity` the filler's original conjunct count (0 when the
/// value was the whole filler).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ValueBinding {
    pub attribute: usize,
    pub slot: usize,
    pub arity: usize,
    pub literal: String,
}

fn full_name(name: &str) -> String {
    if name.contains(':') {
        name.to_string()
    } else {
        crate::ontogen::concept_iri(name)
    }
}

fn malformed(message: impl Into<String>) -> QueryError {
    QueryError::Malformed(message.into())
}

fn check_class_conjunction(e: &QueryExpr) -> Result<(), QueryError> {
    let items = e.conjuncts();
    if !items.iter().any(|i| matches!(i, QueryExpr::Concept(_) | QueryExpr::UmlClass(_))) {
        return Err(malformed(format!("`{e}` names no class")));
    }
    for item in items {
        match item {
            QueryExpr::Concept(_) | QueryExpr::UmlClass(_) => {}
            QueryExpr::HasAssociationSome(f) => check_class_conjunction(f)?,
            QueryExpr::HasAttributeSome(f) => {
                let parts = f.conjuncts();
                if !parts.iter().any(|p| matches!(p, QueryExpr::Concept(_) | QueryExpr::UmlAttribute { .. })) {
                    return Err(malformed(format!("`{item}` names no attribute")));
                }
                if let Some(bad) = parts.iter().find(|p| {
                    !matches!(p, QueryExpr::Concept(_) | QueryExpr::UmlAttribute { .. } | QueryExpr::HasValue(_))
                }) {
                    return Err(malformed(format!("`{bad}` cannot restrict an attribute")));
                }
            }
            other => return Err(malformed(format!("`{other}` cannot appear in a class conjunction"))),
        }
    }
    Ok(())
}

/// Concept occurrences in pre-order with their position.
fn concept_slots<'a>(e: &'a QueryExpr, position: Position, out: &mut Vec<(&'a str, Position)>) {
    match e {
        QueryExpr::Concept(c) => out.push((c, position)),
        QueryExpr::And(items) => items.iter().for_each(|i| concept_slots(i, position, out)),
        QueryExpr::HasAssociationSome(f) => concept_slots(f, Position::Class, out),
        QueryExpr::HasAttributeSome(f) => concept_slots(f, Position::Attribute, out),
        QueryExpr::AssocStep { filler, .. } => concept_slots(filler, Position::Class, out),
        QueryExpr::HasValue(_) | QueryExpr::UmlClass(_) | QueryExpr::UmlAttribute { .. } => {}
    }
}

fn substitute(e: &QueryExpr, index: &SubsumptionIndex, chosen: &mut std::slice::Iter<'_, ConceptChoice>) -> QueryExpr {
    match e {
        QueryExpr::Concept(_) => {
            let c = chosen.next().expect("one choice per concept");
            match c.position {
                Position::Class => QueryExpr::UmlClass(c.chosen.clone()),
                Position::Attribute => QueryExpr::UmlAttribute {
                    class: c.chosen.clone(),
                    name: index.attribute_name(&c.chosen).to_string(),
                },
            }
        }
        QueryExpr::And(items) => QueryExpr::And(items.iter().map(|i| substitute(i, index, chosen)).collect()),
        QueryExpr::HasAssociationSome(f) => QueryExpr::has_association(substitute(f, index, chosen)),
        QueryExpr::HasAttributeSome(f) => QueryExpr::has_attribute(substitute(f, index, chosen)),
        QueryExpr::AssocStep { property, role, filler } => QueryExpr::AssocStep {
            property: property.clone(),
            role: role.clone(),
            filler: Box::new(substitute(filler, index, chosen)),
        },
        other => other.clone(),
    }
}

/// Replaces every concept by each UML class (class position) or attribute
/// class (attribute position) it subsumes, one candidate per combination in
/// lexicographic order of the chosen names.
///
/// Unprefixed names are thesaurus concepts; prefixed names are used as given.
pub fn extract_uml(ast: &QueryExpr, index: &SubsumptionIndex) -> Result<Vec<CandidateQuery>, QueryError> {
    extract_uml_limited(ast, index, None)
}

pub(crate) fn extract_uml_limited(
    ast: &QueryExpr,
    index: &SubsumptionIndex,
    limit: Option<usize>,
) -> Result<Vec<CandidateQuery>, QueryError> {
    check_class_conjunction(ast)?;
    let mut slots = Vec::new();
    concept_slots(ast, Position::Class, &mut slots);

    let mut options: Vec<Vec<ConceptChoice>> = Vec::with_capacity(slots.len());
    for &(concept, position) in &slots {
        let name = full_name(concept);
        let pool: Vec<&str> = match position {
            Position::Class => index.uml_classes().collect(),
            Position::Attribute => index.uml_attributes().collect(),
        };
        let matches: Vec<ConceptChoice> = pool
            .into_iter()
            .filter(|c| index.subsumers(c).contains(&name))
            .map(|c| ConceptChoice { concept: concept.to_string(), position, chosen: c.to_string() })
            .collect();
        if matches.is_empty() {
            return Err(QueryError::NoUmlCandidate { concept: concept.to_string() });
        }
        options.push(matches);
    }

    let count = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len())).unwrap_or(usize::MAX);
    if let Some(limit) = limit {
        if count > limit {
            return Err(QueryError::CandidateLimit { count, limit });
        }
    }

    Ok(cartesian(&options)
        .into_iter()
        .map(|concepts| {
            let ast = substitute(ast, index, &mut concepts.iter());
            CandidateQuery { ast, provenance: Provenance { concepts, paths: Vec::new() } }
        })
        .collect())
}

/// All combinations, first list most significant.
fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Removes every `hasValue` restriction, returning the stripped tree and the
/// removed literals in depth-first order.
pub fn extract_data_values(ast: &QueryExpr) -> (QueryExpr, Vec<ValueBinding>) {
    fn walk(e: &QueryExpr, ordinal: &mut usize, out: &mut Vec<ValueBinding>) -> QueryExpr {
        match e {
            QueryExpr::HasAttributeSome(f) => {
                let attribute = *ordinal;
                *ordinal += 1;
                let filler = match f.as_ref() {
                    QueryExpr::HasValue(v) => {
                        out.push(ValueBinding { attribute, slot: 0, arity: 0, literal: v.clone() });
                        QueryExpr::And(Vec::new())
                    }
                    QueryExpr::And(items) if items.iter().any(|i| matches!(i, QueryExpr::HasValue(_))) => {
                        let mut kept = Vec::new();
                        for (slot, item) in items.iter().enumerate() {
                            match item {
                                QueryExpr::HasValue(v) => {
                                    out.push(ValueBinding { attribute, slot, arity: items.len(), literal: v.clone() })
                                }
                                other => kept.push(walk(other, ordinal, out)),
                            }
                        }
                        if kept.len() == 1 {
                            kept.pop().unwrap()
                        } else {
                            QueryExpr::And(kept)
                        }
                    }
                    other => walk(other, ordinal, out),
                };
                QueryExpr::has_attribute(filler)
            }
            QueryExpr::And(items) => QueryExpr::And(items.iter().map(|i| walk(i, ordinal, out)).collect()),
            QueryExpr::HasAssociationSome(f) => QueryExpr::has_association(walk(f, ordinal, out)),
            QueryExpr::AssocStep { property, role, filler } => QueryExpr::AssocStep {
                property: property.clone(),
                role: role.clone(),
                filler: Box::new(walk(filler, ordinal, out)),
            },
            other => other.clone(),
        }
    }
    let mut bindings = Vec::new();
    let stripped = walk(ast, &mut 0, &mut bindings);
    (stripped, bindings)
}

/// Puts the literals removed by [`extract_data_values`] back under their
/// attribute restrictions. Association expansion in between is allowed.
pub fn reinsert_data_values(ast: &QueryExpr, bindings: &[ValueBinding]) -> Result<QueryExpr, QueryError> {
    fn walk(
        e: &QueryExpr,
        ordinal: &mut usize,
        bindings: &[ValueBinding],
        used: &mut usize,
    ) -> Result<QueryExpr, QueryError> {
        Ok(match e {
            QueryExpr::HasAttributeSome(f) => {
                let attribute = *ordinal;
                *ordinal += 1;
                let mine: Vec<&ValueBinding> = bindings.iter().filter(|b| b.attribute == attribute).collect();
                if mine.is_empty() {
                    return Ok(QueryExpr::has_attribute(walk(f, ordinal, bindings, used)?));
                }
                *used += mine.len();
                let unresolved = || QueryError::BindingUnresolved { attribute };
                let arity = mine[0].arity;
                if mine.iter().any(|b| b.arity != arity) {
                    return Err(unresolved());
                }
                if arity == 0 {
                    return match (f.as_ref(), mine.as_slice()) {
                        (QueryExpr::And(items), [b]) if items.is_empty() => {
                            Ok(QueryExpr::has_attribute(QueryExpr::value(&b.literal)))
                        }
                        _ => Err(unresolved()),
                    };
                }
                let kept = arity.checked_sub(mine.len()).ok_or_else(unresolved)?;
                let mut items: Vec<QueryExpr> = match f.as_ref() {
                    _ if kept == 1 => vec![walk(f, ordinal, bindings, used)?],
                    QueryExpr::And(items) if items.len() == kept => {
                        items.iter().map(|i| walk(i, ordinal, bindings, used)).collect::<Result<_, _>>()?
                    }
                    _ => return Err(unresolved()),
                };
                let mut mine = mine;
                mine.sort_by_key(|b| b.slot);
                for b in mine {
                    if b.slot > items.len() {
                        return Err(unresolved());
                    }
                    items.insert(b.slot, QueryExpr::value(&b.literal));
                }
                QueryExpr::has_attribute(QueryExpr::And(items))
            }
            QueryExpr::And(items) => {
                QueryExpr::And(items.iter().map(|i| walk(i, ordinal, bindings, used)).collect::<Result<_, _>>()?)
            }
            QueryExpr::HasAssociationSome(f) => QueryExpr::has_association(walk(f, ordinal, bindings, used)?),
            QueryExpr::AssocStep { property, role, filler } => QueryExpr::AssocStep {
                property: property.clone(),
                role: role.clone(),
                filler: Box::new(walk(filler, ordinal, bindings, used)?),
            },
            other => other.clone(),
        })
    }
    let mut used = 0;
    let out = walk(ast, &mut 0, bindings, &mut used)?;
    if used != bindings.len() {
        let stray = bindings.iter().map(|b| b.attribute).max().unwrap_or(0);
        return Err(QueryError::BindingUnresolved { attribute: stray });
    }
    Ok(out)
}

/// The class a conjunction is about: its first UML class conjunct.
pub(crate) fn anchor(e: &QueryExpr) -> Option<&str> {
    e.conjuncts().into_iter().find_map(|i| match i {
        QueryExpr::UmlClass(c) => Some(c.as_str()),
        _ => None,
    })
}

/// Checks a resolved, value-free query against the model: every attribute
/// restriction names an attribute of its class and every association target
/// is reachable from its source. Further class conjuncts must subsume the
/// first one.
pub fn validate_semantics(stripped: &QueryExpr, index: &SubsumptionIndex) -> Result<(), Rejection> {
    let Some(x) = anchor(stripped) else {
        return Err(Rejection::Malformed(format!("`{stripped}` names no UML class")));
    };
    let classes: Vec<&str> = stripped
        .conjuncts()
        .into_iter()
        .filter_map(|i| if let QueryExpr::UmlClass(c) = i { Some(c.as_str()) } else { None })
        .collect();
    if classes.iter().any(|c| !index.subsumers(x).contains(*c)) {
        return Err(Rejection::ConflictingClasses(classes.iter().map(|c| c.to_string()).collect()));
    }
    for item in stripped.conjuncts() {
        match item {
            QueryExpr::UmlClass(_) => {}
            QueryExpr::HasAttributeSome(f) => {
                for part in f.conjuncts() {
                    match part {
                        QueryExpr::UmlAttribute { class, .. } if index.attributes_of(x).contains(class) => {}
                        QueryExpr::UmlAttribute { class, .. } => {
                            return Err(Rejection::AttributeNotOf { class: x.to_string(), attribute: class.clone() })
                        }
                        other => {
                            return Err(Rejection::Malformed(format!("`{other}` inside an attribute restriction")))
                        }
                    }
                }
            }
            QueryExpr::HasAssociationSome(f) => {
                let Some(y) = anchor(f) else {
                    return Err(Rejection::Malformed(format!("`{f}` names no UML class")));
                };
                let reachable = association_reachable(index, x, y).map_err(|e| Rejection::Malformed(e.to_string()))?;
                if !reachable {
                    return Err(Rejection::Unreachable { from: x.to_string(), to: y.to_string() });
                }
                validate_semantics(f, index)?;
            }
            other => return Err(Rejection::Malformed(format!("`{other}` is not resolved"))),
        }
    }
    Ok(())
}

/// Source and target of every `hasAssociation` occurrence, in pre-order.
fn journeys<'a>(
    e: &'a QueryExpr,
    source: Option<&'a str>,
    out: &mut Vec<(&'a str, &'a str)>,
) -> Result<(), QueryError> {
    match e {
        QueryExpr::And(items) => {
            let here = anchor(e).or(source);
            for i in items {
                journeys(i, here, out)?;
            }
        }
        QueryExpr::HasAssociationSome(f) => {
            let from = source.ok_or_else(|| malformed(format!("`{e}` has no source class")))?;
            let to = anchor(f).ok_or_else(|| malformed(format!("`{f}` names no UML class")))?;
            out.push((from, to));
            journeys(f, Some(to), out)?;
        }
        QueryExpr::AssocStep { filler, .. } => journeys(filler, anchor(filler), out)?,
        _ => {}
    }
    Ok(())
}

fn expand(e: &QueryExpr, chosen: &mut std::slice::Iter<'_, PathChoice>) -> QueryExpr {
    match e {
        QueryExpr::And(items) => QueryExpr::And(items.iter().map(|i| expand(i, chosen)).collect()),
        QueryExpr::HasAssociationSome(f) => {
            let path = chosen.next().expect("one path per journey");
            let mut node = expand(f, chosen);
            let mut steps = path.steps.iter().rev();
            let last = steps.next().expect("paths have at least one step");
            node = QueryExpr::AssocStep {
                property: last.property.clone(),
                role: last.role.clone(),
                filler: Box::new(node),
            };
            for step in steps {
                node = QueryExpr::AssocStep {
                    property: step.property.clone(),
                    role: step.role.clone(),
                    filler: Box::new(QueryExpr::And(vec![QueryExpr::UmlClass(step.range.clone()), node])),
                };
            }
            node
        }
        QueryExpr::AssocStep { property, role, filler } => QueryExpr::AssocStep {
            property: property.clone(),
            role: role.clone(),
            filler: Box::new(expand(filler, chosen)),
        },
        other => other.clone(),
    }
}

/// Replaces each `hasAssociation some Y` under class `X` by a chain of
/// association steps, one candidate per combination of paths from `X` to `Y`
/// (first occurrence most significant, paths in reasoner order).
pub fn find_property_paths(
    candidate: &CandidateQuery,
    index: &SubsumptionIndex,
    max_nodes: usize,
) -> Result<Vec<CandidateQuery>, QueryError> {
    let mut pairs = Vec::new();
    journeys(&candidate.ast, None, &mut pairs)?;
    let mut options = Vec::with_capacity(pairs.len());
    for (from, to) in pairs {
        let paths = find_paths(index, from, to, max_nodes)?;
        if paths.is_empty() {
            return Err(QueryError::NoPath { from: from.to_string(), to: to.to_string(), max_nodes });
        }
        let alternatives = paths.len();
        options.push(
            paths
                .into_iter()
                .enumerate()
                .map(|(rank, p)| PathChoice {
                    from: from.to_string(),
                    to: to.to_string(),
                    rank,
                    alternatives,
                    steps: p.steps,
                })
                .collect::<Vec<_>>(),
        );
    }
    Ok(cartesian(&options)
        .into_iter()
        .map(|paths| {
            let ast = expand(&candidate.ast, &mut paths.iter());
            let mut provenance = candidate.provenance.clone();
            provenance.paths.extend(paths);
            CandidateQuery { ast, provenance }
        })
        .collect())
}
