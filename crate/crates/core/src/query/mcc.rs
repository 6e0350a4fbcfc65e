use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cql::{Constraint, CqlAssociation, CqlAttribute, CqlGroup, CqlQuery, CqlTarget, LogicalOp, Predicate};
use crate::error::QueryError;
use crate::model::UmlModel;
use crate::ontogen::local_name;

use super::stages::anchor;
use super::QueryExpr;

/// Collection monoid of a comprehension. Only bags are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Monoid {
    Bag,
}

impl Monoid {
    /// Accumulator symbol ⊕.
    pub fn symbol(self) -> &'static str {
        match self {
            Monoid::Bag => "⊎",
        }
    }

    /// Identity Z⊕.
    pub fn zero(self) -> &'static str {
        match self {
            Monoid::Bag => "{{}}",
        }
    }

    /// Unit U⊕(e).
    pub fn unit(self, e: &str) -> String {
        match self {
            Monoid::Bag => format!("{{{{{e}}}}}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Qualifier {
    /// `v ← Class`: ranges over the class extent.
    Extent {
        var: String,
        class: String,
    },
    /// `v ← source.role`
    Path {
        var: String,
        source: String,
        role: String,
    },
    /// `v ← Class` restricting an already bound variable.
    TypeBind {
        var: String,
        class: String,
    },
    Filter {
        var: String,
        attribute: String,
        predicate: Predicate,
        literal: Option<String>,
    },
}

impl Qualifier {
    pub fn var(&self) -> &str {
        match self {
            Qualifier::Extent { var, .. }
            | Qualifier::Path { var, .. }
            | Qualifier::TypeBind { var, .. }
            | Qualifier::Filter { var, .. } => var,
        }
    }
}

impl fmt::Display for Qualifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qualifier::Extent { var, class } | Qualifier::TypeBind { var, class } => write!(f, "{var} ← {class}"),
            Qualifier::Path { var, source, role } => write!(f, "{var} ← {source}.{role}"),
            Qualifier::Filter { var, attribute, predicate, literal } => {
                write!(f, "{var}.{attribute}")?;
                let op = match predicate {
                    Predicate::EqualTo => "=",
                    Predicate::NotEqualTo => "≠",
                    Predicate::Like => "like",
                    Predicate::IsNull => "is null",
                    Predicate::IsNotNull => "is not null",
                    Predicate::LessThan => "<",
                    Predicate::LessThanEqualTo => "≤",
                    Predicate::GreaterThan => ">",
                    Predicate::GreaterThanEqualTo => "≥",
                };
                write!(f, " {op}")?;
                match literal {
                    Some(l) => write!(f, " {l}"),
                    None => Ok(()),
                }
            }
        }
    }
}

/// `⊕{ head ‖ qualifiers }`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MccComprehension {
    pub monoid: Monoid,
    pub head: String,
    pub qualifiers: Vec<Qualifier>,
}

impl MccComprehension {
    /// Checks that the head is bound by the first qualifier, which must be an
    /// extent, and that every variable is bound before use.
    pub fn check_scoping(&self) -> Result<(), QueryError> {
        let mut bound = BTreeSet::new();
        match self.qualifiers.first() {
            Some(Qualifier::Extent { var, .. }) if *var == self.head => {}
            _ => return Err(QueryError::Mismatch(format!("head `{}` is not bound by a leading extent", self.head))),
        }
        for q in &self.qualifiers {
            match q {
                Qualifier::Extent { var, .. } => {
                    bound.insert(var.as_str());
                }
                Qualifier::Path { var, source, .. } => {
                    if !bound.contains(source.as_str()) {
                        return Err(QueryError::Mismatch(format!("`{q}` uses unbound `{source}`")));
                    }
                    if !bound.insert(var.as_str()) {
                        return Err(QueryError::Mismatch(format!("`{q}` rebinds `{var}`")));
                    }
                }
                Qualifier::TypeBind { var, .. } | Qualifier::Filter { var, .. } => {
                    if !bound.contains(var.as_str()) {
                        return Err(QueryError::Mismatch(format!("`{q}` uses unbound `{var}`")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MccComprehension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{ {} ‖ ", self.monoid.symbol(), self.head)?;
        for (i, q) in self.qualifiers.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str(" }")
    }
}

/// `LIKE` for literals with SQL wildcards, `EQUAL_TO` otherwise.
pub fn predicate_for(literal: &str) -> Predicate {
    if literal.contains(['%', '_']) {
        Predicate::Like
    } else {
        Predicate::EqualTo
    }
}

#[derive(Default)]
struct Vars {
    used: BTreeMap<char, usize>,
}

impl Vars {
    fn fresh(&mut self, seed: &str) -> String {
        let letter = seed.chars().find(|c| c.is_alphabetic()).map_or('v', |c| c.to_lowercase().next().unwrap_or('v'));
        let n = self.used.entry(letter).or_insert(0);
        *n += 1;
        if *n == 1 {
            letter.to_string()
        } else {
            format!("{letter}{n}")
        }
    }
}

/// Translates a path-expanded query with values into a bag comprehension.
///
/// The head variable ranges over the first class; each association step adds
/// a path generator named after its role and a type binding, and each
/// attribute restriction adds one filter per value (`is not null` when it has
/// none).
pub fn to_mcc(ast: &QueryExpr) -> Result<MccComprehension, QueryError> {
    let head_class = anchor(ast).ok_or_else(|| QueryError::Malformed(format!("`{ast}` names no UML class")))?;
    let mut vars = Vars::default();
    let head = vars.fresh(local_name(head_class));
    let mut qualifiers = vec![Qualifier::Extent { var: head.clone(), class: local_name(head_class).to_string() }];
    conjunction(ast, &head, &mut vars, &mut qualifiers)?;
    Ok(MccComprehension { monoid: Monoid::Bag, head, qualifiers })
}

fn conjunction(e: &QueryExpr, var: &str, vars: &mut Vars, out: &mut Vec<Qualifier>) -> Result<(), QueryError> {
    for item in e.conjuncts() {
        match item {
            QueryExpr::UmlClass(_) => {}
            QueryExpr::HasAttributeSome(f) => {
                let parts = f.conjuncts();
                let values: Vec<&str> = parts
                    .iter()
                    .filter_map(|p| if let QueryExpr::HasValue(v) = p { Some(v.as_str()) } else { None })
                    .collect();
                for part in &parts {
                    match part {
                        QueryExpr::UmlAttribute { name, .. } => {
                            let filter = |predicate, literal: Option<&str>| Qualifier::Filter {
                                var: var.to_string(),
                                attribute: name.clone(),
                                predicate,
                                literal: literal.map(str::to_string),
                            };
                            if values.is_empty() {
                                out.push(filter(Predicate::IsNotNull, None));
                            }
                            for v in &values {
                                out.push(filter(predicate_for(v), Some(v)));
                            }
                        }
                        QueryExpr::HasValue(_) => {}
                        other => {
                            return Err(QueryError::Malformed(format!("`{other}` inside an attribute restriction")))
                        }
                    }
                }
            }
            QueryExpr::AssocStep { role, filler, .. } => {
                let class =
                    anchor(filler).ok_or_else(|| QueryError::Malformed(format!("`{filler}` names no UML class")))?;
                let next = vars.fresh(role);
                out.push(Qualifier::Path { var: next.clone(), source: var.to_string(), role: role.clone() });
                out.push(Qualifier::TypeBind { var: next.clone(), class: local_name(class).to_string() });
                conjunction(filler, &next, vars, out)?;
            }
            other => return Err(QueryError::Malformed(format!("`{other}` is not path-expanded and resolved"))),
        }
    }
    Ok(())
}

/// Builds the CQL query: the head class becomes the target, each path
/// generator with its type binding a nested association and each filter an
/// attribute. Several restrictions on one variable are grouped with AND.
pub fn mcc_to_cql(m: &MccComprehension, model: &UmlModel) -> Result<CqlQuery, QueryError> {
    m.check_scoping()?;
    let mismatch = QueryError::Mismatch;
    let mut class_of: BTreeMap<&str, &str> = BTreeMap::new();
    let mut step_of: BTreeMap<&str, (&str, &str)> = BTreeMap::new();
    let mut children: BTreeMap<&str, Vec<&Qualifier>> = BTreeMap::new();

    for q in &m.qualifiers {
        match q {
            Qualifier::Extent { var, class } => {
                if model.class(class).is_none() {
                    return Err(mismatch(format!("`{class}` is not a model class")));
                }
                class_of.insert(var, class);
            }
            Qualifier::Path { var, source, role } => {
                let owner = class_of[source.as_str()];
                if !model.outgoing(owner).iter().any(|a| a.role_name == *role) {
                    return Err(mismatch(format!("`{owner}` has no association role `{role}`")));
                }
                step_of.insert(var, (source, role));
                children.entry(source).or_default().push(q);
            }
            Qualifier::TypeBind { var, class } => {
                if model.class(class).is_none() {
                    return Err(mismatch(format!("`{class}` is not a model class")));
                }
                if let Some((source, role)) = step_of.get(var.as_str()) {
                    let owner = class_of[source];
                    let fits = model.outgoing(owner).iter().any(|a| {
                        a.role_name == *role
                            && (model.is_subclass(class, &a.target) || model.is_subclass(&a.target, class))
                    });
                    if !fits {
                        return Err(mismatch(format!("`{owner}.{role}` cannot hold a `{class}`")));
                    }
                }
                class_of.insert(var, class);
            }
            Qualifier::Filter { var, attribute, .. } => {
                let Some(class) = class_of.get(var.as_str()) else {
                    return Err(mismatch(format!("`{var}` has no class")));
                };
                if model.find_attribute(class, attribute).is_none() {
                    return Err(mismatch(format!("`{class}` has no attribute `{attribute}`")));
                }
                children.entry(var).or_default().push(q);
            }
        }
    }

    if let Some(var) = step_of.keys().find(|v| !class_of.contains_key(*v)) {
        return Err(mismatch(format!("`{var}` has no type binding")));
    }

    fn constraint(
        var: &str,
        class_of: &BTreeMap<&str, &str>,
        children: &BTreeMap<&str, Vec<&Qualifier>>,
        model: &UmlModel,
    ) -> Option<Constraint> {
        let mut items: Vec<Constraint> = children
            .get(var)
            .into_iter()
            .flatten()
            .map(|q| match q {
                Qualifier::Filter { attribute, predicate, literal, .. } => {
                    Constraint::Attribute(CqlAttribute::new(attribute.clone(), *predicate, literal.clone()))
                }
                Qualifier::Path { var: next, role, .. } => Constraint::Association(Box::new(CqlAssociation {
                    name: model.qualified_name(class_of[next.as_str()]),
                    role_name: role.clone(),
                    child: constraint(next, class_of, children, model),
                })),
                _ => unreachable!("only filters and paths are children"),
            })
            .collect();
        match items.len() {
            0 => None,
            1 => items.pop(),
            _ => Some(Constraint::Group(CqlGroup { op: LogicalOp::And, items })),
        }
    }

    Ok(CqlQuery {
        target: CqlTarget {
            name: model.qualified_name(class_of[m.head.as_str()]),
            child: constraint(&m.head, &class_of, &children, model),
        },
        modifier: None,
    })
}
