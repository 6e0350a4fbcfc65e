//! Seeded generators for synthetic models, thesauri, axiom sets, graphs and
//! queries, plus the fixed benchmark model used for stage timings.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Annotation, Datatype, Thesaurus, UmlAssociation, UmlAttribute, UmlClass, UmlModel};
use crate::ontogen::{Axiom, AxiomSet, ClassExpr, HAS_ASSOCIATION, HAS_ATTRIBUTE};
use crate::query::QueryExpr;

pub const SEED_VAR: &str = "ONCO_REWRITER_SEED";
pub const DEFAULT_SEED: u64 = 0x0C0_2011;

/// The seed from `ONCO_REWRITER_SEED` when set and numeric, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DATATYPES: [Datatype; 5] =
    [Datatype::String, Datatype::Integer, Datatype::Float, Datatype::Boolean, Datatype::Date];

/// Random directed graph on `nodes` nodes as an adjacency list; each ordered
/// pair (self loops included) is an edge with probability `density`.
pub fn random_graph<R: Rng>(rng: &mut R, nodes: usize, density: f64) -> Vec<Vec<usize>> {
    (0..nodes).map(|_| (0..nodes).filter(|_| rng.gen_bool(density)).collect()).collect()
}

/// Random acyclic thesaurus over concepts `T0..T{concepts-1}` with up to
/// `max_axioms` subsumptions (child index above parent index) and a few
/// disjointness pairs.
pub fn random_thesaurus<R: Rng>(rng: &mut R, concepts: usize, max_axioms: usize) -> Thesaurus {
    let names: Vec<String> = (0..concepts).map(|i| format!("T{i}")).collect();
    random_thesaurus_over(rng, &names, max_axioms)
}

fn random_thesaurus_over<R: Rng>(rng: &mut R, names: &[String], max_axioms: usize) -> Thesaurus {
    let mut subs = Vec::new();
    if names.len() > 1 {
        let target = rng.gen_range(0..=max_axioms);
        for _ in 0..target * 2 {
            if subs.len() >= target {
                break;
            }
            let child = rng.gen_range(1..names.len());
            let parent = rng.gen_range(0..child);
            let pair = (names[child].clone(), names[parent].clone());
            if !subs.contains(&pair) {
                subs.push(pair);
            }
        }
    }
    let mut disjoint = Vec::new();
    if names.len() > 1 {
        for _ in 0..rng.gen_range(0..=3) {
            let a = rng.gen_range(0..names.len());
            let b = rng.gen_range(0..names.len());
            if a != b {
                disjoint.push((names[a].clone(), names[b].clone()));
            }
        }
    }
    Thesaurus::from_parts(names.iter().cloned(), subs, disjoint).expect("generated thesaurus is acyclic")
}

/// Shape parameters for [`random_model`].
#[derive(Debug, Clone, Copy)]
pub struct ModelShape {
    pub classes: usize,
    /// Distinct class concepts; fewer than `classes` makes concepts shared.
    pub class_concepts: usize,
    pub attribute_concepts: usize,
    pub associations: usize,
    pub max_attributes: usize,
    /// Probability that a class gets a superclass.
    pub generalization: f64,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape {
            classes: 8,
            class_concepts: 6,
            attribute_concepts: 5,
            associations: 10,
            max_attributes: 3,
            generalization: 0.2,
        }
    }
}

/// Random valid model with a thesaurus covering its annotations.
///
/// Classes are `C0..`, class concepts `K0..`, attribute concepts `A0..`;
/// superclasses always have a lower index.
pub fn random_model<R: Rng>(rng: &mut R, shape: ModelShape) -> (UmlModel, Thesaurus) {
    let class_concepts: Vec<String> = (0..shape.class_concepts.max(1)).map(|i| format!("K{i}")).collect();
    let attribute_concepts: Vec<String> = (0..shape.attribute_concepts.max(1)).map(|i| format!("A{i}")).collect();
    let mut all = class_concepts.clone();
    all.extend(attribute_concepts.iter().cloned());

    let mut classes = Vec::with_capacity(shape.classes);
    for i in 0..shape.classes {
        let mut class = UmlClass::new(format!("C{i}"));
        if i > 0 && rng.gen_bool(shape.generalization) {
            class.superclasses.push(format!("C{}", rng.gen_range(0..i)));
        }
        if rng.gen_bool(0.9) {
            let primary = class_concepts.choose(rng).unwrap().clone();
            let qualifiers: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| all.choose(rng).unwrap().clone()).collect();
            class.annotation = Some(Annotation { primary, qualifiers });
        }
        for a in 0..rng.gen_range(0..=shape.max_attributes) {
            class.attributes.push(UmlAttribute {
                name: format!("a{a}"),
                datatype: *DATATYPES.choose(rng).unwrap(),
                annotation: rng.gen_bool(0.8).then(|| Annotation::new(attribute_concepts.choose(rng).unwrap().clone())),
            });
        }
        classes.push(class);
    }

    let mut associations: Vec<UmlAssociation> = Vec::new();
    if shape.classes > 0 {
        for k in 0..shape.associations {
            let source = rng.gen_range(0..shape.classes);
            let target = rng.gen_range(0..shape.classes);
            associations.push(UmlAssociation::new(format!("C{source}"), format!("r{k}"), format!("C{target}")));
        }
    }

    let model = UmlModel {
        project: "synthetic".into(),
        version: "1".into(),
        package_prefix: "org.example.synthetic".into(),
        classes,
        associations,
    };
    let thesaurus = random_thesaurus_over(rng, &all, all.len() / 3);
    (model, thesaurus)
}

/// Model whose association graph is exactly `adjacency` (classes `C0..`,
/// roles `r<i>_<j>`), without annotations or attributes.
pub fn graph_model(adjacency: &[Vec<usize>]) -> UmlModel {
    UmlModel {
        project: "graph".into(),
        version: "1".into(),
        package_prefix: "org.example.graph".into(),
        classes: (0..adjacency.len()).map(|i| UmlClass::new(format!("C{i}"))).collect(),
        associations: adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, next)| {
                next.iter().map(move |j| UmlAssociation::new(format!("C{i}"), format!("r{i}_{j}"), format!("C{j}")))
            })
            .collect(),
    }
}

fn literal<R: Rng>(rng: &mut R) -> String {
    const ALPHABET: &[char] = &['A', 'B', 'T', 'G', 'F', '1', '9', '%', '_', ' ', '"', '\\', '<', '&', '>', '\'', 'é'];
    let len = rng.gen_range(1..=8);
    (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

/// Random query text over the annotations of `model`, built so that it is
/// usually satisfiable: attribute restrictions use attributes of the chosen
/// class and associations follow edges of the model graph.
pub fn random_query<R: Rng>(rng: &mut R, model: &UmlModel) -> Option<String> {
    let annotated: Vec<&UmlClass> = model.classes.iter().filter(|c| c.annotation.is_some()).collect();
    let head = *annotated.choose(rng)?;
    Some(class_query(rng, model, head, 2))
}

fn class_query<R: Rng>(rng: &mut R, model: &UmlModel, class: &UmlClass, depth: usize) -> String {
    let mut parts = vec![class.annotation.as_ref().expect("annotated").primary.clone()];
    let mut owners = vec![class];
    owners.extend(model.ancestors(&class.name).into_iter().filter_map(|a| model.class(a)));
    let attributes: Vec<&UmlAttribute> =
        owners.iter().flat_map(|c| c.attributes.iter()).filter(|a| a.annotation.is_some()).collect();
    for _ in 0..rng.gen_range(0..=2) {
        let Some(attr) = attributes.choose(rng) else { break };
        let concept = &attr.annotation.as_ref().unwrap().primary;
        if rng.gen_bool(0.75) {
            parts.push(format!("hasAttribute some ({concept} and hasValue value {})", quote(&literal(rng))));
        } else {
            parts.push(format!("hasAttribute some {concept}"));
        }
    }
    if depth > 0 {
        let reachable = reachable_annotated(model, &class.name);
        for _ in 0..rng.gen_range(0..=2) {
            let Some(target) = reachable.choose(rng) else { break };
            let target = model.class(target).expect("declared");
            parts.push(format!("hasAssociation some ({})", class_query(rng, model, target, depth - 1)));
        }
    }
    parts.join(" and ")
}

fn reachable_annotated<'a>(model: &'a UmlModel, from: &str) -> Vec<&'a str> {
    let mut seen: Vec<&str> = Vec::new();
    let mut queue: Vec<&str> = model.outgoing(from).iter().map(|a| a.target.as_str()).collect();
    while let Some(n) = queue.pop() {
        if seen.contains(&n) {
            continue;
        }
        seen.push(n);
        queue.extend(model.outgoing(n).iter().map(|a| a.target.as_str()));
    }
    seen.retain(|n| *n != from && model.class(n).is_some_and(|c| c.annotation.is_some()));
    seen.sort();
    seen
}

/// Random EL axiom set over classes `c:K0..`, association properties
/// `c:p0..` (with a small sub-property hierarchy under `u:hasAssociation`) and
/// `u:hasAttribute`. Left-hand sides are named; fillers are named.
pub fn random_el_axioms<R: Rng>(rng: &mut R, classes: usize, max_axioms: usize) -> AxiomSet {
    let classes = classes.max(1);
    let name = |i: usize| format!("c:K{i}");
    let mut set = AxiomSet::new();
    set.push(Axiom::TransitiveProperty(HAS_ASSOCIATION.to_string()));
    let properties = ["c:p0", "c:p1", "c:p2", "c:p3"];
    set.push(Axiom::SubPropertyOf("c:p0".into(), HAS_ASSOCIATION.into()));
    set.push(Axiom::SubPropertyOf("c:p1".into(), HAS_ASSOCIATION.into()));
    set.push(Axiom::SubPropertyOf("c:p2".into(), "c:p1".into()));
    let target = rng.gen_range(0..=max_axioms.saturating_sub(set.len()));
    let atom = |rng: &mut R| -> ClassExpr {
        let filler = ClassExpr::Named(name(rng.gen_range(0..classes)));
        match rng.gen_range(0..6) {
            0..=2 => filler,
            3 => ClassExpr::some(HAS_ATTRIBUTE, filler),
            _ => ClassExpr::some(*properties.choose(rng).unwrap(), filler),
        }
    };
    for _ in 0..target * 2 {
        if set.len() >= target + 4 {
            break;
        }
        let sub = name(rng.gen_range(0..classes));
        let sup = if rng.gen_bool(0.3) {
            ClassExpr::Conjunction((0..rng.gen_range(2..=3)).map(|_| atom(rng)).collect())
        } else {
            atom(rng)
        };
        set.push(Axiom::SubClassOf(ClassExpr::Named(sub), sup));
    }
    set
}

/// Random query tree with resolved classes and attributes, for
/// value extraction round trips. Association steps and nested conjunctions
/// appear alongside `hasAssociation`.
pub fn random_query_tree<R: Rng>(rng: &mut R, depth: usize) -> QueryExpr {
    let mut items = vec![QueryExpr::UmlClass(format!("c:C{}", rng.gen_range(0..9)))];
    for _ in 0..rng.gen_range(0..=3) {
        items.push(attribute_restriction(rng));
    }
    if depth > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            let inner = random_query_tree(rng, depth - 1);
            items.push(match rng.gen_range(0..3) {
                0 => QueryExpr::has_association(inner),
                1 => QueryExpr::AssocStep { property: "c:X_r_Y".into(), role: "r".into(), filler: Box::new(inner) },
                _ => QueryExpr::And(vec![QueryExpr::UmlClass("c:D".into()), QueryExpr::has_association(inner)]),
            });
        }
    }
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        QueryExpr::And(items)
    }
}

fn attribute_restriction<R: Rng>(rng: &mut R) -> QueryExpr {
    let attr = || QueryExpr::UmlAttribute { class: "c:C_a0".into(), name: "a0".into() };
    let value = |rng: &mut R| QueryExpr::HasValue(literal(rng));
    let filler = match rng.gen_range(0..6) {
        0 => attr(),
        1 => value(rng),
        2 => QueryExpr::And((0..rng.gen_range(1..=3)).map(|_| value(rng)).collect()),
        3 => QueryExpr::And(vec![QueryExpr::And(vec![attr(), attr()]), value(rng)]),
        _ => {
            let mut items = vec![attr()];
            for _ in 0..rng.gen_range(1..=2) {
                let at = rng.gen_range(0..=items.len());
                items.insert(at, value(rng));
            }
            QueryExpr::And(items)
        }
    };
    QueryExpr::has_attribute(filler)
}

/// Number of chains of each kind in the benchmark model.
pub const BENCH_CHAINS: usize = 5;
const BENCH_LEAVES: usize = 5;

/// Fixed 40-class benchmark model: five chains with one intermediate class
/// (`S1_i → M1_i → T1_i`), five with two (`S2_i → M2_i → N2_i → T2_i`) and
/// five shared leaf classes that every non-terminal chain class points to.
/// Every class and attribute has its own concept.
pub fn benchmark_model() -> (UmlModel, Thesaurus) {
    let mut classes = Vec::new();
    let mut associations = Vec::new();
    let mut concepts = Vec::new();
    let mut subs = Vec::new();
    let mut add_class = |name: String, classes: &mut Vec<UmlClass>| {
        let mut c = UmlClass::new(&name);
        c.annotation = Some(Annotation::new(format!("Bench_{name}")));
        concepts.push(format!("Bench_{name}"));
        subs.push((format!("Bench_{name}"), "Bench_Entity".to_string()));
        for attr in ["code", "label", "status"] {
            c.attributes.push(UmlAttribute {
                name: attr.into(),
                datatype: Datatype::String,
                annotation: Some(Annotation::new(format!("Bench_{name}_{attr}"))),
            });
            concepts.push(format!("Bench_{name}_{attr}"));
        }
        classes.push(c);
    };
    let leaves: Vec<String> = (1..=BENCH_LEAVES).map(|i| format!("Leaf{i}")).collect();
    for leaf in &leaves {
        add_class(leaf.clone(), &mut classes);
    }
    let mut chain = |names: Vec<String>, classes: &mut Vec<UmlClass>, associations: &mut Vec<UmlAssociation>| {
        for n in &names {
            add_class(n.clone(), classes);
        }
        for pair in names.windows(2) {
            associations.push(UmlAssociation::new(&pair[0], format!("to{}", pair[1]), &pair[1]));
            for leaf in &leaves {
                associations.push(UmlAssociation::new(&pair[0], format!("note{leaf}"), leaf));
            }
        }
    };
    for i in 1..=BENCH_CHAINS {
        chain(vec![format!("S1x{i}"), format!("M1x{i}"), format!("T1x{i}")], &mut classes, &mut associations);
    }
    for i in 1..=BENCH_CHAINS {
        chain(
            vec![format!("S2x{i}"), format!("M2x{i}"), format!("N2x{i}"), format!("T2x{i}")],
            &mut classes,
            &mut associations,
        );
    }
    concepts.push("Bench_Entity".into());
    let model = UmlModel {
        project: "benchmark".into(),
        version: "1".into(),
        package_prefix: "org.example.bench".into(),
        classes,
        associations,
    };
    let thesaurus = Thesaurus::from_parts(concepts, subs, Vec::new()).expect("benchmark thesaurus is acyclic");
    (model, thesaurus)
}

/// Benchmark queries: five whose rewriting has one intermediate class and
/// five with two. Each filters two attributes at both ends.
pub fn benchmark_queries() -> (Vec<String>, Vec<String>) {
    let query = |source: String, target: String, i: usize| {
        format!(
            "Bench_{source} and hasAttribute some (Bench_{source}_code and hasValue value \"S{i}\") \
             and hasAttribute some (Bench_{source}_label and hasValue value \"src%\") \
             and hasAssociation some (Bench_{target} and hasAttribute some (Bench_{target}_code and hasValue value \"T{i}\") \
             and hasAttribute some (Bench_{target}_status and hasValue value \"active\"))"
        )
    };
    let one = (1..=BENCH_CHAINS).map(|i| query(format!("S1x{i}"), format!("T1x{i}"), i)).collect();
    let two = (1..=BENCH_CHAINS).map(|i| query(format!("S2x{i}"), format!("T2x{i}"), i)).collect();
    (one, two)
}
