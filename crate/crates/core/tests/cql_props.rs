mod common;

use onco_rewriter::cql::{
    parse_xml, same_query, to_xml, validate_grammar, Constraint, CqlAssociation, CqlAttribute, CqlGroup, CqlQuery,
    CqlTarget, LogicalOp, Predicate, QueryModifier,
};
use onco_rewriter::CqlError;
use proptest::prelude::*;

fn name() -> impl Strategy<Value = String> {
    "[a-z][a-zA-Z0-9.]{0,12}"
}

fn literal() -> impl Strategy<Value = String> {
    "[ -~é]{0,10}"
}

fn attribute() -> impl Strategy<Value = Constraint> {
    (name(), prop::sample::select(Predicate::ALL.to_vec()), literal())
        .prop_map(|(n, p, v)| Constraint::Attribute(CqlAttribute::new(n, p, p.takes_value().then_some(v))))
}

fn constraint() -> impl Strategy<Value = Constraint> {
    attribute().prop_recursive(5, 40, 4, |inner| {
        let simple = prop_oneof![
            attribute(),
            (name(), name(), prop::option::of(inner.clone())).prop_map(|(n, r, c)| {
                Constraint::Association(Box::new(CqlAssociation { name: n, role_name: r, child: c }))
            }),
        ];
        prop_oneof![
            (name(), name(), prop::option::of(inner.clone())).prop_map(|(n, r, c)| {
                Constraint::Association(Box::new(CqlAssociation { name: n, role_name: r, child: c }))
            }),
            (prop::bool::ANY, prop::collection::vec(simple, 2..4), prop::option::of(inner)).prop_map(
                |(and, mut items, tail)| {
                    items.extend(tail);
                    Constraint::Group(CqlGroup { op: if and { LogicalOp::And } else { LogicalOp::Or }, items })
                }
            ),
        ]
    })
}

fn query() -> impl Strategy<Value = CqlQuery> {
    let modifier = (name(), prop::collection::vec(name(), 0..3))
        .prop_map(|(d, names)| QueryModifier { distinct_attribute: Some(d), attribute_names: names });
    (name(), prop::option::of(constraint()), prop::option::of(modifier))
        .prop_map(|(t, child, modifier)| CqlQuery { target: CqlTarget { name: t, child }, modifier })
}

fn nested(depth: usize) -> CqlQuery {
    let mut child = Some(Constraint::Attribute(CqlAttribute::new("id", Predicate::EqualTo, Some("1".into()))));
    for i in 0..depth {
        child = Some(Constraint::Association(Box::new(CqlAssociation {
            name: format!("org.example.C{i}"),
            role_name: format!("r{i}"),
            child,
        })));
    }
    CqlQuery { target: CqlTarget { name: "org.example.Root".into(), child }, modifier: None }
}

#[test]
fn paper_listing_parses_and_reserializes() {
    let text = common::fixture("cabio_query_c.xml");
    let q = parse_xml(&text).unwrap();
    assert!(validate_grammar(&q).is_valid());
    assert_eq!(q.target.name, "gov.nih.nci.cabio.domain.SNP");
    let out = to_xml(&q).unwrap();
    assert!(same_query(&out, &text).unwrap());
    assert_eq!(parse_xml(&out).unwrap(), q);
}

#[test]
fn deep_association_chains() {
    for depth in 0..=12 {
        let q = nested(depth);
        assert_eq!(parse_xml(&to_xml(&q).unwrap()).unwrap(), q, "depth {depth}");
    }
}

#[test]
fn bare_target_round_trips() {
    let q = CqlQuery::bare("org.example.specimen.domain.Specimen");
    assert_eq!(parse_xml(&to_xml(&q).unwrap()).unwrap(), q);
}

#[test]
fn grammar_violations_are_refused() {
    let one = CqlQuery {
        target: CqlTarget {
            name: "T".into(),
            child: Some(Constraint::Group(CqlGroup {
                op: LogicalOp::And,
                items: vec![Constraint::Attribute(CqlAttribute::new("a", Predicate::IsNull, None))],
            })),
        },
        modifier: None,
    };
    assert!(!validate_grammar(&one).is_valid());
    assert!(matches!(to_xml(&one), Err(CqlError::Grammar(_))));
    let missing_value = CqlQuery {
        target: CqlTarget {
            name: "T".into(),
            child: Some(Constraint::Attribute(CqlAttribute::new("a", Predicate::Like, None))),
        },
        modifier: None,
    };
    assert!(!validate_grammar(&missing_value).is_valid());
    assert!(parse_xml(r#"<ns1:CQLQuery xmlns:ns1="http://CQL.caBIG/1/gov.nih.nci.cagrid.CQLQuery"/>"#).is_err());
    assert!(parse_xml("<CQLQuery/>").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_queries_round_trip(q in query()) {
        prop_assert!(validate_grammar(&q).is_valid(), "{:?}", validate_grammar(&q));
        let xml = to_xml(&q).unwrap();
        let back = parse_xml(&xml).unwrap();
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(to_xml(&back).unwrap(), xml);
    }

    #[test]
    fn whitespace_does_not_matter(q in query()) {
        let xml = to_xml(&q).unwrap();
        let squashed: String = xml.lines().map(str::trim).collect();
        prop_assert!(same_query(&xml, &squashed).unwrap());
    }
}
