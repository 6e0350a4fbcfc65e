//! Thesaurus module extraction.
//!
//! Once disjointness is stripped the thesaurus is a set of named-to-named
//! subsumptions, and a bottom-locality module for a signature is the upward
//! closure of the signature under those subsumptions.

use std::collections::{BTreeSet, HashMap};

use crate::model::{Signature, Thesaurus};
use crate::ontogen::{concept_iri, Axiom, AxiomSet, ClassExpr, THESAURUS_NAMESPACE};

/// Named subsumptions `child ⊑ parent` over bare concept names, plus the set of
/// concepts the axiom set covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThesaurusAxiomSet {
    axioms: Vec<(String, String)>,
    signature: BTreeSet<String>,
    disjoints_removed: bool,
}

impl ThesaurusAxiomSet {
    pub fn axioms(&self) -> &[(String, String)] {
        &self.axioms
    }

    /// Concepts known to this axiom set: the axiom names plus any signature
    /// concepts it was extracted for.
    pub fn signature(&self) -> &BTreeSet<String> {
        &self.signature
    }

    pub fn covers(&self, concept: &str) -> bool {
        self.signature.contains(concept)
    }

    pub fn disjoints_removed(&self) -> bool {
        self.disjoints_removed
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Rendering as `n:`-prefixed OWL subsumptions.
    pub fn to_axiom_set(&self) -> AxiomSet {
        let mut out = AxiomSet::with_prefixes([("n", THESAURUS_NAMESPACE)]);
        for (child, parent) in &self.axioms {
            out.push(Axiom::sub_class(concept_iri(child), ClassExpr::Named(concept_iri(parent))));
        }
        out
    }
}

pub fn strip_disjoints(thesaurus: &Thesaurus) -> ThesaurusAxiomSet {
    ThesaurusAxiomSet {
        axioms: thesaurus.subsumptions().to_vec(),
        signature: thesaurus.concepts().clone(),
        disjoints_removed: true,
    }
}

pub fn extract_module(source: &ThesaurusAxiomSet, sigma: &Signature) -> ThesaurusAxiomSet {
    let mut parents: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, (child, _)) in source.axioms.iter().enumerate() {
        parents.entry(child.as_str()).or_default().push(i);
    }
    let mut reached: BTreeSet<&str> = sigma.iter().filter(|c| source.covers(c)).collect();
    let mut keep = vec![false; source.axioms.len()];
    let mut queue: Vec<&str> = reached.iter().copied().collect();
    while let Some(concept) = queue.pop() {
        for &i in parents.get(concept).map(Vec::as_slice).unwrap_or(&[]) {
            keep[i] = true;
            let parent = source.axioms[i].1.as_str();
            if reached.insert(parent) {
                queue.push(parent);
            }
        }
    }
    ThesaurusAxiomSet {
        axioms: source.axioms.iter().zip(keep).filter(|(_, k)| *k).map(|(a, _)| a.clone()).collect(),
        signature: reached.into_iter().map(str::to_string).collect(),
        disjoints_removed: source.disjoints_removed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thesaurus(concepts: &[&str], subs: &[(&str, &str)], disjoint: &[(&str, &str)]) -> Thesaurus {
        let own = |pairs: &[(&str, &str)]| -> Vec<(String, String)> {
            pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
        };
        Thesaurus::from_parts(concepts.iter().map(|c| c.to_string()), own(subs), own(disjoint)).unwrap()
    }

    #[test]
    fn strip_keeps_subsumptions_only() {
        let t = thesaurus(&["A", "B", "C", "D"], &[("A", "B"), ("B", "C"), ("D", "C")], &[("A", "D"), ("B", "D")]);
        let s = strip_disjoints(&t);
        assert_eq!(s.len(), 3);
        assert!(s.disjoints_removed());
        assert_eq!(s.axioms(), t.subsumptions());

        let only_disjoint = thesaurus(&["A", "B"], &[], &[("A", "B")]);
        assert!(strip_disjoints(&only_disjoint).is_empty());
    }

    #[test]
    fn chain_module() {
        let t = thesaurus(&["A", "B", "C", "D", "E"], &[("A", "B"), ("B", "C"), ("D", "E")], &[]);
        let m = extract_module(&strip_disjoints(&t), &["A"].into_iter().collect());
        assert_eq!(m.axioms(), &[("A".to_string(), "B".to_string()), ("B".to_string(), "C".to_string())]);
        assert_eq!(m.signature().len(), 3);
    }

    #[test]
    fn full_and_empty_signatures() {
        let t = thesaurus(&["A", "B", "C"], &[("A", "B"), ("C", "B")], &[]);
        let s = strip_disjoints(&t);
        let all: Signature = t.concepts().iter().cloned().collect();
        assert_eq!(extract_module(&s, &all).axioms(), s.axioms());
        assert!(extract_module(&s, &Signature::default()).is_empty());
    }

    #[test]
    fn unknown_signature_names_contribute_nothing() {
        let t = thesaurus(&["A", "B"], &[("A", "B")], &[]);
        let m = extract_module(&strip_disjoints(&t), &["Nope"].into_iter().collect());
        assert!(m.is_empty());
        assert!(!m.covers("Nope"));
    }

    #[test]
    fn rendering_uses_thesaurus_prefix() {
        let t = thesaurus(&["A", "B"], &[("A", "B")], &[]);
        let set = strip_disjoints(&t).to_axiom_set();
        assert_eq!(
            crate::ontogen::serialize_axioms(&set),
            format!("Prefix(n:=<{THESAURUS_NAMESPACE}>)\nSubClassOf(n:A n:B)\n")
        );
    }
}
