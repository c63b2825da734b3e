//! Coordination equalization: every element of a coordination gets the same
//! attachments as its first element.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::parse::{Connective, CoordinationGroup, DependencyParse, Edge};

const NOT_COPIED: [&str; 3] = ["cc", "punct", "conj"];

/// Depth of each token along primary heads, for top-down processing.
fn depth(p: &DependencyParse, id: u32) -> usize {
    let mut d = 0;
    let mut cur = id;
    while let Some(t) = p.token(cur) {
        if t.is_root() || d > p.len() {
            break;
        }
        cur = t.head.target;
        d += 1;
    }
    d
}

/// For each token with outgoing `conj` edges (the coordination root), each
/// conjunct takes over the root's incoming edges in place of its `conj`
/// edge and receives copies of the root's other outgoing edges, except
/// `cc`, `punct`, and labels the conjunct already has. Coordinators and
/// punctuation attached to conjuncts are removed; the group and its
/// connective are recorded on the parse.
///
/// Coordinations are processed top-down so that nested ones see the edges
/// copied by outer ones.
pub fn equalize_coordination(parse: &DependencyParse) -> Result<DependencyParse> {
    let mut p = parse.clone();
    let mut roots: Vec<u32> = p.tokens.iter().filter(|t| t.has_out("conj")).map(|t| t.id()).collect();
    roots.sort_by_key(|&r| (depth(&p, r), r));
    for r in roots {
        let conjuncts: Vec<u32> = p.token(r).unwrap().out_targets("conj").collect();
        let mut connectives = BTreeSet::new();
        let mut drop = Vec::new();
        for &c in conjuncts.iter().chain(std::iter::once(&r)) {
            for e in &p.token(c).unwrap().out_edges {
                let dep = p.token(e.target).unwrap();
                if e.label == "cc" {
                    if let Some(conn) = Connective::from_lemma(&dep.lemma.to_lowercase()) {
                        connectives.insert(conn);
                    }
                }
                if c != r && (e.label == "cc" || e.label == "punct") && dep.out_edges.is_empty() {
                    drop.push(e.target);
                }
            }
        }
        if connectives.len() > 1 {
            return Err(Error::MixedCoordination(format!(
                "sentence {}: coordination at token {r} mixes and/or",
                p.sentence_id()
            )));
        }
        let connective = connectives.into_iter().next().unwrap_or(Connective::And);
        for d in drop {
            p.remove_token(d);
        }

        let root_in = p.in_edges_of(r);
        let root_out: Vec<Edge> = p
            .token(r)
            .unwrap()
            .out_edges
            .iter()
            .filter(|e| !NOT_COPIED.contains(&e.label.as_str()) && !conjuncts.contains(&e.target))
            .cloned()
            .collect();
        for &c in &conjuncts {
            let own: Vec<Edge> =
                p.in_edges_of(c).into_iter().filter(|e| !(e.target == r && e.label == "conj")).collect();
            p.set_in_edges(c, root_in.iter().cloned().chain(own).collect());
            for e in &root_out {
                if p.token(c).unwrap().has_out(&e.label) {
                    continue;
                }
                let mut edges = p.in_edges_of(e.target);
                edges.push(Edge::new(c, e.label.clone()));
                p.set_in_edges(e.target, edges);
            }
        }
        let mut members: Vec<u32> = conjuncts;
        members.push(r);
        members.sort_unstable();
        p.coordinations.push(CoordinationGroup { members, connective });
    }
    if let Some(first) = p.coordinations.first() {
        if p.coordinations.iter().any(|g| g.connective != first.connective) {
            return Err(Error::MixedCoordination(format!(
                "sentence {}: coordinations use both and and or",
                p.sentence_id()
            )));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::testing::build;

    fn kfc(first: &str, second: &str) -> DependencyParse {
        build(&[
            ("KFC", "kfc", "PROPN", "NNP", 10, "nsubj"),
            ("is", "be", "AUX", "VBZ", 10, "cop"),
            ("a", "a", "DET", "DT", 10, "det"),
            (first, first, "ADJ", "JJ", 10, "amod"),
            (",", ",", "PUNCT", ",", 6, "punct"),
            (second, second, "ADJ", "JJ", 4, "conj"),
            (",", ",", "PUNCT", ",", 9, "punct"),
            ("and", "and", "CCONJ", "CC", 9, "cc"),
            ("delicious", "delicious", "ADJ", "JJ", 4, "conj"),
            ("restaurant", "restaurant", "NOUN", "NN", 0, "root"),
        ])
    }

    fn amods(p: &DependencyParse) -> Vec<String> {
        let mut v: Vec<String> =
            p.token(10).unwrap().out_targets("amod").map(|t| p.token(t).unwrap().lemma.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn adjectives_attach_to_noun() {
        let out = equalize_coordination(&kfc("cheap", "clean")).unwrap();
        assert_eq!(amods(&out), ["cheap", "clean", "delicious"]);
        assert_eq!(out.len(), 7);
        assert_eq!(out.coordinations, vec![CoordinationGroup { members: vec![4, 6, 9], connective: Connective::And }]);
    }

    #[test]
    fn permutation_invariant() {
        let a = equalize_coordination(&kfc("cheap", "clean")).unwrap();
        let b = equalize_coordination(&kfc("clean", "cheap")).unwrap();
        assert_eq!(amods(&a), amods(&b));
        assert_eq!(a.len(), b.len());
    }

    #[test]
    fn verbs_and_objects() {
        // Mary bought and sold a car and a watch
        let p = build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("bought", "buy", "VERB", "VBD", 0, "root"),
            ("and", "and", "CCONJ", "CC", 4, "cc"),
            ("sold", "sell", "VERB", "VBD", 2, "conj"),
            ("a", "a", "DET", "DT", 6, "det"),
            ("car", "car", "NOUN", "NN", 2, "obj"),
            ("and", "and", "CCONJ", "CC", 9, "cc"),
            ("a", "a", "DET", "DT", 9, "det"),
            ("watch", "watch", "NOUN", "NN", 6, "conj"),
        ]);
        let out = equalize_coordination(&p).unwrap();
        assert!(out.token(4).unwrap().is_root());
        assert_eq!(out.in_edges_of(1), vec![Edge::new(2, "nsubj"), Edge::new(4, "nsubj")]);
        assert_eq!(out.in_edges_of(9), vec![Edge::new(2, "obj"), Edge::new(4, "obj")]);
        assert_eq!(out.token(9).unwrap().out_edges, vec![Edge::new(8, "det")]);
        assert_eq!(out.coordinations.len(), 2);
    }

    #[test]
    fn mixed_connectives_rejected() {
        let p = build(&[
            ("tea", "tea", "NOUN", "NN", 0, "root"),
            ("and", "and", "CCONJ", "CC", 3, "cc"),
            ("milk", "milk", "NOUN", "NN", 1, "conj"),
            ("or", "or", "CCONJ", "CC", 5, "cc"),
            ("juice", "juice", "NOUN", "NN", 1, "conj"),
        ]);
        assert!(matches!(equalize_coordination(&p), Err(Error::MixedCoordination(_))));
    }

    #[test]
    fn no_conj_unchanged() {
        let p = build(&[("Mary", "mary", "PROPN", "NNP", 2, "nsubj"), ("runs", "run", "VERB", "VBZ", 0, "root")]);
        assert_eq!(equalize_coordination(&p).unwrap(), p);
    }
}
