//! Adnominal clauses: restore the modified noun as an argument of the clause
//! verb and detach the clause so it becomes a root of its own.

use crate::parse::{DependencyParse, Edge};

const RELATIVE_PRONOUNS: [&str; 4] = ["that", "who", "which", "whom"];
const ARGUMENT_LABELS: [&str; 4] = ["nsubj", "nsubj:pass", "obj", "obl"];
const RELATIVE_ADVERBS: [&str; 4] = ["where", "when", "why", "which"];

fn detach(p: &mut DependencyParse, v1: u32, v2: u32, label: &str) {
    let edges = p.in_edges_of(v1).into_iter().filter(|e| !(e.target == v2 && e.label == label)).collect();
    p.set_in_edges(v1, edges);
}

fn attach(p: &mut DependencyParse, v2: u32, edge: Edge) {
    let mut edges = p.in_edges_of(v2);
    edges.push(edge);
    p.set_in_edges(v2, edges);
}

/// A reduced clause (`acl`) without a subject gets the modified noun as
/// `nsubj`, or `nsubj:pass` for a past participle. A relative clause
/// (`acl:relcl`) has its relative pronoun replaced by the modified noun; a
/// relative adverb is replaced the same way with label `obl`. A preposition
/// stranded after the clause verb is folded into the label of the restored
/// edge (`obl:in`). Clauses matching neither shape are left attached.
pub fn rewrite_adnominal(parse: &DependencyParse) -> DependencyParse {
    let mut p = parse.clone();
    let ids: Vec<u32> = p.ids().collect();
    for v1 in ids {
        let Some(tok) = p.token(v1) else { continue };
        let Some(link) = tok.in_edges().find(|e| e.label == "acl" || e.label == "acl:relcl").cloned() else {
            continue;
        };
        let v2 = link.target;
        if link.label == "acl" {
            if tok.has_out("nsubj") || tok.has_out("nsubj:pass") {
                continue;
            }
            let label = match tok.xpos.as_str() {
                "VBN" => "nsubj:pass",
                "VBG" | "VB" => "nsubj",
                _ => continue,
            };
            detach(&mut p, v1, v2, "acl");
            attach(&mut p, v2, Edge::new(v1, label));
            continue;
        }

        let word = |id: u32| p.token(id).map(|t| t.lemma.to_lowercase()).unwrap_or_default();
        let pronoun = tok
            .out_edges
            .iter()
            .find(|e| {
                ARGUMENT_LABELS.contains(&e.label.as_str()) && RELATIVE_PRONOUNS.contains(&word(e.target).as_str())
            })
            .cloned();
        let adverb = tok
            .out_edges
            .iter()
            .find(|e| (e.label == "mark" || e.label == "advmod") && RELATIVE_ADVERBS.contains(&word(e.target).as_str()))
            .cloned();
        let (intro, mut label) = match (pronoun, adverb) {
            (Some(e), _) => (e.target, e.label),
            (None, Some(e)) => (e.target, "obl".to_string()),
            (None, None) => continue,
        };
        if label == "obj" || label == "obl" {
            let stranded = tok.out_edges.iter().map(|e| e.target).find(|&c| {
                p.token(c).is_some_and(|c| {
                    c.upos == "ADP" && c.id() > v1 && c.out_edges.is_empty() && c.extra_heads.is_empty()
                })
            });
            if let Some(prep) = stranded {
                label = format!("obl:{}", word(prep));
                p.reattach_dependents(prep, v1);
                p.remove_token(prep);
            }
        }
        p.reattach_dependents(intro, v1);
        p.remove_token(intro);
        detach(&mut p, v1, v2, "acl:relcl");
        attach(&mut p, v2, Edge::new(v1, label));
    }
    p
}
