//! Necessary conditions for factual sentences.
//!
//! Six checks over POS tags and dependency labels, numbered:
//!
//! 1. main clause: root verb with a subject, or a nominal/adjectival root
//!    with a subject and a copula
//! 2. coordination: the last conjunct carries an `and`/`or` connective
//! 3. verb with auxiliaries: the closest auxiliary and the verb form match
//!    one of the tense/voice patterns
//! 4. verb without auxiliaries: participles, finite and base forms must sit
//!    in a coordination, an adnominal clause or a subject-bearing clause
//! 5. non-verb with auxiliaries: nominal/adjective with subject and copula
//! 6. projectivity
//!
//! A subject is any `nsubj` edge, including the `nsubj:pass` subtype.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::parse::{base_label, DependencyParse, Token, Validation, VIRTUAL_ROOT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub property_id: u8,
    pub token_id: u32,
    pub detail: String,
}

impl Violation {
    fn new(property_id: u8, token_id: u32, detail: impl Into<String>) -> Self {
        Violation { property_id, token_id, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}@{}: {}", self.property_id, self.token_id, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub accepted: bool,
    pub violations: Vec<Violation>,
}

const NOMINAL_OR_ADJ: [&str; 4] = ["NOUN", "PRON", "PROPN", "ADJ"];
const COPULA_LEMMAS: [&str; 1] = ["be"];
const PASSIVE_AUX_LEMMAS: [&str; 2] = ["be", "get"];
const MODAL_LEMMAS: [&str; 11] =
    ["can", "could", "do", "may", "might", "must", "ought", "shall", "should", "will", "would"];

fn has_subject(t: &Token) -> bool {
    t.out_edges.iter().any(|e| base_label(&e.label) == "nsubj")
}

fn describe(t: &Token) -> String {
    format!("`{}` ({}/{})", t.surface, t.upos, t.xpos)
}

/// Property 1.
pub fn check_main_clause(parse: &DependencyParse) -> Vec<Violation> {
    let Some(root) = parse.root() else {
        return vec![Violation::new(1, parse.root_index, "parse has no root token")];
    };
    let subject = has_subject(root);
    let ok = if root.upos == "VERB" {
        subject
    } else if NOMINAL_OR_ADJ.contains(&root.upos.as_str()) {
        subject && root.has_out("cop")
    } else {
        false
    };
    if ok {
        return vec![];
    }
    let detail = if root.upos == "VERB" {
        format!("main verb {} has no subject", describe(root))
    } else if NOMINAL_OR_ADJ.contains(&root.upos.as_str()) {
        format!("nominal root {} needs both a subject and a copula", describe(root))
    } else {
        format!("root {} is neither a verb nor a nominal/adjective", describe(root))
    };
    vec![Violation::new(1, root.id(), detail)]
}

/// Property 2. Only the last conjunct of each coordination is checked.
pub fn check_coordination(parse: &DependencyParse) -> Vec<Violation> {
    let mut out = Vec::new();
    for head in &parse.tokens {
        let Some(last) = head.out_targets("conj").max() else { continue };
        let t = parse.token(last).expect("edge target exists");
        let connectives: Vec<&str> =
            t.out_targets("cc").filter_map(|id| parse.token(id)).map(|c| c.lemma.as_str()).collect();
        if !connectives.iter().any(|l| *l == "and" || *l == "or") {
            let detail = match connectives.first() {
                Some(l) => format!("coordination ending in {} uses `{l}`; only and/or are allowed", describe(t)),
                None => format!("last conjunct {} has no and/or connective", describe(t)),
            };
            out.push(Violation::new(2, t.id(), detail));
        }
    }
    out
}

/// The auxiliary dependent (via `labels`) closest to `t`; ties go to the
/// later token.
fn closest_aux<'a>(parse: &'a DependencyParse, t: &'a Token, labels: &[&str]) -> Option<(&'a Token, &'a str)> {
    t.out_edges
        .iter()
        .filter(|e| labels.contains(&e.label.as_str()))
        .filter_map(|e| parse.token(e.target).map(|a| (a, e.label.as_str())))
        .min_by_key(|(a, _)| (a.id().abs_diff(t.id()), std::cmp::Reverse(a.id())))
}

/// Property 3.
pub fn check_verb_with_aux(parse: &DependencyParse) -> Vec<Violation> {
    let mut out = Vec::new();
    for v in parse.tokens.iter().filter(|t| t.upos == "VERB") {
        let Some((aux, label)) = closest_aux(parse, v, &["aux", "aux:pass"]) else { continue };
        let lemma = aux.lemma.as_str();
        let xpos = v.xpos.as_str();
        let ok = match label {
            "aux" => {
                (lemma == "be" && xpos == "VBG")
                    || (lemma == "have" && xpos == "VBN")
                    || (MODAL_LEMMAS.contains(&lemma) && xpos == "VB")
            }
            _ => PASSIVE_AUX_LEMMAS.contains(&lemma) && xpos == "VBN",
        };
        if !ok {
            out.push(Violation::new(
                3,
                v.id(),
                format!("auxiliary `{}` ({label}) does not fit verb form {}", aux.surface, describe(v)),
            ));
        }
    }
    out
}

/// Property 4.
pub fn check_verb_without_aux(parse: &DependencyParse) -> Vec<Violation> {
    let mut out = Vec::new();
    for v in parse.tokens.iter().filter(|t| t.upos == "VERB") {
        if v.has_out("aux") || v.has_out("aux:pass") {
            continue;
        }
        let conj = v.has_in("conj");
        let (ok, need) = match v.xpos.as_str() {
            "VBG" | "VBN" => (conj || v.has_in("acl"), "a coordination or adnominal clause"),
            "VBP" | "VBZ" | "VBD" => (
                conj || ((v.is_root() || v.has_in("acl") || v.has_in("acl:relcl")) && has_subject(v)),
                "a coordination, or a main/adnominal clause with a subject",
            ),
            "VB" => {
                let to_mark = v.out_targets("mark").filter_map(|id| parse.token(id)).any(|m| m.lemma == "to");
                (conj || (v.has_in("acl") && to_mark), "a coordination or an infinitival adnominal clause")
            }
            _ => (true, ""),
        };
        if !ok {
            out.push(Violation::new(
                4,
                v.id(),
                format!("verb {} without auxiliaries must occur in {need}", describe(v)),
            ));
        }
    }
    out
}

/// Property 5.
pub fn check_nonverb_with_aux(parse: &DependencyParse) -> Vec<Violation> {
    let mut out = Vec::new();
    for w in parse.tokens.iter().filter(|t| t.upos != "VERB") {
        let Some((aux, label)) = closest_aux(parse, w, &["aux", "aux:pass", "cop"]) else { continue };
        let mut problems = Vec::new();
        if !NOMINAL_OR_ADJ.contains(&w.upos.as_str()) {
            problems.push("is not a nominal or adjective");
        }
        if label != "cop" || !COPULA_LEMMAS.contains(&aux.lemma.as_str()) {
            problems.push("closest auxiliary is not its copula");
        }
        if !has_subject(w) {
            problems.push("has no subject");
        }
        if !problems.is_empty() {
            out.push(Violation::new(
                5,
                w.id(),
                format!("{} with auxiliary `{}` {}", describe(w), aux.surface, problems.join(", ")),
            ));
        }
    }
    out
}

/// Property 6. An arc from head `h` to dependent `d` is projective when `h`
/// dominates every token strictly between them; the virtual root sits at
/// position 0 and dominates everything.
pub fn check_projective(parse: &DependencyParse) -> Vec<Violation> {
    let dominates = |ancestor: u32, mut t: u32| -> bool {
        if ancestor == VIRTUAL_ROOT {
            return true;
        }
        let mut steps = 0;
        while t != VIRTUAL_ROOT && steps <= parse.len() {
            if t == ancestor {
                return true;
            }
            t = parse.token(t).map_or(VIRTUAL_ROOT, |tok| tok.head.target);
            steps += 1;
        }
        false
    };
    let mut out = Vec::new();
    for t in &parse.tokens {
        let (h, d) = (t.head.target, t.id());
        let (lo, hi) = (h.min(d), h.max(d));
        let between = parse.tokens.iter().map(|u| u.id()).filter(|&u| lo < u && u < hi);
        if let Some(stray) = between.into_iter().find(|&u| !dominates(h, u)) {
            out.push(Violation::new(
                6,
                d,
                format!("arc {h}->{d} ({}) crosses the arc into token {stray}", t.head.label),
            ));
        }
    }
    out
}

/// Runs all six checks. Returns the verdict and a copy of the parse whose
/// tokens are tagged accepted or rejected.
pub fn check_factual(parse: &DependencyParse) -> (Verdict, DependencyParse) {
    let mut violations = check_main_clause(parse);
    violations.extend(check_coordination(parse));
    violations.extend(check_verb_with_aux(parse));
    violations.extend(check_verb_without_aux(parse));
    violations.extend(check_nonverb_with_aux(parse));
    violations.extend(check_projective(parse));
    let accepted = violations.is_empty();
    let tag = if accepted { Validation::Accepted } else { Validation::Rejected };
    (Verdict { accepted, violations }, parse.with_validation(tag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::testing::build;

    fn mary_buys_a_car() -> DependencyParse {
        build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("buys", "buy", "VERB", "VBZ", 0, "root"),
            ("a", "a", "DET", "DT", 4, "det"),
            ("car", "car", "NOUN", "NN", 2, "obj"),
        ])
    }

    fn go_fetch() -> DependencyParse {
        build(&[
            ("Go", "go", "VERB", "VB", 0, "root"),
            ("fetch", "fetch", "VERB", "VB", 1, "xcomp"),
            ("more", "more", "ADJ", "JJR", 4, "amod"),
            ("water", "water", "NOUN", "NN", 2, "obj"),
        ])
    }

    #[test]
    fn main_clause() {
        assert!(check_main_clause(&mary_buys_a_car()).is_empty());
        let rich = build(&[
            ("Mary", "mary", "PROPN", "NNP", 3, "nsubj"),
            ("is", "be", "AUX", "VBZ", 3, "cop"),
            ("rich", "rich", "ADJ", "JJ", 0, "root"),
        ]);
        assert!(check_main_clause(&rich).is_empty());
        let v = check_main_clause(&go_fetch());
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].property_id, v[0].token_id), (1, 1));
    }

    #[test]
    fn passive_subject_counts() {
        let p = build(&[
            ("A", "a", "DET", "DT", 2, "det"),
            ("car", "car", "NOUN", "NN", 4, "nsubj:pass"),
            ("was", "be", "AUX", "VBD", 4, "aux:pass"),
            ("bought", "buy", "VERB", "VBN", 0, "root"),
        ]);
        assert!(check_factual(&p).0.accepted);
    }

    fn coordination(cc: &str) -> DependencyParse {
        build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("wants", "want", "VERB", "VBZ", 0, "root"),
            ("a", "a", "DET", "DT", 4, "det"),
            ("car", "car", "NOUN", "NN", 2, "obj"),
            (cc, cc, "CCONJ", "CC", 7, "cc"),
            ("a", "a", "DET", "DT", 7, "det"),
            ("watch", "watch", "NOUN", "NN", 4, "conj"),
        ])
    }

    #[test]
    fn coordination_connectives() {
        assert!(check_coordination(&coordination("or")).is_empty());
        assert!(check_coordination(&coordination("and")).is_empty());
        let v = check_coordination(&coordination("but"));
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].property_id, v[0].token_id), (2, 7));
        assert!(check_coordination(&mary_buys_a_car()).is_empty());
    }

    #[test]
    fn only_last_conjunct_needs_connective() {
        // cheap , clean , and delicious
        let p = build(&[
            ("cheap", "cheap", "ADJ", "JJ", 0, "root"),
            (",", ",", "PUNCT", ",", 3, "punct"),
            ("clean", "clean", "ADJ", "JJ", 1, "conj"),
            (",", ",", "PUNCT", ",", 6, "punct"),
            ("and", "and", "CCONJ", "CC", 6, "cc"),
            ("delicious", "delicious", "ADJ", "JJ", 1, "conj"),
        ]);
        assert!(check_coordination(&p).is_empty());
    }

    #[test]
    fn verb_with_aux_patterns() {
        let perfect_passive = build(&[
            ("A", "a", "DET", "DT", 2, "det"),
            ("car", "car", "NOUN", "NN", 5, "nsubj:pass"),
            ("has", "have", "AUX", "VBZ", 5, "aux"),
            ("been", "be", "AUX", "VBN", 5, "aux:pass"),
            ("bought", "buy", "VERB", "VBN", 0, "root"),
            ("by", "by", "ADP", "IN", 7, "case"),
            ("Mary", "mary", "PROPN", "NNP", 5, "obl"),
        ]);
        assert!(check_verb_with_aux(&perfect_passive).is_empty());
        let future = build(&[
            ("Mary", "mary", "PROPN", "NNP", 3, "nsubj"),
            ("will", "will", "AUX", "MD", 3, "aux"),
            ("buy", "buy", "VERB", "VB", 0, "root"),
        ]);
        assert!(check_verb_with_aux(&future).is_empty());
        let broken = build(&[
            ("Mary", "mary", "PROPN", "NNP", 3, "nsubj"),
            ("is", "be", "AUX", "VBZ", 3, "aux"),
            ("buy", "buy", "VERB", "VB", 0, "root"),
        ]);
        let v = check_verb_with_aux(&broken);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].property_id, v[0].token_id), (3, 3));
    }

    #[test]
    fn closest_aux_prefers_later_on_tie() {
        let p = build(&[
            ("x", "have", "AUX", "VBZ", 2, "aux"),
            ("bought", "buy", "VERB", "VBN", 0, "root"),
            ("y", "be", "AUX", "VBZ", 2, "aux"),
        ]);
        let (aux, _) = closest_aux(&p, p.token(2).unwrap(), &["aux"]).unwrap();
        assert_eq!(aux.id(), 3);
    }

    #[test]
    fn verb_without_aux_cases() {
        // Mary bought a car made in USA
        let made = build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("bought", "buy", "VERB", "VBD", 0, "root"),
            ("a", "a", "DET", "DT", 4, "det"),
            ("car", "car", "NOUN", "NN", 2, "obj"),
            ("made", "make", "VERB", "VBN", 4, "acl"),
            ("in", "in", "ADP", "IN", 7, "case"),
            ("USA", "usa", "PROPN", "NNP", 5, "obl"),
        ]);
        assert!(check_verb_without_aux(&made).is_empty());
        let no_subject = build(&[("buys", "buy", "VERB", "VBZ", 0, "root"), ("cars", "car", "NOUN", "NNS", 1, "obj")]);
        let v = check_verb_without_aux(&no_subject);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].property_id, 4);
        // a plan to win
        let plan = build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("has", "have", "VERB", "VBZ", 0, "root"),
            ("a", "a", "DET", "DT", 4, "det"),
            ("plan", "plan", "NOUN", "NN", 2, "obj"),
            ("to", "to", "PART", "TO", 6, "mark"),
            ("win", "win", "VERB", "VB", 4, "acl"),
        ]);
        assert!(check_verb_without_aux(&plan).is_empty());
    }

    #[test]
    fn nonverb_with_aux() {
        let p = build(&[
            ("Mary", "mary", "PROPN", "NNP", 4, "nsubj"),
            ("has", "have", "AUX", "VBZ", 4, "aux"),
            ("been", "be", "AUX", "VBN", 4, "cop"),
            ("rich", "rich", "ADJ", "JJ", 0, "root"),
        ]);
        assert!(check_nonverb_with_aux(&p).is_empty());
        let adv = build(&[
            ("Mary", "mary", "PROPN", "NNP", 3, "nsubj"),
            ("is", "be", "AUX", "VBZ", 3, "cop"),
            ("here", "here", "ADV", "RB", 0, "root"),
        ]);
        let v = check_nonverb_with_aux(&adv);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].property_id, v[0].token_id), (5, 3));
        assert!(check_nonverb_with_aux(&mary_buys_a_car()).is_empty());
    }

    #[test]
    fn crossing_arcs() {
        assert!(check_projective(&mary_buys_a_car()).is_empty());
        // arcs 1->3 and 2->4
        let p = build(&[
            ("a", "a", "X", "X", 0, "root"),
            ("b", "b", "X", "X", 4, "dep"),
            ("c", "c", "X", "X", 1, "dep"),
            ("d", "d", "X", "X", 1, "dep"),
        ]);
        let v = check_projective(&p);
        assert!(!v.is_empty());
        assert!(v.iter().all(|v| v.property_id == 6));
    }

    #[test]
    fn verdict_tags_tokens() {
        let (verdict, tagged) = check_factual(&mary_buys_a_car());
        assert!(verdict.accepted);
        assert!(tagged.tokens.iter().all(|t| t.validation == Validation::Accepted));
        let (verdict, tagged) = check_factual(&go_fetch());
        assert!(!verdict.accepted);
        assert!(verdict.violations.iter().any(|v| v.property_id == 1));
        assert!(tagged.tokens.iter().all(|t| t.validation == Validation::Rejected));
    }

    #[test]
    fn diagnostics_format() {
        let v = Violation::new(1, 2, "main verb has no subject");
        assert_eq!(v.to_string(), "P1@2: main verb has no subject");
    }
}
