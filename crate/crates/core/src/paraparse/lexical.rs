//! Lexical normalization: lemma overrides, particle verbs, indirect objects
//! and preposition folding.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::parse::DependencyParse;

/// Normalization config.
///
/// ```text
/// # surface<TAB>lemma
/// bought<TAB>buy
/// # particle verbs allowed to merge; when none are listed, all merge
/// @particle<TAB>pick_up
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    /// Lowercased surface form to lemma.
    pub overrides: BTreeMap<String, String>,
    pub particle_verbs: BTreeSet<String>,
}

impl Lexicon {
    pub fn parse(src: &str) -> Result<Lexicon> {
        let mut lex = Lexicon::default();
        for (i, line) in src.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('\t') else {
                return Err(Error::Syntax { line: i + 1, message: "expected two tab-separated fields".into() });
            };
            let value = value.trim();
            if value.is_empty() {
                return Err(Error::Syntax { line: i + 1, message: "empty lemma".into() });
            }
            if key == "@particle" {
                lex.particle_verbs.insert(value.to_string());
            } else {
                lex.overrides.insert(key.trim().to_lowercase(), value.to_string());
            }
        }
        Ok(lex)
    }

    fn allows_particle(&self, merged: &str) -> bool {
        self.particle_verbs.is_empty() || self.particle_verbs.contains(merged)
    }
}

/// Applies lemma overrides, merges verbs with their `compound:prt` particles
/// into `verb_particle` lemmas, relabels `iobj` as `obl:to`, and folds a
/// preposition into the label of the `obl`/`nmod` it marks
/// (`obl` + case `in` becomes `obl:in`, the case token is removed).
pub fn merge_particles_and_lemmas(parse: &DependencyParse, lexicon: &Lexicon) -> DependencyParse {
    let mut p = parse.clone();

    for t in &mut p.tokens {
        if let Some(lemma) = lexicon.overrides.get(&t.surface.to_lowercase()) {
            t.lemma = lemma.clone();
        }
    }

    let ids: Vec<u32> = p.ids().collect();
    for v in ids.iter().copied() {
        let Some(tok) = p.token(v) else { continue };
        let particles: Vec<u32> = tok.out_targets("compound:prt").collect();
        for prt in particles {
            let (verb, part) = (p.token(v).unwrap(), p.token(prt).unwrap());
            let merged = format!("{}_{}", verb.lemma, part.lemma);
            if !lexicon.allows_particle(&merged) {
                continue;
            }
            let surface = if prt > v {
                format!("{} {}", verb.surface, part.surface)
            } else {
                format!("{} {}", part.surface, verb.surface)
            };
            p.reattach_dependents(prt, v);
            p.remove_token(prt);
            let verb = p.token_mut(v).unwrap();
            verb.lemma = merged;
            verb.surface = surface;
        }
    }

    for id in ids.iter().copied() {
        if p.in_edges_of(id).iter().any(|e| e.label == "iobj") {
            let edges = p
                .in_edges_of(id)
                .into_iter()
                .map(|mut e| {
                    if e.label == "iobj" {
                        e.label = "obl:to".into();
                    }
                    e
                })
                .collect();
            p.set_in_edges(id, edges);
        }
    }

    for id in ids {
        let Some(tok) = p.token(id) else { continue };
        if !tok.in_edges().any(|e| e.label == "obl" || e.label == "nmod") {
            continue;
        }
        let cases: Vec<u32> = tok
            .out_targets("case")
            .filter(|&c| p.token(c).is_some_and(|c| c.out_edges.is_empty() && c.extra_heads.is_empty()))
            .collect();
        if cases.is_empty() {
            continue;
        }
        let prep = cases.iter().map(|&c| p.token(c).unwrap().lemma.to_lowercase()).collect::<Vec<_>>().join("_");
        let edges = p
            .in_edges_of(id)
            .into_iter()
            .map(|mut e| {
                if e.label == "obl" || e.label == "nmod" {
                    e.label = format!("{}:{}", e.label, prep);
                }
                e
            })
            .collect();
        p.set_in_edges(id, edges);
        for c in cases {
            p.remove_token(c);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::testing::build;
    use crate::parse::Edge;

    #[test]
    fn particle_merges() {
        let p = build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("picked", "pick", "VERB", "VBD", 0, "root"),
            ("up", "up", "ADP", "RP", 2, "compound:prt"),
            ("keys", "key", "NOUN", "NNS", 2, "obj"),
        ]);
        let out = merge_particles_and_lemmas(&p, &Lexicon::default());
        assert_eq!(out.len(), 3);
        assert_eq!(out.token(2).unwrap().lemma, "pick_up");
        assert_eq!(out.token(2).unwrap().surface, "picked up");
    }

    #[test]
    fn whitelist_blocks_unlisted() {
        let p = build(&[("gave", "give", "VERB", "VBD", 0, "root"), ("up", "up", "ADP", "RP", 1, "compound:prt")]);
        let lex = Lexicon::parse("@particle\tpick_up\n").unwrap();
        assert_eq!(merge_particles_and_lemmas(&p, &lex), p);
    }

    #[test]
    fn identity_without_work() {
        let p = build(&[("Mary", "mary", "PROPN", "NNP", 2, "nsubj"), ("runs", "run", "VERB", "VBZ", 0, "root")]);
        assert_eq!(merge_particles_and_lemmas(&p, &Lexicon::default()), p);
    }

    #[test]
    fn lemma_override() {
        let p = build(&[("Mary", "mary", "PROPN", "NNP", 2, "nsubj"), ("bought", "bought", "VERB", "VBD", 0, "root")]);
        let lex = Lexicon::parse("# fixes\nbought\tbuy\n").unwrap();
        assert_eq!(merge_particles_and_lemmas(&p, &lex).token(2).unwrap().lemma, "buy");
    }

    #[test]
    fn iobj_and_case_fold_agree() {
        let dative = build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("gave", "give", "VERB", "VBD", 0, "root"),
            ("John", "john", "PROPN", "NNP", 2, "iobj"),
            ("books", "book", "NOUN", "NNS", 2, "obj"),
        ]);
        let prep = build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("gave", "give", "VERB", "VBD", 0, "root"),
            ("books", "book", "NOUN", "NNS", 2, "obj"),
            ("to", "to", "ADP", "IN", 5, "case"),
            ("John", "john", "PROPN", "NNP", 2, "obl"),
        ]);
        let a = merge_particles_and_lemmas(&dative, &Lexicon::default());
        let b = merge_particles_and_lemmas(&prep, &Lexicon::default());
        assert_eq!(a.token(3).unwrap().head, Edge::new(2, "obl:to"));
        assert_eq!(b.token(5).unwrap().head, Edge::new(2, "obl:to"));
        assert!(!b.contains(4));
    }

    #[test]
    fn malformed_lexicon_line() {
        assert!(matches!(Lexicon::parse("ok\tfine\nbroken\n"), Err(Error::Syntax { line: 2, .. })));
    }
}
