//! Wire format shared with the parser service, and fixture-backed stand-ins
//! for it.
//!
//! `POST /parse` takes a [`ParseRequest`], `POST /reparse` a
//! [`ReparseRequest`]; both answer with a [`KBestEnvelope`].

use serde::{Deserialize, Serialize};

use crate::correction::{FixedTags, Reparser};
use crate::error::{Error, Result};
use crate::parse::{DependencyParse, Edge, ParseSet, ScoredTag, Token, TokenIndex, Validation};

fn default_k() -> usize {
    3
}

fn default_ner() -> String {
    "o".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseRequest {
    pub sentence: String,
    #[serde(default = "default_k")]
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReparseRequest {
    pub sentence: String,
    /// One entry per token.
    pub tags: Vec<FixedTags>,
    #[serde(default = "default_k")]
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeToken {
    pub id: u32,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub head: u32,
    pub deprel: String,
    #[serde(default = "default_ner")]
    pub ner: String,
    /// Best first. May be empty when the parser reports no alternatives.
    #[serde(default)]
    pub upos_kbest: Vec<ScoredTag>,
    #[serde(default)]
    pub xpos_kbest: Vec<ScoredTag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParse {
    pub confidence: f64,
    pub tokens: Vec<EnvelopeToken>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KBestEnvelope {
    pub sentence: String,
    /// Ranked by non-increasing confidence.
    pub parses: Vec<EnvelopeParse>,
}

fn conf_of(kbest: &[ScoredTag], tag: &str) -> f64 {
    kbest.iter().find(|s| s.tag == tag).map_or(1.0, |s| s.confidence)
}

impl KBestEnvelope {
    /// Converts to a validated parse set. Lemmas are lowercased as on
    /// CoNLL-U ingest.
    pub fn to_parse_set(&self, sent_id: &str, sentence_id: u32) -> Result<ParseSet> {
        let parses = self
            .parses
            .iter()
            .enumerate()
            .map(|(rank, p)| {
                let parse_id = rank as u32 + 1;
                let mut tokens: Vec<Token> = p
                    .tokens
                    .iter()
                    .map(|t| Token {
                        index: TokenIndex { sentence_id, parse_id, token_id: t.id },
                        surface: t.form.clone(),
                        lemma: t.lemma.to_lowercase(),
                        upos: t.upos.clone(),
                        xpos: t.xpos.clone(),
                        head: Edge::new(t.head, t.deprel.clone()),
                        extra_heads: vec![],
                        out_edges: vec![],
                        ne_tag: t.ner.to_lowercase(),
                        upos_confidence: conf_of(&t.upos_kbest, &t.upos),
                        xpos_confidence: conf_of(&t.xpos_kbest, &t.xpos),
                        upos_kbest: t.upos_kbest.clone(),
                        xpos_kbest: t.xpos_kbest.clone(),
                        validation: Validation::Unchecked,
                    })
                    .collect();
                tokens.sort_by_key(|t| t.id());
                let root_index = tokens.iter().find(|t| t.is_root()).map_or(0, |t| t.id());
                let mut parse = DependencyParse { tokens, confidence: p.confidence, root_index, coordinations: vec![] };
                parse.sync_out_edges();
                parse
            })
            .collect();
        let set = ParseSet { sent_id: sent_id.into(), sentence_text: self.sentence.clone(), parses };
        set.validate()?;
        Ok(set)
    }

    pub fn from_parse_set(set: &ParseSet) -> KBestEnvelope {
        KBestEnvelope {
            sentence: set.sentence_text.clone(),
            parses: set
                .parses
                .iter()
                .map(|p| EnvelopeParse {
                    confidence: p.confidence,
                    tokens: p
                        .tokens
                        .iter()
                        .map(|t| EnvelopeToken {
                            id: t.id(),
                            form: t.surface.clone(),
                            lemma: t.lemma.clone(),
                            upos: t.upos.clone(),
                            xpos: t.xpos.clone(),
                            head: t.head.target,
                            deprel: t.head.label.clone(),
                            ner: t.ne_tag.clone(),
                            upos_kbest: t.upos_kbest.clone(),
                            xpos_kbest: t.xpos_kbest.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// First-pass parses for a sentence.
pub trait Parser {
    fn parse(&self, sentence: &str) -> Result<ParseSet>;
}

/// Answers from pre-recorded parse sets, matched by sentence text.
#[derive(Debug, Clone, Default)]
pub struct FixtureParser {
    pub sets: Vec<ParseSet>,
}

impl FixtureParser {
    pub fn new(sets: Vec<ParseSet>) -> Self {
        FixtureParser { sets }
    }

    pub fn lookup(&self, sentence: &str) -> Option<&ParseSet> {
        let wanted = sentence.trim();
        self.sets.iter().find(|s| s.sentence_text.trim() == wanted)
    }
}

impl Parser for FixtureParser {
    fn parse(&self, sentence: &str) -> Result<ParseSet> {
        self.lookup(sentence).cloned().ok_or_else(|| Error::Input(format!("no fixture parse for '{sentence}'")))
    }
}

/// Answers re-parse requests from recorded re-parses. A recording matches
/// when its text is the sentence and its best parse carries the fixed tags.
#[derive(Debug, Clone, Default)]
pub struct FixtureReparser {
    pub sets: Vec<ParseSet>,
}

impl Reparser for FixtureReparser {
    fn reparse(&self, sentence: &str, tags: &[FixedTags]) -> Result<ParseSet> {
        self.sets
            .iter()
            .filter(|s| s.sentence_text.trim() == sentence.trim())
            .find(|s| {
                let best = s.best();
                best.len() == tags.len()
                    && tags.iter().all(|f| best.token(f.token_id).is_some_and(|t| t.upos == f.upos && t.xpos == f.xpos))
            })
            .cloned()
            .ok_or_else(|| Error::Reparse(format!("no recorded re-parse of '{sentence}' with the requested tags")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ENVELOPE: &str = r#"{
      "sentence": "Mary buys a car",
      "parses": [
        {"confidence": 0.9, "tokens": [
          {"id": 1, "form": "Mary", "lemma": "Mary", "upos": "PROPN", "xpos": "NNP", "head": 2, "deprel": "nsubj", "ner": "S_PERSON"},
          {"id": 2, "form": "buys", "lemma": "buy", "upos": "VERB", "xpos": "VBZ", "head": 0, "deprel": "root",
           "upos_kbest": [{"tag": "VERB", "confidence": 0.8}, {"tag": "NOUN", "confidence": 0.2}]},
          {"id": 3, "form": "a", "lemma": "a", "upos": "DET", "xpos": "DT", "head": 4, "deprel": "det"},
          {"id": 4, "form": "car", "lemma": "car", "upos": "NOUN", "xpos": "NN", "head": 2, "deprel": "obj"}
        ]}
      ]
    }"#;

    #[test]
    fn envelope_to_parse_set() {
        let env: KBestEnvelope = serde_json::from_str(ENVELOPE).unwrap();
        let set = env.to_parse_set("s1", 1).unwrap();
        let p = set.best();
        assert_eq!(p.root_index, 2);
        assert_eq!(p.token(1).unwrap().lemma, "mary");
        assert_eq!(p.token(1).unwrap().ne_tag, "s_person");
        assert_eq!(p.token(2).unwrap().upos_confidence, 0.8);
        assert_eq!(p.token(3).unwrap().xpos_confidence, 1.0);
        let back = KBestEnvelope::from_parse_set(&set);
        assert_eq!(back.to_parse_set("s1", 1).unwrap(), set);
    }

    #[test]
    fn bad_envelopes_rejected() {
        let mut env: KBestEnvelope = serde_json::from_str(ENVELOPE).unwrap();
        env.parses[0].tokens[0].head = 0;
        env.parses[0].tokens[0].deprel = "root".into();
        assert!(env.to_parse_set("s1", 1).is_err());
        let empty = KBestEnvelope { sentence: "x".into(), parses: vec![] };
        assert!(empty.to_parse_set("s1", 1).is_err());
    }

    #[test]
    fn request_defaults() {
        let r: ParseRequest = serde_json::from_str(r#"{"sentence":"Mary buys a car"}"#).unwrap();
        assert_eq!(r.k, 3);
    }

    #[test]
    fn fixture_reparser_checks_tags() {
        let env: KBestEnvelope = serde_json::from_str(ENVELOPE).unwrap();
        let set = env.to_parse_set("s1", 1).unwrap();
        let re = FixtureReparser { sets: vec![set] };
        let mut tags: Vec<FixedTags> = re.sets[0]
            .best()
            .tokens
            .iter()
            .map(|t| FixedTags { token_id: t.id(), upos: t.upos.clone(), xpos: t.xpos.clone() })
            .collect();
        assert!(re.reparse("Mary buys a car", &tags).is_ok());
        tags[1].upos = "NOUN".into();
        assert!(matches!(re.reparse("Mary buys a car", &tags), Err(Error::Reparse(_))));
        assert!(FixtureParser::default().parse("Mary buys a car").is_err());
    }
}
