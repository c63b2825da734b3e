//! POS-tag error detection and correction from k-best tags, re-parsing with
//! fixed tags, and selection of the first factual re-parse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factuality::{check_factual, Violation};
use crate::parse::{DependencyParse, ParseSet, ScoredTag};

/// Tags below this confidence are candidates for correction.
pub const DEFAULT_THRESHOLD: f64 = 0.9;

/// Ranked tag alternatives for one token, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenTags {
    pub token_id: u32,
    pub upos: Vec<ScoredTag>,
    pub xpos: Vec<ScoredTag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KBestTags {
    pub tokens: Vec<TokenTags>,
}

impl KBestTags {
    /// Tag distributions carried by the parse's tokens. Tokens without a
    /// distribution contribute their chosen tag at its confidence.
    pub fn from_parse(parse: &DependencyParse) -> KBestTags {
        let ranked = |kbest: &[ScoredTag], tag: &str, conf: f64| {
            if kbest.is_empty() {
                vec![ScoredTag::new(tag, conf)]
            } else {
                let mut v = kbest.to_vec();
                v.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
                v
            }
        };
        KBestTags {
            tokens: parse
                .tokens
                .iter()
                .map(|t| TokenTags {
                    token_id: t.id(),
                    upos: ranked(&t.upos_kbest, &t.upos, t.upos_confidence),
                    xpos: ranked(&t.xpos_kbest, &t.xpos, t.xpos_confidence),
                })
                .collect(),
        }
    }
}

/// Tags to hold fixed during re-parsing, one pair per token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedTags {
    pub token_id: u32,
    pub upos: String,
    pub xpos: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagKind {
    Upos,
    Xpos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagFix {
    pub token_id: u32,
    pub kind: TagKind,
    pub old: String,
    pub new: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionStatus {
    Unchanged,
    Corrected,
    RephraseRequired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionOutcome {
    pub status: CorrectionStatus,
    /// Present unless the user has to rephrase. Tokens are tagged accepted.
    pub selected: Option<DependencyParse>,
    pub applied_fixes: Vec<TagFix>,
    /// Violations of the best parse when no factual parse was found.
    pub violations: Vec<Violation>,
}

/// Supplies re-parses of a sentence with some tags held fixed.
pub trait Reparser {
    fn reparse(&self, sentence: &str, tags: &[FixedTags]) -> Result<ParseSet>;
}

impl<F> Reparser for F
where
    F: Fn(&str, &[FixedTags]) -> Result<ParseSet>,
{
    fn reparse(&self, sentence: &str, tags: &[FixedTags]) -> Result<ParseSet> {
        self(sentence, tags)
    }
}

// (upos, second-best upos) -> (new upos, allowed xpos)
const UPOS_RULES: [(&str, &str, &str, &[&str]); 4] = [
    ("NOUN", "VERB", "VERB", &["VBP", "VBZ", "VBD"]),
    ("VERB", "AUX", "AUX", &["VBP", "VBZ", "VBD"]),
    ("PRON", "DET", "DET", &["WDT", "PDT", "DT"]),
    ("SCONJ", "ADV", "ADV", &["WRB", "IN"]),
];

// (xpos, second-best xpos) -> new xpos
const XPOS_RULES: [(&str, &str, &str); 3] = [("VBD", "VBN", "VBN"), ("VBN", "VBD", "VBD"), ("VBP", "VB", "VB")];

/// Corrected tags for one token given its top-two distributions.
///
/// When a rule offers several XPOS tags, the one with the highest confidence
/// in the token's XPOS distribution wins; if none of them appears there, the
/// first listed tag is used.
pub fn correct_token(upos: &[ScoredTag], xpos: &[ScoredTag], threshold: f64) -> (String, String) {
    let (Some(u0), Some(x0)) = (upos.first(), xpos.first()) else {
        return (String::new(), String::new());
    };
    let u1 = upos.get(1).map(|s| s.tag.as_str());
    let x1 = xpos.get(1).map(|s| s.tag.as_str());
    if u0.confidence < threshold {
        for (from, second, to, allowed) in UPOS_RULES {
            if u0.tag == from && u1 == Some(second) {
                let best = xpos
                    .iter()
                    .filter(|s| allowed.contains(&s.tag.as_str()))
                    .max_by(|a, b| a.confidence.total_cmp(&b.confidence))
                    .map_or(allowed[0], |s| s.tag.as_str());
                return (to.to_string(), best.to_string());
            }
        }
    } else if x0.confidence < threshold {
        for (from, second, to) in XPOS_RULES {
            if x0.tag == from && x1 == Some(second) {
                return (u0.tag.clone(), to.to_string());
            }
        }
    }
    (u0.tag.clone(), x0.tag.clone())
}

/// Applies the correction table to every token. Returns the fixed tags for
/// the whole sentence and the changes made.
pub fn correct_pos_tags(
    parse: &DependencyParse,
    kbest: &KBestTags,
    threshold: f64,
) -> Result<(Vec<FixedTags>, Vec<TagFix>)> {
    let mut tags = Vec::with_capacity(parse.len());
    let mut fixes = Vec::new();
    for t in &parse.tokens {
        let k = kbest
            .tokens
            .iter()
            .find(|k| k.token_id == t.id())
            .ok_or_else(|| Error::Input(format!("no k-best tags for token {}", t.id())))?;
        if k.upos.is_empty() || k.xpos.is_empty() {
            return Err(Error::Input(format!("empty k-best tags for token {}", t.id())));
        }
        let (upos, xpos) = correct_token(&k.upos, &k.xpos, threshold);
        if upos != k.upos[0].tag {
            fixes.push(TagFix { token_id: t.id(), kind: TagKind::Upos, old: k.upos[0].tag.clone(), new: upos.clone() });
        }
        if xpos != k.xpos[0].tag {
            fixes.push(TagFix { token_id: t.id(), kind: TagKind::Xpos, old: k.xpos[0].tag.clone(), new: xpos.clone() });
        }
        tags.push(FixedTags { token_id: t.id(), upos, xpos });
    }
    Ok((tags, fixes))
}

/// First parse, in rank order, that passes every factual check.
pub fn select_corrected_parse(reparses: &[DependencyParse]) -> Result<CorrectionOutcome> {
    let Some(best) = reparses.first() else {
        return Err(Error::Input("empty re-parse set".into()));
    };
    for p in reparses {
        let (verdict, tagged) = check_factual(p);
        if verdict.accepted {
            return Ok(CorrectionOutcome {
                status: CorrectionStatus::Corrected,
                selected: Some(tagged),
                applied_fixes: vec![],
                violations: vec![],
            });
        }
    }
    Ok(CorrectionOutcome {
        status: CorrectionStatus::RephraseRequired,
        selected: None,
        applied_fixes: vec![],
        violations: check_factual(best).0.violations,
    })
}

/// Full correction step for one sentence.
pub fn correct(
    set: &ParseSet,
    kbest: &KBestTags,
    reparser: &dyn Reparser,
    threshold: f64,
) -> Result<CorrectionOutcome> {
    let parse0 = set.parses.first().ok_or_else(|| Error::Input(format!("sentence {} has no parses", set.sent_id)))?;
    let (verdict, tagged) = check_factual(parse0);
    if verdict.accepted {
        return Ok(CorrectionOutcome {
            status: CorrectionStatus::Unchanged,
            selected: Some(tagged),
            applied_fixes: vec![],
            violations: vec![],
        });
    }
    let (tags, fixes) = correct_pos_tags(parse0, kbest, threshold)?;
    let mut outcome = if fixes.is_empty() {
        // nothing to re-tag: fall back to the remaining ranked parses
        let rest = &set.parses[1..];
        if rest.is_empty() {
            CorrectionOutcome {
                status: CorrectionStatus::RephraseRequired,
                selected: None,
                applied_fixes: vec![],
                violations: verdict.violations.clone(),
            }
        } else {
            select_corrected_parse(rest)?
        }
    } else {
        let reparsed = reparser
            .reparse(&set.sentence_text, &tags)
            .map_err(|e| Error::Reparse(format!("sentence {}: {e}", set.sent_id)))?;
        select_corrected_parse(&reparsed.parses)?
    };
    if outcome.status == CorrectionStatus::RephraseRequired {
        outcome.violations = verdict.violations;
    }
    outcome.applied_fixes = fixes;
    Ok(outcome)
}
