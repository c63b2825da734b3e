//! ULR documents and sentence-level scoring against gold.
//!
//! A document is a sequence of blocks:
//!
//! ```text
//! % sent_id = s1
//! % text = Mary buys a car
//! ulr(fid_1,'Commerce_buy',[role(rid_1,'Buyer',mary,'bn:00046516n'),role(rid_2,'Goods',car,'bn:00007309n')]).
//!
//! % sent_id = s2
//! % text = Buy a car
//! % rejected: P1@1: ...
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{parse_clause, Term};
use crate::ulr::{serialize_ulr, UlrFact, UlrRole, NULL_SYNSET};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceUlr {
    pub sent_id: String,
    pub text: String,
    pub facts: Vec<UlrFact>,
    /// Set for or-coordinations.
    #[serde(default)]
    pub disjunctive: bool,
    /// Violation or authoring messages when the sentence was not accepted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<String>,
}

pub fn write_document(sentences: &[SentenceUlr]) -> String {
    let mut out = String::new();
    for (i, s) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("% sent_id = {}\n% text = {}\n", s.sent_id, s.text));
        for r in &s.rejected {
            out.push_str(&format!("% rejected: {}\n", r.replace('\n', " ")));
        }
        out.push_str(&serialize_ulr(&s.facts));
        if s.disjunctive {
            out.push_str("connective(or).\n");
        }
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn numbered(t: &Term, prefix: &str) -> Option<u32> {
    t.as_atom()?.strip_prefix(prefix)?.parse().ok()
}

fn read_fact(line: usize, t: &Term) -> Result<UlrFact> {
    let a = t.as_compound("ulr", 3).ok_or_else(|| syntax(line, "expected ulr/3"))?;
    let frame_id = numbered(&a[0], "fid_").ok_or_else(|| syntax(line, "expected fid_N"))?;
    let frame = a[1].as_text().ok_or_else(|| syntax(line, "frame name"))?;
    let roles = a[2]
        .as_list()
        .ok_or_else(|| syntax(line, "role list"))?
        .iter()
        .map(|r| {
            let r = r.as_compound("role", 4).ok_or_else(|| syntax(line, "expected role/4"))?;
            let synset = r[3].as_text().ok_or_else(|| syntax(line, "synset"))?;
            Ok(UlrRole {
                role_id: numbered(&r[0], "rid_").ok_or_else(|| syntax(line, "expected rid_N"))?,
                role: r[1].as_text().ok_or_else(|| syntax(line, "role name"))?,
                lemma: r[2].as_text().ok_or_else(|| syntax(line, "lemma"))?,
                synset: (synset != NULL_SYNSET).then_some(synset),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UlrFact { frame_id, frame, roles })
}

pub fn read_document(src: &str) -> Result<Vec<SentenceUlr>> {
    let mut out: Vec<SentenceUlr> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(c) = l.strip_prefix('%') {
            let c = c.trim();
            if let Some(id) = c.strip_prefix("sent_id =") {
                out.push(SentenceUlr { sent_id: id.trim().to_string(), ..Default::default() });
                continue;
            }
            let field =
                c.strip_prefix("text =").map(|t| (true, t)).or_else(|| c.strip_prefix("rejected:").map(|r| (false, r)));
            if let Some((is_text, v)) = field {
                let cur = out.last_mut().ok_or_else(|| syntax(line, "block comment before the first sent_id"))?;
                if is_text {
                    cur.text = v.trim().to_string();
                } else {
                    cur.rejected.push(v.trim().to_string());
                }
            }
            continue;
        }
        let cur = out.last_mut().ok_or_else(|| syntax(line, "fact before the first sent_id"))?;
        let term = parse_clause(l).map_err(|e| syntax(line, e.to_string()))?;
        if term.as_compound("connective", 1).and_then(|a| a[0].as_atom()) == Some("or") {
            cur.disjunctive = true;
        } else {
            cur.facts.push(read_fact(line, &term)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceVerdict {
    pub sent_id: String,
    pub frame_ok: bool,
    pub role_ok: bool,
    pub synset_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub frame_f1: f64,
    pub role_f1: f64,
    pub synset_f1: f64,
    pub sentences: Vec<SentenceVerdict>,
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn frame_view(f: &[UlrFact]) -> Vec<String> {
    sorted(f.iter().map(|f| f.frame.clone()).collect())
}

fn role_view(f: &[UlrFact]) -> Vec<(String, Vec<(String, String)>)> {
    sorted(
        f.iter()
            .map(|f| (f.frame.clone(), f.roles.iter().map(|r| (r.role.clone(), r.lemma.clone())).collect()))
            .collect(),
    )
}

fn synset_view(f: &[UlrFact]) -> Vec<crate::ulr::CanonicalFact> {
    crate::ulr::canonical(f)
}

/// Sentence-level exact match at three levels. A sentence is frame-correct
/// when its frame multiset equals gold, role-correct when additionally every
/// role filler matches, synset-correct when additionally every synset does.
/// Ids are ignored. Each score is correct / sentences; with one answer per
/// sentence precision and recall coincide.
pub fn evaluate(system: &[SentenceUlr], gold: &[SentenceUlr]) -> Result<EvalReport> {
    let sys_ids: BTreeSet<&str> = system.iter().map(|s| s.sent_id.as_str()).collect();
    let gold_ids: BTreeSet<&str> = gold.iter().map(|s| s.sent_id.as_str()).collect();
    if sys_ids.len() != system.len() || gold_ids.len() != gold.len() {
        return Err(Error::Evaluation("duplicate sentence id".into()));
    }
    if sys_ids != gold_ids {
        let missing: Vec<&str> = gold_ids.symmetric_difference(&sys_ids).copied().collect();
        return Err(Error::Evaluation(format!("sentence ids do not align: {}", missing.join(", "))));
    }
    let sentences: Vec<SentenceVerdict> = gold
        .iter()
        .map(|g| {
            let s = system.iter().find(|s| s.sent_id == g.sent_id).unwrap();
            let frame_ok = frame_view(&s.facts) == frame_view(&g.facts);
            let role_ok = frame_ok && role_view(&s.facts) == role_view(&g.facts);
            let synset_ok = role_ok && synset_view(&s.facts) == synset_view(&g.facts);
            SentenceVerdict { sent_id: g.sent_id.clone(), frame_ok, role_ok, synset_ok }
        })
        .collect();
    let n = sentences.len();
    let score = |f: fn(&SentenceVerdict) -> bool| {
        if n == 0 {
            1.0
        } else {
            sentences.iter().filter(|v| f(v)).count() as f64 / n as f64
        }
    };
    Ok(EvalReport {
        frame_f1: score(|v| v.frame_ok),
        role_f1: score(|v| v.role_ok),
        synset_f1: score(|v| v.synset_ok),
        sentences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "\
% sent_id = s1
% text = Mary buys a car
ulr(fid_1,'Commerce_buy',[role(rid_1,'Buyer',mary,'bn:00046516n'),role(rid_2,'Goods',car,'bn:00007309n')]).

% sent_id = s2
% text = Buy a car
% rejected: P1@1: root buy is not a finite main verb

% sent_id = s3
% text = Mary buys a car or a watch
ulr(fid_1,'Commerce_buy',[role(rid_1,'Buyer',mary,'bn:00046516n'),role(rid_2,'Goods',car,'na')]).
connective(or).
";

    #[test]
    fn document_round_trip() {
        let doc = read_document(DOC).unwrap();
        assert_eq!(doc.len(), 3);
        assert_eq!(doc[1].rejected.len(), 1);
        assert!(doc[2].disjunctive);
        assert_eq!(doc[2].facts[0].roles[1].synset, None);
        assert_eq!(write_document(&doc), DOC);
    }

    #[test]
    fn perfect_and_misaligned() {
        let doc = read_document(DOC).unwrap();
        let r = evaluate(&doc, &doc).unwrap();
        assert_eq!((r.frame_f1, r.role_f1, r.synset_f1), (1.0, 1.0, 1.0));
        assert!(matches!(evaluate(&doc[..2], &doc), Err(Error::Evaluation(_))));
    }

    #[test]
    fn ids_ignored() {
        let gold = read_document(DOC).unwrap();
        let mut sys = gold.clone();
        sys[0].facts[0].roles[0].role_id = 7;
        sys[0].facts[0].frame_id = 3;
        assert_eq!(evaluate(&sys, &gold).unwrap().synset_f1, 1.0);
    }

    #[test]
    fn spurious_frame_lowers_frame_score() {
        let gold = read_document(DOC).unwrap();
        let mut sys = gold.clone();
        let extra = sys[0].facts[0].clone();
        sys[0].facts.push(extra);
        let r = evaluate(&sys, &gold).unwrap();
        assert!(r.frame_f1 < 1.0);
        assert!(r.synset_f1 <= r.role_f1 && r.role_f1 <= r.frame_f1);
    }

    #[test]
    fn malformed() {
        assert!(read_document("ulr(fid_1,'F',[]).\n").is_err());
        assert!(read_document("% sent_id = a\nulr(x,'F',[]).\n").is_err());
        assert!(read_document("% text = early\n").is_err());
        assert_eq!(read_document("% free comment\n% sent_id = a\n").unwrap().len(), 1);
    }
}
