//! End-to-end authoring of one sentence: factuality and correction,
//! paraparsing, frame triggering, disambiguation and ULR construction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::correction::{correct, CorrectionStatus, KBestTags, Reparser, TagFix, DEFAULT_THRESHOLD};
use crate::disambig::{disambiguate_candidate, ScoredCandidate, SynsetGraph, DEFAULT_HOP_LIMIT};
use crate::error::{Error, Result};
use crate::eval::SentenceUlr;
use crate::facts::export_token_facts;
use crate::factuality::{check_factual, Violation};
use crate::frames::{candidates_in, LvpStore};
use crate::paraparse::{paraparse, Lexicon, RewriteTrace};
use crate::parse::{Connective, DependencyParse, ParseSet};
use crate::ulr::{best_candidate, build_ulr, clauses, expand_coordinations, UlrFact};

/// `key=value` settings; `#` starts a comment line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub threshold: f64,
    pub hop_limit: usize,
    /// Cost of an unresolved filler; derived from the graph when unset.
    pub penalty: Option<f64>,
    pub adapter_url: Option<String>,
    pub fixture_mode: bool,
    pub k: usize,
    pub lexicon: Option<String>,
    pub reparse_fixtures: Option<String>,
    pub train_parses: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            threshold: DEFAULT_THRESHOLD,
            hop_limit: DEFAULT_HOP_LIMIT,
            penalty: None,
            adapter_url: None,
            fixture_mode: true,
            k: 3,
            lexicon: None,
            reparse_fixtures: None,
            train_parses: None,
        }
    }
}

impl Config {
    pub fn parse(src: &str) -> Result<Config> {
        let mut c = Config::default();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: String| Error::Syntax { line: i + 1, message: m };
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("{key}: not a number: {v}")));
            let int = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("{key}: not a non-negative integer: {v}")));
            let text = || (!value.is_empty()).then(|| value.to_string());
            match key {
                "threshold" => c.threshold = num(value)?,
                "hop_limit" => c.hop_limit = int(value)?,
                "penalty" => c.penalty = Some(num(value)?),
                "adapter_url" => c.adapter_url = text(),
                "fixture_mode" => {
                    c.fixture_mode = match value {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        _ => return Err(bad(format!("fixture_mode: expected true or false, got {value}"))),
                    }
                }
                "k" => c.k = int(value)?.max(1),
                "lexicon" => c.lexicon = text(),
                "reparse_fixtures" => c.reparse_fixtures = text(),
                "train_parses" => c.train_parses = text(),
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        if !(0.0..=1.0).contains(&c.threshold) {
            return Err(Error::Input(format!("threshold {} outside [0,1]", c.threshold)));
        }
        Ok(c)
    }
}

/// Everything authoring reads; shared read-only between sentences.
#[derive(Debug, Clone, Default)]
pub struct Resources {
    pub config: Config,
    pub store: LvpStore,
    pub graph: SynsetGraph,
    pub lexicon: Lexicon,
}

impl Resources {
    pub fn penalty(&self) -> f64 {
        self.config.penalty.unwrap_or_else(|| self.graph.default_penalty(self.config.hop_limit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceStatus {
    Accepted,
    /// Failed the factual checks and could not be corrected.
    Rejected,
    /// Factual, but no frame interpretation was found.
    Unauthored,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceOutcome {
    pub sent_id: String,
    pub text: String,
    pub status: SentenceStatus,
    pub correction: CorrectionStatus,
    pub fixes: Vec<TagFix>,
    pub violations: Vec<Violation>,
    /// token/9 facts of the selected parse, or of the best parse when
    /// rejected.
    pub token_facts: String,
    pub parse: Option<DependencyParse>,
    /// Rewrites behind the chosen paraparse variant.
    pub trace: Option<RewriteTrace>,
    pub candidates: Vec<ScoredCandidate>,
    pub facts: Vec<UlrFact>,
    pub connective: Option<Connective>,
    pub message: Option<String>,
}

impl SentenceOutcome {
    pub fn to_ulr(&self) -> SentenceUlr {
        let mut rejected: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        rejected.extend(self.message.clone());
        SentenceUlr {
            sent_id: self.sent_id.clone(),
            text: self.text.clone(),
            facts: self.facts.clone(),
            disjunctive: self.connective == Some(Connective::Or),
            rejected,
        }
    }
}

struct Authored {
    selected: Vec<ScoredCandidate>,
    facts: Vec<UlrFact>,
    connective: Option<Connective>,
}

impl Authored {
    fn rank(&self) -> (usize, usize, f64) {
        let roles = self.facts.iter().map(|f| f.roles.len()).sum();
        let cost = self.selected.iter().map(|c| c.score).sum();
        (self.facts.len(), roles, cost)
    }
}

fn describe_clause(p: &DependencyParse, root: u32) -> String {
    let lemma = p.token(root).map_or("?", |t| t.lemma.as_str());
    format!("clause `{lemma}` (token {root})")
}

fn author_graph(parse: &DependencyParse, res: &Resources) -> Result<Authored> {
    let expansion = expand_coordinations(parse);
    let mut selected = Vec::new();
    for p in &expansion.parses {
        for clause in clauses(p) {
            let (found, rejections) = candidates_in(p, &res.store, &clause.tokens);
            let scored = found
                .iter()
                .map(|c| disambiguate_candidate(c, &res.graph, res.config.hop_limit, res.penalty()))
                .collect::<Result<Vec<_>>>()?;
            let best = best_candidate(&scored).cloned().ok_or_else(|| {
                let why = if rejections.is_empty() {
                    "no frame triggered".to_string()
                } else {
                    rejections.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; ")
                };
                Error::Authoring(format!("{}: {why}", describe_clause(p, clause.root)))
            })?;
            selected.push(best);
        }
    }
    let facts = build_ulr(&selected);
    Ok(Authored { selected, facts, connective: expansion.connective })
}

fn reindex(parse: &DependencyParse, sentence_id: u32) -> DependencyParse {
    let mut p = parse.clone();
    for t in &mut p.tokens {
        t.index.sentence_id = sentence_id;
    }
    p
}

/// Authors one sentence. Rejections and missing interpretations are
/// reported in the outcome; only data errors are returned as `Err`.
pub fn author(set: &ParseSet, res: &Resources, reparser: &dyn Reparser) -> Result<SentenceOutcome> {
    set.validate()?;
    let parse0 = set.best();
    let mut out = SentenceOutcome {
        sent_id: set.sent_id.clone(),
        text: set.sentence_text.clone(),
        status: SentenceStatus::Rejected,
        correction: CorrectionStatus::RephraseRequired,
        fixes: vec![],
        violations: vec![],
        token_facts: String::new(),
        parse: None,
        trace: None,
        candidates: vec![],
        facts: vec![],
        connective: None,
        message: None,
    };
    let kbest = KBestTags::from_parse(parse0);
    let outcome = match correct(set, &kbest, reparser, res.config.threshold) {
        Ok(o) => o,
        Err(Error::Reparse(m)) => {
            let (verdict, tagged) = check_factual(parse0);
            out.violations = verdict.violations;
            out.token_facts = export_token_facts(&tagged);
            out.message = Some(format!("re-parse failed: {m}"));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.correction = outcome.status;
    out.fixes = outcome.applied_fixes;
    out.violations = outcome.violations;
    let Some(selected) = outcome.selected else {
        out.token_facts = export_token_facts(&check_factual(parse0).1);
        return Ok(out);
    };
    let selected = reindex(&selected, parse0.sentence_id());
    out.token_facts = export_token_facts(&selected);
    out.parse = Some(selected.clone());

    let variants = match paraparse(&selected, &res.lexicon) {
        Ok(v) => v,
        Err(Error::MixedCoordination(m)) => {
            out.status = SentenceStatus::Unauthored;
            out.message = Some(format!("mixed coordination: {m}"));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let mut best: Option<(Authored, RewriteTrace)> = None;
    let mut first_err = None;
    for v in variants {
        match author_graph(&v.parse, res) {
            Ok(a) => {
                let better = best.as_ref().is_none_or(|(b, _)| {
                    let (x, y) = (a.rank(), b.rank());
                    x.0 > y.0 || (x.0 == y.0 && (x.1 > y.1 || (x.1 == y.1 && x.2 < y.2)))
                });
                if better {
                    best = Some((a, v.trace));
                }
            }
            Err(Error::Authoring(m)) => {
                first_err.get_or_insert(m);
            }
            Err(e) => return Err(e),
        }
    }
    match best {
        Some((a, trace)) => {
            out.status = SentenceStatus::Accepted;
            out.trace = Some(trace);
            out.candidates = a.selected;
            out.facts = a.facts;
            out.connective = a.connective;
        }
        None => {
            out.status = SentenceStatus::Unauthored;
            out.message = first_err.map(|m| format!("authoring: {m}"));
        }
    }
    Ok(out)
}

/// Sentences authored so far in one interactive session.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Session {
    pub accepted: Vec<SentenceUlr>,
}

impl Session {
    pub fn record(&mut self, outcome: &SentenceOutcome) {
        if outcome.status == SentenceStatus::Accepted {
            self.accepted.push(outcome.to_ulr());
        }
    }

    pub fn fact_count(&self) -> usize {
        self.accepted.iter().map(|s| s.facts.len()).sum()
    }
}

/// Distinct frames of a store, for listings.
pub fn frame_names(store: &LvpStore) -> Vec<String> {
    store.lvps.iter().map(|l| l.frame.clone()).collect::<BTreeSet<_>>().into_iter().collect()
}
