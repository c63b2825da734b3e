//! Replayable record of graph rewrites.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{CoordinationGroup, DependencyParse, Edge, Token};

/// A primitive change to a parse. Edge lists hold all incoming edges,
/// primary first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Edit {
    RemoveToken { token: u32, in_edges: Vec<Edge> },
    AddToken { token: Box<Token> },
    SetInEdges { token: u32, before: Vec<Edge>, after: Vec<Edge> },
    SetLemma { token: u32, before: String, after: String },
    SetSurface { token: u32, before: String, after: String },
    SetNeTag { token: u32, before: String, after: String },
    SetTags { token: u32, upos: String, xpos: String },
    SetCoordinations { before: Vec<CoordinationGroup>, after: Vec<CoordinationGroup> },
    SetRootIndex { before: u32, after: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: String,
    /// Ids of every token the rule changed or removed.
    pub tokens: Vec<u32>,
    pub edits: Vec<Edit>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RewriteTrace {
    pub entries: Vec<TraceEntry>,
}

impl RewriteTrace {
    /// Appends the edits turning `before` into `after`, if there are any.
    pub fn record(&mut self, rule: &str, before: &DependencyParse, after: &DependencyParse) {
        let edits = diff(before, after);
        if edits.is_empty() {
            return;
        }
        let tokens: BTreeSet<u32> = edits
            .iter()
            .filter_map(|e| match e {
                Edit::RemoveToken { token, .. }
                | Edit::SetInEdges { token, .. }
                | Edit::SetLemma { token, .. }
                | Edit::SetSurface { token, .. }
                | Edit::SetNeTag { token, .. }
                | Edit::SetTags { token, .. } => Some(*token),
                Edit::AddToken { token } => Some(token.id()),
                _ => None,
            })
            .collect();
        self.entries.push(TraceEntry { rule: rule.into(), tokens: tokens.into_iter().collect(), edits });
    }

    /// One JSON object per entry, one per line.
    pub fn to_jsonl(&self) -> String {
        self.entries.iter().map(|e| serde_json::to_string(e).expect("trace entries serialize") + "\n").collect()
    }

    pub fn from_jsonl(src: &str) -> Result<RewriteTrace> {
        let entries = src
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Syntax { line: i + 1, message: e.to_string() }))
            .collect::<Result<_>>()?;
        Ok(RewriteTrace { entries })
    }
}

/// Edits that turn `before` into `after`.
pub fn diff(before: &DependencyParse, after: &DependencyParse) -> Vec<Edit> {
    let mut edits = Vec::new();
    for t in &before.tokens {
        if !after.contains(t.id()) {
            edits.push(Edit::RemoveToken { token: t.id(), in_edges: t.in_edges().cloned().collect() });
        }
    }
    for a in &after.tokens {
        let Some(b) = before.token(a.id()) else {
            edits.push(Edit::AddToken { token: Box::new(a.clone()) });
            continue;
        };
        let (bi, ai): (Vec<Edge>, Vec<Edge>) = (b.in_edges().cloned().collect(), a.in_edges().cloned().collect());
        if bi != ai {
            edits.push(Edit::SetInEdges { token: a.id(), before: bi, after: ai });
        }
        if b.lemma != a.lemma {
            edits.push(Edit::SetLemma { token: a.id(), before: b.lemma.clone(), after: a.lemma.clone() });
        }
        if b.surface != a.surface {
            edits.push(Edit::SetSurface { token: a.id(), before: b.surface.clone(), after: a.surface.clone() });
        }
        if b.ne_tag != a.ne_tag {
            edits.push(Edit::SetNeTag { token: a.id(), before: b.ne_tag.clone(), after: a.ne_tag.clone() });
        }
        if (&b.upos, &b.xpos) != (&a.upos, &a.xpos) {
            edits.push(Edit::SetTags { token: a.id(), upos: a.upos.clone(), xpos: a.xpos.clone() });
        }
    }
    if before.coordinations != after.coordinations {
        edits.push(Edit::SetCoordinations { before: before.coordinations.clone(), after: after.coordinations.clone() });
    }
    if before.root_index != after.root_index {
        edits.push(Edit::SetRootIndex { before: before.root_index, after: after.root_index });
    }
    edits
}

/// Applies a trace to its input parse.
pub fn replay(input: &DependencyParse, trace: &RewriteTrace) -> Result<DependencyParse> {
    let mut p = input.clone();
    let missing = |id: u32| Error::Input(format!("trace refers to missing token {id}"));
    for entry in &trace.entries {
        for edit in &entry.edits {
            match edit {
                Edit::RemoveToken { token, .. } => {
                    p.position(*token).ok_or_else(|| missing(*token))?;
                    p.tokens.retain(|t| t.id() != *token);
                }
                Edit::AddToken { token } => {
                    let pos = p.tokens.partition_point(|t| t.id() < token.id());
                    p.tokens.insert(pos, (**token).clone());
                }
                Edit::SetInEdges { token, after, .. } => {
                    let t = p.token_mut(*token).ok_or_else(|| missing(*token))?;
                    let mut edges = after.clone();
                    if edges.is_empty() {
                        return Err(Error::Input(format!("empty edge list for token {token}")));
                    }
                    t.head = edges.remove(0);
                    t.extra_heads = edges;
                }
                Edit::SetLemma { token, after, .. } => {
                    p.token_mut(*token).ok_or_else(|| missing(*token))?.lemma = after.clone()
                }
                Edit::SetSurface { token, after, .. } => {
                    p.token_mut(*token).ok_or_else(|| missing(*token))?.surface = after.clone()
                }
                Edit::SetNeTag { token, after, .. } => {
                    p.token_mut(*token).ok_or_else(|| missing(*token))?.ne_tag = after.clone()
                }
                Edit::SetTags { token, upos, xpos } => {
                    let t = p.token_mut(*token).ok_or_else(|| missing(*token))?;
                    t.upos = upos.clone();
                    t.xpos = xpos.clone();
                }
                Edit::SetCoordinations { after, .. } => p.coordinations = after.clone(),
                Edit::SetRootIndex { after, .. } => p.root_index = *after,
            }
        }
        p.sync_out_edges();
    }
    Ok(p)
}
