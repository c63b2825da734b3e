//! Named-entity compaction.
//!
//! Multi-token names (`Thomas Ian Griffith` as a PROPN head with `flat`
//! dependents) and bracketed placeholders (`[ Frank De Felitta ]`) are merged
//! into a single token that keeps the head's id and tags.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::parse::{DependencyParse, Edge};

const NAME_LABELS: [&str; 2] = ["flat", "compound"];

/// A run of tokens to merge, by sentence position, with the surviving head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub head: u32,
    /// Positions whose text forms the merged lemma (brackets excluded).
    pub text: Vec<usize>,
}

impl EntitySpan {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn is_name_edge(label: &str) -> bool {
    NAME_LABELS.contains(&label)
}

/// Bracketed spans `[ ... ]`, innermost pairing, non-overlapping.
fn bracket_spans(parse: &DependencyParse) -> Vec<EntitySpan> {
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    for (i, t) in parse.tokens.iter().enumerate() {
        match t.surface.as_str() {
            "[" => open = Some(i),
            "]" => {
                if let Some(start) = open.take() {
                    if i > start + 1 {
                        let inner: BTreeSet<u32> = parse.tokens[start..=i].iter().map(|t| t.id()).collect();
                        // the head is the inner token attached outside the span
                        let head = parse.tokens[start + 1..i]
                            .iter()
                            .find(|t| !inner.contains(&t.head.target))
                            .or_else(|| parse.tokens.get(start + 1))
                            .map(|t| t.id())
                            .expect("span has inner tokens");
                        spans.push(EntitySpan { start, end: i, head, text: (start + 1..i).collect() });
                    }
                }
            }
            _ => {}
        }
    }
    spans
}

/// Largest contiguous, parent-closed run of `head`'s flat/compound closure
/// that contains `head`.
fn name_block(parse: &DependencyParse, head_pos: usize, blocked: &BTreeSet<usize>) -> (usize, usize) {
    let head = parse.tokens[head_pos].id();
    let mut members: BTreeSet<usize> = BTreeSet::new();
    let mut stack = vec![head_pos];
    while let Some(p) = stack.pop() {
        if blocked.contains(&p) || !members.insert(p) {
            continue;
        }
        for e in &parse.tokens[p].out_edges {
            if is_name_edge(&e.label) {
                let child = parse.position(e.target).expect("edge target exists");
                if parse.tokens[child].head.target == parse.tokens[p].id() {
                    stack.push(child);
                }
            }
        }
    }
    loop {
        let mut start = head_pos;
        while start > 0 && members.contains(&(start - 1)) {
            start -= 1;
        }
        let mut end = head_pos;
        while members.contains(&(end + 1)) {
            end += 1;
        }
        let ids: BTreeSet<u32> = parse.tokens[start..=end].iter().map(|t| t.id()).collect();
        let closed: BTreeSet<usize> = (start..=end)
            .filter(|&p| parse.tokens[p].id() == head || ids.contains(&parse.tokens[p].head.target))
            .collect();
        if closed.len() == end - start + 1 {
            return (start, end);
        }
        members = closed;
    }
}

/// All spans that [`compact_entities`] would merge, in sentence order.
pub fn entity_spans(parse: &DependencyParse) -> Vec<EntitySpan> {
    let mut spans = bracket_spans(parse);
    let blocked: BTreeSet<usize> = spans.iter().flat_map(|s| s.start..=s.end).collect();
    let mut blocks: Vec<(usize, usize, u32)> = Vec::new();
    for (pos, t) in parse.tokens.iter().enumerate() {
        if t.upos != "PROPN" || blocked.contains(&pos) {
            continue;
        }
        let (start, end) = name_block(parse, pos, &blocked);
        if end > start {
            blocks.push((start, end, t.id()));
        }
    }
    // blocks nest or are disjoint; keep the outermost
    for &(start, end, head) in &blocks {
        let inside_other =
            blocks.iter().any(|&(s, e, h)| h != head && s <= start && end <= e && (s, e) != (start, end));
        if !inside_other {
            spans.push(EntitySpan { start, end, head, text: (start..=end).collect() });
        }
    }
    spans.sort_by_key(|s| s.start);
    spans
}

/// Merges every entity span into its head token. Lemma and surface become
/// the joined surface text (lemma lowercased); the NE tag comes from the
/// head, or the first tagged member when the head has none. Edges incident
/// to merged-away tokens move to the head.
pub fn compact_entities(parse: &DependencyParse) -> Result<DependencyParse> {
    let spans = entity_spans(parse);
    if spans.is_empty() {
        return Ok(parse.clone());
    }
    let mut out = parse.clone();
    for span in &spans {
        let members: Vec<u32> = parse.tokens[span.start..=span.end].iter().map(|t| t.id()).collect();
        let surface = span.text.iter().map(|&p| parse.tokens[p].surface.as_str()).collect::<Vec<_>>().join(" ");
        let ne = {
            let h = parse.token(span.head).expect("head in parse");
            if h.ne_tag != "o" {
                h.ne_tag.clone()
            } else {
                span.text
                    .iter()
                    .map(|&p| &parse.tokens[p].ne_tag)
                    .find(|t| *t != "o")
                    .cloned()
                    .unwrap_or_else(|| "o".into())
            }
        };
        let head = out.token_mut(span.head).expect("head in parse");
        head.lemma = surface.to_lowercase();
        head.surface = surface;
        head.ne_tag = ne;
        // retarget edges pointing at merged-away members
        for t in &mut out.tokens {
            if members.contains(&t.id()) {
                continue;
            }
            for e in std::iter::once(&mut t.head).chain(t.extra_heads.iter_mut()) {
                if members.contains(&e.target) {
                    e.target = span.head;
                }
            }
            dedup_in_edges(&mut t.head, &mut t.extra_heads);
        }
        out.tokens.retain(|t| t.id() == span.head || !members.contains(&t.id()));
    }
    out.sync_out_edges();
    if let Some(cycle) = find_cycle(&out) {
        return Err(Error::Structure {
            sentence: out.sentence_id(),
            message: format!("entity merge creates a cycle through token {cycle}"),
        });
    }
    Ok(out)
}

fn dedup_in_edges(head: &mut Edge, extras: &mut Vec<Edge>) {
    let mut seen = vec![head.clone()];
    extras.retain(|e| {
        if seen.contains(e) {
            false
        } else {
            seen.push(e.clone());
            true
        }
    });
}

/// Some token on a directed cycle, if the graph has one.
pub(crate) fn find_cycle(parse: &DependencyParse) -> Option<u32> {
    // Kahn's algorithm over incoming-edge counts
    let mut indegree: std::collections::BTreeMap<u32, usize> =
        parse.tokens.iter().map(|t| (t.id(), t.in_edges().filter(|e| !e.is_root()).count())).collect();
    let mut ready: Vec<u32> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&id, _)| id).collect();
    while let Some(id) = ready.pop() {
        indegree.remove(&id);
        for e in &parse.token(id).expect("known id").out_edges {
            if let Some(d) = indegree.get_mut(&e.target) {
                *d -= 1;
                if *d == 0 {
                    ready.push(e.target);
                }
            }
        }
    }
    indegree.keys().next().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::testing::build;

    fn griffith() -> DependencyParse {
        build(&[
            ("movies", "movie", "NOUN", "NNS", 0, "root"),
            ("written", "write", "VERB", "VBN", 1, "acl"),
            ("by", "by", "ADP", "IN", 4, "case"),
            ("Thomas", "thomas", "PROPN", "NNP", 2, "obl"),
            ("Ian", "ian", "PROPN", "NNP", 4, "flat"),
            ("Griffith", "griffith", "PROPN", "NNP", 4, "flat"),
        ])
    }

    #[test]
    fn merges_flat_name() {
        let out = compact_entities(&griffith()).unwrap();
        assert_eq!(out.len(), 4);
        let t = out.token(4).unwrap();
        assert_eq!(t.lemma, "thomas ian griffith");
        assert_eq!(t.surface, "Thomas Ian Griffith");
        assert_eq!(t.head, Edge::new(2, "obl"));
        assert_eq!(out.token(4).unwrap().out_edges, vec![Edge::new(3, "case")]);
    }

    #[test]
    fn merges_brackets() {
        let p = build(&[
            ("written", "write", "VERB", "VBN", 0, "root"),
            ("by", "by", "ADP", "IN", 4, "case"),
            ("[", "[", "PUNCT", "-LRB-", 4, "punct"),
            ("Frank", "frank", "PROPN", "NNP", 1, "obl"),
            ("De", "de", "PROPN", "NNP", 4, "flat"),
            ("Felitta", "felitta", "PROPN", "NNP", 4, "flat"),
            ("]", "]", "PUNCT", "-RRB-", 4, "punct"),
        ]);
        let out = compact_entities(&p).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out.token(4).unwrap().lemma, "frank de felitta");
        assert_eq!(out.token(4).unwrap().out_edges, vec![Edge::new(2, "case")]);
    }

    #[test]
    fn no_op_without_names() {
        let p = build(&[("Cars", "car", "NOUN", "NNS", 2, "nsubj"), ("move", "move", "VERB", "VBP", 0, "root")]);
        assert_eq!(compact_entities(&p).unwrap(), p);
    }

    #[test]
    fn compound_with_propn_head() {
        let p = build(&[
            ("Laing", "laing", "PROPN", "NNP", 2, "compound"),
            ("Homes", "homes", "PROPN", "NNPS", 3, "nsubj"),
            ("builds", "build", "VERB", "VBZ", 0, "root"),
        ]);
        let out = compact_entities(&p).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.token(2).unwrap().lemma, "laing homes");
        assert_eq!(out.token(3).unwrap().out_edges, vec![Edge::new(2, "nsubj")]);
    }

    #[test]
    fn idempotent() {
        let once = compact_entities(&griffith()).unwrap();
        assert_eq!(compact_entities(&once).unwrap(), once);
    }
}
