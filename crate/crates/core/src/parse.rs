//! Dependency-graph data model.
//!
//! A [`DependencyParse`] starts life as a tree (one incoming edge per token,
//! one root). Paraparsing may turn it into a rooted DAG: a token modified by
//! an adnominal clause, or shared between coordinated elements, picks up
//! extra incoming edges, and each adnominal clause head becomes a root of its
//! own. The primary incoming edge stays in [`Token::head`]; any further ones
//! live in [`Token::extra_heads`]. Outgoing edges are always derived from the
//! incoming ones via [`DependencyParse::sync_out_edges`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Token id of the virtual root. Never materialized as a [`Token`].
pub const VIRTUAL_ROOT: u32 = 0;

pub const ROOT_LABEL: &str = "root";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TokenIndex {
    pub sentence_id: u32,
    pub parse_id: u32,
    pub token_id: u32,
}

/// A labeled edge seen from one of its endpoints. Whether it is incoming or
/// outgoing is given by where it is stored on the [`Token`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub target: u32,
    pub label: String,
}

impl Edge {
    pub fn new(target: u32, label: impl Into<String>) -> Self {
        Edge { target, label: label.into() }
    }

    pub fn root() -> Self {
        Edge::new(VIRTUAL_ROOT, ROOT_LABEL)
    }

    pub fn is_root(&self) -> bool {
        self.target == VIRTUAL_ROOT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Outgoing,
    Incoming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validation {
    Accepted,
    Rejected,
    #[default]
    Unchecked,
}

impl Validation {
    pub fn as_str(self) -> &'static str {
        match self {
            Validation::Accepted => "accepted",
            Validation::Rejected => "rejected",
            Validation::Unchecked => "unchecked",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "accepted" => Some(Validation::Accepted),
            "rejected" => Some(Validation::Rejected),
            "unchecked" => Some(Validation::Unchecked),
            _ => None,
        }
    }
}

/// A ranked tag alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredTag {
    pub tag: String,
    pub confidence: f64,
}

impl ScoredTag {
    pub fn new(tag: impl Into<String>, confidence: f64) -> Self {
        ScoredTag { tag: tag.into(), confidence }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    pub index: TokenIndex,
    pub surface: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    /// Primary incoming edge; label `root` iff it comes from the virtual root.
    pub head: Edge,
    /// Additional incoming edges introduced by graph rewrites.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_heads: Vec<Edge>,
    pub out_edges: Vec<Edge>,
    pub ne_tag: String,
    pub upos_confidence: f64,
    pub xpos_confidence: f64,
    /// Full ranked UPOS distribution, best first. Empty when the source
    /// supplied only the top tag.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub upos_kbest: Vec<ScoredTag>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xpos_kbest: Vec<ScoredTag>,
    pub validation: Validation,
}

impl Token {
    pub fn id(&self) -> u32 {
        self.index.token_id
    }

    pub fn is_root(&self) -> bool {
        self.head.is_root()
    }

    /// All incoming edges, primary first.
    pub fn in_edges(&self) -> impl Iterator<Item = &Edge> {
        std::iter::once(&self.head).chain(self.extra_heads.iter())
    }

    pub fn has_out(&self, label: &str) -> bool {
        self.out_edges.iter().any(|e| e.label == label)
    }

    pub fn out_targets<'a>(&'a self, label: &'a str) -> impl Iterator<Item = u32> + 'a {
        self.out_edges.iter().filter(move |e| e.label == label).map(|e| e.target)
    }

    pub fn has_in(&self, label: &str) -> bool {
        self.in_edges().any(|e| e.label == label)
    }
}

/// Connective joining the elements of one coordination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    And,
    Or,
}

impl Connective {
    pub fn from_lemma(lemma: &str) -> Option<Self> {
        match lemma {
            "and" => Some(Connective::And),
            "or" => Some(Connective::Or),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Connective::And => "and",
            Connective::Or => "or",
        }
    }
}

/// One coordination after equalization: its elements in sentence order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinationGroup {
    pub members: Vec<u32>,
    pub connective: Connective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependencyParse {
    /// Sorted by token id. Ids may have gaps after rewrites delete tokens.
    pub tokens: Vec<Token>,
    pub confidence: f64,
    pub root_index: u32,
    /// Coordination groups recorded by coordination equalization.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinations: Vec<CoordinationGroup>,
}

impl DependencyParse {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn sentence_id(&self) -> u32 {
        self.tokens.first().map_or(0, |t| t.index.sentence_id)
    }

    pub fn parse_id(&self) -> u32 {
        self.tokens.first().map_or(0, |t| t.index.parse_id)
    }

    pub fn position(&self, id: u32) -> Option<usize> {
        self.tokens.binary_search_by_key(&id, |t| t.id()).ok()
    }

    pub fn token(&self, id: u32) -> Option<&Token> {
        self.position(id).map(|i| &self.tokens[i])
    }

    pub fn token_mut(&mut self, id: u32) -> Option<&mut Token> {
        self.position(id).map(move |i| &mut self.tokens[i])
    }

    pub fn contains(&self, id: u32) -> bool {
        self.position(id).is_some()
    }

    pub fn root(&self) -> Option<&Token> {
        self.token(self.root_index)
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.tokens.iter().map(|t| t.id())
    }

    /// Tokens whose primary incoming edge comes from the virtual root, in
    /// sentence order.
    pub fn roots(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_root())
    }

    /// Rebuilds every token's `out_edges` from the incoming edges, sorted by
    /// target then label.
    pub fn sync_out_edges(&mut self) {
        let mut outs: BTreeMap<u32, Vec<Edge>> = BTreeMap::new();
        for t in &self.tokens {
            for e in t.in_edges() {
                if !e.is_root() {
                    outs.entry(e.target).or_default().push(Edge::new(t.id(), e.label.clone()));
                }
            }
        }
        for t in &mut self.tokens {
            let mut edges = outs.remove(&t.id()).unwrap_or_default();
            edges.sort();
            t.out_edges = edges;
        }
    }

    /// Tree property, edge duality and id uniqueness. Used on ingested
    /// parses; rewritten graphs are allowed to be DAGs.
    pub fn validate_tree(&self) -> Result<()> {
        let sid = self.sentence_id();
        let fail = |msg: String| Err(Error::Structure { sentence: sid, message: msg });
        if self.tokens.is_empty() {
            return fail("empty parse".into());
        }
        if self.tokens.windows(2).any(|w| w[0].id() >= w[1].id()) {
            return fail("token ids not strictly increasing".into());
        }
        let roots: Vec<u32> = self.roots().map(|t| t.id()).collect();
        if roots.len() != 1 {
            return fail(format!("expected exactly one root, found {}", roots.len()));
        }
        if roots[0] != self.root_index {
            return fail(format!("root_index {} is not the root token {}", self.root_index, roots[0]));
        }
        for t in &self.tokens {
            if !t.extra_heads.is_empty() {
                return fail(format!("token {} has more than one incoming edge", t.id()));
            }
            if t.head.label.is_empty() {
                return fail(format!("token {} has an empty dependency label", t.id()));
            }
            if t.head.is_root() != (t.head.label == ROOT_LABEL) {
                return fail(format!("token {}: label root must go with head 0", t.id()));
            }
            if !t.head.is_root() && !self.contains(t.head.target) {
                return fail(format!("token {} points to missing head {}", t.id(), t.head.target));
            }
        }
        for t in &self.tokens {
            let mut expected: Vec<Edge> = self
                .tokens
                .iter()
                .filter(|u| u.head.target == t.id())
                .map(|u| Edge::new(u.id(), u.head.label.clone()))
                .collect();
            expected.sort();
            let mut actual = t.out_edges.clone();
            actual.sort();
            if expected != actual {
                return fail(format!("out-edges of token {} disagree with head edges", t.id()));
            }
        }
        // every token must reach the root without revisiting
        for t in &self.tokens {
            let mut seen = BTreeSet::new();
            let mut cur = t;
            while !cur.is_root() {
                if !seen.insert(cur.id()) {
                    return fail(format!("cycle through token {}", cur.id()));
                }
                cur = self.token(cur.head.target).expect("head checked above");
            }
        }
        Ok(())
    }

    /// Tokens reachable from `start` along outgoing edges, including `start`.
    pub fn reachable_from(&self, start: u32) -> BTreeSet<u32> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if let Some(t) = self.token(id) {
                stack.extend(t.out_edges.iter().map(|e| e.target));
            }
        }
        seen
    }

    /// Copy restricted to `keep`. Incoming edges from dropped tokens are
    /// discarded; a token that loses all of them becomes a root.
    pub fn restrict(&self, keep: &BTreeSet<u32>) -> DependencyParse {
        let mut tokens: Vec<Token> = Vec::with_capacity(keep.len());
        for t in self.tokens.iter().filter(|t| keep.contains(&t.id())) {
            let mut t = t.clone();
            let mut ins: Vec<Edge> =
                t.in_edges().filter(|e| e.is_root() || keep.contains(&e.target)).cloned().collect();
            if ins.is_empty() {
                ins.push(Edge::root());
            }
            t.head = ins.remove(0);
            t.extra_heads = ins;
            tokens.push(t);
        }
        let mut parse = DependencyParse {
            tokens,
            confidence: self.confidence,
            root_index: self.root_index,
            coordinations: self
                .coordinations
                .iter()
                .filter_map(|g| {
                    let members: Vec<u32> = g.members.iter().copied().filter(|m| keep.contains(m)).collect();
                    (members.len() > 1).then_some(CoordinationGroup { members, connective: g.connective })
                })
                .collect(),
        };
        if !keep.contains(&parse.root_index) {
            let root = parse.roots().next().map_or(VIRTUAL_ROOT, |t| t.id());
            parse.root_index = root;
        }
        parse.sync_out_edges();
        parse
    }

    /// Replaces all incoming edges of `id`; the first becomes the primary
    /// head. An empty list makes the token a root.
    pub fn set_in_edges(&mut self, id: u32, mut edges: Vec<Edge>) {
        let mut seen = Vec::new();
        edges.retain(|e| {
            let fresh = !seen.contains(e);
            seen.push(e.clone());
            fresh
        });
        if edges.is_empty() {
            edges.push(Edge::root());
        }
        if let Some(t) = self.token_mut(id) {
            t.head = edges.remove(0);
            t.extra_heads = edges;
        }
        self.sync_out_edges();
    }

    /// Incoming edges of `id`, primary first.
    pub fn in_edges_of(&self, id: u32) -> Vec<Edge> {
        self.token(id).map(|t| t.in_edges().cloned().collect()).unwrap_or_default()
    }

    /// Relabels the edge `from -> to` carrying `old`.
    pub fn relabel(&mut self, from: u32, to: u32, old: &str, new: &str) {
        let edges = self
            .in_edges_of(to)
            .into_iter()
            .map(|e| if e.target == from && e.label == old { Edge::new(from, new) } else { e })
            .collect();
        self.set_in_edges(to, edges);
    }

    /// Deletes a token along with every edge touching it. Dependents left
    /// without a head become roots.
    pub fn remove_token(&mut self, id: u32) {
        self.tokens.retain(|t| t.id() != id);
        for t in &mut self.tokens {
            let mut ins: Vec<Edge> = t.in_edges().filter(|e| e.target != id).cloned().collect();
            if ins.len() != t.extra_heads.len() + 1 {
                if ins.is_empty() {
                    ins.push(Edge::root());
                }
                t.head = ins.remove(0);
                t.extra_heads = ins;
            }
        }
        for g in &mut self.coordinations {
            g.members.retain(|&m| m != id);
        }
        self.sync_out_edges();
    }

    /// Moves every dependent of `from` under `to`, keeping labels.
    pub fn reattach_dependents(&mut self, from: u32, to: u32) {
        let children: Vec<u32> =
            self.token(from).map(|t| t.out_edges.iter().map(|e| e.target).collect()).unwrap_or_default();
        for c in children {
            let edges = self
                .in_edges_of(c)
                .into_iter()
                .map(|e| if e.target == from { Edge::new(to, e.label) } else { e })
                .collect();
            self.set_in_edges(c, edges);
        }
    }

    /// Copy with every token's validation tag set.
    pub fn with_validation(&self, v: Validation) -> DependencyParse {
        let mut p = self.clone();
        for t in &mut p.tokens {
            t.validation = v;
        }
        p
    }

    pub fn with_parse_id(mut self, parse_id: u32) -> DependencyParse {
        for t in &mut self.tokens {
            t.index.parse_id = parse_id;
        }
        self
    }
}

impl fmt::Display for DependencyParse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tokens {
            write!(f, "{}:{}/{}", t.id(), t.lemma, t.upos)?;
            for e in t.in_edges() {
                write!(f, " <-{}-{}", e.label, e.target)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Confidence-ranked alternative parses of one sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseSet {
    /// Identifier from the source (`sent_id`), without the rank suffix.
    pub sent_id: String,
    pub sentence_text: String,
    pub parses: Vec<DependencyParse>,
}

impl ParseSet {
    pub fn best(&self) -> &DependencyParse {
        &self.parses[0]
    }

    pub fn validate(&self) -> Result<()> {
        if self.parses.is_empty() {
            return Err(Error::Input(format!("sentence {} has no parses", self.sent_id)));
        }
        if self.parses.windows(2).any(|w| w[0].confidence < w[1].confidence) {
            return Err(Error::Input(format!(
                "parses of sentence {} are not ordered by decreasing confidence",
                self.sent_id
            )));
        }
        for p in &self.parses {
            p.validate_tree()?;
        }
        Ok(())
    }
}

/// Label with any `:subtype` removed.
pub fn base_label(label: &str) -> &str {
    label.split(':').next().unwrap_or(label)
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Builds a tree parse from `(surface, lemma, upos, xpos, head, label)`
    /// rows. Token ids are 1-based row positions.
    pub fn build(rows: &[(&str, &str, &str, &str, u32, &str)]) -> DependencyParse {
        let tokens = rows
            .iter()
            .enumerate()
            .map(|(i, &(surface, lemma, upos, xpos, head, label))| Token {
                index: TokenIndex { sentence_id: 1, parse_id: 1, token_id: i as u32 + 1 },
                surface: surface.into(),
                lemma: lemma.into(),
                upos: upos.into(),
                xpos: xpos.into(),
                head: Edge::new(head, label),
                extra_heads: vec![],
                out_edges: vec![],
                ne_tag: "o".into(),
                upos_confidence: 1.0,
                xpos_confidence: 1.0,
                upos_kbest: vec![],
                xpos_kbest: vec![],
                validation: Validation::Unchecked,
            })
            .collect();
        let mut parse = DependencyParse { tokens, confidence: 1.0, root_index: 0, coordinations: vec![] };
        let root = parse.roots().next().map_or(0, |t| t.id());
        parse.root_index = root;
        parse.sync_out_edges();
        parse
    }
}

#[cfg(test)]
mod tests {
    use super::testing::build;
    use super::*;

    fn mary_buys_a_car() -> DependencyParse {
        build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("buys", "buy", "VERB", "VBZ", 0, "root"),
            ("a", "a", "DET", "DT", 4, "det"),
            ("car", "car", "NOUN", "NN", 2, "obj"),
        ])
    }

    #[test]
    fn tree_checks_pass() {
        let p = mary_buys_a_car();
        p.validate_tree().unwrap();
        assert_eq!(p.root_index, 2);
        assert_eq!(p.token(2).unwrap().out_edges, vec![Edge::new(1, "nsubj"), Edge::new(4, "obj")]);
    }

    #[test]
    fn two_roots_rejected() {
        let mut p = mary_buys_a_car();
        p.tokens[3].head = Edge::root();
        p.sync_out_edges();
        assert!(p.validate_tree().is_err());
    }

    #[test]
    fn cycle_rejected() {
        let mut p =
            build(&[("a", "a", "X", "X", 2, "dep"), ("b", "b", "X", "X", 1, "dep"), ("c", "c", "X", "X", 0, "root")]);
        p.root_index = 3;
        let err = p.validate_tree().unwrap_err().to_string();
        assert!(err.contains("cycle"), "{err}");
    }

    #[test]
    fn restrict_promotes_orphans() {
        let p = mary_buys_a_car();
        let keep: BTreeSet<u32> = [3, 4].into_iter().collect();
        let r = p.restrict(&keep);
        assert_eq!(r.root_index, 4);
        assert!(r.token(4).unwrap().is_root());
        assert_eq!(r.token(4).unwrap().out_edges, vec![Edge::new(3, "det")]);
    }

    #[test]
    fn base_label_strips_subtype() {
        assert_eq!(base_label("nsubj:pass"), "nsubj");
        assert_eq!(base_label("obj"), "obj");
    }
}
