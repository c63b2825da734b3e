//! `token/9` logical encoding of a parse.
//!
//! ```text
//! token(index(S,T,P),LEMMA,[edge(index(S,T2),LBL),...],edge(index(S,H),HLBL),UPOS,XPOS,index(S,R),NE,VTAG).
//! ```
//!
//! The edge list holds outgoing edges in ascending target order followed by
//! the incoming edges, whose labels are written character-reversed
//! (`nsubj` becomes `jbusn`). The root edge is not repeated in the list.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::parse::{DependencyParse, Edge, Token, TokenIndex, Validation};
use crate::term::{atom, parse_clauses, Term};

/// Character-reversed label used for incoming edges in the edge list.
pub fn reversed_label(label: &str) -> String {
    label.chars().rev().collect()
}

fn edge_term(out: &mut String, sentence: u32, e: &Edge, label: &str) {
    let _ = write!(out, "edge(index({},{}),{})", sentence, e.target, atom(label));
}

/// One `token/9` fact for `token`.
pub fn token_fact(parse: &DependencyParse, token: &Token) -> String {
    let s = token.index.sentence_id;
    let mut out = String::new();
    let _ =
        write!(out, "token(index({},{},{}),{},[", s, token.index.token_id, token.index.parse_id, atom(&token.lemma));
    let mut first = true;
    let mut sep = |out: &mut String| {
        if !first {
            out.push(',');
        }
        first = false;
    };
    for e in &token.out_edges {
        sep(&mut out);
        edge_term(&mut out, s, e, &e.label);
    }
    let mut extras: Vec<&Edge> = token.extra_heads.iter().collect();
    extras.sort();
    let primary = (!token.head.is_root()).then_some(&token.head);
    for e in primary.into_iter().chain(extras) {
        sep(&mut out);
        edge_term(&mut out, s, e, &reversed_label(&e.label));
    }
    out.push_str("],");
    edge_term(&mut out, s, &token.head, &token.head.label);
    let _ = write!(
        out,
        ",{},{},index({},{}),{},{}).",
        atom(&token.upos.to_lowercase()),
        atom(&token.xpos.to_lowercase()),
        s,
        parse.root_index,
        atom(&token.ne_tag),
        token.validation.as_str()
    );
    out
}

/// Emits one fact per token, one per line.
pub fn export_token_facts(parse: &DependencyParse) -> String {
    let mut out = String::new();
    for t in &parse.tokens {
        out.push_str(&token_fact(parse, t));
        out.push('\n');
    }
    out
}

/// The fields a `token/9` fact carries.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenFact {
    pub index: TokenIndex,
    pub lemma: String,
    /// Edge list as written, incoming labels still reversed.
    pub edges: Vec<Edge>,
    pub head: Edge,
    pub upos: String,
    pub xpos: String,
    pub root_index: u32,
    pub ne_tag: String,
    pub validation: Validation,
}

fn bad(line: usize, what: &str) -> Error {
    Error::Syntax { line, message: format!("malformed token fact: {what}") }
}

fn index2(t: &Term, line: usize) -> Result<(u32, u32)> {
    let args = t.as_compound("index", 2).ok_or_else(|| bad(line, "index/2"))?;
    let a = args[0].as_int().ok_or_else(|| bad(line, "index sentence"))?;
    let b = args[1].as_int().ok_or_else(|| bad(line, "index token"))?;
    Ok((a as u32, b as u32))
}

fn edge(t: &Term, line: usize) -> Result<Edge> {
    let args = t.as_compound("edge", 2).ok_or_else(|| bad(line, "edge/2"))?;
    let (_, target) = index2(&args[0], line)?;
    let label = args[1].as_text().ok_or_else(|| bad(line, "edge label"))?;
    Ok(Edge::new(target, label))
}

/// Reads `token/9` facts back.
pub fn read_token_facts(src: &str) -> Result<Vec<TokenFact>> {
    parse_clauses(src)?
        .into_iter()
        .map(|(line, term)| {
            let a = term.as_compound("token", 9).ok_or_else(|| bad(line, "token/9"))?;
            let idx = a[0].as_compound("index", 3).ok_or_else(|| bad(line, "index/3"))?;
            let num = |t: &Term| t.as_int().map(|i| i as u32).ok_or_else(|| bad(line, "index field"));
            let index = TokenIndex { sentence_id: num(&idx[0])?, token_id: num(&idx[1])?, parse_id: num(&idx[2])? };
            let edges = a[2]
                .as_list()
                .ok_or_else(|| bad(line, "edge list"))?
                .iter()
                .map(|e| edge(e, line))
                .collect::<Result<Vec<_>>>()?;
            Ok(TokenFact {
                index,
                lemma: a[1].as_text().ok_or_else(|| bad(line, "lemma"))?,
                edges,
                head: edge(&a[3], line)?,
                upos: a[4].as_text().ok_or_else(|| bad(line, "upos"))?,
                xpos: a[5].as_text().ok_or_else(|| bad(line, "xpos"))?,
                root_index: index2(&a[6], line)?.1,
                ne_tag: a[7].as_text().ok_or_else(|| bad(line, "ne tag"))?,
                validation: a[8].as_atom().and_then(Validation::parse).ok_or_else(|| bad(line, "validation tag"))?,
            })
        })
        .collect()
}
