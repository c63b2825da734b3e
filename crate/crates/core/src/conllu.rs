//! CoNLL-U ingestion and export.
//!
//! Extensions carried in the MISC column:
//!
//! * `UposConf=0.62`, `XposConf=0.55` confidence of the chosen tags
//! * `UposK=NOUN:0.62,VERB:0.35` and `XposK=NNS:0.55,VBZ:0.40` ranked tag
//!   distributions
//! * `Ner=s_person` named-entity class
//!
//! Alternative parses of one sentence share a `sent_id` base and differ in a
//! `.<rank>` suffix (`# sent_id = 7.2`). A `# confidence = 0.81` comment sets
//! the parse confidence. Missing confidences default to 1.0 and missing NE
//! tags to `o`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::parse::{DependencyParse, Edge, ParseSet, ScoredTag, Token, TokenIndex, Validation};

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    /// Skip structural validation (tree property, rank order).
    pub skip_validation: bool,
}

struct Block {
    line: usize,
    sent_id: Option<String>,
    text: Option<String>,
    confidence: f64,
    rows: Vec<(usize, Vec<String>)>,
}

/// Reads every sentence of a CoNLL-U stream, grouping ranked alternatives.
pub fn ingest_conllu(source: &str, options: &IngestOptions) -> Result<Vec<ParseSet>> {
    let blocks = split_blocks(source)?;

    // group by sent_id base, keeping first-appearance order
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<(u32, Block)>> = HashMap::new();
    for (n, block) in blocks.into_iter().enumerate() {
        let (base, rank) = match &block.sent_id {
            Some(id) => split_rank(id),
            None => ((n + 1).to_string(), None),
        };
        let entry = groups.entry(base.clone()).or_insert_with(|| {
            order.push(base.clone());
            Vec::new()
        });
        let rank = rank.unwrap_or(entry.len() as u32 + 1);
        if entry.iter().any(|(r, _)| *r == rank) {
            return Err(Error::Syntax {
                line: block.line,
                message: format!("duplicate parse rank {rank} for sentence {base}"),
            });
        }
        entry.push((rank, block));
    }

    let mut sets = Vec::with_capacity(order.len());
    for (ordinal, base) in order.into_iter().enumerate() {
        let mut group = groups.remove(&base).expect("grouped above");
        group.sort_by_key(|(rank, _)| *rank);
        let sentence_id = base.parse::<u32>().ok().filter(|&i| i > 0).unwrap_or(ordinal as u32 + 1);
        let mut text = None;
        let mut parses = Vec::with_capacity(group.len());
        for (rank, block) in group {
            if text.is_none() {
                text = block.text.clone();
            }
            parses.push(build_parse(&block, sentence_id, rank)?);
        }
        let sentence_text =
            text.unwrap_or_else(|| parses[0].tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "));
        let set = ParseSet { sent_id: base, sentence_text, parses };
        if !options.skip_validation {
            set.validate()?;
        }
        sets.push(set);
    }
    Ok(sets)
}

fn split_rank(id: &str) -> (String, Option<u32>) {
    match id.rsplit_once('.') {
        Some((base, rank)) if !base.is_empty() => match rank.parse::<u32>() {
            Ok(r) if r > 0 => (base.to_string(), Some(r)),
            _ => (id.to_string(), None),
        },
        _ => (id.to_string(), None),
    }
}

fn split_blocks(source: &str) -> Result<Vec<Block>> {
    let mut blocks = Vec::new();
    let mut cur: Option<Block> = None;
    for (n, raw) in source.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(b) = cur.take() {
                if !b.rows.is_empty() {
                    blocks.push(b);
                }
            }
            continue;
        }
        let block = cur.get_or_insert_with(|| Block {
            line: line_no,
            sent_id: None,
            text: None,
            confidence: 1.0,
            rows: Vec::new(),
        });
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let value = value.trim().to_string();
                match key.trim() {
                    "sent_id" => block.sent_id = Some(value),
                    "text" => block.text = Some(value),
                    "confidence" => {
                        block.confidence = value.parse().map_err(|_| Error::Syntax {
                            line: line_no,
                            message: format!("bad confidence `{value}`"),
                        })?
                    }
                    _ => {}
                }
            }
            continue;
        }
        let cols: Vec<String> = line.split('\t').map(str::to_string).collect();
        if cols.len() != 10 {
            return Err(Error::Syntax {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        // multiword ranges and empty nodes carry no basic-tree information
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        block.rows.push((line_no, cols));
    }
    if let Some(b) = cur.take() {
        if !b.rows.is_empty() {
            blocks.push(b);
        }
    }
    Ok(blocks)
}

fn parse_conf(value: &str, line: usize) -> Result<f64> {
    let c: f64 = value.parse().map_err(|_| Error::Syntax { line, message: format!("bad confidence `{value}`") })?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::Syntax { line, message: format!("confidence {c} outside [0,1]") });
    }
    Ok(c)
}

fn parse_kbest(value: &str, line: usize) -> Result<Vec<ScoredTag>> {
    value
        .split(',')
        .map(|item| {
            let (tag, conf) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::Syntax { line, message: format!("bad k-best entry `{item}`") })?;
            Ok(ScoredTag::new(tag, parse_conf(conf, line)?))
        })
        .collect()
}

fn build_parse(block: &Block, sentence_id: u32, parse_id: u32) -> Result<DependencyParse> {
    let mut tokens = Vec::with_capacity(block.rows.len());
    for (line, cols) in &block.rows {
        let line = *line;
        let syntax = |message: String| Error::Syntax { line, message };
        let token_id: u32 = cols[0].parse().map_err(|_| syntax(format!("bad token id `{}`", cols[0])))?;
        if token_id == 0 {
            return Err(syntax("token id 0 is reserved for the virtual root".into()));
        }
        let head: u32 = cols[6].parse().map_err(|_| syntax(format!("bad head `{}`", cols[6])))?;
        let label = cols[7].clone();
        if label.is_empty() || label == "_" {
            return Err(syntax("missing dependency label".into()));
        }
        let mut token = Token {
            index: TokenIndex { sentence_id, parse_id, token_id },
            surface: cols[1].clone(),
            lemma: cols[2].to_lowercase(),
            upos: cols[3].clone(),
            xpos: if cols[4] == "_" { cols[3].clone() } else { cols[4].clone() },
            head: Edge::new(head, label),
            extra_heads: Vec::new(),
            out_edges: Vec::new(),
            ne_tag: "o".into(),
            upos_confidence: 1.0,
            xpos_confidence: 1.0,
            upos_kbest: Vec::new(),
            xpos_kbest: Vec::new(),
            validation: Validation::Unchecked,
        };
        let mut upos_conf = None;
        let mut xpos_conf = None;
        if cols[9] != "_" {
            for item in cols[9].split('|') {
                let Some((key, value)) = item.split_once('=') else { continue };
                match key {
                    "UposConf" => upos_conf = Some(parse_conf(value, line)?),
                    "XposConf" => xpos_conf = Some(parse_conf(value, line)?),
                    "UposK" => token.upos_kbest = parse_kbest(value, line)?,
                    "XposK" => token.xpos_kbest = parse_kbest(value, line)?,
                    "Ner" => token.ne_tag = value.to_lowercase(),
                    _ => {}
                }
            }
        }
        token.upos_confidence = upos_conf.or_else(|| top_conf(&token.upos_kbest, &token.upos)).unwrap_or(1.0);
        token.xpos_confidence = xpos_conf.or_else(|| top_conf(&token.xpos_kbest, &token.xpos)).unwrap_or(1.0);
        tokens.push(token);
    }
    tokens.sort_by_key(|t| t.id());
    let root_index = tokens.iter().find(|t| t.is_root()).map_or(0, |t| t.id());
    let mut parse = DependencyParse { tokens, confidence: block.confidence, root_index, coordinations: Vec::new() };
    parse.sync_out_edges();
    Ok(parse)
}

fn top_conf(kbest: &[ScoredTag], tag: &str) -> Option<f64> {
    kbest.iter().find(|s| s.tag == tag).map(|s| s.confidence)
}

/// Writes a parse set back to CoNLL-U with the MISC extensions above.
pub fn write_conllu(set: &ParseSet) -> String {
    let mut out = String::new();
    for parse in &set.parses {
        let _ = writeln!(out, "# sent_id = {}.{}", set.sent_id, parse.parse_id());
        let _ = writeln!(out, "# text = {}", set.sentence_text);
        let _ = writeln!(out, "# confidence = {}", parse.confidence);
        for t in &parse.tokens {
            let mut misc = Vec::new();
            if t.upos_confidence != 1.0 {
                misc.push(format!("UposConf={}", t.upos_confidence));
            }
            if t.xpos_confidence != 1.0 {
                misc.push(format!("XposConf={}", t.xpos_confidence));
            }
            if !t.upos_kbest.is_empty() {
                misc.push(format!("UposK={}", join_kbest(&t.upos_kbest)));
            }
            if !t.xpos_kbest.is_empty() {
                misc.push(format!("XposK={}", join_kbest(&t.xpos_kbest)));
            }
            if t.ne_tag != "o" {
                misc.push(format!("Ner={}", t.ne_tag));
            }
            let misc = if misc.is_empty() { "_".to_string() } else { misc.join("|") };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t_\t{}",
                t.id(),
                t.surface,
                t.lemma,
                t.upos,
                t.xpos,
                t.head.target,
                t.head.label,
                misc
            );
        }
        out.push('\n');
    }
    out
}

fn join_kbest(tags: &[ScoredTag]) -> String {
    tags.iter().map(|s| format!("{}:{}", s.tag, s.confidence)).collect::<Vec<_>>().join(",")
}
