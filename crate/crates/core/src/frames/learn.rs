//! Training annotations and Lvp learning.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Lvp, LvpStore, RolePattern, Step};
use crate::error::{Error, Result};
use crate::paraparse::{paraparse, Lexicon};
use crate::parse::{DependencyParse, Direction, ParseSet};
use crate::term::{parse_clauses, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleSpec {
    pub role: String,
    pub position: u32,
    pub required: bool,
}

/// One `train(...)` term:
///
/// ```text
/// train('Mary buys a car','Commerce_buy','LUIndex'=2,
///       ['Buyer'=1+required,'Goods'=4+required],[[purchase,verb],[acquire,verb]]).
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingAnnotation {
    pub sentence: String,
    pub frame: String,
    pub lu_index: u32,
    pub roles: Vec<RoleSpec>,
    /// `(lemma, pos)` pairs that also trigger the frame.
    pub extra_lus: Vec<(String, String)>,
}

fn bad(line: usize, what: &str) -> Error {
    Error::Syntax { line, message: format!("malformed train term: {what}") }
}

fn annotation(line: usize, t: &Term) -> Result<TrainingAnnotation> {
    let a = t.as_compound("train", 5).ok_or_else(|| bad(line, "expected train/5"))?;
    let sentence = a[0].as_text().ok_or_else(|| bad(line, "sentence"))?;
    let frame = a[1].as_text().ok_or_else(|| bad(line, "frame"))?;
    let lu = a[2].as_compound("=", 2).ok_or_else(|| bad(line, "'LUIndex'=N"))?;
    if lu[0].as_atom() != Some("LUIndex") {
        return Err(bad(line, "'LUIndex'=N"));
    }
    let lu_index = lu[1].as_int().filter(|&i| i > 0).ok_or_else(|| bad(line, "LU index"))? as u32;
    let roles = a[3]
        .as_list()
        .ok_or_else(|| bad(line, "role list"))?
        .iter()
        .map(|r| {
            let eq = r.as_compound("=", 2).ok_or_else(|| bad(line, "'Role'=N+required"))?;
            let role = eq[0].as_text().ok_or_else(|| bad(line, "role name"))?;
            let plus = eq[1].as_compound("+", 2).ok_or_else(|| bad(line, "N+required"))?;
            let position = plus[0].as_int().filter(|&i| i > 0).ok_or_else(|| bad(line, "role position"))? as u32;
            let required = match plus[1].as_atom() {
                Some("required") => true,
                Some("optional") => false,
                _ => return Err(bad(line, "required or optional")),
            };
            Ok(RoleSpec { role, position, required })
        })
        .collect::<Result<Vec<_>>>()?;
    let extra_lus = a[4]
        .as_list()
        .ok_or_else(|| bad(line, "extra LU list"))?
        .iter()
        .map(|lu| match lu.as_list() {
            Some([lemma, pos]) => Ok((
                lemma.as_text().ok_or_else(|| bad(line, "LU lemma"))?,
                pos.as_text().ok_or_else(|| bad(line, "LU pos"))?.to_lowercase(),
            )),
            _ => Err(bad(line, "[lemma,pos]")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrainingAnnotation { sentence, frame, lu_index, roles, extra_lus })
}

/// Reads a training file, one `train/5` term per clause.
pub fn parse_training(src: &str) -> Result<Vec<TrainingAnnotation>> {
    parse_clauses(src)?.iter().map(|(line, t)| annotation(*line, t)).collect()
}

fn neighbours(parse: &DependencyParse, id: u32) -> Vec<(Step, u32)> {
    let Some(t) = parse.token(id) else { return vec![] };
    let outs = t.out_edges.iter().map(|e| (Step { label: e.label.clone(), direction: Direction::Outgoing }, e.target));
    let ins = t
        .in_edges()
        .filter(|e| !e.is_root())
        .map(|e| (Step { label: e.label.clone(), direction: Direction::Incoming }, e.target));
    outs.chain(ins).collect()
}

/// Fewest-step path from `from` to `to`, treating edges as traversable in
/// either direction. Among equally short paths the lexicographically
/// smallest step sequence wins.
pub fn shortest_path(parse: &DependencyParse, from: u32, to: u32) -> Option<Vec<Step>> {
    let mut best: BTreeMap<u32, Vec<Step>> = BTreeMap::from([(from, vec![])]);
    let mut frontier: BTreeSet<u32> = BTreeSet::from([from]);
    while !frontier.is_empty() && !best.contains_key(&to) {
        let mut next: BTreeMap<u32, Vec<Step>> = BTreeMap::new();
        for u in &frontier {
            for (step, v) in neighbours(parse, *u) {
                if best.contains_key(&v) {
                    continue;
                }
                let mut cand = best[u].clone();
                cand.push(step);
                match next.get(&v) {
                    Some(cur) if *cur <= cand => {}
                    _ => {
                        next.insert(v, cand);
                    }
                }
            }
        }
        frontier = next.keys().copied().collect();
        best.extend(next);
    }
    best.remove(&to)
}

/// Learns the Lvp of the annotated lexical unit plus one identical Lvp per
/// extra lexical unit. `parse` is the paraparsed training sentence.
pub fn learn_lvp(ann: &TrainingAnnotation, parse: &DependencyParse) -> Result<Vec<Lvp>> {
    let train_err = |msg: String| Error::Training(format!("'{}': {msg}", ann.sentence));
    let lu = parse
        .token(ann.lu_index)
        .ok_or_else(|| train_err(format!("LU index {} is not a token of the parse", ann.lu_index)))?;
    let mut patterns = Vec::with_capacity(ann.roles.len());
    for spec in &ann.roles {
        if spec.position == ann.lu_index {
            return Err(train_err(format!("role {} points at the lexical unit itself", spec.role)));
        }
        if !parse.contains(spec.position) {
            return Err(train_err(format!(
                "role {} position {} is not a token of the parse",
                spec.role, spec.position
            )));
        }
        let path = shortest_path(parse, lu.id(), spec.position)
            .ok_or_else(|| train_err(format!("role {} is unreachable from the lexical unit", spec.role)))?;
        patterns.push(RolePattern { role: spec.role.clone(), path, required: spec.required });
    }
    let primary =
        Lvp { lu_lemma: lu.lemma.clone(), lu_pos: lu.upos.to_lowercase(), frame: ann.frame.clone(), patterns };
    let mut out = vec![primary.clone()];
    for (lemma, pos) in &ann.extra_lus {
        out.push(Lvp { lu_lemma: lemma.clone(), lu_pos: pos.clone(), ..primary.clone() });
    }
    Ok(out)
}

/// Builds a store from annotations, finding each sentence's parse by text
/// among `parses` and paraparsing it first.
pub fn learn_store(annotations: &[TrainingAnnotation], parses: &[ParseSet], lexicon: &Lexicon) -> Result<LvpStore> {
    let mut store = LvpStore::default();
    for ann in annotations {
        let set = parses
            .iter()
            .find(|s| s.sentence_text == ann.sentence)
            .ok_or_else(|| Error::Training(format!("no parse for training sentence '{}'", ann.sentence)))?;
        let variants = paraparse(set.best(), lexicon)?;
        let graph = &variants.first().expect("paraparse yields at least one variant").parse;
        for lvp in learn_lvp(ann, graph)? {
            store.insert(lvp);
        }
    }
    Ok(store)
}
