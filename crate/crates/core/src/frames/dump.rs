//! `lvp/4` dump format.
//!
//! ```text
//! lvp(buy,verb,'Commerce_buy',[pattern('Buyer','verb->nsubj',required),pattern('Goods','verb->obj',required)]).
//! ```
//!
//! A path starts with the lexical unit's POS; `->label` follows an outgoing
//! edge and `<-label` an incoming one, so `noun<-obj->nsubj` goes from a
//! noun up to the verb governing it as `obj`, then down to that verb's
//! subject.

use super::{Lvp, RolePattern, Step};
use crate::error::{Error, Result};
use crate::parse::Direction;
use crate::term::{atom, parse_clauses, quoted};

pub fn format_path(pos: &str, path: &[Step]) -> String {
    let mut s = pos.to_string();
    for step in path {
        s.push_str(match step.direction {
            Direction::Outgoing => "->",
            Direction::Incoming => "<-",
        });
        s.push_str(&step.label);
    }
    s
}

/// Inverse of [`format_path`]; returns the POS prefix and the steps.
pub fn parse_path(s: &str) -> Option<(String, Vec<Step>)> {
    let cut = |s: &str| [s.find("->"), s.find("<-")].into_iter().flatten().min();
    let first = cut(s)?;
    let pos = s[..first].to_string();
    let mut rest = &s[first..];
    let mut steps = Vec::new();
    while !rest.is_empty() {
        let direction = if rest.starts_with("->") { Direction::Outgoing } else { Direction::Incoming };
        rest = &rest[2..];
        let end = cut(rest).unwrap_or(rest.len());
        let label = &rest[..end];
        if label.is_empty() {
            return None;
        }
        steps.push(Step { label: label.to_string(), direction });
        rest = &rest[end..];
    }
    Some((pos, steps))
}

pub fn write_lvp(lvp: &Lvp) -> String {
    let patterns: Vec<String> = lvp
        .patterns
        .iter()
        .map(|p| {
            format!(
                "pattern({},{},{})",
                quoted(&p.role),
                quoted(&format_path(&lvp.lu_pos, &p.path)),
                if p.required { "required" } else { "optional" }
            )
        })
        .collect();
    format!("lvp({},{},{},[{}]).", atom(&lvp.lu_lemma), atom(&lvp.lu_pos), quoted(&lvp.frame), patterns.join(","))
}

pub fn write_lvps<'a>(lvps: impl IntoIterator<Item = &'a Lvp>) -> String {
    lvps.into_iter().map(|l| write_lvp(l) + "\n").collect()
}

pub fn read_lvps(src: &str) -> Result<Vec<Lvp>> {
    let bad = |line: usize, what: &str| Error::Syntax { line, message: format!("malformed lvp term: {what}") };
    parse_clauses(src)?
        .into_iter()
        .map(|(line, t)| {
            let a = t.as_compound("lvp", 4).ok_or_else(|| bad(line, "expected lvp/4"))?;
            let lu_pos = a[1].as_text().ok_or_else(|| bad(line, "pos"))?;
            let patterns = a[3]
                .as_list()
                .ok_or_else(|| bad(line, "pattern list"))?
                .iter()
                .map(|p| {
                    let f = p.as_compound("pattern", 3).ok_or_else(|| bad(line, "pattern/3"))?;
                    let text = f[1].as_text().ok_or_else(|| bad(line, "path"))?;
                    let (pos, path) = parse_path(&text).ok_or_else(|| bad(line, "path syntax"))?;
                    if pos != lu_pos {
                        return Err(bad(line, "path does not start at the LU pos"));
                    }
                    let required = match f[2].as_atom() {
                        Some("required") => true,
                        Some("optional") => false,
                        _ => return Err(bad(line, "required or optional")),
                    };
                    Ok(RolePattern { role: f[0].as_text().ok_or_else(|| bad(line, "role"))?, path, required })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Lvp {
                lu_lemma: a[0].as_text().ok_or_else(|| bad(line, "lemma"))?,
                lu_pos,
                frame: a[2].as_text().ok_or_else(|| bad(line, "frame"))?,
                patterns,
            })
        })
        .collect()
}
