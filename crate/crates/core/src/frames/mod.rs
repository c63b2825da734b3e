//! Logical valence patterns: learning them from annotated sentences and
//! applying them to paraparsed graphs.

mod dump;
mod learn;

pub use dump::{format_path, parse_path, read_lvps, write_lvp, write_lvps};
pub use learn::{learn_lvp, learn_store, parse_training, shortest_path, RoleSpec, TrainingAnnotation};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::parse::{DependencyParse, Direction};
use crate::term::quoted;

/// One edge traversal: follow an edge with this label, leaving along an
/// outgoing edge or arriving from the head side along an incoming one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step {
    pub label: String,
    pub direction: Direction,
}

impl Step {
    pub fn out(label: &str) -> Step {
        Step { label: label.into(), direction: Direction::Outgoing }
    }

    pub fn inc(label: &str) -> Step {
        Step { label: label.into(), direction: Direction::Incoming }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RolePattern {
    pub role: String,
    pub path: Vec<Step>,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lvp {
    pub lu_lemma: String,
    /// Lowercase universal POS.
    pub lu_pos: String,
    pub frame: String,
    /// A role may appear more than once; its paths are tried in order.
    pub patterns: Vec<RolePattern>,
}

impl Lvp {
    fn key(&self) -> (&str, &str, &str) {
        (&self.lu_lemma, &self.lu_pos, &self.frame)
    }

    /// Role names in first-declaration order.
    pub fn roles(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for p in &self.patterns {
            if !seen.contains(&p.role.as_str()) {
                seen.push(p.role.as_str());
            }
        }
        seen
    }

    pub fn is_required(&self, role: &str) -> bool {
        self.patterns.iter().any(|p| p.role == role && p.required)
    }

    /// Folds another pattern list for the same key into this one. New paths
    /// for a known role are appended as alternatives; a role stays required
    /// only if every contributing annotation required it.
    pub fn merge(&mut self, other: &Lvp) {
        let mine: BTreeSet<String> = self.roles().into_iter().map(String::from).collect();
        let theirs: BTreeSet<String> = other.roles().into_iter().map(String::from).collect();
        for p in &mut self.patterns {
            if !theirs.contains(&p.role) || !other.is_required(&p.role) {
                p.required = false;
            }
        }
        for p in &other.patterns {
            let required = p.required && mine.contains(&p.role) && self.is_required(&p.role);
            if let Some(existing) = self.patterns.iter_mut().find(|q| q.role == p.role && q.path == p.path) {
                existing.required = existing.required && required;
            } else {
                self.patterns.push(RolePattern { required, ..p.clone() });
            }
        }
        let roles: Vec<String> = self.roles().into_iter().map(String::from).collect();
        for role in roles {
            let req = self.is_required(&role);
            for p in self.patterns.iter_mut().filter(|p| p.role == role) {
                p.required = req;
            }
        }
    }
}

/// Lvps keyed by (lemma, pos, frame), in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LvpStore {
    pub lvps: Vec<Lvp>,
}

impl LvpStore {
    pub fn insert(&mut self, lvp: Lvp) {
        match self.lvps.iter_mut().find(|l| l.key() == lvp.key()) {
            Some(existing) => existing.merge(&lvp),
            None => self.lvps.push(lvp),
        }
    }

    pub fn len(&self) -> usize {
        self.lvps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lvps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filler {
    pub role: String,
    pub token: u32,
    pub lemma: String,
}

/// A triggered frame with its extracted role-fillers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateParse {
    pub frame: String,
    pub lu_token: u32,
    pub source_parse_id: u32,
    /// In role-declaration order.
    pub fillers: Vec<Filler>,
}

impl CandidateParse {
    /// `p('Frame',[role('Role','filler'),...]).`
    pub fn to_term(&self) -> String {
        let roles: Vec<String> =
            self.fillers.iter().map(|f| format!("role({},{})", quoted(&f.role), quoted(&f.lemma))).collect();
        format!("p({},[{}]).", quoted(&self.frame), roles.join(","))
    }
}

/// Why an Lvp produced no candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub frame: String,
    /// `None` when no token matched the lexical unit.
    pub missing_role: Option<String>,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.missing_role {
            Some(r) => write!(f, "{}: required role {} not found", self.frame, r),
            None => write!(f, "{}: lexical unit not present", self.frame),
        }
    }
}

fn matches_lu(lvp: &Lvp, lemma: &str, upos: &str) -> bool {
    lvp.lu_lemma == lemma && lvp.lu_pos.eq_ignore_ascii_case(upos)
}

/// Lvps whose lexical unit matches some token, in store order.
pub fn trigger_lvps<'a>(parse: &DependencyParse, store: &'a LvpStore) -> Vec<&'a Lvp> {
    store.lvps.iter().filter(|l| parse.tokens.iter().any(|t| matches_lu(l, &t.lemma, &t.upos))).collect()
}

/// Tokens reached from `start` by following `path`, in sentence order.
pub fn walk(parse: &DependencyParse, start: u32, path: &[Step]) -> Vec<u32> {
    let mut frontier: BTreeSet<u32> = BTreeSet::from([start]);
    for step in path {
        let mut next = BTreeSet::new();
        for id in &frontier {
            let Some(t) = parse.token(*id) else { continue };
            match step.direction {
                Direction::Outgoing => next.extend(t.out_targets(&step.label)),
                Direction::Incoming => {
                    next.extend(t.in_edges().filter(|e| !e.is_root() && e.label == step.label).map(|e| e.target))
                }
            }
        }
        frontier = next;
    }
    frontier.into_iter().filter(|&id| id != start).collect()
}

/// Candidates for one lexical-unit token. A role with several matching
/// fillers yields one candidate per filler, leftmost first; several such
/// roles multiply out.
pub fn apply_lvp_at(lvp: &Lvp, parse: &DependencyParse, lu: u32) -> Result<Vec<CandidateParse>, Rejection> {
    let mut per_role: Vec<(&str, Vec<u32>)> = Vec::new();
    for role in lvp.roles() {
        let found =
            lvp.patterns.iter().filter(|p| p.role == role).map(|p| walk(parse, lu, &p.path)).find(|m| !m.is_empty());
        match found {
            Some(m) => per_role.push((role, m)),
            None if lvp.is_required(role) => {
                return Err(Rejection { frame: lvp.frame.clone(), missing_role: Some(role.to_string()) })
            }
            None => {}
        }
    }
    let mut combos: Vec<Vec<Filler>> = vec![vec![]];
    for (role, tokens) in per_role {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                tokens.iter().map(move |&tok| {
                    let mut c = prefix.clone();
                    c.push(Filler {
                        role: role.to_string(),
                        token: tok,
                        lemma: parse.token(tok).unwrap().lemma.clone(),
                    });
                    c
                })
            })
            .collect();
    }
    Ok(combos
        .into_iter()
        .map(|fillers| CandidateParse {
            frame: lvp.frame.clone(),
            lu_token: lu,
            source_parse_id: parse.parse_id(),
            fillers,
        })
        .collect())
}

/// Applies `lvp` at every token matching its lexical unit.
pub fn apply_lvp(lvp: &Lvp, parse: &DependencyParse) -> Result<Vec<CandidateParse>, Rejection> {
    let mut out = Vec::new();
    let mut first_err = None;
    for t in parse.tokens.iter().filter(|t| matches_lu(lvp, &t.lemma, &t.upos)) {
        match apply_lvp_at(lvp, parse, t.id()) {
            Ok(c) => out.extend(c),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if out.is_empty() {
        return Err(first_err.unwrap_or(Rejection { frame: lvp.frame.clone(), missing_role: None }));
    }
    Ok(out)
}

/// Candidates for every lexical-unit token inside `scope`, in store order
/// then token order, along with the rejections met on the way.
pub fn candidates_in(
    parse: &DependencyParse,
    store: &LvpStore,
    scope: &BTreeSet<u32>,
) -> (Vec<CandidateParse>, Vec<Rejection>) {
    let mut found = Vec::new();
    let mut rejected = Vec::new();
    for lvp in &store.lvps {
        for t in parse.tokens.iter().filter(|t| scope.contains(&t.id()) && matches_lu(lvp, &t.lemma, &t.upos)) {
            match apply_lvp_at(lvp, parse, t.id()) {
                Ok(c) => found.extend(c),
                Err(r) => rejected.push(r),
            }
        }
    }
    (found, rejected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::testing::build;

    pub(super) fn buy_lvp() -> Lvp {
        Lvp {
            lu_lemma: "buy".into(),
            lu_pos: "verb".into(),
            frame: "Commerce_buy".into(),
            patterns: vec![
                RolePattern { role: "Buyer".into(), path: vec![Step::out("nsubj")], required: true },
                RolePattern { role: "Goods".into(), path: vec![Step::out("obj")], required: true },
            ],
        }
    }

    fn customer() -> DependencyParse {
        build(&[
            ("A", "a", "DET", "DT", 2, "det"),
            ("customer", "customer", "NOUN", "NN", 3, "nsubj"),
            ("buys", "buy", "VERB", "VBZ", 0, "root"),
            ("a", "a", "DET", "DT", 5, "det"),
            ("watch", "watch", "NOUN", "NN", 3, "obj"),
        ])
    }

    #[test]
    fn example_candidate() {
        let c = apply_lvp(&buy_lvp(), &customer()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].to_term(), "p('Commerce_buy',[role('Buyer','customer'),role('Goods','watch')]).");
    }

    #[test]
    fn missing_required_role() {
        let p = build(&[("Mary", "mary", "PROPN", "NNP", 2, "nsubj"), ("buys", "buy", "VERB", "VBZ", 0, "root")]);
        let err = apply_lvp(&buy_lvp(), &p).unwrap_err();
        assert_eq!(err.missing_role.as_deref(), Some("Goods"));
    }

    #[test]
    fn trigger() {
        let mut store = LvpStore::default();
        assert!(trigger_lvps(&customer(), &store).is_empty());
        store.insert(buy_lvp());
        store.insert(Lvp { lu_lemma: "sell".into(), ..buy_lvp() });
        assert_eq!(trigger_lvps(&customer(), &store).len(), 1);
    }

    #[test]
    fn multiple_matches_fan_out() {
        let p = build(&[
            ("Mary", "mary", "PROPN", "NNP", 2, "nsubj"),
            ("buys", "buy", "VERB", "VBZ", 0, "root"),
            ("cars", "car", "NOUN", "NNS", 2, "obj"),
            ("boats", "boat", "NOUN", "NNS", 2, "obj"),
        ]);
        let c = apply_lvp(&buy_lvp(), &p).unwrap();
        assert_eq!(c.iter().map(|c| c.fillers[1].lemma.as_str()).collect::<Vec<_>>(), ["car", "boat"]);
    }

    #[test]
    fn merge_relaxes_required() {
        let mut a = buy_lvp();
        let mut b = buy_lvp();
        b.patterns.push(RolePattern { role: "Recipient".into(), path: vec![Step::out("obl:for")], required: true });
        a.merge(&b);
        assert_eq!(a.roles(), ["Buyer", "Goods", "Recipient"]);
        assert!(a.is_required("Buyer") && a.is_required("Goods") && !a.is_required("Recipient"));
        let mut c = buy_lvp();
        c.patterns[0].path = vec![Step::inc("obj"), Step::out("nsubj")];
        a.merge(&c);
        assert_eq!(a.patterns.iter().filter(|p| p.role == "Buyer").count(), 2);
    }
}
