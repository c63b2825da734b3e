//! Coordinated-choice expansion, clause segmentation, and unique logical
//! representations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::disambig::ScoredCandidate;
use crate::parse::{Connective, DependencyParse};
use crate::term::{atom, quoted};

/// Coordination-free sentences, one per coordinated choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    /// The choice behind each parse: one member per group.
    pub choices: Vec<Vec<u32>>,
    pub parses: Vec<DependencyParse>,
    pub connective: Option<Connective>,
}

/// Every coordinated choice in group order (groups sorted by their first
/// member; the first group varies slowest).
pub fn coordinated_choices(groups: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for g in groups {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                g.iter().map(move |&m| {
                    let mut c = prefix.clone();
                    c.push(m);
                    c
                })
            })
            .collect();
    }
    out
}

/// Expands the parse's coordination groups. Each result keeps exactly the
/// chosen member of every group; tokens only reachable through dropped
/// members go with them.
pub fn expand_coordinations(parse: &DependencyParse) -> Expansion {
    if parse.coordinations.is_empty() {
        return Expansion { choices: vec![vec![]], parses: vec![parse.clone()], connective: None };
    }
    let mut groups: Vec<Vec<u32>> = parse.coordinations.iter().map(|g| g.members.clone()).collect();
    groups.sort();
    let original_roots: BTreeSet<u32> = parse.roots().map(|t| t.id()).collect();
    let choices = coordinated_choices(&groups);
    let parses = choices
        .iter()
        .map(|choice| {
            let dropped: BTreeSet<u32> =
                groups.iter().zip(choice).flat_map(|(g, c)| g.iter().copied().filter(move |m| m != c)).collect();
            let keep: BTreeSet<u32> = parse.ids().filter(|id| !dropped.contains(id)).collect();
            let cut = parse.restrict(&keep);
            let mut live = BTreeSet::new();
            for r in cut.roots().map(|t| t.id()).filter(|r| original_roots.contains(r)) {
                live.extend(cut.reachable_from(r));
            }
            let mut out = cut.restrict(&live);
            if dropped.contains(&parse.root_index) {
                if let Some((_, c)) = groups.iter().zip(choice).find(|(g, _)| g.contains(&parse.root_index)) {
                    out.root_index = *c;
                }
            }
            out.coordinations.clear();
            out
        })
        .collect();
    Expansion { choices, parses, connective: parse.coordinations.first().map(|g| g.connective) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub root: u32,
    /// Tokens whose primary head chain ends at `root`.
    pub tokens: BTreeSet<u32>,
}

/// Main clause first, then the remaining roots (adnominal clauses) in
/// token order.
pub fn clauses(parse: &DependencyParse) -> Vec<Clause> {
    let mut owner: BTreeMap<u32, u32> = BTreeMap::new();
    for t in &parse.tokens {
        let mut cur = t.id();
        let mut steps = 0;
        while let Some(tok) = parse.token(cur) {
            if tok.is_root() || steps > parse.len() {
                break;
            }
            cur = tok.head.target;
            steps += 1;
        }
        owner.insert(t.id(), cur);
    }
    let mut roots: Vec<u32> = parse.roots().map(|t| t.id()).collect();
    roots.sort_by_key(|&r| (r != parse.root_index, r));
    roots
        .into_iter()
        .map(|root| Clause { root, tokens: owner.iter().filter(|(_, &o)| o == root).map(|(&t, _)| t).collect() })
        .collect()
}

/// Most filled roles, then lowest score; the earlier candidate wins ties.
pub fn best_candidate(candidates: &[ScoredCandidate]) -> Option<&ScoredCandidate> {
    let mut best: Option<&ScoredCandidate> = None;
    for c in candidates {
        let better = match best {
            None => true,
            Some(b) => c.fillers.len() > b.fillers.len() || (c.fillers.len() == b.fillers.len() && c.score < b.score),
        };
        if better {
            best = Some(c);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UlrRole {
    pub role_id: u32,
    pub role: String,
    pub lemma: String,
    pub synset: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UlrFact {
    pub frame_id: u32,
    pub frame: String,
    pub roles: Vec<UlrRole>,
}

/// Facts for the selected clause candidates, all of which hold jointly.
/// Repeats (same frame, lexical unit and fillers) are emitted once. Frame
/// ids follow the input order; role ids follow first mention, so a token
/// filling roles in several facts keeps one id.
pub fn build_ulr(selected: &[ScoredCandidate]) -> Vec<UlrFact> {
    let mut seen = BTreeSet::new();
    let mut rids: BTreeMap<u32, u32> = BTreeMap::new();
    let mut facts = Vec::new();
    for c in selected {
        let key =
            (c.frame.clone(), c.lu_token, c.fillers.iter().map(|f| (f.role.clone(), f.token)).collect::<Vec<_>>());
        if !seen.insert(key) {
            continue;
        }
        let roles = c
            .fillers
            .iter()
            .map(|f| {
                let next = rids.len() as u32 + 1;
                UlrRole {
                    role_id: *rids.entry(f.token).or_insert(next),
                    role: f.role.clone(),
                    lemma: f.lemma.clone(),
                    synset: f.synset.clone(),
                }
            })
            .collect();
        facts.push(UlrFact { frame_id: facts.len() as u32 + 1, frame: c.frame.clone(), roles });
    }
    facts
}

pub const NULL_SYNSET: &str = "na";

pub fn write_fact(f: &UlrFact) -> String {
    let roles: Vec<String> = f
        .roles
        .iter()
        .map(|r| {
            format!(
                "role(rid_{},{},{},{})",
                r.role_id,
                quoted(&r.role),
                atom(&r.lemma),
                quoted(r.synset.as_deref().unwrap_or(NULL_SYNSET))
            )
        })
        .collect();
    format!("ulr(fid_{},{},[{}]).", f.frame_id, quoted(&f.frame), roles.join(","))
}

/// One fact per line.
pub fn serialize_ulr(facts: &[UlrFact]) -> String {
    facts.iter().map(|f| write_fact(f) + "\n").collect()
}

/// Frame name and (role, lemma, synset) triples.
pub type CanonicalFact = (String, Vec<(String, String, Option<String>)>);

/// The facts with ids dropped and sorted, for comparing sentences whose
/// tokens or clause order differ.
pub fn canonical(facts: &[UlrFact]) -> Vec<CanonicalFact> {
    let mut out: Vec<_> = facts
        .iter()
        .map(|f| {
            (f.frame.clone(), f.roles.iter().map(|r| (r.role.clone(), r.lemma.clone(), r.synset.clone())).collect())
        })
        .collect();
    out.sort();
    out
}
