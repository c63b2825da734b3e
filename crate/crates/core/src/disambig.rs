//! Role-filler disambiguation over a weighted synset graph.
//!
//! Graph file, one record per line:
//!
//! ```text
//! node bn:00077172n A small portable timepiece
//! lemma watch bn:00077172n bn:00080550n
//! edge bn:00021045n bn:00077172n hyponym 1.5
//! role Commerce_buy Goods bn:00021045n
//! ```
//!
//! Edges are undirected. Lemmas containing spaces are written with `_`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::CandidateParse;

pub const DEFAULT_HOP_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynsetNode {
    pub id: String,
    pub gloss: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub to: usize,
    pub relation: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleSynsetBinding {
    pub frame: String,
    pub role: String,
    pub synset: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SynsetGraph {
    pub nodes: Vec<SynsetNode>,
    index: BTreeMap<String, usize>,
    adjacency: Vec<Vec<GraphEdge>>,
    /// Lemma to candidate synsets, in listed order.
    lemmas: BTreeMap<String, Vec<String>>,
    bindings: BTreeMap<(String, String), String>,
}

fn lemma_key(lemma: &str) -> String {
    lemma.trim().to_lowercase().replace(' ', "_")
}

impl SynsetGraph {
    pub fn add_node(&mut self, id: &str, gloss: &str) -> Result<()> {
        if self.index.contains_key(id) {
            return Err(Error::Graph(format!("duplicate node {id}")));
        }
        self.index.insert(id.to_string(), self.nodes.len());
        self.nodes.push(SynsetNode { id: id.into(), gloss: gloss.into() });
        self.adjacency.push(Vec::new());
        Ok(())
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::Graph(format!("unknown synset {id}")))
    }

    pub fn add_edge(&mut self, a: &str, b: &str, relation: &str, weight: f64) -> Result<()> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::Graph(format!("edge {a} {b}: weight must be positive, got {weight}")));
        }
        let (ia, ib) = (self.require(a)?, self.require(b)?);
        self.adjacency[ia].push(GraphEdge { to: ib, relation: relation.into(), weight });
        self.adjacency[ib].push(GraphEdge { to: ia, relation: relation.into(), weight });
        Ok(())
    }

    pub fn add_lemma(&mut self, lemma: &str, synsets: &[&str]) -> Result<()> {
        for s in synsets {
            self.require(s)?;
        }
        let entry = self.lemmas.entry(lemma_key(lemma)).or_default();
        for s in synsets {
            if !entry.iter().any(|e| e == s) {
                entry.push(s.to_string());
            }
        }
        Ok(())
    }

    pub fn bind_role(&mut self, frame: &str, role: &str, synset: &str) -> Result<()> {
        self.require(synset)?;
        self.bindings.insert((frame.into(), role.into()), synset.into());
        Ok(())
    }

    pub fn binding(&self, frame: &str, role: &str) -> Option<RoleSynsetBinding> {
        self.bindings.get(&(frame.to_string(), role.to_string())).map(|s| RoleSynsetBinding {
            frame: frame.into(),
            role: role.into(),
            synset: s.clone(),
        })
    }

    pub fn synsets_of(&self, lemma: &str) -> &[String] {
        self.lemmas.get(&lemma_key(lemma)).map_or(&[], |v| v.as_slice())
    }

    pub fn node(&self, id: &str) -> Option<&SynsetNode> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_weight(&self) -> f64 {
        self.adjacency.iter().flatten().map(|e| e.weight).fold(0.0, f64::max)
    }

    /// Cost charged for an unreachable or unknown filler.
    pub fn default_penalty(&self, hop_limit: usize) -> f64 {
        10.0 * self.max_weight().max(1.0) * hop_limit.max(1) as f64
    }

    /// Loads the line format described in the module docs. Nodes may be
    /// declared after the lines that mention them.
    pub fn parse(src: &str) -> Result<SynsetGraph> {
        let mut g = SynsetGraph::default();
        let mut deferred = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Syntax { line: i + 1, message: m.to_string() };
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("node") => {
                    let id = fields.next().ok_or_else(|| bad("node without id"))?;
                    let gloss = fields.collect::<Vec<_>>().join(" ");
                    g.add_node(id, &gloss).map_err(|e| bad(&e.to_string()))?;
                }
                Some(kind @ ("lemma" | "edge" | "role")) => {
                    let rest: Vec<String> = fields.map(String::from).collect();
                    let ok = match kind {
                        "lemma" => rest.len() >= 2,
                        "edge" => rest.len() == 4,
                        _ => rest.len() == 3,
                    };
                    if !ok {
                        return Err(bad(&format!("wrong number of fields for {kind}")));
                    }
                    deferred.push((i + 1, kind, rest));
                }
                _ => return Err(bad("expected node, lemma, edge or role")),
            }
        }
        for (line, kind, f) in deferred {
            let at = |e: Error| Error::Syntax { line, message: e.to_string() };
            match kind {
                "lemma" => {
                    let ids: Vec<&str> = f[1..].iter().map(String::as_str).collect();
                    g.add_lemma(&f[0], &ids).map_err(at)?
                }
                "edge" => {
                    let w: f64 =
                        f[3].parse().map_err(|_| Error::Syntax { line, message: format!("bad weight `{}`", f[3]) })?;
                    g.add_edge(&f[0], &f[1], &f[2], w).map_err(at)?
                }
                _ => g.bind_role(&f[0], &f[1], &f[2]).map_err(at)?,
            }
        }
        Ok(g)
    }

    /// Cheapest cost from `source` to every node using at most `hop_limit`
    /// edges; `None` where unreachable within the limit.
    pub fn costs_from(&self, source: &str, hop_limit: usize) -> Result<Vec<Option<f64>>> {
        let s = self.require(source)?;
        let mut best: Vec<Option<f64>> = vec![None; self.len()];
        // fewest hops at which each node has been settled so far
        let mut settled_hops = vec![usize::MAX; self.len()];
        let mut heap = BinaryHeap::from([State { cost: 0.0, hops: 0, node: s }]);
        while let Some(State { cost, hops, node }) = heap.pop() {
            if hops >= settled_hops[node] {
                continue;
            }
            settled_hops[node] = hops;
            if best[node].is_none() {
                best[node] = Some(cost);
            }
            if hops == hop_limit {
                continue;
            }
            for e in &self.adjacency[node] {
                if hops + 1 < settled_hops[e.to] {
                    heap.push(State { cost: cost + e.weight, hops: hops + 1, node: e.to });
                }
            }
        }
        Ok(best)
    }
}

#[derive(Debug, PartialEq)]
struct State {
    cost: f64,
    hops: usize,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then(other.hops.cmp(&self.hops)).then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sense {
    pub synset: String,
    /// `None` when no candidate is reachable within the hop limit.
    pub cost: Option<f64>,
}

/// The filler synset cheapest to reach from the role synset within
/// `hop_limit` hops. Equal costs go to the smallest synset id; when nothing
/// is reachable the first listed synset is returned without a cost.
pub fn disambiguate(binding: &RoleSynsetBinding, lemma: &str, graph: &SynsetGraph, hop_limit: usize) -> Result<Sense> {
    let candidates = graph.synsets_of(lemma);
    if candidates.is_empty() {
        return Err(Error::UnknownLemma(lemma.to_string()));
    }
    let costs = graph.costs_from(&binding.synset, hop_limit)?;
    let cost_of = |id: &String| graph.index.get(id).and_then(|&i| costs[i]);
    if candidates.len() == 1 {
        return Ok(Sense { synset: candidates[0].clone(), cost: cost_of(&candidates[0]) });
    }
    let best = candidates
        .iter()
        .filter_map(|c| cost_of(c).map(|cost| (cost, c)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    Ok(match best {
        Some((cost, id)) => Sense { synset: id.clone(), cost: Some(cost) },
        None => Sense { synset: candidates[0].clone(), cost: None },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredFiller {
    pub role: String,
    pub token: u32,
    pub lemma: String,
    /// `None` for a lemma the graph does not know.
    pub synset: Option<String>,
    pub cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub frame: String,
    pub lu_token: u32,
    pub fillers: Vec<ScoredFiller>,
    /// Sum of filler costs; lower is better.
    pub score: f64,
}

/// Disambiguates every filler. Unreachable and unknown fillers each add
/// `penalty` to the score.
pub fn disambiguate_candidate(
    candidate: &CandidateParse,
    graph: &SynsetGraph,
    hop_limit: usize,
    penalty: f64,
) -> Result<ScoredCandidate> {
    let mut score = 0.0;
    let mut fillers = Vec::with_capacity(candidate.fillers.len());
    for f in &candidate.fillers {
        let binding = graph
            .binding(&candidate.frame, &f.role)
            .ok_or_else(|| Error::Graph(format!("no role synset for {}.{}", candidate.frame, f.role)))?;
        let (synset, cost) = match disambiguate(&binding, &f.lemma, graph, hop_limit) {
            Ok(s) => (Some(s.synset), s.cost),
            Err(Error::UnknownLemma(_)) => (None, None),
            Err(e) => return Err(e),
        };
        score += cost.unwrap_or(penalty);
        fillers.push(ScoredFiller { role: f.role.clone(), token: f.token, lemma: f.lemma.clone(), synset, cost });
    }
    Ok(ScoredCandidate { frame: candidate.frame.clone(), lu_token: candidate.lu_token, fillers, score })
}
