#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use authoring::adapter::FixtureReparser;
use authoring::disambig::SynsetGraph;
use authoring::eval::{write_document, SentenceUlr};
use authoring::loader::{load_resources, read_conllu};
use authoring::parse::{DependencyParse, Edge, ParseSet, ScoredTag, Token, TokenIndex, Validation};
use authoring::pipeline::{author, Resources, SentenceOutcome};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_text(rel: &str) -> String {
    std::fs::read_to_string(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn resources() -> (Resources, FixtureReparser) {
    let f = fixtures();
    load_resources(&f.join("train.pl"), &f.join("synsets.txt"), Some(&f.join("authoring.conf")))
        .expect("fixture resources")
}

pub fn corpus() -> Vec<ParseSet> {
    read_conllu(&fixtures().join("corpus.conllu")).expect("fixture corpus")
}

pub fn run_corpus(res: &Resources, reparser: &FixtureReparser, sets: &[ParseSet]) -> Vec<SentenceOutcome> {
    sets.iter().map(|s| author(s, res, reparser).expect("authoring succeeds")).collect()
}

/// ULR document, token facts and JSON for one batch run.
pub fn batch_bytes(outcomes: &[SentenceOutcome]) -> (String, String, String) {
    let docs: Vec<SentenceUlr> = outcomes.iter().map(|o| o.to_ulr()).collect();
    let facts: String = outcomes.iter().map(|o| o.token_facts.clone()).collect();
    (write_document(&docs), facts, serde_json::to_string(outcomes).unwrap())
}

/// `(surface, lemma, upos, xpos, head, label)` rows, ids 1..=n.
pub fn build(rows: &[(&str, &str, &str, &str, u32, &str)]) -> DependencyParse {
    let heads: Vec<(u32, String)> = rows.iter().map(|r| (r.4, r.5.to_string())).collect();
    let mut p = from_heads(1, 1, &heads);
    for (t, r) in p.tokens.iter_mut().zip(rows) {
        t.surface = r.0.into();
        t.lemma = r.1.into();
        t.upos = r.2.into();
        t.xpos = r.3.into();
    }
    p
}

pub fn from_heads(sentence_id: u32, parse_id: u32, heads: &[(u32, String)]) -> DependencyParse {
    let tokens = heads
        .iter()
        .enumerate()
        .map(|(i, (h, l))| Token {
            index: TokenIndex { sentence_id, parse_id, token_id: i as u32 + 1 },
            surface: format!("w{}", i + 1),
            lemma: format!("w{}", i + 1),
            upos: "NOUN".into(),
            xpos: "NN".into(),
            head: Edge::new(*h, l.clone()),
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
    let mut p = DependencyParse { tokens, confidence: 1.0, root_index: 0, coordinations: vec![] };
    let root = p.roots().next().map_or(0, |t| t.id());
    p.root_index = root;
    p.sync_out_edges();
    p
}

fn projective_heads(rng: &mut ChaCha8Rng, lo: u32, hi: u32, head: u32, out: &mut [u32]) {
    if lo > hi {
        return;
    }
    let r = rng.gen_range(lo..=hi);
    out[r as usize - 1] = head;
    if r > lo {
        projective_heads(rng, lo, r - 1, r, out);
    }
    projective_heads(rng, r + 1, hi, r, out);
}

/// Head vector of a random single-rooted tree over `n` tokens. Half the
/// draws are projective by construction.
pub fn random_heads(rng: &mut ChaCha8Rng, n: u32) -> Vec<u32> {
    let mut heads = vec![0; n as usize];
    if rng.gen_bool(0.5) {
        projective_heads(rng, 1, n, 0, &mut heads);
    } else {
        let mut order: Vec<u32> = (1..=n).collect();
        order.shuffle(rng);
        for i in 1..order.len() {
            heads[order[i] as usize - 1] = order[rng.gen_range(0..i)];
        }
    }
    heads
}

pub fn labelled(heads: &[u32], mut label: impl FnMut(usize) -> String) -> Vec<(u32, String)> {
    heads.iter().enumerate().map(|(i, &h)| (h, if h == 0 { "root".to_string() } else { label(i) })).collect()
}

/// Projectivity by pairwise arc crossing, the virtual root arc included.
pub fn crossing_free(heads: &[u32]) -> bool {
    let arcs: Vec<(u32, u32)> =
        heads.iter().enumerate().map(|(i, &h)| (h.min(i as u32 + 1), h.max(i as u32 + 1))).collect();
    for (i, &(a, b)) in arcs.iter().enumerate() {
        for &(c, d) in &arcs[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return false;
            }
        }
    }
    true
}

/// Random undirected graph with weights in eighths, so float sums are exact.
pub struct WeightedGraph {
    pub n: usize,
    /// `(a, b, eighths)`
    pub edges: Vec<(usize, usize, u64)>,
}

pub fn node_id(i: usize) -> String {
    format!("n:{i:03}")
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> WeightedGraph {
    let n = rng.gen_range(2..=max_nodes);
    let m = rng.gen_range(n / 2..=n * 2);
    let edges = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=16u64))).collect();
    WeightedGraph { n, edges }
}

impl WeightedGraph {
    pub fn to_synset_graph(&self) -> SynsetGraph {
        let mut g = SynsetGraph::default();
        for i in 0..self.n {
            g.add_node(&node_id(i), "").unwrap();
        }
        for &(a, b, w) in &self.edges {
            g.add_edge(&node_id(a), &node_id(b), "rel", w as f64 / 8.0).unwrap();
        }
        g
    }

    /// Plain Dijkstra over `(node, hops)` states in integer eighths; the
    /// cost of a node is its cheapest state.
    pub fn layered_costs(&self, source: usize, hop_limit: usize) -> Vec<Option<u64>> {
        let mut adj = vec![vec![]; self.n];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let mut dist = vec![vec![u64::MAX; hop_limit + 1]; self.n];
        dist[source][0] = 0;
        let mut heap = BinaryHeap::from([Reverse((0u64, source, 0usize))]);
        while let Some(Reverse((d, v, h))) = heap.pop() {
            if d > dist[v][h] || h == hop_limit {
                continue;
            }
            for &(u, w) in &adj[v] {
                if d + w < dist[u][h + 1] {
                    dist[u][h + 1] = d + w;
                    heap.push(Reverse((d + w, u, h + 1)));
                }
            }
        }
        dist.iter().map(|row| row.iter().copied().min().filter(|&c| c != u64::MAX)).collect()
    }
}

/// Name spans by enumeration: for each PROPN head, the widest interval
/// around it whose other tokens hang off it by flat/compound chains and
/// have their heads inside; spans inside a larger one are dropped.
pub fn name_spans_oracle(p: &DependencyParse) -> Vec<(usize, usize, u32)> {
    let n = p.tokens.len();
    let name_child = |c: usize, parent: u32| {
        let t = &p.tokens[c];
        t.head.target == parent && (t.head.label == "flat" || t.head.label == "compound")
    };
    let mut blocks = Vec::new();
    for h in 0..n {
        if p.tokens[h].upos != "PROPN" {
            continue;
        }
        let head = p.tokens[h].id();
        let mut closure: BTreeSet<u32> = BTreeSet::from([head]);
        loop {
            let add: Vec<u32> = (0..n)
                .filter(|&c| !closure.contains(&p.tokens[c].id()) && closure.iter().any(|&q| name_child(c, q)))
                .map(|c| p.tokens[c].id())
                .collect();
            if add.is_empty() {
                break;
            }
            closure.extend(add);
        }
        let mut widest = (h, h);
        for s in 0..=h {
            for e in h..n {
                let ids: BTreeSet<u32> = (s..=e).map(|i| p.tokens[i].id()).collect();
                let ok = (s..=e).all(|i| {
                    let t = &p.tokens[i];
                    t.id() == head || (closure.contains(&t.id()) && ids.contains(&t.head.target))
                });
                if ok && e - s > widest.1 - widest.0 {
                    widest = (s, e);
                }
            }
        }
        if widest.1 > widest.0 {
            blocks.push((widest.0, widest.1, head));
        }
    }
    let mut out: Vec<(usize, usize, u32)> = blocks
        .iter()
        .copied()
        .filter(|&(s, e, h)| !blocks.iter().any(|&(s2, e2, h2)| h2 != h && s2 <= s && e <= e2 && (s2, e2) != (s, e)))
        .collect();
    out.sort();
    out
}

/// A clause with coordinated subjects, verbs, objects and recipients;
/// `sizes[i]` is the conjunct count of slot i (1 = not coordinated).
pub fn coordinated_clause(sizes: [usize; 4]) -> DependencyParse {
    let mut rows: Vec<(String, String, String, String, u32, String)> = Vec::new();
    let push = |rows: &mut Vec<_>, s: String, l: &str, u: &str, x: &str, h: u32, lab: &str| {
        rows.push((s, l.to_string(), u.to_string(), x.to_string(), h, lab.to_string()));
        rows.len() as u32
    };
    // ids are assigned in order, so verbs are placed after the subjects
    let subj_first = 1u32;
    let verb_first = subj_first + 2 * sizes[0] as u32 - 1;
    let mut subj_ids = vec![];
    for i in 0..sizes[0] {
        if i > 0 {
            let next = rows.len() as u32 + 2;
            push(&mut rows, "and".into(), "and", "CCONJ", "CC", next, "cc");
        }
        let (h, lab) = if i == 0 { (verb_first, "nsubj") } else { (subj_first, "conj") };
        subj_ids.push(push(&mut rows, format!("S{i}"), &format!("s{i}"), "PROPN", "NNP", h, lab));
    }
    for i in 0..sizes[1] {
        if i > 0 {
            let next = rows.len() as u32 + 2;
            push(&mut rows, "and".into(), "and", "CCONJ", "CC", next, "cc");
        }
        let (h, lab) = if i == 0 { (0, "root") } else { (verb_first, "conj") };
        push(&mut rows, format!("v{i}"), &format!("v{i}"), "VERB", "VBZ", h, lab);
    }
    for (slot, label, prep) in [(2, "obj", None), (3, "obl", Some("to"))] {
        let mut first = 0;
        for i in 0..sizes[slot] {
            if i == 0 {
                if let Some(pr) = prep {
                    let next = rows.len() as u32 + 2;
                    push(&mut rows, pr.into(), pr, "ADP", "IN", next, "case");
                }
            } else {
                let next = rows.len() as u32 + 2;
                push(&mut rows, "and".into(), "and", "CCONJ", "CC", next, "cc");
            }
            let (h, lab) = if i == 0 { (verb_first, label) } else { (first, "conj") };
            let id = push(&mut rows, format!("o{slot}{i}"), &format!("o{slot}{i}"), "NOUN", "NN", h, lab);
            if i == 0 {
                first = id;
            }
        }
    }
    let borrowed: Vec<(&str, &str, &str, &str, u32, &str)> =
        rows.iter().map(|r| (r.0.as_str(), r.1.as_str(), r.2.as_str(), r.3.as_str(), r.4, r.5.as_str())).collect();
    build(&borrowed)
}

/// Random parse set for CoNLL-U round trips.
pub fn random_parse_set(rng: &mut ChaCha8Rng, sentence_id: u32) -> ParseSet {
    let n = rng.gen_range(1..=10);
    let ranks = rng.gen_range(1..=3);
    let upos = ["NOUN", "VERB", "PROPN", "DET", "AUX", "ADP"];
    let xpos = ["NN", "VBZ", "NNP", "DT", "VBD", "IN"];
    let mut confidences: Vec<f64> = (0..ranks).map(|_| rng.gen_range(1..=64) as f64 / 64.0).collect();
    confidences.sort_by(|a, b| b.total_cmp(a));
    let words: Vec<String> = (0..n).map(|i| format!("W{i}x{}", rng.gen_range(0..100))).collect();
    let parses = confidences
        .iter()
        .enumerate()
        .map(|(r, &conf)| {
            let heads = random_heads(rng, n);
            let labels = ["nsubj", "obj", "det", "obl:for", "flat"];
            let mut p =
                from_heads(sentence_id, r as u32 + 1, &labelled(&heads, |_| labels[rng.gen_range(0..5)].into()));
            p.confidence = conf;
            for t in &mut p.tokens {
                let i = t.id() as usize - 1;
                t.surface = words[i].clone();
                t.lemma = words[i].to_lowercase();
                let k = rng.gen_range(0..upos.len());
                t.upos = upos[k].into();
                t.xpos = xpos[k].into();
                if rng.gen_bool(0.5) {
                    let c = rng.gen_range(1..=32) as f64 / 32.0;
                    t.upos_kbest = vec![ScoredTag::new(t.upos.clone(), c), ScoredTag::new("X", (1.0 - c) / 2.0)];
                    t.upos_confidence = c;
                }
                if rng.gen_bool(0.3) {
                    t.xpos_confidence = rng.gen_range(1..=32) as f64 / 32.0;
                }
                if rng.gen_bool(0.2) {
                    t.ne_tag = "s_person".into();
                }
            }
            p
        })
        .collect();
    ParseSet { sent_id: sentence_id.to_string(), sentence_text: words.join(" "), parses }
}
