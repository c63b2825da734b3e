//! Browser demo of the authoring pipeline. Every export takes text and
//! answers a JSON string; failures answer `{"error": "..."}`.

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use authoring::adapter::{FixtureParser, FixtureReparser, Parser};
use authoring::conllu::{ingest_conllu, write_conllu, IngestOptions};
use authoring::facts::export_token_facts;
use authoring::factuality::{check_factual, Violation};
use authoring::loader::ResourceTexts;
use authoring::paraparse::paraparse;
use authoring::parse::{DependencyParse, ParseSet};
use authoring::pipeline::{author as author_set, Resources, SentenceOutcome};
use authoring::ulr::serialize_ulr;

const CONFIG: &str = include_str!("../../../fixtures/authoring.conf");
const TRAIN: &str = include_str!("../../../fixtures/train.pl");
const TRAIN_PARSES: &str = include_str!("../../../fixtures/train.conllu");
const SYNSETS: &str = include_str!("../../../fixtures/synsets.txt");
const LEXICON: &str = include_str!("../../../fixtures/lexicon.tsv");
const REPARSES: &str = include_str!("../../../fixtures/reparses.conllu");
const CORPUS: &str = include_str!("../../../fixtures/corpus.conllu");

struct Demo {
    resources: Resources,
    reparser: FixtureReparser,
    corpus: FixtureParser,
}

fn demo() -> &'static Demo {
    static DEMO: OnceLock<Demo> = OnceLock::new();
    DEMO.get_or_init(|| {
        let texts = ResourceTexts {
            config: Some(CONFIG),
            train: TRAIN,
            train_parses: TRAIN_PARSES,
            synsets: SYNSETS,
            lexicon: Some(LEXICON),
            reparses: Some(REPARSES),
        };
        let (resources, reparser) = texts.build().expect("bundled resources load");
        let corpus =
            FixtureParser::new(ingest_conllu(CORPUS, &IngestOptions::default()).expect("bundled corpus loads"));
        Demo { resources, reparser, corpus }
    })
}

#[derive(Serialize)]
struct Arc {
    head: u32,
    label: String,
}

#[derive(Serialize)]
struct TokenView {
    id: u32,
    form: String,
    lemma: String,
    upos: String,
    xpos: String,
    status: authoring::parse::Validation,
    /// Primary head first.
    heads: Vec<Arc>,
}

fn tokens(parse: &DependencyParse) -> Vec<TokenView> {
    parse
        .tokens
        .iter()
        .map(|t| TokenView {
            id: t.id(),
            form: t.surface.clone(),
            lemma: t.lemma.clone(),
            upos: t.upos.clone(),
            xpos: t.xpos.clone(),
            status: t.validation,
            heads: std::iter::once(&t.head)
                .chain(&t.extra_heads)
                .map(|e| Arc { head: e.target, label: e.label.clone() })
                .collect(),
        })
        .collect()
}

fn diagnostics(violations: &[Violation]) -> Value {
    violations
        .iter()
        .map(|v| json!({"property_id": v.property_id, "token_id": v.token_id, "detail": v.detail, "text": v.to_string()}))
        .collect()
}

fn answer(r: authoring::Result<Value>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

fn ingest(conllu: &str) -> authoring::Result<Vec<ParseSet>> {
    ingest_conllu(conllu, &IngestOptions::default())
}

/// Texts of the bundled sentences.
#[wasm_bindgen]
pub fn sentences() -> String {
    json!(demo().corpus.sets.iter().map(|s| &s.sentence_text).collect::<Vec<_>>()).to_string()
}

/// Extended CoNLL-U of the bundled sentence with this text.
#[wasm_bindgen]
pub fn sample_conllu(sentence: &str) -> String {
    demo().corpus.lookup(sentence).map(write_conllu).unwrap_or_default()
}

/// Runs the factuality checks on the best parse of every sentence.
#[wasm_bindgen]
pub fn check(conllu: &str) -> String {
    answer(ingest(conllu).map(|sets| {
        sets.iter()
            .map(|s| {
                let (verdict, tagged) = check_factual(s.best());
                json!({
                    "sent_id": s.sent_id,
                    "text": s.sentence_text,
                    "accepted": verdict.accepted,
                    "diagnostics": diagnostics(&verdict.violations),
                    "tokens": tokens(&tagged),
                    "token_facts": export_token_facts(&tagged),
                })
            })
            .collect()
    }))
}

/// Paraparses the best parse of every sentence; one entry per variant.
#[wasm_bindgen]
pub fn rewrite(conllu: &str) -> String {
    let lexicon = &demo().resources.lexicon;
    answer(ingest(conllu).and_then(|sets| {
        sets.iter()
            .map(|s| {
                let variants = paraparse(s.best(), lexicon)?
                    .iter()
                    .map(|v| json!({"tokens": tokens(&v.parse), "trace": v.trace}))
                    .collect::<Vec<_>>();
                Ok(json!({"sent_id": s.sent_id, "text": s.sentence_text, "before": tokens(s.best()), "variants": variants}))
            })
            .collect()
    }))
}

fn outcome_view(o: &SentenceOutcome) -> Value {
    let mut ulr = serialize_ulr(&o.facts);
    if o.to_ulr().disjunctive {
        ulr.push_str("connective(or).\n");
    }
    json!({
        "sent_id": o.sent_id,
        "text": o.text,
        "status": o.status,
        "ulr": ulr,
        "diagnostics": diagnostics(&o.violations),
        "message": o.message,
        "tokens": o.parse.as_ref().map(tokens),
        "trace": o.trace,
    })
}

/// Authors a bundled sentence given by its text, or every sentence of
/// CoNLL-U input.
#[wasm_bindgen]
pub fn author(input: &str) -> String {
    let d = demo();
    let sets = if input.trim_start().starts_with('#') || input.contains('\t') {
        ingest(input)
    } else {
        d.corpus.parse(input).map(|s| vec![s])
    };
    answer(
        sets.and_then(|sets| {
            sets.iter().map(|s| Ok(outcome_view(&author_set(s, &d.resources, &d.reparser)?))).collect()
        }),
    )
}
