use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use authoring::adapter::FixtureParser;
use authoring::eval::{evaluate, read_document, write_document, EvalReport, SentenceUlr};
use authoring::frames::write_lvps;
use authoring::loader::{load_resources, load_store, read, read_conllu, LoadedConfig};
use authoring::pipeline::{author, SentenceOutcome, SentenceStatus, Session};
use authoring::ulr::serialize_ulr;

use crate::args::{BatchArgs, EvalArgs, SessionArgs, StoreArgs, TrainArgs};
use crate::backend::Backend;
use crate::CliError;

pub const ULR_FILE: &str = "out.ulr";
pub const JSON_FILE: &str = "out.json";
pub const REJECTS_FILE: &str = "rejects.txt";
pub const TOKEN_FACTS_FILE: &str = "token_facts.pl";

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Authors every sentence in parallel; results keep corpus order.
pub fn author_corpus(corpus: &Path, store: &StoreArgs) -> Result<Vec<SentenceOutcome>, CliError> {
    let (res, reparser) = load_resources(&store.train, &store.synsets, store.config.as_deref())?;
    let sets = read_conllu(corpus)?;
    let outcomes = sets.par_iter().map(|s| author(s, &res, &reparser)).collect::<authoring::Result<Vec<_>>>()?;
    Ok(outcomes)
}

#[derive(Debug, Serialize)]
struct JsonSentence<'a> {
    sent_id: &'a str,
    text: &'a str,
    status: SentenceStatus,
    disjunctive: bool,
    facts: &'a [authoring::ulr::UlrFact],
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<&'a str>,
}

fn rejects(outcomes: &[SentenceOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes.iter().filter(|o| o.status != SentenceStatus::Accepted) {
        let status = match o.status {
            SentenceStatus::Rejected => "rejected",
            _ => "unauthored",
        };
        out.push_str(&format!("{}\t{status}\t{}\n", o.sent_id, o.text));
        for v in &o.violations {
            out.push_str(&format!("  {v}\n"));
        }
        if let Some(m) = &o.message {
            out.push_str(&format!("  {m}\n"));
        }
    }
    out
}

/// Writes the ULR document, its JSON mirror, the rejects list and the
/// token facts of every sentence into `out`.
pub fn write_batch(outcomes: &[SentenceOutcome], out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let docs: Vec<SentenceUlr> = outcomes.iter().map(|o| o.to_ulr()).collect();
    write_file(&out.join(ULR_FILE), &write_document(&docs))?;
    let json: Vec<JsonSentence> = outcomes
        .iter()
        .map(|o| JsonSentence {
            sent_id: &o.sent_id,
            text: &o.text,
            status: o.status,
            disjunctive: o.to_ulr().disjunctive,
            facts: &o.facts,
            violations: o.violations.iter().map(|v| v.to_string()).collect(),
            message: o.message.as_deref(),
        })
        .collect();
    write_file(&out.join(JSON_FILE), &(serde_json::to_string_pretty(&json).expect("serializable") + "\n"))?;
    write_file(&out.join(REJECTS_FILE), &rejects(outcomes))?;
    let facts: String = outcomes.iter().map(|o| o.token_facts.as_str()).collect();
    write_file(&out.join(TOKEN_FACTS_FILE), &facts)
}

/// One line per rewrite: `{"sent_id": ..., "rule": ..., "tokens": ..., "edits": ...}`.
pub fn trace_log(outcomes: &[SentenceOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        for entry in o.trace.iter().flat_map(|t| &t.entries) {
            let mut line = serde_json::to_value(entry).expect("serializable");
            line.as_object_mut().expect("object").insert("sent_id".into(), o.sent_id.clone().into());
            out.push_str(&line.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn batch(args: &BatchArgs) -> Result<String, CliError> {
    let outcomes = author_corpus(&args.corpus, &args.store)?;
    write_batch(&outcomes, &args.out)?;
    if let Some(p) = &args.trace {
        write_file(p, &trace_log(&outcomes))?;
    }
    let accepted = outcomes.iter().filter(|o| o.status == SentenceStatus::Accepted).count();
    Ok(format!(
        "{} sentences: {accepted} accepted, {} not; outputs in {}",
        outcomes.len(),
        outcomes.len() - accepted,
        args.out.display()
    ))
}

pub fn load_backend(args: &SessionArgs) -> Result<Backend, CliError> {
    let (res, reparser) = load_resources(&args.store.train, &args.store.synsets, args.store.config.as_deref())?;
    let fixtures = match &args.corpus {
        Some(p) => FixtureParser::new(read_conllu(p)?),
        None => FixtureParser::default(),
    };
    if res.config.fixture_mode && fixtures.sets.is_empty() {
        eprintln!("warning: fixture mode without --corpus; only recorded parses can be authored, and there are none");
    }
    Ok(Backend::new(res, fixtures, reparser))
}

/// Human-readable result for one sentence.
pub fn render_outcome(o: &SentenceOutcome) -> String {
    match o.status {
        SentenceStatus::Accepted => {
            let mut s = serialize_ulr(&o.facts);
            if o.to_ulr().disjunctive {
                s.push_str("connective(or).\n");
            }
            s
        }
        SentenceStatus::Rejected => {
            let mut s = String::from("rejected: the sentence is not factual as parsed\n");
            for v in &o.violations {
                s.push_str(&format!("  {v}\n"));
            }
            if let Some(m) = &o.message {
                s.push_str(&format!("  {m}\n"));
            }
            s.push_str("please rephrase the sentence\n");
            s
        }
        SentenceStatus::Unauthored => {
            format!(
                "no interpretation: {}\nplease rephrase the sentence\n",
                o.message.as_deref().unwrap_or("no frame triggered")
            )
        }
    }
}

/// One sentence per line. `:facts` prints the session so far, `:quit`
/// ends it. Returns the session.
pub fn interactive(backend: &Backend, input: impl BufRead, mut output: impl Write) -> Result<Session, CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let mut session = Session::default();
    for line in input.lines() {
        let line = line.map_err(io)?;
        let sentence = line.trim();
        match sentence {
            "" => continue,
            ":quit" => break,
            ":facts" => {
                write!(output, "{}", write_document(&session.accepted)).map_err(io)?;
                writeln!(output, "% {} facts", session.fact_count()).map_err(io)?;
                continue;
            }
            _ => {}
        }
        match backend.author_sentence(sentence) {
            Ok(o) => {
                session.record(&o);
                write!(output, "{}", render_outcome(&o)).map_err(io)?;
            }
            Err(e) => writeln!(output, "error: {e}").map_err(io)?,
        }
        output.flush().map_err(io)?;
    }
    Ok(session)
}

fn read_ulr(path: &Path) -> Result<Vec<SentenceUlr>, CliError> {
    read_document(&read(path)?).map_err(|e| match e {
        authoring::Error::Syntax { line, message } => CliError::Io(format!("{}:{line}: {message}", path.display())),
        other => other.into(),
    })
}

pub fn eval(args: &EvalArgs) -> Result<(EvalReport, String), CliError> {
    let gold = read_ulr(&args.gold)?;
    let system = match (&args.system, &args.corpus) {
        (Some(s), _) => read_ulr(s)?,
        (None, Some(corpus)) => {
            let store = StoreArgs {
                train: args.train.clone().expect("required by clap"),
                synsets: args.synsets.clone().expect("required by clap"),
                config: args.config.clone(),
            };
            author_corpus(corpus, &store)?.iter().map(|o| o.to_ulr()).collect()
        }
        (None, None) => {
            return Err(CliError::Usage("eval needs --system or --corpus with --train and --synsets".into()))
        }
    };
    let report = evaluate(&system, &gold)?;
    if let Some(out) = &args.out {
        write_file(out, &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"))?;
    }
    let summary = format!(
        "sentences {}\nframe_f1 {:.4}\nrole_f1 {:.4}\nsynset_f1 {:.4}",
        report.sentences.len(),
        report.frame_f1,
        report.role_f1,
        report.synset_f1
    );
    Ok((report, summary))
}

pub fn train(args: &TrainArgs) -> Result<String, CliError> {
    let cfg = LoadedConfig::load(args.config.as_deref())?;
    let store = load_store(&args.train, &cfg, &cfg.lexicon()?)?;
    let text = write_lvps(&store.lvps);
    match &args.out {
        Some(p) => {
            write_file(p, &text)?;
            Ok(format!("{} patterns written to {}", store.len(), p.display()))
        }
        None => Ok(text),
    }
}
