use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn authoring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_authoring")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn batch(out: &Path) -> Output {
    let f = fixtures();
    let trace = out.with_extension("jsonl");
    authoring(&[
        "batch",
        "--corpus",
        path(&f.join("corpus.conllu")),
        "--train",
        path(&f.join("train.pl")),
        "--synsets",
        path(&f.join("synsets.txt")),
        "--config",
        path(&f.join("authoring.conf")),
        "--out",
        path(out),
        "--trace",
        path(&trace),
    ])
}

fn block<'a>(doc: &'a str, id: &str) -> &'a str {
    let start = doc.find(&format!("% sent_id = {id}\n")).unwrap();
    let rest = &doc[start..];
    &rest[..rest.find("\n\n").map_or(rest.len(), |i| i + 1)]
}

#[test]
fn batch_writes_all_outputs_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(batch(&a).status.code(), Some(0));
    assert_eq!(batch(&b).status.code(), Some(0));
    for file in ["out.ulr", "out.json", "rejects.txt", "token_facts.pl"] {
        let x = std::fs::read(a.join(file)).unwrap();
        assert!(!x.is_empty(), "{file}");
        assert_eq!(x, std::fs::read(b.join(file)).unwrap(), "{file}");
    }
    let ulr = std::fs::read_to_string(a.join("out.ulr")).unwrap();
    let golden = std::fs::read_to_string(fixtures().join("golden/ulr_adnominal.pl")).unwrap();
    assert!(block(&ulr, "s06").ends_with(&golden));
    let rejects = std::fs::read_to_string(a.join("rejects.txt")).unwrap();
    assert!(rejects.contains("s07\trejected\tGo fetch more water\n  P1@1:"));
    assert!(rejects.contains("s40\tunauthored"));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("out.json")).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 40);
    assert_eq!(json[0]["facts"][0]["frame"], "Commerce_buy");
    let trace = std::fs::read_to_string(dir.path().join("a.jsonl")).unwrap();
    assert_eq!(trace, std::fs::read_to_string(dir.path().join("b.jsonl")).unwrap());
    let lines: Vec<serde_json::Value> = trace.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.iter().any(|l| l["sent_id"] == "s03" && l["rule"].is_string()));
}

#[test]
fn empty_corpus_gives_empty_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.conllu");
    std::fs::write(&corpus, "").unwrap();
    let f = fixtures();
    let out = dir.path().join("out");
    let o = authoring(&[
        "batch",
        "--corpus",
        path(&corpus),
        "--train",
        path(&f.join("train.pl")),
        "--synsets",
        path(&f.join("synsets.txt")),
        "--config",
        path(&f.join("authoring.conf")),
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(out.join("out.ulr")).unwrap(), "");
    assert_eq!(std::fs::read_to_string(out.join("out.json")).unwrap(), "[]\n");
}

#[test]
fn exit_codes() {
    assert_eq!(authoring(&[]).status.code(), Some(1));
    assert_eq!(authoring(&["batch", "--corpus", "x"]).status.code(), Some(1));
    assert_eq!(authoring(&["--help"]).status.code(), Some(0));
    let f = fixtures();
    let dir = tempfile::tempdir().unwrap();
    let o = authoring(&[
        "batch",
        "--corpus",
        "/definitely/missing.conllu",
        "--train",
        path(&f.join("train.pl")),
        "--synsets",
        path(&f.join("synsets.txt")),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.conllu"));
    let bad = dir.path().join("bad.ulr");
    std::fs::write(&bad, "% sent_id = a\nulr(broken\n").unwrap();
    let o = authoring(&["eval", "--gold", path(&bad), "--system", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.ulr:2"));
}

#[test]
fn eval_scores_toy_and_corpus() {
    let f = fixtures();
    let o = authoring(&["eval", "--gold", path(&f.join("toy/gold.ulr")), "--system", path(&f.join("toy/system.ulr"))]);
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(out, "sentences 5\nframe_f1 0.8000\nrole_f1 0.6000\nsynset_f1 0.6000\n");

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = authoring(&[
        "eval",
        "--gold",
        path(&f.join("gold.ulr")),
        "--corpus",
        path(&f.join("corpus.conllu")),
        "--train",
        path(&f.join("train.pl")),
        "--synsets",
        path(&f.join("synsets.txt")),
        "--config",
        path(&f.join("authoring.conf")),
        "--out",
        path(&report),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["synset_f1"], 1.0);
    assert_eq!(r["sentences"].as_array().unwrap().len(), 40);
}

#[test]
fn train_writes_patterns() {
    let f = fixtures();
    let o = authoring(&["train", "--train", path(&f.join("train.pl")), "--config", path(&f.join("authoring.conf"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains(
        "lvp(buy,verb,'Commerce_buy',[pattern('Buyer','verb->nsubj',required),pattern('Goods','verb->obj',required)"
    ));
    assert!(out.contains("lvp(pick_up,verb,'Getting'"));
}

#[test]
fn interactive_session() {
    let f = fixtures();
    let mut child = Command::new(env!("CARGO_BIN_EXE_authoring"))
        .args([
            "interactive",
            "--train",
            path(&f.join("train.pl")),
            "--synsets",
            path(&f.join("synsets.txt")),
            "--config",
            path(&f.join("authoring.conf")),
            "--corpus",
            path(&f.join("corpus.conllu")),
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"Mary buys a car\n\n   \nGo fetch more water\nSomething never recorded\n:facts\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("ulr(fid_1,'Commerce_buy',[role(rid_1,'Buyer',mary,'bn:00046516n'),role(rid_2,'Goods',car,'bn:00007309n')]).")
    );
    assert_eq!(lines.next(), Some("rejected: the sentence is not factual as parsed"));
    assert!(out.contains("  P1@1: main verb `Go`"));
    assert!(out.contains("please rephrase the sentence"));
    assert!(out.contains("error: no fixture parse for 'Something never recorded'"));
    assert!(out.ends_with("% 1 facts\n"));
}

#[test]
fn unreachable_adapter_warns_and_falls_back() {
    let f = fixtures();
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("live.conf");
    let base =
        std::fs::read_to_string(f.join("authoring.conf")).unwrap().replace("fixture_mode=true", "fixture_mode=false");
    let base = base
        .lines()
        .map(|l| match l.split_once('=') {
            Some((k @ ("lexicon" | "reparse_fixtures" | "train_parses"), v)) => format!("{k}={}", f.join(v).display()),
            _ => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(&conf, format!("{base}\nadapter_url=http://127.0.0.1:1\n")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_authoring"))
        .args([
            "interactive",
            "--train",
            path(&f.join("train.pl")),
            "--synsets",
            path(&f.join("synsets.txt")),
            "--config",
            path(&conf),
            "--corpus",
            path(&f.join("corpus.conllu")),
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"Mary buys a car\nJohn lives in the country\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.matches("warning: parser adapter unreachable").count(), 1, "{err}");
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("'Commerce_buy'") && out.contains("'Residence'"));
}
