//! Where parses come from in interactive and serve mode: the parser
//! adapter over HTTP, or recorded fixture parses.

use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};
use std::sync::OnceLock;
use std::time::Duration;

use authoring::adapter::{FixtureParser, FixtureReparser, KBestEnvelope, ParseRequest, Parser, ReparseRequest};
use authoring::correction::{FixedTags, Reparser};
use authoring::parse::ParseSet;
use authoring::pipeline::{author, Resources, SentenceOutcome};
use authoring::{Error, Result};

#[derive(Debug)]
pub enum AdapterError {
    /// Nothing answered at the adapter address.
    Unreachable(String),
    /// The adapter answered, but not with a usable envelope.
    Failed(String),
}

/// Client for the parser adapter's `POST /parse` and `POST /reparse`.
/// Calls block; the HTTP client is built on first use.
#[derive(Debug)]
pub struct HttpAdapter {
    pub base: String,
    pub k: usize,
    client: OnceLock<reqwest::blocking::Client>,
}

impl HttpAdapter {
    pub fn new(base: &str, k: usize) -> HttpAdapter {
        HttpAdapter { base: base.trim_end_matches('/').to_string(), k, client: OnceLock::new() }
    }

    fn client(&self) -> &reqwest::blocking::Client {
        self.client.get_or_init(|| {
            reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(30))
                .connect_timeout(Duration::from_secs(2))
                .build()
                .expect("http client")
        })
    }

    fn post<B: serde::Serialize>(&self, path: &str, body: &B) -> std::result::Result<KBestEnvelope, AdapterError> {
        let url = format!("{}{path}", self.base);
        let resp = self.client().post(&url).json(body).send().map_err(|e| {
            if e.is_connect() || e.is_timeout() {
                AdapterError::Unreachable(format!("{url}: {e}"))
            } else {
                AdapterError::Failed(format!("{url}: {e}"))
            }
        })?;
        let status = resp.status();
        if !status.is_success() {
            let text = resp.text().unwrap_or_default();
            return Err(AdapterError::Failed(format!("{url}: {status} {text}")));
        }
        resp.json().map_err(|e| AdapterError::Failed(format!("{url}: bad envelope: {e}")))
    }

    pub fn parse(&self, sentence: &str, k: usize) -> std::result::Result<KBestEnvelope, AdapterError> {
        self.post("/parse", &ParseRequest { sentence: sentence.to_string(), k })
    }

    pub fn reparse(&self, sentence: &str, tags: &[FixedTags]) -> std::result::Result<KBestEnvelope, AdapterError> {
        self.post("/reparse", &ReparseRequest { sentence: sentence.to_string(), tags: tags.to_vec(), k: self.k })
    }
}

/// Read-only resources plus a parse source. Shared between requests.
pub struct Backend {
    pub resources: Resources,
    pub fixtures: FixtureParser,
    pub fixture_reparses: FixtureReparser,
    pub adapter: Option<HttpAdapter>,
    degraded: AtomicBool,
    next_id: AtomicU32,
}

impl Backend {
    /// Uses the adapter when one is configured and fixture mode is off.
    pub fn new(resources: Resources, fixtures: FixtureParser, fixture_reparses: FixtureReparser) -> Backend {
        let adapter = match (&resources.config.adapter_url, resources.config.fixture_mode) {
            (Some(url), false) => Some(HttpAdapter::new(url, resources.config.k)),
            _ => None,
        };
        let first_free =
            fixtures.sets.iter().flat_map(|s| s.parses.first()).map(|p| p.sentence_id()).max().unwrap_or(0);
        Backend {
            resources,
            fixtures,
            fixture_reparses,
            adapter,
            degraded: AtomicBool::new(false),
            next_id: AtomicU32::new(first_free + 1),
        }
    }

    /// True once the adapter has failed to answer and fixtures took over.
    pub fn degraded(&self) -> bool {
        self.degraded.load(Ordering::Relaxed)
    }

    fn live_adapter(&self) -> Option<&HttpAdapter> {
        self.adapter.as_ref().filter(|_| !self.degraded())
    }

    fn degrade(&self, why: &str) {
        if !self.degraded.swap(true, Ordering::Relaxed) {
            eprintln!("warning: parser adapter unreachable ({why}); continuing with fixture parses only");
        }
    }

    pub fn author_sentence(&self, sentence: &str) -> Result<SentenceOutcome> {
        let set = self.parse(sentence)?;
        author(&set, &self.resources, self)
    }

    /// Up to `k` ranked parses; fixtures answer with what was recorded.
    pub fn parse_k(&self, sentence: &str, k: usize) -> Result<ParseSet> {
        if let Some(a) = self.live_adapter() {
            match a.parse(sentence, k.max(1)) {
                Ok(env) => {
                    let n = self.next_id.fetch_add(1, Ordering::Relaxed);
                    return env.to_parse_set(&format!("i{n}"), n);
                }
                Err(AdapterError::Unreachable(why)) => self.degrade(&why),
                Err(AdapterError::Failed(why)) => return Err(Error::Input(format!("parser adapter: {why}"))),
            }
        }
        self.fixtures.parse(sentence)
    }
}

impl Parser for Backend {
    fn parse(&self, sentence: &str) -> Result<ParseSet> {
        self.parse_k(sentence, self.resources.config.k)
    }
}

impl Reparser for Backend {
    fn reparse(&self, sentence: &str, tags: &[FixedTags]) -> Result<ParseSet> {
        if let Some(a) = self.live_adapter() {
            match a.reparse(sentence, tags) {
                Ok(env) => return env.to_parse_set("reparse", 1),
                Err(AdapterError::Unreachable(why)) => self.degrade(&why),
                Err(AdapterError::Failed(why)) => return Err(Error::Reparse(why)),
            }
        }
        self.fixture_reparses.reparse(sentence, tags)
    }
}
