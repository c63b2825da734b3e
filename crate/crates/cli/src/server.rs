//! JSON over HTTP for the authoring UI.
//!
//! | method | path        | body                          | answer                 |
//! |--------|-------------|-------------------------------|------------------------|
//! | POST   | `/parse`    | `{"sentence", "k"?}`          | k-best envelope        |
//! | POST   | `/author`   | `{"sentence", "session"?}`    | [`AuthorResponse`]     |
//! | GET    | `/frames`   |                               | [`FramesResponse`]     |
//! | POST   | `/evaluate` | `{"system", "gold"}` ULR text | evaluation report      |
//!
//! Errors answer `{"error": "..."}` with 400 for malformed input and 422
//! when no parse is available for the sentence.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use authoring::adapter::{KBestEnvelope, ParseRequest};
use authoring::eval::{evaluate, read_document, EvalReport};
use authoring::frames::{write_lvp, Lvp};
use authoring::pipeline::{frame_names, SentenceOutcome, Session};
use authoring::ulr::serialize_ulr;
use authoring::Error;

use crate::backend::Backend;

pub struct AppState {
    pub backend: Backend,
    sessions: Mutex<HashMap<String, Session>>,
}

impl AppState {
    pub fn new(backend: Backend) -> Arc<AppState> {
        Arc::new(AppState { backend, sessions: Mutex::new(HashMap::new()) })
    }
}

#[derive(Debug, Deserialize)]
pub struct AuthorRequest {
    pub sentence: String,
    /// Facts of accepted sentences accumulate per session id.
    #[serde(default)]
    pub session: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Diagnostic {
    pub property_id: u8,
    pub token_id: u32,
    pub detail: String,
    /// `P<id>@<token>: <detail>`
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub sentences: usize,
    pub facts: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AuthorResponse {
    #[serde(flatten)]
    pub outcome: SentenceOutcome,
    /// The facts as ULR text.
    pub ulr: String,
    pub diagnostics: Vec<Diagnostic>,
    pub session: SessionSummary,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LvpEntry {
    pub term: String,
    #[serde(flatten)]
    pub lvp: Lvp,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FramesResponse {
    pub frames: Vec<String>,
    pub lvps: Vec<LvpEntry>,
}

#[derive(Debug, Deserialize)]
pub struct EvaluateRequest {
    pub system: String,
    pub gold: String,
}

pub struct ApiError(StatusCode, String);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Input(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

fn nonempty(sentence: &str) -> Result<&str, ApiError> {
    let s = sentence.trim();
    if s.is_empty() {
        return Err(ApiError(StatusCode::BAD_REQUEST, "empty sentence".into()));
    }
    Ok(s)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())))
}

async fn parse(
    State(st): State<Arc<AppState>>,
    Json(req): Json<ParseRequest>,
) -> Result<Json<KBestEnvelope>, ApiError> {
    let sentence = nonempty(&req.sentence)?.to_string();
    let set = blocking(move || Ok(st.backend.parse_k(&sentence, req.k)?)).await?;
    Ok(Json(KBestEnvelope::from_parse_set(&set)))
}

async fn author(
    State(st): State<Arc<AppState>>,
    Json(req): Json<AuthorRequest>,
) -> Result<Json<AuthorResponse>, ApiError> {
    let sentence = nonempty(&req.sentence)?.to_string();
    let worker = st.clone();
    let outcome = blocking(move || Ok(worker.backend.author_sentence(&sentence)?)).await?;
    let id = req.session.unwrap_or_else(|| "default".into());
    let session = {
        let mut sessions = st.sessions.lock().expect("session lock");
        let s = sessions.entry(id.clone()).or_default();
        s.record(&outcome);
        SessionSummary { id, sentences: s.accepted.len(), facts: s.fact_count() }
    };
    let mut ulr = serialize_ulr(&outcome.facts);
    if outcome.to_ulr().disjunctive {
        ulr.push_str("connective(or).\n");
    }
    let diagnostics = outcome
        .violations
        .iter()
        .map(|v| Diagnostic {
            property_id: v.property_id,
            token_id: v.token_id,
            detail: v.detail.clone(),
            text: v.to_string(),
        })
        .collect();
    Ok(Json(AuthorResponse { outcome, ulr, diagnostics, session }))
}

async fn frames(State(st): State<Arc<AppState>>) -> Json<FramesResponse> {
    let store = &st.backend.resources.store;
    Json(FramesResponse {
        frames: frame_names(store),
        lvps: store.lvps.iter().map(|l| LvpEntry { term: write_lvp(l), lvp: l.clone() }).collect(),
    })
}

async fn evaluate_docs(Json(req): Json<EvaluateRequest>) -> Result<Json<EvalReport>, ApiError> {
    let bad = |which: &str, e: Error| ApiError(StatusCode::BAD_REQUEST, format!("{which}: {e}"));
    let system = read_document(&req.system).map_err(|e| bad("system", e))?;
    let gold = read_document(&req.gold).map_err(|e| bad("gold", e))?;
    Ok(Json(evaluate(&system, &gold).map_err(|e| bad("evaluate", e))?))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/parse", post(parse))
        .route("/author", post(author))
        .route("/frames", get(frames))
        .route("/evaluate", post(evaluate_docs))
        .with_state(state)
}

/// Binds and serves in the background; returns the bound address.
pub async fn spawn(
    state: Arc<AppState>,
    addr: SocketAddr,
) -> std::io::Result<(SocketAddr, tokio::task::JoinHandle<()>)> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let handle = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, router(state)).await {
            eprintln!("error: server stopped: {e}");
        }
    });
    Ok((local, handle))
}

/// Serves until interrupted.
pub async fn serve(state: Arc<AppState>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
