//! HTTP/JSON front end for semi-automatic sessions.
//!
//! Sessions live in memory only and are evicted least-recently-used once the
//! store is full. Each session sits behind its own lock, so resolutions on one
//! session are applied one at a time while other sessions proceed.

use std::net::SocketAddr;
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lru::LruCache;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use crate::compare::{CompareOptions, ComparisonReport};
use crate::merge::{Choice, Conflict, Session, SessionError, SessionState};
use crate::model::FeatureModel;
use crate::xml::{parse_xml, serialize_xml, ParseDiagnostic};

pub const DEFAULT_PORT: u16 = 8087;
pub const DEFAULT_HOST: &str = "127.0.0.1";
pub const DEFAULT_CAPACITY: usize = 64;
pub const DEFAULT_MAX_MODEL_BYTES: usize = 1024 * 1024;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub host: String,
    pub port: u16,
    /// Live sessions kept before the least recently used is dropped.
    pub capacity: usize,
    /// Per-model payload limit.
    pub max_model_bytes: usize,
    /// Allow any origin. Off by default.
    pub permissive_cors: bool,
    /// Directory served at `/` (the UI bundle).
    pub static_dir: Option<PathBuf>,
    pub defaults: CompareOptions,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            host: DEFAULT_HOST.to_owned(),
            port: DEFAULT_PORT,
            capacity: DEFAULT_CAPACITY,
            max_model_bytes: DEFAULT_MAX_MODEL_BYTES,
            permissive_cors: false,
            static_dir: None,
            defaults: CompareOptions::default(),
        }
    }
}

type Shared = Arc<Mutex<Session>>;

pub struct SessionStore {
    sessions: Mutex<LruCache<String, Shared>>,
}

impl SessionStore {
    pub fn new(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity).unwrap_or(NonZeroUsize::MIN);
        Self { sessions: Mutex::new(LruCache::new(cap)) }
    }

    pub fn insert(&self, session: Session) -> String {
        let id = session.id.clone();
        self.sessions.lock().expect("store lock").put(id.clone(), Arc::new(Mutex::new(session)));
        id
    }

    pub fn get(&self, id: &str) -> Option<Shared> {
        self.sessions.lock().expect("store lock").get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone)]
struct AppState {
    store: Arc<SessionStore>,
    max_model_bytes: usize,
    defaults: CompareOptions,
}

#[derive(Debug, Deserialize)]
struct CreateRequest {
    #[serde(alias = "baseXml")]
    base_xml: String,
    #[serde(alias = "otherXml")]
    other_xml: String,
    tau: Option<f64>,
    theta: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct ResolveRequest {
    choice: Choice,
}

#[derive(Debug, Serialize)]
struct SessionView<'a> {
    session_id: &'a str,
    state: SessionState,
    report: &'a ComparisonReport,
    conflicts: &'a [Conflict],
    pending: Vec<u32>,
    base: &'a FeatureModel,
    other: &'a FeatureModel,
    post_report: Option<&'a ComparisonReport>,
}

impl<'a> SessionView<'a> {
    fn of(s: &'a Session) -> Self {
        Self {
            session_id: &s.id,
            state: s.state,
            report: &s.report,
            conflicts: &s.conflicts,
            pending: s.pending(),
            base: &s.base,
            other: &s.other,
            post_report: s.post_report.as_ref(),
        }
    }
}

struct ApiError(StatusCode, serde_json::Value);

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self(status, json!({ "error": message.into() }))
    }

    fn not_found(what: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("{what} not found"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::UnknownConflict(_) => Self::new(StatusCode::NOT_FOUND, e.to_string()),
            SessionError::UnresolvedConflicts(ref ids) => {
                Self(StatusCode::CONFLICT, json!({ "error": e.to_string(), "unresolved": ids }))
            }
            SessionError::Model(_) => Self::new(StatusCode::BAD_REQUEST, e.to_string()),
            _ => Self::new(StatusCode::CONFLICT, e.to_string()),
        }
    }
}

fn parse_model(which: &str, xml: &str, limit: usize) -> Result<FeatureModel, ApiError> {
    if xml.len() > limit {
        return Err(ApiError::new(
            StatusCode::PAYLOAD_TOO_LARGE,
            format!("{which} model is {} bytes, limit is {limit}", xml.len()),
        ));
    }
    parse_xml(xml.as_bytes()).map(|p| p.model).map_err(|f| {
        let diagnostics: Vec<&ParseDiagnostic> = f.diagnostics.iter().collect();
        ApiError(
            StatusCode::BAD_REQUEST,
            json!({ "error": format!("{which} model could not be parsed"), "model": which, "diagnostics": diagnostics }),
        )
    })
}

fn json_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("malformed body: {e}")))
}

fn lookup(state: &AppState, id: &str) -> Result<Shared, ApiError> {
    state.store.get(id).ok_or_else(|| ApiError::not_found("session"))
}

fn threshold(name: &str, v: Option<f64>, default: f64) -> Result<f64, ApiError> {
    match v {
        None => Ok(default),
        Some(x) if x > 0.0 && x <= 1.0 => Ok(x),
        Some(x) => Err(ApiError::new(StatusCode::BAD_REQUEST, format!("{name} must be in (0, 1], got {x}"))),
    }
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = json_body(&body)?;
    let options = CompareOptions {
        name_threshold: threshold("tau", req.tau, state.defaults.name_threshold)?,
        mode_threshold: threshold("theta", req.theta, state.defaults.mode_threshold)?,
    };
    let base = parse_model("base", &req.base_xml, state.max_model_bytes)?;
    let other = parse_model("other", &req.other_xml, state.max_model_bytes)?;
    let session = Session::start(base, other, options)?;
    let body = serde_json::to_value(SessionView::of(&session)).expect("session view serializes");
    state.store.insert(session);
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let shared = lookup(&state, &id)?;
    let s = shared.lock().expect("session lock");
    Ok(Json(SessionView::of(&s)).into_response())
}

async fn resolve_conflict(
    State(state): State<AppState>,
    Path((id, cid)): Path<(String, String)>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let shared = lookup(&state, &id)?;
    let cid: u32 = cid.parse().map_err(|_| ApiError::not_found("conflict"))?;
    let req: ResolveRequest = json_body(&body)?;
    let mut s = shared.lock().expect("session lock");
    let conflict = s.resolve(cid, req.choice)?.clone();
    Ok(Json(conflict).into_response())
}

async fn finalize(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let shared = lookup(&state, &id)?;
    let mut s = shared.lock().expect("session lock");
    let merged = s.finalize()?.clone();
    let xml = String::from_utf8(serialize_xml(&merged)).expect("writer emits UTF-8");
    Ok(Json(json!({
        "session_id": s.id,
        "state": s.state,
        "merged_xml": xml,
        "merged_model": merged,
        "post_report": s.post_report,
    }))
    .into_response())
}

async fn merged_xml(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let shared = lookup(&state, &id)?;
    let s = shared.lock().expect("session lock");
    match &s.merged_model {
        Some(m) if s.state == SessionState::Finalized => {
            Ok(([(header::CONTENT_TYPE, "application/xml; charset=utf-8")], serialize_xml(m)).into_response())
        }
        _ => Err(ApiError::new(StatusCode::CONFLICT, format!("session is {}, not finalized", s.state))),
    }
}

async fn placeholder() -> Html<&'static str> {
    Html(
        "<!doctype html><html><head><meta charset=\"utf-8\"><title>fmit</title></head>\
         <body><h1>fmit</h1><p>The JSON API lives under <code>/api/sessions</code>.</p></body></html>",
    )
}

pub fn router(config: &ServerConfig) -> Router {
    router_with_store(config, Arc::new(SessionStore::new(config.capacity)))
}

/// Like [`router`] but over a caller-owned store, handy for inspection.
pub fn router_with_store(config: &ServerConfig, store: Arc<SessionStore>) -> Router {
    let state = AppState { store, max_model_bytes: config.max_model_bytes, defaults: config.defaults };
    // two models plus JSON framing; anything bigger cannot be valid
    let body_limit = config.max_model_bytes.saturating_mul(2).saturating_add(64 * 1024);
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/conflicts/{cid}/resolution", post(resolve_conflict))
        .route("/api/sessions/{id}/finalize", post(finalize))
        .route("/api/sessions/{id}/merged.xml", get(merged_xml))
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(state);
    let app = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)),
    };
    if config.permissive_cors {
        app.layer(CorsLayer::permissive())
    } else {
        app
    }
}

/// Binds and serves until the process is stopped.
pub async fn serve(config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((config.host.as_str(), config.port)).await?;
    let addr: SocketAddr = listener.local_addr()?;
    eprintln!("fmit listening on http://{addr}");
    serve_on(listener, &config).await
}

/// Serves on an already bound listener; `host` and `port` are ignored.
pub async fn serve_on(listener: tokio::net::TcpListener, config: &ServerConfig) -> std::io::Result<()> {
    axum::serve(listener, router(config)).await
}
