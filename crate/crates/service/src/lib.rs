//! HTTP session API: create a shadow, toggle crossing choices and ask what
//! they force, whether they can still be realized, and what the weighted
//! resolution set and forcing number are.

mod error;
mod jobs;
mod payload;

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use dashmap::DashMap;
use plknot_core::analysis::{forcing_number_with, were_set_with, Mode};
use plknot_core::generators::{gen_random, gen_star, gen_torus};
use plknot_core::io::{read_shadow, write_shadow};
use plknot_core::realizability::CachedOracle;
use plknot_core::{CrossingAssignment, Error, Pseudodiagram};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use jobs::{Job, JobState};
pub use payload::{CrossingPayload, SessionPayload, StatusPayload};

#[derive(Debug)]
struct Session {
    diagram: Pseudodiagram,
    revision: u64,
}

#[derive(Default)]
pub struct AppState {
    sessions: DashMap<String, Arc<Mutex<Session>>>,
    jobs: DashMap<String, Arc<Job>>,
    counter: AtomicU64,
}

impl AppState {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    fn fresh_id(&self, prefix: &str) -> String {
        format!("{prefix}{:x}", self.counter.fetch_add(1, Ordering::Relaxed) + 1)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .get(id)
            .map(|s| Arc::clone(&s))
            .ok_or_else(|| ApiError::not_found(format!("no session {id}")))
    }

    /// Consistent copy of a session's diagram with the revision it belongs to.
    fn snapshot(&self, id: &str) -> Result<(Pseudodiagram, u64), ApiError> {
        let s = self.session(id)?;
        let guard = s.lock().expect("session lock");
        Ok((guard.diagram.clone(), guard.revision))
    }
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/:id", get(get_session))
        .route("/api/sessions/:id/document", get(get_document))
        .route("/api/sessions/:id/status", get(get_status))
        .route("/api/sessions/:id/crossings/:cid", put(set_assignment))
        .route("/api/sessions/:id/wereset", get(start_wereset))
        .route("/api/sessions/:id/forcing-number", get(start_forcing))
        .route("/api/jobs/:jid", get(get_job))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(), static_dir)).await
}

fn parse_json<'a, T: Deserialize<'a>>(body: &'a [u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| {
        ApiError::bad_request(format!("malformed request body: {e}"))
            .with_details(json!({"line": e.line(), "column": e.column()}))
    })
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GeneratorSpec {
    Star { n: usize },
    Torus { n: usize, #[serde(default = "two")] subdiv: usize },
    Random { vertices: usize, seed: u64 },
}

fn two() -> usize {
    2
}

/// Body is either a generator spec (has `"kind"`) or a shadow document.
async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let value: Value = parse_json(&body)?;
    let diagram = if value.get("kind").is_some() {
        let spec: GeneratorSpec =
            serde_json::from_value(value).map_err(|e| ApiError::bad_request(format!("bad generator spec: {e}")))?;
        let shadow = match spec {
            GeneratorSpec::Star { n } => gen_star(n),
            GeneratorSpec::Torus { n, subdiv } => gen_torus(n, subdiv),
            GeneratorSpec::Random { vertices, seed } => gen_random(vertices, seed),
        }?;
        Pseudodiagram::unassigned(Arc::new(shadow))
    } else {
        read_shadow(&body)?
    };
    let id = state.fresh_id("s");
    let payload = SessionPayload::new(&id, 0, &diagram);
    state.sessions.insert(id, Arc::new(Mutex::new(Session { diagram, revision: 0 })));
    Ok((StatusCode::CREATED, Json(payload)).into_response())
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionPayload>, ApiError> {
    let (d, rev) = state.snapshot(&id)?;
    Ok(Json(SessionPayload::new(&id, rev, &d)))
}

/// The session exported as a shadow document, byte for byte.
async fn get_document(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let (d, _) = state.snapshot(&id)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], write_shadow(&d)).into_response())
}

async fn status_for(d: Pseudodiagram, id: String, revision: u64) -> Result<Json<StatusPayload>, ApiError> {
    tokio::task::spawn_blocking(move || Json(StatusPayload::compute(&id, revision, &d)))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))
}

async fn get_status(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<StatusPayload>, ApiError> {
    let (d, rev) = state.snapshot(&id)?;
    status_for(d, id, rev).await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentRequest {
    value: Option<String>,
    revision: u64,
}

fn parse_value(v: Option<&str>) -> Result<Option<CrossingAssignment>, ApiError> {
    match v {
        None | Some("none") => Ok(None),
        Some("first_over") => Ok(Some(CrossingAssignment::FirstOver)),
        Some("second_over") => Ok(Some(CrossingAssignment::SecondOver)),
        Some(other) => Err(ApiError::bad_request(format!(
            "value must be first_over, second_over or none, got {other:?}"
        ))),
    }
}

async fn set_assignment(
    State(state): State<Arc<AppState>>,
    Path((id, cid)): Path<(String, String)>,
    body: Bytes,
) -> Result<Json<StatusPayload>, ApiError> {
    let req: AssignmentRequest = parse_json(&body)?;
    let value = parse_value(req.value.as_deref())?;
    let session = state.session(&id)?;
    let (d, rev) = {
        let mut s = session.lock().expect("session lock");
        let crossing: usize = cid
            .parse()
            .ok()
            .filter(|&c| c < s.diagram.shadow().num_crossings())
            .ok_or_else(|| ApiError::not_found(format!("no crossing {cid}")))?;
        if req.revision != s.revision {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "revision_conflict",
                format!("session is at revision {}, request was for {}", s.revision, req.revision),
            )
            .with_details(json!({"current_revision": s.revision})));
        }
        s.diagram.set(crossing, value)?;
        s.revision += 1;
        (s.diagram.clone(), s.revision)
    };
    status_for(d, id, rev).await
}

#[derive(Deserialize)]
struct JobQuery {
    mode: Option<String>,
    max_size: Option<usize>,
    wait_ms: Option<u64>,
}

/// How long a request waits for its job before answering 202.
const DEFAULT_WAIT_MS: u64 = 1000;

async fn start_wereset(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<JobQuery>,
) -> Result<Response, ApiError> {
    let mode: Mode = q.mode.as_deref().unwrap_or("pl").parse().map_err(ApiError::from)?;
    let (d, rev) = state.snapshot(&id)?;
    let job = Job::spawn(state.fresh_id("j"), "wereset", id, rev, move |progress| {
        let oracle = CachedOracle::new(Arc::clone(d.shadow_arc()));
        let w = were_set_with(&d, mode, &oracle, Some(progress))?;
        Ok(json!({"mode": mode, "were": w.to_string_map(), "completions": w.completions}))
    });
    state.jobs.insert(job.id.clone(), Arc::clone(&job));
    Ok(job.respond(q.wait_ms.unwrap_or(DEFAULT_WAIT_MS)).await)
}

async fn start_forcing(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<JobQuery>,
) -> Result<Response, ApiError> {
    let (d, rev) = state.snapshot(&id)?;
    if d.precrossings().is_empty() {
        return Err(Error::NoPrecrossings.into());
    }
    let max_size = q.max_size;
    let job = Job::spawn(state.fresh_id("j"), "forcing_number", id, rev, move |progress| {
        let oracle = CachedOracle::new(Arc::clone(d.shadow_arc()));
        let report = forcing_number_with(&d, max_size, &oracle, Some(progress))?;
        Ok(serde_json::to_value(report).expect("report serializes"))
    });
    state.jobs.insert(job.id.clone(), Arc::clone(&job));
    Ok(job.respond(q.wait_ms.unwrap_or(DEFAULT_WAIT_MS)).await)
}

async fn get_job(
    State(state): State<Arc<AppState>>,
    Path(jid): Path<String>,
    Query(q): Query<BTreeMap<String, String>>,
) -> Result<Response, ApiError> {
    let job = state
        .jobs
        .get(&jid)
        .map(|j| Arc::clone(&j))
        .ok_or_else(|| ApiError::not_found(format!("no job {jid}")))?;
    let wait = q.get("wait_ms").and_then(|w| w.parse().ok()).unwrap_or(0);
    Ok(job.respond(wait).await)
}

pub(crate) fn wait_duration(ms: u64) -> Duration {
    Duration::from_millis(ms.min(60_000))
}
