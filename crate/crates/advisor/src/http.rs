//! HTTP JSON endpoints over advisor sessions.
//!
//! * `POST /sessions` with `{policy, interval: [a, b], horizon?, mode?}` → 201 and the view
//! * `GET /sessions/{id}` → the view
//! * `POST /sessions/{id}/results` with a [`Submission`] → the advanced view
//! * `GET /sessions/{id}/whatif?cell=j` → the interval cell `j` would produce
//!
//! Errors are `{error, message}` with 400 (malformed), 404 (unknown id),
//! 409 (stale submission) or 422 (values the search rejects).

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use blocksearch::{PolicySpec, QuadNum, Rational};
use num_traits::FromPrimitive;
use parking_lot::{Mutex, RwLock};
use serde::Deserialize;
use serde_json::{json, Value};
use uuid::Uuid;

use crate::events::{opening_events, EventLog};
use crate::session::{now_ms, Mode, Session, SessionError, Submission};

/// Sessions keyed by id. Each session has its own lock, so writes to one
/// session are serialized and reads see a state whose events are logged.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<Uuid, Arc<Mutex<Session>>>>>,
    log: Option<EventLog>,
}

impl AppState {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// State backed by logs in `dir`, restoring every session already logged there.
    pub fn with_log_dir(dir: impl Into<PathBuf>) -> Result<Self, SessionError> {
        let log = EventLog::open(dir)?;
        let sessions = log
            .load_all()?
            .into_iter()
            .map(|s| (s.id, Arc::new(Mutex::new(s))))
            .collect();
        Ok(AppState {
            sessions: Arc::new(RwLock::new(sessions)),
            log: Some(log),
        })
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let not_found = || ApiError(SessionError::NotFound(id.to_string()));
        let uuid = Uuid::parse_str(id).map_err(|_| not_found())?;
        self.sessions.read().get(&uuid).cloned().ok_or_else(not_found)
    }
}

pub struct ApiError(pub SessionError);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        use blocksearch::Error as E;
        let (status, kind) = match &self.0 {
            SessionError::NotFound(_) => (StatusCode::NOT_FOUND, "not_found"),
            SessionError::Stale(_) | SessionError::Search(E::Finished) => (StatusCode::CONFLICT, "stale"),
            SessionError::Malformed(_) => (StatusCode::BAD_REQUEST, "malformed"),
            SessionError::Search(E::ValueMismatch(_) | E::NotUnimodal(_)) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "rejected_values")
            }
            SessionError::Search(_) => (StatusCode::BAD_REQUEST, "invalid"),
            SessionError::Log(_) => (StatusCode::INTERNAL_SERVER_ERROR, "log"),
        };
        (status, Json(json!({ "error": kind, "message": self.0.to_string() }))).into_response()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/results", post(submit))
        .route("/sessions/{id}/whatif", get(what_if))
        .with_state(state)
}

/// Serves the advisor on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, log_dir: Option<PathBuf>) -> Result<(), Box<dyn std::error::Error>> {
    let state = match log_dir {
        Some(dir) => AppState::with_log_dir(dir)?,
        None => AppState::in_memory(),
    };
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await?;
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    policy: Value,
    interval: [Value; 2],
    #[serde(default)]
    horizon: Option<usize>,
    #[serde(default)]
    mode: Option<Mode>,
}

fn malformed(msg: impl ToString) -> ApiError {
    ApiError(SessionError::Malformed(msg.to_string()))
}

/// Reads an endpoint given as a JSON number or an exact string. Decimal
/// numbers are taken at their written value, not their binary rounding.
fn exact_endpoint(v: &Value) -> Result<QuadNum, ApiError> {
    match v {
        Value::String(s) => s.parse().map_err(malformed),
        Value::Number(n) => {
            let text = n.to_string();
            if let Ok(q) = text.parse::<QuadNum>() {
                return Ok(q);
            }
            n.as_f64()
                .and_then(Rational::from_f64)
                .map(QuadNum::rational)
                .ok_or_else(|| malformed(format!("endpoint {text} is not finite")))
        }
        other => Err(malformed(format!("endpoint must be a number or string, got {other}"))),
    }
}

fn fixed_horizon(p: &PolicySpec) -> Option<usize> {
    match p {
        PolicySpec::Fibonacci { horizon } | PolicySpec::OddBlockG { horizon, .. } => Some(*horizon),
        _ => None,
    }
}

async fn create(State(app): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = serde_json::from_slice(&body).map_err(malformed)?;
    let policy: PolicySpec = serde_json::from_value(req.policy).map_err(|e| malformed(format!("policy: {e}")))?;
    if let (Some(fixed), Some(h)) = (fixed_horizon(&policy), req.horizon) {
        if fixed != h {
            return Err(malformed(format!(
                "horizon {h} differs from the policy's {fixed} steps"
            )));
        }
    }
    let a = exact_endpoint(&req.interval[0])?;
    let b = exact_endpoint(&req.interval[1])?;
    let ts = now_ms();
    let session = Session::new(
        Uuid::new_v4(),
        policy,
        a,
        b,
        req.horizon,
        req.mode.unwrap_or_default(),
        ts,
    )?;
    if let Some(log) = &app.log {
        log.append(session.id, ts, &opening_events(&session))?;
    }
    let view = session.view();
    app.sessions.write().insert(session.id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn show(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = app.session(&id)?;
    let view = s.lock().view();
    Ok(Json(view).into_response())
}

async fn submit(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let s = app.session(&id)?;
    let sub: Submission = serde_json::from_slice(&body).map_err(malformed)?;
    let mut guard = s.lock();
    let values = guard.resolve(&sub)?;
    let ts = now_ms();
    let (next, events) = guard.advance(&values, ts)?;
    // log first, so a state the client sees is always recoverable
    if let Some(log) = &app.log {
        log.append(next.id, ts, &events)?;
    }
    *guard = next;
    Ok(Json(guard.view()).into_response())
}

#[derive(Deserialize)]
struct CellQuery {
    cell: Option<String>,
}

async fn what_if(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<CellQuery>,
) -> Result<Response, ApiError> {
    let s = app.session(&id)?;
    let cell: usize = q
        .cell
        .ok_or_else(|| malformed("missing `cell`"))?
        .parse()
        .map_err(|_| malformed("`cell` must be a non-negative integer"))?;
    let out = s.lock().what_if(cell)?;
    Ok(Json(out).into_response())
}
