//! Session-oriented JSON API over HTTP.
//!
//! Sessions live in memory and are evicted after `ttl` without requests.
//! Requests to one session are serialized; distinct sessions run
//! concurrently.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::{BudgetSchedule, GameState, RoundRecord};
use crate::error::Error;
use crate::lattice::{Lattice, Vertex};
use crate::solver::{self, SolveOptions};
use crate::strategies::{self, Strategy, StrategySpec};

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub max_window: u32,
    pub max_vertices: u64,
    pub ttl: Duration,
    /// Views of games with more vertices than this are sent as deltas.
    pub full_view_limit: usize,
    pub hint_cap: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_window: 4096,
            max_vertices: 1 << 26,
            ttl: Duration::from_secs(30 * 60),
            full_view_limit: 5000,
            hint_cap: solver::DEFAULT_CAP,
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    detail: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, detail: impl Into<String>) -> ApiError {
        ApiError { status, code: code.to_string(), detail: detail.into() }
    }

    fn not_found(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "NotFound", format!("no session '{id}'"))
    }

    fn bad_request(detail: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", detail)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        let status = match e {
            Error::InvalidVertex(..)
            | Error::InvalidLattice(_)
            | Error::InvalidParams(_)
            | Error::UnknownStrategy(_) => StatusCode::BAD_REQUEST,
            Error::TooLarge { .. } => StatusCode::PAYLOAD_TOO_LARGE,
            Error::Numeric(_) | Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::CONFLICT,
        };
        ApiError { status, code: e.code().to_string(), detail: e.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"error": self.code, "detail": self.detail}))).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    lattice: Lattice,
    fires: Vec<Value>,
    #[serde(default)]
    schedule: Option<BudgetSchedule>,
    #[serde(default)]
    strategy: Option<StrategySpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "action", rename_all = "camelCase")]
enum Action {
    Protect { vertices: Vec<Value> },
    EndTurn,
    StepStrategy,
    Fork,
    UndoToTurn { turn: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Change {
    Protected,
    Ignited,
}

type Playback = (StrategySpec, Box<dyn Strategy>);

struct Session {
    id: String,
    parent: Option<String>,
    initial: GameState,
    state: GameState,
    rounds: Vec<RoundRecord>,
    pending: Vec<Vertex>,
    strategy: Option<Playback>,
    version: u64,
    // versions at or below this cannot be served as deltas (after an undo)
    reset_version: u64,
    log: Vec<(u64, Change, Vertex)>,
    last_used: Instant,
}

impl Session {
    fn record(&mut self, kind: Change, vs: &[Vertex]) {
        self.version += 1;
        for &v in vs {
            self.log.push((self.version, kind, v));
        }
    }

    fn end_round(&mut self, ignited: Vec<Vertex>) {
        let turn = self.state.turn;
        self.record(Change::Ignited, &ignited);
        self.rounds.push(RoundRecord { turn, protected: std::mem::take(&mut self.pending), ignited });
    }

    /// Rebuilds the state after `upto` rounds. A playback strategy is rebuilt
    /// from its spec and shown every replayed position so its cursors match.
    fn rebuild(
        initial: &GameState,
        rounds: &[RoundRecord],
        spec: Option<&StrategySpec>,
    ) -> crate::Result<(GameState, Option<Playback>)> {
        let mut st = initial.clone();
        let mut strat = spec.map(|s| strategies::build(s).map(|b| (s.clone(), b))).transpose()?;
        for r in rounds {
            if let Some((_, s)) = strat.as_mut() {
                let _ = s.choose(&st);
            }
            st.protect(&r.protected)?;
            st.spread()?;
        }
        Ok((st, strat))
    }

    fn view(&self, cfg: &ServiceConfig, since: Option<u64>) -> Value {
        let lat = self.state.lattice();
        let vj = |vs: Vec<Vertex>| vs.into_iter().map(|v| lat.vertex_json(v)).collect::<Vec<_>>();
        let size = lat.index_space().map(|s| s.len()).unwrap_or(usize::MAX);
        let mut out = json!({
            "id": self.id,
            "parent": self.parent,
            "lattice": lat,
            "turn": self.state.turn,
            "budget": self.state.schedule.budget(self.state.turn + 1),
            "budgetRemaining": self.state.remaining_budget(),
            "contained": self.state.is_contained(),
            "mode": if self.strategy.is_some() { "playback" } else { "manual" },
            "strategy": self.strategy.as_ref().map(|s| &s.0),
            "version": self.version,
            "counts": {"burning": self.state.burning_count(), "protected": self.state.protected_count()},
            "pendingProtections": vj(self.pending.clone()),
        });
        let delta_ok = since.is_some_and(|s| s >= self.reset_version);
        if size <= cfg.full_view_limit || !delta_ok {
            out["burning"] = json!(vj(self.state.burning_vertices()));
            out["protected"] = json!(vj(self.state.protected_vertices()));
        } else {
            let since = since.unwrap_or(0);
            let pick = |k: Change| vj(self.log.iter().filter(|e| e.0 > since && e.1 == k).map(|e| e.2).collect());
            out["delta"] = json!({
                "since": since,
                "ignited": pick(Change::Ignited),
                "protected": pick(Change::Protected),
            });
        }
        out
    }
}

type Shared = Arc<tokio::sync::Mutex<Session>>;

pub struct AppState {
    cfg: ServiceConfig,
    sessions: Mutex<HashMap<String, Shared>>,
    next_id: AtomicU64,
}

impl AppState {
    fn evict(&self) {
        let ttl = self.cfg.ttl;
        self.sessions.lock().unwrap().retain(|_, s| match s.try_lock() {
            Ok(g) => g.last_used.elapsed() < ttl,
            Err(_) => true,
        });
    }

    fn get(&self, id: &str) -> ApiResult<Shared> {
        self.evict();
        self.sessions.lock().unwrap().get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    fn insert(&self, mut s: Session) -> Shared {
        let id = format!("s{:x}", self.next_id.fetch_add(1, Ordering::Relaxed) + 1);
        s.id = id.clone();
        let shared = Arc::new(tokio::sync::Mutex::new(s));
        self.sessions.lock().unwrap().insert(id, shared.clone());
        shared
    }
}

pub fn router(cfg: ServiceConfig) -> Router {
    let state = Arc::new(AppState { cfg, sessions: Mutex::new(HashMap::new()), next_id: AtomicU64::new(0) });
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/:id", get(get_session))
        .route("/sessions/:id/actions", post(act))
        .route("/sessions/:id/hint", get(hint))
        .route("/lattices", get(lattices))
        .route("/strategies", get(strategy_list))
        .with_state(state)
}

pub async fn serve(addr: std::net::SocketAddr, cfg: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(cfg)).await
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(e.to_string()))
}

fn parse_vertices(lat: &Lattice, vs: &[Value]) -> ApiResult<Vec<Vertex>> {
    Ok(vs.iter().map(|v| lat.parse_vertex(v)).collect::<crate::Result<_>>()?)
}

async fn create(State(app): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    app.evict();
    let req: CreateRequest = parse_body(&body)?;
    req.lattice.validate()?;
    if let Some(w) = req.lattice.window.filter(|&w| w > app.cfg.max_window) {
        return Err(ApiError::new(
            StatusCode::PAYLOAD_TOO_LARGE,
            "TooLarge",
            format!("window {w} exceeds the limit of {}", app.cfg.max_window),
        ));
    }
    let size = req.lattice.index_space()?.len() as u64;
    if size > app.cfg.max_vertices {
        return Err(Error::TooLarge { size, cap: app.cfg.max_vertices }.into());
    }
    let fires = parse_vertices(&req.lattice, &req.fires)?;
    let st = GameState::new(req.lattice, &fires, req.schedule.unwrap_or_default())?;
    let strategy = req.strategy.map(|s| strategies::build(&s).map(|b| (s, b))).transpose()?;
    let session = Session {
        id: String::new(),
        parent: None,
        initial: st.clone(),
        state: st,
        rounds: Vec::new(),
        pending: Vec::new(),
        strategy,
        version: 0,
        reset_version: 0,
        log: Vec::new(),
        last_used: Instant::now(),
    };
    let shared = app.insert(session);
    let s = shared.lock().await;
    Ok((StatusCode::CREATED, Json(s.view(&app.cfg, None))))
}

#[derive(Debug, Deserialize)]
struct ViewQuery {
    since: Option<u64>,
}

async fn get_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<ViewQuery>,
) -> ApiResult<Json<Value>> {
    let shared = app.get(&id)?;
    let mut s = shared.lock().await;
    s.last_used = Instant::now();
    Ok(Json(s.view(&app.cfg, q.since)))
}

async fn act(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<ViewQuery>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let action: Action = parse_body(&body)?;
    let shared = app.get(&id)?;
    let mut s = shared.lock().await;
    s.last_used = Instant::now();
    let before = s.version;
    match action {
        Action::Protect { vertices } => {
            let vs = parse_vertices(s.state.lattice(), &vertices)?;
            s.state.protect(&vs)?;
            s.pending.extend(&vs);
            s.record(Change::Protected, &vs);
        }
        Action::EndTurn => {
            let ignited = s.state.spread()?;
            s.end_round(ignited);
        }
        Action::StepStrategy => {
            let Some((_, mut strat)) = s.strategy.take() else {
                return Err(Error::Precondition("the session has no strategy attached".into()).into());
            };
            let res = strat.choose(&s.state);
            let spec = strat.spec();
            s.strategy = Some((spec, strat));
            let picks = res?;
            s.state.protect(&picks)?;
            s.pending.extend(&picks);
            s.record(Change::Protected, &picks);
            let ignited = s.state.spread()?;
            s.end_round(ignited);
        }
        Action::Fork => {
            let spec = s.strategy.as_ref().map(|x| x.0.clone());
            let (mut st, strat) = Session::rebuild(&s.initial, &s.rounds, spec.as_ref())?;
            st.protect(&s.pending)?;
            let child = Session {
                id: String::new(),
                parent: Some(s.id.clone()),
                initial: s.initial.clone(),
                state: st,
                rounds: s.rounds.clone(),
                pending: s.pending.clone(),
                strategy: strat,
                version: s.version,
                reset_version: s.version,
                log: Vec::new(),
                last_used: Instant::now(),
            };
            drop(s);
            let shared = app.insert(child);
            let c = shared.lock().await;
            return Ok(Json(c.view(&app.cfg, None)));
        }
        Action::UndoToTurn { turn } => {
            let start = s.initial.turn;
            if turn < start || turn > s.state.turn {
                return Err(Error::InvalidParams(format!("turn {turn} is outside {start}..={}", s.state.turn)).into());
            }
            let keep = (turn - start) as usize;
            s.rounds.truncate(keep);
            let spec = s.strategy.as_ref().map(|x| x.0.clone());
            let (st, strat) = Session::rebuild(&s.initial, &s.rounds, spec.as_ref())?;
            s.state = st;
            s.strategy = strat;
            s.pending.clear();
            s.version += 1;
            s.reset_version = s.version;
            s.log.clear();
        }
    }
    let mut view = s.view(&app.cfg, q.since);
    let lat = *s.state.lattice();
    let pick = |k: Change| -> Vec<Value> {
        s.log.iter().filter(|e| e.0 > before && e.1 == k).map(|e| lat.vertex_json(e.2)).collect()
    };
    view["changes"] = json!({"protected": pick(Change::Protected), "ignited": pick(Change::Ignited)});
    Ok(Json(view))
}

async fn hint(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let shared = app.get(&id)?;
    let mut s = shared.lock().await;
    s.last_used = Instant::now();
    let st = s.state.clone();
    drop(s);
    let lat = *st.lattice();
    if st.is_contained() {
        let saved = lat.index_space().map(|sp| sp.len() as u64 - st.burning_count() as u64).ok();
        return Ok(Json(json!({"moves": [], "value": saved, "proved": true})));
    }
    let opts = SolveOptions { cap: app.cfg.hint_cap, ..SolveOptions::default() };
    let res = tokio::task::spawn_blocking(move || solver::solve(&st, &opts))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?;
    match res {
        Ok(r) => {
            let first = r.sequence.first().cloned().unwrap_or_default();
            Ok(Json(json!({
                "moves": first.into_iter().map(|v| lat.vertex_json(v)).collect::<Vec<_>>(),
                "value": r.sn,
                "proved": r.proved,
            })))
        }
        Err(Error::TooLarge { size, cap }) => Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "TooLarge",
            format!("residual instance has {size} vertices, the solver cap is {cap}"),
        )),
        Err(Error::Precondition(d)) => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "PreconditionViolation", d)),
        Err(e) => Err(e.into()),
    }
}

async fn lattices() -> Json<Value> {
    Json(json!([
        {"kind": "finite_square", "params": {"n": "side length"}, "finite": true},
        {"kind": "infinite_square", "params": {"window": "radius around the origin"}, "finite": false},
        {"kind": "hexagonal", "params": {"window": "radius around the origin"}, "finite": false},
        {"kind": "triangular", "params": {"window": "radius around the origin"}, "finite": false},
        {"kind": "dary_tree", "params": {"d": "branching factor", "window": "depth"}, "finite": false},
        {"kind": "path", "params": {"n": "vertex count"}, "finite": true},
        {"kind": "complete", "params": {"n": "vertex count"}, "finite": true},
    ]))
}

async fn strategy_list() -> Json<Value> {
    Json(json!(strategies::catalog()))
}
