//! C ABI for firegrid.
//!
//! Games and strategies are opaque handles. Every call returns an
//! [`FgStatus`]; on failure `fg_last_error_message` describes the error on
//! the calling thread. Strings returned by the library must be released with
//! `fg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use firegrid::analysis::appendix;
use firegrid::solver::{self, SolveOptions};
use firegrid::strategies::{self, Strategy, StrategySpec};
use firegrid::{BudgetSchedule, Error, GameState, Lattice, Vertex};
use serde_json::{json, Value};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidVertex = 4,
    InvalidLattice = 5,
    WindowExceeded = 6,
    BudgetExceeded = 7,
    ProtectBurning = 8,
    AlreadyProtected = 9,
    Contained = 10,
    UnknownStrategy = 11,
    InvalidParams = 12,
    PreconditionViolation = 13,
    TooLarge = 14,
    Numeric = 15,
    Io = 16,
    Panic = 17,
}

impl From<&Error> for FgStatus {
    fn from(e: &Error) -> FgStatus {
        match e {
            Error::InvalidVertex(..) => FgStatus::InvalidVertex,
            Error::InvalidLattice(_) => FgStatus::InvalidLattice,
            Error::OutsideWindow(..) => FgStatus::WindowExceeded,
            Error::BudgetExceeded { .. } => FgStatus::BudgetExceeded,
            Error::AlreadyBurning(_) => FgStatus::ProtectBurning,
            Error::AlreadyProtected(_) => FgStatus::AlreadyProtected,
            Error::Contained => FgStatus::Contained,
            Error::UnknownStrategy(_) => FgStatus::UnknownStrategy,
            Error::InvalidParams(_) => FgStatus::InvalidParams,
            Error::Precondition(_) => FgStatus::PreconditionViolation,
            Error::TooLarge { .. } => FgStatus::TooLarge,
            Error::Numeric(_) => FgStatus::Numeric,
            Error::Io(_) => FgStatus::Io,
        }
    }
}

/// Opaque game handle.
pub struct FgGame {
    state: GameState,
}

/// Opaque strategy handle.
pub struct FgStrategy {
    inner: Box<dyn Strategy>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(FgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(FgStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            FgStatus::Panic
        }
    }
}

unsafe fn json_arg(p: *const c_char) -> Result<Value, Fail> {
    if p.is_null() {
        return Err(Fail(FgStatus::NullPointer, "null string argument".into()));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|e| Fail(FgStatus::InvalidUtf8, e.to_string()))?;
    serde_json::from_str(s).map_err(|e| Fail(FgStatus::InvalidJson, e.to_string()))
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(FgStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).map_err(|e| Fail(FgStatus::Io, e.to_string()))?.into_raw();
    Ok(())
}

fn null(what: &str) -> Fail {
    Fail(FgStatus::NullPointer, format!("null {what}"))
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<Option<T>, Fail> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => {
            serde_json::from_value(x.clone()).map(Some).map_err(|e| Fail(FgStatus::InvalidJson, format!("{key}: {e}")))
        }
    }
}

fn game_from(cfg: &Value) -> Result<GameState, Fail> {
    let lattice: Lattice =
        field(cfg, "lattice")?.ok_or_else(|| Fail(FgStatus::InvalidJson, "missing lattice".into()))?;
    let fires: Vec<Value> = field(cfg, "fires")?.unwrap_or_default();
    let fires = fires.iter().map(|f| lattice.parse_vertex(f)).collect::<firegrid::Result<Vec<Vertex>>>()?;
    let fires = if fires.is_empty() { vec![lattice.origin()] } else { fires };
    let schedule: BudgetSchedule = field(cfg, "schedule")?.unwrap_or_default();
    Ok(GameState::new(lattice, &fires, schedule)?)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a game from JSON such as
/// `{"lattice": {"kind": "finite_square", "n": 11}, "fires": [[0, 0]], "schedule": {"base": 1}}`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_game_new(config_json: *const c_char, out: *mut *mut FgGame) -> FgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let cfg = json_arg(config_json)?;
        let state = game_from(&cfg)?;
        *out = Box::into_raw(Box::new(FgGame { state }));
        Ok(())
    })
}

/// # Safety
/// `game` must come from `fg_game_new` (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fg_game_free(game: *mut FgGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Protects `count` vertices given as `(a, b)` pairs in `coords`.
///
/// # Safety
/// `game` must be a live handle; `coords` must hold `2 * count` values.
#[no_mangle]
pub unsafe extern "C" fn fg_game_protect(game: *mut FgGame, coords: *const i64, count: usize) -> FgStatus {
    guard(|| {
        let g = game.as_mut().ok_or_else(|| null("game"))?;
        if coords.is_null() && count > 0 {
            return Err(null("coordinates"));
        }
        let raw = if count == 0 { &[][..] } else { std::slice::from_raw_parts(coords, 2 * count) };
        let vs: Vec<Vertex> = raw.chunks(2).map(|c| Vertex(c[0], c[1])).collect();
        Ok(g.state.protect(&vs)?)
    })
}

/// Spreads the fire, ending the round. Writes the number of newly burning
/// vertices to `ignited` when it is not null.
///
/// # Safety
/// `game` must be a live handle; `ignited` null or valid.
#[no_mangle]
pub unsafe extern "C" fn fg_game_spread(game: *mut FgGame, ignited: *mut u64) -> FgStatus {
    guard(|| {
        let g = game.as_mut().ok_or_else(|| null("game"))?;
        let new = g.state.spread()?;
        if let Some(out) = ignited.as_mut() {
            *out = new.len() as u64;
        }
        Ok(())
    })
}

/// Creates a strategy from `{"name": ..., "params": {...}}`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_strategy_new(spec_json: *const c_char, out: *mut *mut FgStrategy) -> FgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let spec: StrategySpec =
            serde_json::from_value(json_arg(spec_json)?).map_err(|e| Fail(FgStatus::InvalidJson, e.to_string()))?;
        let inner = strategies::build(&spec)?;
        *out = Box::into_raw(Box::new(FgStrategy { inner }));
        Ok(())
    })
}

/// # Safety
/// `strategy` must come from `fg_strategy_new` (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fg_strategy_free(strategy: *mut FgStrategy) {
    if !strategy.is_null() {
        drop(Box::from_raw(strategy));
    }
}

/// Plays one full round: the strategy protects, then the fire spreads.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn fg_game_step(game: *mut FgGame, strategy: *mut FgStrategy) -> FgStatus {
    guard(|| {
        let g = game.as_mut().ok_or_else(|| null("game"))?;
        let s = strategy.as_mut().ok_or_else(|| null("strategy"))?;
        g.state.step(s.inner.as_mut())?;
        Ok(())
    })
}

/// # Safety
/// `game` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fg_game_is_contained(game: *const FgGame, out: *mut bool) -> FgStatus {
    guard(|| {
        let g = game.as_ref().ok_or_else(|| null("game"))?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = g.state.is_contained();
        Ok(())
    })
}

/// Writes the completed turns and the burning and protected counts. Null
/// output pointers are skipped.
///
/// # Safety
/// `game` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn fg_game_counts(
    game: *const FgGame,
    turn: *mut u32,
    burning: *mut u64,
    protected_count: *mut u64,
) -> FgStatus {
    guard(|| {
        let g = game.as_ref().ok_or_else(|| null("game"))?;
        if let Some(t) = turn.as_mut() {
            *t = g.state.turn;
        }
        if let Some(b) = burning.as_mut() {
            *b = g.state.burning_count() as u64;
        }
        if let Some(p) = protected_count.as_mut() {
            *p = g.state.protected_count() as u64;
        }
        Ok(())
    })
}

/// Full state as JSON: turn, remaining budget, burning and protected lists.
///
/// # Safety
/// `game` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fg_game_state_json(game: *const FgGame, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        let g = game.as_ref().ok_or_else(|| null("game"))?;
        let st = &g.state;
        let lat = st.lattice();
        let vj = |vs: Vec<Vertex>| vs.into_iter().map(|v| lat.vertex_json(v)).collect::<Vec<_>>();
        let v = json!({
            "lattice": lat,
            "turn": st.turn,
            "budgetRemaining": st.remaining_budget(),
            "contained": st.is_contained(),
            "burning": vj(st.burning_vertices()),
            "protected": vj(st.protected_vertices()),
        });
        out_string(out, v.to_string())
    })
}

/// Solves a small finite instance given as game JSON, optionally with
/// `"options": {...}`, and writes `{sn, sequence, nodes, proved}`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fg_solve_json(config_json: *const c_char, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        let cfg = json_arg(config_json)?;
        let st = game_from(&cfg)?;
        let opts: SolveOptions = field(&cfg, "options")?.unwrap_or_default();
        let r = solver::solve(&st, &opts)?;
        out_string(out, serde_json::to_string(&r).map_err(|e| Fail(FgStatus::Io, e.to_string()))?)
    })
}

/// Exact lower and upper bounds on the grid surviving rate.
///
/// # Safety
/// Outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fg_bounds_theorem1(lower: *mut f64, upper: *mut f64) -> FgStatus {
    guard(|| {
        let lo = appendix::lower_bound_exact();
        let q = appendix::CASES
            .iter()
            .fold(appendix::Q::from_integer(0), |acc, &c| acc + appendix::region_constant_exact(c));
        let up = appendix::Q::from_integer(1) - appendix::Q::from_integer(8) * q;
        *lower.as_mut().ok_or_else(|| null("lower"))? = *lo.numer() as f64 / *lo.denom() as f64;
        *upper.as_mut().ok_or_else(|| null("upper"))? = *up.numer() as f64 / *up.denom() as f64;
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
