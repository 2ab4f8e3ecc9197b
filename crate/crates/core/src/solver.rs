//! Exact optimal play on small finite graphs and bounded containment search
//! on windowed lattices.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{BudgetSchedule, GameState};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind, Vertex};

/// Largest finite instance the exact solver accepts.
pub const DEFAULT_CAP: usize = 64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveOptions {
    pub prune: bool,
    pub symmetry: bool,
    pub transposition: bool,
    pub node_limit: u64,
    pub jobs: usize,
    pub cap: usize,
    /// Directory where transposition tables are saved and reloaded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            prune: true,
            symmetry: true,
            transposition: true,
            node_limit: 200_000_000,
            jobs: 1,
            cap: DEFAULT_CAP,
            cache_dir: None,
        }
    }
}

impl SolveOptions {
    /// Plain exhaustive search: no bound, no table, no symmetry.
    pub fn exhaustive() -> SolveOptions {
        SolveOptions { prune: false, symmetry: false, transposition: false, ..SolveOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Largest number of vertices that can be saved.
    pub sn: u64,
    /// An optimal protection sequence, one list per round.
    pub sequence: Vec<Vec<Vertex>>,
    pub nodes: u64,
    /// False when the node limit cut the search short; `sn` is then only
    /// the best value found.
    pub proved: bool,
}

/// Dense view of a finite graph with at most 64 vertices.
struct Board {
    verts: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    adj: Vec<u64>,
    perms: Vec<Vec<usize>>,
    all: u64,
}

impl Board {
    fn new(lat: &Lattice, symmetry: bool, cap: usize) -> Result<Board> {
        if !lat.is_finite() {
            return Err(Error::Precondition("the exact solver needs a finite lattice".into()));
        }
        let verts = lat.vertices()?;
        let cap = cap.min(64);
        if verts.len() > cap {
            return Err(Error::TooLarge { size: verts.len() as u64, cap: cap as u64 });
        }
        let index: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = verts.iter().map(|&v| lat.neighbors(v).iter().fold(0u64, |m, u| m | 1 << index[u])).collect();
        let mut perms = vec![(0..verts.len()).collect::<Vec<_>>()];
        if symmetry {
            let maps: Vec<Box<dyn Fn(Vertex) -> Vertex>> = match lat.kind {
                LatticeKind::FiniteSquare { n } => {
                    let (lo, hi) = Lattice::square_range(n);
                    let s = lo + hi;
                    vec![
                        Box::new(move |v: Vertex| Vertex(s - v.0, v.1)),
                        Box::new(move |v: Vertex| Vertex(v.0, s - v.1)),
                        Box::new(move |v: Vertex| Vertex(s - v.0, s - v.1)),
                        Box::new(|v: Vertex| Vertex(v.1, v.0)),
                        Box::new(move |v: Vertex| Vertex(s - v.1, v.0)),
                        Box::new(move |v: Vertex| Vertex(v.1, s - v.0)),
                        Box::new(move |v: Vertex| Vertex(s - v.1, s - v.0)),
                    ]
                }
                LatticeKind::Path { n } => vec![Box::new(move |v: Vertex| Vertex(n as i64 - 1 - v.0, 0))],
                _ => Vec::new(),
            };
            for f in maps {
                perms.push(verts.iter().map(|&v| index[&f(v)]).collect());
            }
        }
        let all = if verts.len() == 64 { u64::MAX } else { (1u64 << verts.len()) - 1 };
        Ok(Board { verts, index, adj, perms, all })
    }

    fn n(&self) -> u64 {
        self.verts.len() as u64
    }

    fn mask(&self, vs: &[Vertex]) -> Result<u64> {
        vs.iter().try_fold(0u64, |m, v| {
            self.index.get(v).map(|&i| m | 1 << i).ok_or(Error::InvalidVertex(
                v.0,
                v.1,
                "not a vertex of the instance".into(),
            ))
        })
    }

    fn nbrs(&self, set: u64) -> u64 {
        let mut out = 0;
        let mut s = set;
        while s != 0 {
            let i = s.trailing_zeros() as usize;
            out |= self.adj[i];
            s &= s - 1;
        }
        out
    }

    fn permute(&self, p: &[usize], set: u64) -> u64 {
        let mut out = 0;
        let mut s = set;
        while s != 0 {
            let i = s.trailing_zeros() as usize;
            out |= 1 << p[i];
            s &= s - 1;
        }
        out
    }

    fn canonical(&self, b: u64, p: u64) -> (u64, u64) {
        self.perms.iter().map(|pm| (self.permute(pm, b), self.permute(pm, p))).min().unwrap()
    }

    fn unmask(&self, set: u64) -> Vec<Vertex> {
        (0..self.verts.len()).filter(|&i| set >> i & 1 == 1).map(|i| self.verts[i]).collect()
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct Entry {
    value: i64,
    exact: bool,
}

type Key = (u64, u64, u32);

struct Search<'a> {
    board: &'a Board,
    schedule: &'a BudgetSchedule,
    opts: &'a SolveOptions,
    tt: Mutex<HashMap<Key, Entry>>,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

fn combos(items: &[usize], k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf = vec![0; k];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i];
        }
        if !f(&buf) {
            return;
        }
        let Some(j) = (0..k).rev().find(|&j| idx[j] < n - k + j) else {
            return;
        };
        idx[j] += 1;
        for m in j + 1..k {
            idx[m] = idx[m - 1] + 1;
        }
    }
}

impl<'a> Search<'a> {
    fn key(&self, b: u64, p: u64, turn: u32) -> Key {
        let (cb, cp) = if self.opts.symmetry { self.board.canonical(b, p) } else { (b, p) };
        let t = if turn < self.schedule.last_extra() { turn } else { u32::MAX };
        (cb, cp, t)
    }

    /// Moves in search order: threatened vertices (most free neighbors
    /// first), then vertices at distance two from the fire, then the rest.
    /// Returns the list and how many leading entries are threatened.
    fn ordered_moves(&self, b: u64, p: u64) -> (Vec<usize>, usize) {
        let free = self.board.all & !b & !p;
        let t = self.board.nbrs(b) & free;
        let d2 = self.board.nbrs(t) & free & !t;
        let bits = |m: u64| (0..64).filter(move |&i| m >> i & 1 == 1);
        let mut near: Vec<usize> = bits(t).collect();
        near.sort_by_key(|&i| std::cmp::Reverse((self.board.adj[i] & free).count_ones()));
        let nt = near.len();
        near.extend(bits(d2));
        near.extend(bits(free & !t & !d2));
        (near, nt)
    }

    fn budget(&self, turn: u32, used: u32) -> u32 {
        self.schedule.budget(turn + 1).saturating_sub(used)
    }

    /// Value of the position, with the fail-low convention: a result above
    /// `alpha` is exact, otherwise it is an upper bound not above `alpha`.
    fn search(&self, b: u64, p: u64, turn: u32, used: u32, alpha: i64) -> i64 {
        let n = self.board.n() as i64;
        let nodes = self.nodes.fetch_add(1, Ordering::Relaxed);
        if nodes >= self.opts.node_limit {
            self.aborted.store(true, Ordering::Relaxed);
        }
        let free = self.board.all & !b & !p;
        let t = self.board.nbrs(b) & free;
        if t == 0 {
            return n - b.count_ones() as i64;
        }
        let k = (self.budget(turn, used) as usize).min(free.count_ones() as usize);
        let ub = n - b.count_ones() as i64 - (t.count_ones() as i64 - k as i64).max(0);
        if self.opts.prune && ub <= alpha {
            return ub;
        }
        if self.aborted.load(Ordering::Relaxed) {
            return ub;
        }
        let key = (self.opts.transposition && used == 0).then(|| self.key(b, p, turn));
        if let Some(key) = key {
            if let Some(e) = self.tt.lock().unwrap().get(&key) {
                if e.exact || e.value <= alpha {
                    return e.value;
                }
            }
        }
        let (moves, nt) = self.ordered_moves(b, p);
        let mut best = i64::MIN;
        combos(&moves, k, |s| {
            let far_only = s.iter().all(|&i| t >> i & 1 == 0);
            if self.opts.prune && far_only && nt > 0 {
                // every remaining combination leaves the whole threat to burn
                let nb = b | t;
                let free2 = self.board.all & !nb & !p;
                let bound = n
                    - nb.count_ones() as i64
                    - ((self.board.nbrs(nb) & free2).count_ones() as i64
                        - self.schedule.budget(turn + 2) as i64
                        - k as i64)
                        .max(0);
                if bound <= alpha.max(best) {
                    best = best.max(bound.min(alpha.max(best)));
                    return false;
                }
            }
            let sm = s.iter().fold(0u64, |m, &i| m | 1 << i);
            let v = self.search(b | (t & !sm), p | sm, turn + 1, 0, alpha.max(best));
            best = best.max(v);
            !(self.aborted.load(Ordering::Relaxed))
        });
        if let Some(key) = key {
            if !self.aborted.load(Ordering::Relaxed) {
                self.tt.lock().unwrap().insert(key, Entry { value: best, exact: best > alpha });
            }
        }
        best
    }

    /// An optimal move at a position, with its value.
    fn best_move(&self, b: u64, p: u64, turn: u32, used: u32) -> (u64, i64) {
        let free = self.board.all & !b & !p;
        let t = self.board.nbrs(b) & free;
        let k = (self.budget(turn, used) as usize).min(free.count_ones() as usize);
        let (moves, _) = self.ordered_moves(b, p);
        let mut cands = Vec::new();
        combos(&moves, k, |s| {
            cands.push(s.iter().fold(0u64, |m, &i| m | 1 << i));
            true
        });
        let eval = |&sm: &u64| (sm, self.search(b | (t & !sm), p | sm, turn + 1, 0, -1));
        let scored: Vec<(u64, i64)> =
            if self.opts.jobs > 1 { cands.par_iter().map(eval).collect() } else { cands.iter().map(eval).collect() };
        let mut best = (0, i64::MIN);
        for (sm, v) in scored {
            if v > best.1 {
                best = (sm, v);
            }
        }
        best
    }
}

fn cache_file(dir: &std::path::Path, lat: &Lattice, b: u64, p: u64, turn: u32, schedule: &BudgetSchedule) -> PathBuf {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    (lat, b, p, turn, &schedule.base, &schedule.extras).hash(&mut h);
    dir.join(format!("tt-{:016x}.json", h.finish()))
}

/// Optimal play from `state`: the most vertices that can be saved, with one
/// optimal protection sequence.
pub fn solve(state: &GameState, opts: &SolveOptions) -> Result<SolveResult> {
    let lat = *state.lattice();
    let board = Board::new(&lat, opts.symmetry, opts.cap)?;
    let b0 = board.mask(&state.burning_vertices())?;
    let p0 = board.mask(&state.protected_vertices())?;
    let search = Search {
        board: &board,
        schedule: &state.schedule,
        opts,
        tt: Mutex::new(HashMap::new()),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let cache = opts
        .cache_dir
        .as_ref()
        .filter(|_| opts.transposition)
        .map(|d| cache_file(d, &lat, b0, p0, state.turn, &state.schedule));
    if let Some(f) = cache.as_ref().filter(|f| f.exists()) {
        let text = std::fs::read_to_string(f)?;
        let entries: Vec<(Key, Entry)> = serde_json::from_str(&text).map_err(|e| Error::Io(e.to_string()))?;
        search.tt.lock().unwrap().extend(entries);
    }
    let (mut b, mut p, mut turn, mut used) = (b0, p0, state.turn, state.protected_this_turn);
    let mut sequence = Vec::new();
    let mut value = None;
    loop {
        let free = board.all & !b & !p;
        let t = board.nbrs(b) & free;
        if t == 0 {
            break;
        }
        let (sm, v) = search.best_move(b, p, turn, used);
        value.get_or_insert(v);
        sequence.push(board.unmask(sm));
        p |= sm;
        b |= t & !sm;
        turn += 1;
        used = 0;
        if search.aborted.load(Ordering::Relaxed) {
            break;
        }
    }
    let sn = value.unwrap_or(board.n() as i64 - b0.count_ones() as i64);
    if let Some(f) = cache {
        std::fs::create_dir_all(f.parent().unwrap())?;
        let entries: Vec<(Key, Entry)> =
            search.tt.lock().unwrap().iter().filter(|e| e.1.exact).map(|(k, e)| (*k, *e)).collect();
        std::fs::write(&f, serde_json::to_string(&entries).map_err(|e| Error::Io(e.to_string()))?)?;
    }
    Ok(SolveResult {
        sn: sn.max(0) as u64,
        sequence,
        nodes: search.nodes.load(Ordering::Relaxed),
        proved: !search.aborted.load(Ordering::Relaxed),
    })
}

/// `sn(v)` for a single fire at every vertex, in vertex order.
pub fn saved_per_start(lat: &Lattice, schedule: &BudgetSchedule, opts: &SolveOptions) -> Result<Vec<(Vertex, u64)>> {
    let verts = lat.vertices()?;
    let mut out = Vec::new();
    for v in verts {
        let st = GameState::new(*lat, &[v], schedule.clone())?;
        let r = solve(&st, opts)?;
        if !r.proved {
            return Err(Error::Precondition(format!("search from {v} hit the node limit")));
        }
        out.push((v, r.sn));
    }
    Ok(out)
}

/// Exact surviving rate: the mean of `sn(v) / n` over all starts `v`.
pub fn surviving_rate_exact(lat: &Lattice, schedule: &BudgetSchedule, opts: &SolveOptions) -> Result<Ratio<i64>> {
    let per = saved_per_start(lat, schedule, opts)?;
    let n = per.len() as i64;
    let total: i64 = per.iter().map(|e| e.1 as i64).sum();
    Ok(Ratio::new(total, n * n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentWitness {
    pub turns: u32,
    pub burnt: u64,
    pub sequence: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub witness: Option<ContainmentWitness>,
    pub nodes: u64,
    /// True when the search space was exhausted, so a missing witness means
    /// no strategy contains the fire within the turn limit.
    pub exhaustive: bool,
}

/// Bounded search for a strategy that contains the fire within `max_turns`
/// rounds on a windowed lattice. Passes widen the candidate radius around
/// the fire; the last pass uses every vertex within distance
/// `max_turns - turn` of the fire, which loses nothing, so only that pass
/// can prove that no strategy exists. On square lattices a branch is also
/// cut when the protections left cannot close a boundary around the fire.
pub fn verify_containment_search(
    lat: &Lattice,
    fires: &[Vertex],
    schedule: &BudgetSchedule,
    max_turns: u32,
    node_limit: u64,
) -> Result<ContainmentReport> {
    let st = GameState::new(*lat, fires, schedule.clone())?;
    let mut nodes = 0;
    for reach in (1..=max_turns as u64).map(Some).chain([None]) {
        let mut cs = Contain {
            lat: *lat,
            schedule,
            max_turns,
            reach,
            node_limit: node_limit.saturating_sub(nodes),
            nodes: 0,
            failed: HashMap::new(),
            symmetric: matches!(lat.kind, LatticeKind::InfiniteSquare | LatticeKind::Triangular)
                && fires == [Vertex(0, 0)],
        };
        let mut seq = Vec::new();
        let found = cs.dfs(&st, &mut seq)?;
        nodes += cs.nodes;
        if let Some(done) = found {
            let witness =
                ContainmentWitness { turns: seq.len() as u32, burnt: done.burning_count() as u64, sequence: seq };
            return Ok(ContainmentReport { witness: Some(witness), nodes, exhaustive: false });
        }
        if nodes >= node_limit {
            return Ok(ContainmentReport { witness: None, nodes, exhaustive: false });
        }
    }
    Ok(ContainmentReport { witness: None, nodes, exhaustive: true })
}

struct Contain<'a> {
    lat: Lattice,
    schedule: &'a BudgetSchedule,
    max_turns: u32,
    reach: Option<u64>,
    node_limit: u64,
    nodes: u64,
    failed: HashMap<(Vec<Vertex>, Vec<Vertex>), u32>,
    symmetric: bool,
}

impl Contain<'_> {
    fn symmetries(&self) -> Vec<fn(Vertex) -> Vertex> {
        if !self.symmetric {
            return vec![|v| v];
        }
        match self.lat.kind {
            LatticeKind::InfiniteSquare => vec![
                |v| v,
                |v| Vertex(-v.0, v.1),
                |v| Vertex(v.0, -v.1),
                |v| Vertex(-v.0, -v.1),
                |v| Vertex(v.1, v.0),
                |v| Vertex(-v.1, v.0),
                |v| Vertex(v.1, -v.0),
                |v| Vertex(-v.1, -v.0),
            ],
            _ => vec![
                |v| v,
                |v| Vertex(-v.1, v.0 + v.1),
                |v| Vertex(-v.0 - v.1, v.0),
                |v| Vertex(-v.0, -v.1),
                |v| Vertex(v.1, -v.0 - v.1),
                |v| Vertex(v.0 + v.1, -v.0),
                |v| Vertex(v.1, v.0),
                |v| Vertex(-v.0, v.0 + v.1),
                |v| Vertex(-v.0 - v.1, v.1),
                |v| Vertex(-v.1, -v.0),
                |v| Vertex(v.0, -v.0 - v.1),
                |v| Vertex(v.0 + v.1, -v.1),
            ],
        }
    }

    fn key(&self, st: &GameState) -> (Vec<Vertex>, Vec<Vertex>) {
        let b = st.burning_vertices();
        let p = st.protected_vertices();
        self.symmetries()
            .into_iter()
            .map(|f| {
                let mut bb: Vec<Vertex> = b.iter().map(|&v| f(v)).collect();
                let mut pp: Vec<Vertex> = p.iter().map(|&v| f(v)).collect();
                bb.sort();
                pp.sort();
                (bb, pp)
            })
            .min()
            .unwrap()
    }

    /// Protections needed to enclose any superset of the burning set, on
    /// square lattices: each occupied row and column has a free end on both
    /// sides.
    fn enclosure_bound(&self, st: &GameState) -> u64 {
        if !matches!(self.lat.kind, LatticeKind::InfiniteSquare | LatticeKind::FiniteSquare { .. }) {
            return 0;
        }
        let b = st.burning_vertices();
        let span = |f: fn(&Vertex) -> i64| {
            let lo = b.iter().map(f).min().unwrap_or(0);
            let hi = b.iter().map(f).max().unwrap_or(0);
            (hi - lo + 1) as u64
        };
        2 * span(|v| v.0).max(span(|v| v.1))
    }

    fn dfs(&mut self, st: &GameState, seq: &mut Vec<Vec<Vertex>>) -> Result<Option<GameState>> {
        self.nodes += 1;
        if self.nodes >= self.node_limit {
            return Ok(None);
        }
        if st.is_contained() {
            return Ok(Some(st.clone()));
        }
        if st.turn >= self.max_turns {
            return Ok(None);
        }
        let left = self.max_turns - st.turn;
        let future: u64 = (st.turn + 1..=self.max_turns).map(|t| self.schedule.budget(t) as u64).sum();
        if (st.protected_count() as u64) + future < self.enclosure_bound(st) {
            return Ok(None);
        }
        let key = self.key(st);
        if self.failed.get(&key).is_some_and(|&l| l >= left) {
            return Ok(None);
        }
        let active = st.active_fires();
        let lat = self.lat;
        let mut cand: Vec<(u64, Vertex)> = Vec::new();
        let reach = self.reach.map_or(left as u64, |r| r.min(left as u64));
        let mut seen = std::collections::HashSet::new();
        for &a in &active {
            for v in lat.ball(a, reach) {
                if lat.contains(v) && st.is_free(v) && seen.insert(v) {
                    let d = active.iter().map(|&x| lat.dist(x, v)).min().unwrap();
                    cand.push((d, v));
                }
            }
        }
        cand.sort();
        let items: Vec<Vertex> = cand.into_iter().map(|e| e.1).collect();
        let idx: Vec<usize> = (0..items.len()).collect();
        let k = (st.remaining_budget() as usize).min(items.len());
        let mut result = None;
        let mut err = None;
        combos(&idx, k, |s| {
            let picks: Vec<Vertex> = s.iter().map(|&i| items[i]).collect();
            let mut next = st.clone();
            if let Err(e) = next.protect(&picks) {
                err = Some(e);
                return false;
            }
            match next.spread() {
                Ok(_) => {}
                Err(Error::OutsideWindow(..)) => return true,
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            seq.push(picks);
            match self.dfs(&next, seq) {
                Ok(Some(done)) => {
                    result = Some(done);
                    return false;
                }
                Ok(None) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            seq.pop();
            self.nodes < self.node_limit
        });
        if let Some(e) = err {
            return Err(e);
        }
        if result.is_none() && self.nodes < self.node_limit {
            self.failed.insert(key, left);
        }
        Ok(result)
    }
}
