use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IndexSpace, Lattice, Vertex};
use crate::strategies::{Strategy, StrategySpec};
use crate::vset::BitSet;

/// Per-turn firefighter budget: `base` every turn plus one-off extras.
/// Extras landing on the same turn add up; unused budget is lost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSchedule {
    pub base: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<(u32, u32)>,
}

impl BudgetSchedule {
    pub fn constant(base: u32) -> BudgetSchedule {
        BudgetSchedule { base, extras: Vec::new() }
    }

    pub fn with_extras(base: u32, at: &[u32]) -> BudgetSchedule {
        BudgetSchedule { base, extras: at.iter().map(|&t| (t, 1)).collect() }
    }

    pub fn budget(&self, turn: u32) -> u32 {
        self.base + self.extras.iter().filter(|e| e.0 == turn).map(|e| e.1).sum::<u32>()
    }

    pub fn last_extra(&self) -> u32 {
        self.extras.iter().map(|e| e.0).max().unwrap_or(0)
    }
}

impl Default for BudgetSchedule {
    fn default() -> Self {
        BudgetSchedule::constant(1)
    }
}

/// Game state after `turn` completed rounds. A round is: the firefighter
/// protects up to its budget, then the fire spreads to every unprotected
/// neighbor of a burning vertex.
#[derive(Clone, Debug)]
pub struct GameState {
    lattice: Lattice,
    space: Arc<IndexSpace>,
    burning: BitSet,
    protected: BitSet,
    // Every burning vertex that might still have an unburnt, unprotected neighbor.
    frontier: Vec<Vertex>,
    pub turn: u32,
    pub schedule: BudgetSchedule,
    pub protected_this_turn: u32,
}

impl GameState {
    pub fn new(lattice: Lattice, fires: &[Vertex], schedule: BudgetSchedule) -> Result<GameState> {
        GameState::with_sets(lattice, fires, &[], 0, schedule)
    }

    pub fn with_sets(
        lattice: Lattice,
        burning: &[Vertex],
        protected: &[Vertex],
        turn: u32,
        schedule: BudgetSchedule,
    ) -> Result<GameState> {
        lattice.validate()?;
        let space = Arc::new(lattice.index_space()?);
        if burning.is_empty() {
            return Err(Error::Precondition("a game needs at least one initial fire".into()));
        }
        let mut st = GameState {
            lattice,
            burning: BitSet::new(space.len()),
            protected: BitSet::new(space.len()),
            space,
            frontier: Vec::new(),
            turn,
            schedule,
            protected_this_turn: 0,
        };
        for &v in burning {
            lattice.check(v)?;
            let i = st.idx(v)?;
            st.burning.insert(i);
        }
        for &v in protected {
            lattice.check(v)?;
            let i = st.idx(v)?;
            if st.burning.get(i) {
                return Err(Error::AlreadyBurning(v));
            }
            st.protected.insert(i);
        }
        let mut fr: Vec<Vertex> = st.burning.iter().map(|i| st.space.vertex(i)).collect();
        fr.retain(|&x| st.has_free_neighbor(x));
        st.frontier = fr;
        Ok(st)
    }

    fn idx(&self, v: Vertex) -> Result<usize> {
        self.space.index(v).ok_or(Error::OutsideWindow(v, self.lattice.window.unwrap_or(0)))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_burning(&self, v: Vertex) -> bool {
        self.space.index(v).is_some_and(|i| self.burning.get(i))
    }

    pub fn is_protected(&self, v: Vertex) -> bool {
        self.space.index(v).is_some_and(|i| self.protected.get(i))
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        self.lattice.in_lattice(v) && !self.is_burning(v) && !self.is_protected(v)
    }

    pub fn burning_count(&self) -> usize {
        self.burning.len()
    }

    pub fn protected_count(&self) -> usize {
        self.protected.len()
    }

    pub fn burning_vertices(&self) -> Vec<Vertex> {
        self.burning.iter().map(|i| self.space.vertex(i)).collect()
    }

    pub fn protected_vertices(&self) -> Vec<Vertex> {
        self.protected.iter().map(|i| self.space.vertex(i)).collect()
    }

    /// Budget left in the round currently being played (round `turn + 1`).
    pub fn remaining_budget(&self) -> u32 {
        self.schedule.budget(self.turn + 1).saturating_sub(self.protected_this_turn)
    }

    fn has_free_neighbor(&self, x: Vertex) -> bool {
        self.lattice.neighbors(x).into_iter().any(|y| self.is_free(y))
    }

    /// Burning vertices with an unburnt, unprotected neighbor, sorted.
    pub fn active_fires(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.frontier.iter().copied().filter(|&x| self.has_free_neighbor(x)).collect();
        v.sort();
        v
    }

    pub fn is_contained(&self) -> bool {
        !self.frontier.iter().any(|&x| self.has_free_neighbor(x))
    }

    /// Protects all of `vs` or none of them.
    pub fn protect(&mut self, vs: &[Vertex]) -> Result<()> {
        if vs.is_empty() {
            return Ok(());
        }
        if self.is_contained() {
            return Err(Error::Contained);
        }
        let budget = self.schedule.budget(self.turn + 1);
        let requested = self.protected_this_turn + vs.len() as u32;
        if requested > budget {
            return Err(Error::BudgetExceeded { turn: self.turn + 1, budget, requested });
        }
        let mut idx = Vec::with_capacity(vs.len());
        for &v in vs {
            self.lattice.check(v)?;
            let i = self.idx(v)?;
            if self.burning.get(i) {
                return Err(Error::AlreadyBurning(v));
            }
            if self.protected.get(i) || idx.contains(&i) {
                return Err(Error::AlreadyProtected(v));
            }
            idx.push(i);
        }
        for i in idx {
            self.protected.insert(i);
        }
        self.protected_this_turn = requested;
        Ok(())
    }

    /// Ends the round: the fire spreads and the turn counter advances.
    /// Returns the newly ignited vertices. If the fire would leave the window
    /// the state is left untouched and `OutsideWindow` is returned.
    pub fn spread(&mut self) -> Result<Vec<Vertex>> {
        let mut ignite: Vec<(usize, Vertex)> = Vec::new();
        let mut escaped = None;
        'outer: for &x in &self.frontier {
            for y in self.lattice.neighbors(x) {
                if !self.lattice.in_lattice(y) {
                    continue;
                }
                let Some(i) = self.space.index(y).filter(|_| self.lattice.contains(y)) else {
                    if !self.is_protected(y) {
                        escaped = Some(y);
                        break 'outer;
                    }
                    continue;
                };
                if self.protected.get(i) {
                    continue;
                }
                if self.burning.insert(i) {
                    ignite.push((i, y));
                }
            }
        }
        if let Some(y) = escaped {
            for &(i, _) in &ignite {
                self.burning.remove(i);
            }
            return Err(Error::OutsideWindow(y, self.lattice.window.unwrap_or(0)));
        }
        let mut new: Vec<Vertex> = ignite.into_iter().map(|e| e.1).collect();
        new.sort();
        self.frontier = new.clone();
        self.turn += 1;
        self.protected_this_turn = 0;
        Ok(new)
    }

    /// One full round driven by `strategy`.
    pub fn step(&mut self, strategy: &mut dyn Strategy) -> Result<RoundRecord> {
        let picks = strategy.choose(self)?;
        self.protect(&picks)?;
        let turn = self.turn + 1;
        let ignited = self.spread()?;
        Ok(RoundRecord { turn, protected: picks, ignited })
    }

    /// Plays until containment or `max_turns` rounds in total. Leaving the
    /// window ends the run with `window_exceeded` set instead of an error.
    pub fn run(mut self, strategy: &mut dyn Strategy, max_turns: u32) -> Result<(GameState, GameTrace)> {
        let mut trace = GameTrace {
            lattice: self.lattice,
            fires: self.burning_vertices(),
            initial_protected: self.protected_vertices(),
            start_turn: self.turn,
            schedule: self.schedule.clone(),
            strategy: Some(strategy.spec()),
            rounds: Vec::new(),
            outcome: Outcome::default(),
        };
        let mut window_exceeded = false;
        while !self.is_contained() && self.turn < max_turns {
            let picks = strategy.choose(&self)?;
            self.protect(&picks)?;
            let turn = self.turn + 1;
            match self.spread() {
                Ok(ignited) => trace.rounds.push(RoundRecord { turn, protected: picks, ignited }),
                Err(Error::OutsideWindow(..)) => {
                    trace.rounds.push(RoundRecord { turn, protected: picks, ignited: Vec::new() });
                    window_exceeded = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        trace.outcome = Outcome::of(&self, window_exceeded);
        Ok((self, trace))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub turn: u32,
    pub protected: Vec<Vertex>,
    pub ignited: Vec<Vertex>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub contained: bool,
    pub turns: u32,
    pub burnt: u64,
    pub protected: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saved: Option<u64>,
    pub horizon_exhausted: bool,
    pub window_exceeded: bool,
}

impl Outcome {
    pub fn of(st: &GameState, window_exceeded: bool) -> Outcome {
        let contained = !window_exceeded && st.is_contained();
        let saved = if st.lattice.is_finite() { Some(st.space.len() as u64 - st.burning_count() as u64) } else { None };
        Outcome {
            contained,
            turns: st.turn,
            burnt: st.burning_count() as u64,
            protected: st.protected_count() as u64,
            saved,
            horizon_exhausted: !contained,
            window_exceeded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameTrace {
    pub lattice: Lattice,
    pub fires: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initial_protected: Vec<Vertex>,
    #[serde(default)]
    pub start_turn: u32,
    pub schedule: BudgetSchedule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategySpec>,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

impl GameTrace {
    pub fn initial_state(&self) -> Result<GameState> {
        GameState::with_sets(self.lattice, &self.fires, &self.initial_protected, self.start_turn, self.schedule.clone())
    }

    /// Re-plays the recorded protections and checks every recorded ignition.
    /// Returns the state after round `upto` (or the last round).
    pub fn replay(&self, upto: Option<u32>) -> Result<GameState> {
        let mut st = self.initial_state()?;
        for r in &self.rounds {
            if upto.is_some_and(|u| r.turn > u) {
                break;
            }
            st.protect(&r.protected)?;
            match st.spread() {
                Ok(ign) if ign == r.ignited => {}
                Err(Error::OutsideWindow(..)) if self.outcome.window_exceeded => break,
                _ => return Err(Error::Precondition(format!("trace diverges at turn {}", r.turn))),
            }
        }
        Ok(st)
    }
}

/// Result of collapsing the active fire onto a ball.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub center: Vertex,
    pub radius: u64,
    pub state: GameState,
}

/// Finds the smallest ball `N<=t(v0)` covering every active fire (ties broken
/// by the lexicographically smallest center among the balls around the least
/// active fire) and returns the pessimistic state in which exactly that ball
/// burns and every other burnt vertex counts as protected.
pub fn normalize_to_ball(st: &GameState) -> Result<Normalized> {
    let active = st.active_fires();
    if active.is_empty() {
        return Err(Error::Precondition("no active fire to normalize".into()));
    }
    let lat = st.lattice;
    let (center, radius) = smallest_ball(&lat, &active);
    let ball: Vec<Vertex> = lat.ball(center, radius).into_iter().filter(|&v| lat.contains(v)).collect();
    let mut prot = st.protected_vertices();
    prot.extend(st.burning_vertices());
    prot.sort();
    prot.dedup();
    let prot: Vec<Vertex> = prot.into_iter().filter(|&v| lat.dist(center, v) > radius).collect();
    let state = GameState::with_sets(lat, &ball, &prot, st.turn, st.schedule.clone())?;
    Ok(Normalized { center, radius, state })
}

/// Center and radius of the smallest ball covering `points` (non-empty),
/// searching centers around the least point; ties go to the least center.
pub fn smallest_ball(lat: &Lattice, points: &[Vertex]) -> (Vertex, u64) {
    let a0 = *points.iter().min().expect("smallest_ball needs a point");
    let reach = points.iter().map(|&x| lat.dist(a0, x)).max().unwrap_or(0);
    let mut best: Option<(u64, Vertex)> = None;
    for c in lat.ball(a0, reach) {
        if !lat.contains(c) {
            continue;
        }
        let mut r = 0;
        for &x in points {
            r = r.max(lat.dist(c, x));
            if best.is_some_and(|b| r > b.0) {
                break;
            }
        }
        if best.is_none_or(|b| (r, c) < b) {
            best = Some((r, c));
        }
    }
    let (r, c) = best.unwrap();
    (c, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::Idle;

    #[test]
    fn extras_stack_and_do_not_carry() {
        let s = BudgetSchedule { base: 1, extras: vec![(3, 1), (3, 1), (5, 2)] };
        assert_eq!(s.budget(2), 1);
        assert_eq!(s.budget(3), 3);
        assert_eq!(s.budget(5), 3);
    }

    #[test]
    fn protect_is_atomic() {
        let mut st = GameState::new(Lattice::finite_square(5), &[Vertex(0, 0)], BudgetSchedule::constant(2)).unwrap();
        let err = st.protect(&[Vertex(1, 0), Vertex(0, 0)]).unwrap_err();
        assert_eq!(err, Error::AlreadyBurning(Vertex(0, 0)));
        assert_eq!(st.protected_count(), 0);
        st.protect(&[Vertex(1, 0)]).unwrap();
        let err = st.protect(&[Vertex(2, 0), Vertex(2, 1)]).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { turn: 1, budget: 2, requested: 3 }));
    }

    #[test]
    fn window_exhaustion_is_flagged() {
        let st = GameState::new(Lattice::hexagonal(3), &[Vertex(0, 0)], BudgetSchedule::constant(0)).unwrap();
        let (_, trace) = st.run(&mut Idle, 100).unwrap();
        assert!(trace.outcome.window_exceeded);
        assert!(!trace.outcome.contained);
        assert_eq!(trace.outcome.turns, 3);
    }

    #[test]
    fn normalization_of_a_single_fire() {
        let st = GameState::new(Lattice::infinite_square(10), &[Vertex(2, 3)], BudgetSchedule::constant(1)).unwrap();
        let n = normalize_to_ball(&st).unwrap();
        assert_eq!((n.center, n.radius), (Vertex(2, 3), 0));
    }
}
