//! Triangular-lattice strategies with even budgets played on the hexagonal
//! lattice. The triangular lattice embeds as the hexagonal A sublattice and
//! one triangular round becomes two hexagonal rounds, each protecting half
//! of that round's vertices.

use super::{Strategy, StrategySpec};
use crate::engine::{BudgetSchedule, GameState};
use crate::error::{Error, Result};
use crate::hexcoord::{self, Hp};
use crate::lattice::{Lattice, LatticeKind, Vertex};

pub fn tri_to_hex_vertex(v: Vertex) -> Vertex {
    hexcoord::to_brick(Hp::a(v.0, v.1))
}

/// Hexagonal schedule for a triangular one: `x` per hexagonal turn where the
/// triangular strategy had `2x`.
pub fn hex_schedule_for(tri: &BudgetSchedule) -> Result<BudgetSchedule> {
    if !tri.base.is_multiple_of(2) {
        return Err(Error::Precondition("triangular base budget must be even".into()));
    }
    let mut extras = Vec::new();
    for &(t, k) in &tri.extras {
        if k % 2 != 0 || t == 0 {
            return Err(Error::Precondition(format!("extra budget on turn {t} must be even")));
        }
        extras.push((2 * t - 1, k / 2));
        extras.push((2 * t, k / 2));
    }
    Ok(BudgetSchedule { base: tri.base / 2, extras })
}

/// Plays `inner` on a shadow triangular game and replays its protections on
/// the hexagonal lattice, half on each of the two matching turns.
pub struct TriToHex {
    inner: Box<dyn Strategy>,
    shadow: Option<GameState>,
    tri_lattice: Lattice,
    tri_schedule: BudgetSchedule,
    second_half: Vec<Vertex>,
}

impl TriToHex {
    pub fn new(inner: Box<dyn Strategy>, tri_lattice: Lattice, tri_schedule: BudgetSchedule) -> Result<TriToHex> {
        if tri_lattice.kind != LatticeKind::Triangular {
            return Err(Error::Precondition("translation starts from a triangular strategy".into()));
        }
        hex_schedule_for(&tri_schedule)?;
        Ok(TriToHex { inner, shadow: None, tri_lattice, tri_schedule, second_half: Vec::new() })
    }

    /// The hexagonal game matching a triangular start.
    pub fn hex_game(tri_lattice: &Lattice, fires: &[Vertex], tri_schedule: &BudgetSchedule) -> Result<GameState> {
        let w = tri_lattice.window.map(|w| 2 * w + 2);
        let hex = Lattice { kind: LatticeKind::Hexagonal, window: w };
        let fires: Vec<Vertex> = fires.iter().map(|&v| tri_to_hex_vertex(v)).collect();
        GameState::new(hex, &fires, hex_schedule_for(tri_schedule)?)
    }
}

impl Strategy for TriToHex {
    fn spec(&self) -> StrategySpec {
        StrategySpec::new("tri_to_hex", serde_json::to_value(self.inner.spec()).unwrap_or_default())
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        if st.lattice().kind != LatticeKind::Hexagonal {
            return Err(Error::Precondition("translated strategy runs on the hexagonal lattice".into()));
        }
        if self.shadow.is_none() {
            let fires: Vec<Vertex> = st
                .burning_vertices()
                .into_iter()
                .map(|v| {
                    let h = hexcoord::from_brick(v);
                    if h.is_a() {
                        Ok(Vertex(h.p, h.q))
                    } else {
                        Err(Error::Precondition("translated games start from A-sublattice fires".into()))
                    }
                })
                .collect::<Result<_>>()?;
            self.shadow = Some(GameState::new(self.tri_lattice, &fires, self.tri_schedule.clone())?);
        }
        let turn = st.turn + 1;
        if turn.is_multiple_of(2) {
            return Ok(std::mem::take(&mut self.second_half));
        }
        let shadow = self.shadow.as_mut().unwrap();
        if shadow.is_contained() {
            return Ok(Vec::new());
        }
        let picks = self.inner.choose(shadow)?;
        shadow.protect(&picks)?;
        shadow.spread()?;
        let mapped: Vec<Vertex> = picks.iter().map(|&v| tri_to_hex_vertex(v)).collect();
        let half = mapped.len().div_ceil(2);
        self.second_half = mapped[half..].to_vec();
        Ok(mapped[..half].to_vec())
    }
}
