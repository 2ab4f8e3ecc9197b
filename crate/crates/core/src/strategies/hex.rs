use serde_json::json;

use super::spiral::HexSpiral;
use super::{Strategy, StrategySpec};
use crate::engine::{smallest_ball, GameState};
use crate::error::{Error, Result};
use crate::hexcoord::{self, Frame, Hp};
use crate::lattice::{LatticeKind, Vertex};

fn start_frame(st: &GameState, who: &str) -> Result<Frame> {
    if st.lattice().kind != LatticeKind::Hexagonal {
        return Err(Error::Precondition(format!("{who} needs the hexagonal lattice")));
    }
    let fires = st.burning_vertices();
    if fires.len() != 1 || st.turn != 0 {
        return Err(Error::Precondition(format!("{who} starts from a single fire at turn 0")));
    }
    Ok(Frame::at(hexcoord::from_brick(fires[0])))
}

/// Ray of A vertices `(1, j)` protected on even turns `2 + 2j`.
fn ray_a(turn: u32) -> Hp {
    Hp::a(1, (turn as i64 - 2) / 2)
}

/// Ray of B vertices `(-j, -1)` protected on odd turns `1 + 2j`.
fn ray_b(turn: u32) -> Hp {
    let j = (turn as i64 - 1) / 2;
    Hp::b(-j, -1)
}

fn emit(st: &GameState, frame: &Frame, local: &[Hp], budget: u32) -> Vec<Vertex> {
    let mut out = Vec::new();
    for &h in local {
        let v = hexcoord::to_brick(frame.to_global(h));
        if out.len() < budget as usize && !out.contains(&v) && st.lattice().contains(v) && st.is_free(v) {
            out.push(v);
        }
    }
    out
}

/// Two rays from the fire meeting at 120 degrees; the turn-`t` protection is
/// at distance exactly `t`, alternating between the rays.
pub struct HexTwoRay {
    frame: Option<Frame>,
}

impl HexTwoRay {
    pub fn new() -> HexTwoRay {
        HexTwoRay { frame: None }
    }
}

impl Default for HexTwoRay {
    fn default() -> Self {
        HexTwoRay::new()
    }
}

impl Strategy for HexTwoRay {
    fn spec(&self) -> StrategySpec {
        StrategySpec::named("hex_two_ray")
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        if self.frame.is_none() {
            self.frame = Some(start_frame(st, "hex_two_ray")?);
        }
        let turn = st.turn + 1;
        let h = if turn % 2 == 1 { ray_b(turn) } else { ray_a(turn) };
        Ok(emit(st, self.frame.as_ref().unwrap(), &[h], st.remaining_budget()))
    }
}

/// Containment with one firefighter per turn plus one extra on turns `t1`
/// and `t2`.
///
/// Phase one plays the two rays. Each extra bends one ray by 60 degrees
/// toward the other: the bent ray continues along `e3 = (-1, 1)` from the
/// vertex due that turn, its first vertex sharing that vertex's distance.
/// When the extra arrives on the other ray's turn, that ray's next vertex is
/// taken one turn early and its bent successor on the following turn. With
/// both rays bent the fire runs down a strip of constant width; once the
/// strip is `strip_factor * t` long (`t` the radius of the strip's burning
/// front) the firefighter spirals around the front.
pub struct HexContain {
    pub t1: u32,
    pub t2: u32,
    pub strip_factor: u32,
    frame: Option<Frame>,
    bent_a: Option<(i64, u32)>,
    bent_b: Option<(i64, u32)>,
    pending: Vec<Hp>,
    bend_done: Option<u32>,
    spiral: Option<HexSpiral>,
    /// Turn at which the spiral began, with its center and radius.
    pub spiral_start: Option<(u32, Vertex, u64)>,
}

impl HexContain {
    pub fn new(t1: u32, t2: u32) -> Result<HexContain> {
        if t1 == 0 || t2 == 0 {
            return Err(Error::InvalidParams("extra turns are numbered from 1".into()));
        }
        Ok(HexContain {
            t1,
            t2,
            strip_factor: 128,
            frame: None,
            bent_a: None,
            bent_b: None,
            pending: Vec::new(),
            bend_done: None,
            spiral: None,
            spiral_start: None,
        })
    }

    fn a_due(&self, turn: u32) -> Hp {
        match self.bent_a {
            None => ray_a(turn),
            Some((m, t)) => {
                let k = (turn as i64 - t as i64) / 2 + 1;
                Hp::a(1 - k, m + k)
            }
        }
    }

    fn b_due(&self, turn: u32) -> Hp {
        match self.bent_b {
            None => ray_b(turn),
            Some((m, t)) => {
                let k = (turn as i64 - t as i64) / 2 + 1;
                Hp::b(-m - k, -1 + k)
            }
        }
    }

    fn ray_turn(&mut self, turn: u32, budget: u32) -> Vec<Hp> {
        let mut out = std::mem::take(&mut self.pending);
        let a_turn = turn.is_multiple_of(2);
        let due = if a_turn { self.a_due(turn) } else { self.b_due(turn) };
        if !out.contains(&due) {
            out.push(due);
        }
        let bend = |h: Hp| Hp { p: h.p - 1, q: h.q + 1, s: h.s };
        for _ in 1..budget {
            if a_turn && self.bent_a.is_none() {
                self.bent_a = Some((due.q, turn));
                out.push(bend(due));
            } else if !a_turn && self.bent_b.is_none() {
                self.bent_b = Some((-due.p, turn));
                out.push(bend(due));
            } else if a_turn && self.bent_b.is_none() {
                let nv = self.b_due(turn + 1);
                out.push(nv);
                self.bent_b = Some((-nv.p, turn + 1));
                self.pending = vec![bend(nv)];
            } else if !a_turn && self.bent_a.is_none() {
                let nv = self.a_due(turn + 1);
                out.push(nv);
                self.bent_a = Some((nv.q, turn + 1));
                self.pending = vec![bend(nv)];
            }
        }
        if self.bent_a.is_some() && self.bent_b.is_some() && self.pending.is_empty() && self.bend_done.is_none() {
            self.bend_done = Some(turn);
        }
        out
    }
}

impl Strategy for HexContain {
    fn spec(&self) -> StrategySpec {
        let mut p = json!({"t1": self.t1, "t2": self.t2});
        if self.strip_factor != 128 {
            p["strip_factor"] = json!(self.strip_factor);
        }
        StrategySpec::new("hex_contain", p)
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        if self.frame.is_none() {
            self.frame = Some(start_frame(st, "hex_contain")?);
        }
        let frame = self.frame.unwrap();
        let turn = st.turn + 1;
        if let Some(sp) = self.spiral.as_mut() {
            return sp.choose(st);
        }
        if let Some(done) = self.bend_done {
            let active = st.active_fires();
            if active.is_empty() {
                return Ok(Vec::new());
            }
            let (c, t) = smallest_ball(st.lattice(), &active);
            if (turn - 1 - done) as u64 >= self.strip_factor as u64 * t {
                let mut sp = HexSpiral::at(c, t, turn, frame.rotation())?;
                self.spiral_start = Some((turn, c, t));
                let out = sp.choose(st)?;
                self.spiral = Some(sp);
                return Ok(out);
            }
        }
        let budget = st.remaining_budget();
        let local = self.ray_turn(turn, budget);
        Ok(emit(st, &frame, &local, budget))
    }
}
