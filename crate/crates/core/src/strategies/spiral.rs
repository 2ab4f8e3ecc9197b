//! Spiral of armchair segments around a burning ball on the hexagonal lattice.
//!
//! Coordinates are local: the ball is centered at `A(0,0)`. Segment `i`
//! runs along a line perpendicular to the ray of cone `k0 + i`, whose
//! vertices have distances increasing by one, so protecting them in order
//! keeps one protection per turn on the current sphere.

use serde_json::json;

use super::{Strategy, StrategySpec};
use crate::engine::{smallest_ball, GameState};
use crate::error::{Error, Result};
use crate::hexcoord::{self, dist_from_origin, perp12, proj4, Frame, Hp};
use crate::lattice::{LatticeKind, Vertex};

/// All vertices with `proj4 == c4` and `perp12` in `[wlo, whi]`, by `perp12`.
fn line(k: usize, c4: i64, wlo: i64, whi: i64) -> Vec<Hp> {
    let (alpha, beta) = match k % 6 {
        0 => (2, 0),
        1 => (1, 1),
        2 => (-1, 1),
        3 => (-2, 0),
        4 => (-1, -1),
        _ => (1, -1),
    };
    let reach = c4.abs() + wlo.abs().max(whi.abs()) + 4;
    let mut out = Vec::new();
    for q in -reach..=reach {
        for s in 0..2i64 {
            let num = c4 - (alpha + 3 * beta) * q - (alpha + beta) * s;
            if num % (2 * alpha) != 0 {
                continue;
            }
            let h = Hp { p: num / (2 * alpha), q, s: s as u8 };
            let w = perp12(k, h.scaled_xy());
            if (wlo..=whi).contains(&w) {
                out.push((w, h));
            }
        }
    }
    out.sort();
    out.into_iter().map(|e| e.1).collect()
}

#[derive(Clone, Debug)]
pub struct SpiralPlan {
    pub t0: u64,
    verts: Vec<Hp>,
    /// `(cone, distance of first vertex)` per segment.
    pub segments: Vec<(usize, u64)>,
    k: usize,
    c4: i64,
}

impl SpiralPlan {
    /// Around a single vertex only every other cone has a first line that
    /// meets `N_1`; the plan then starts one cone later.
    pub fn new(t0: u64, k0: usize) -> Result<SpiralPlan> {
        let mut last = Error::Precondition("no first spiral line".into());
        for k in [k0, k0 + 1] {
            let Some(c4) = (0..(4 * t0 as i64 + 8))
                .map(|x| 2 * x)
                .find(|&c| line(k, c, -2, 4).iter().any(|&h| dist_from_origin(h) == t0 + 1))
            else {
                continue;
            };
            let mut plan = SpiralPlan { t0, verts: Vec::new(), segments: Vec::new(), k, c4 };
            match plan.extend() {
                Ok(()) => return Ok(plan),
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    fn extend(&mut self) -> Result<()> {
        let k = self.k % 6;
        let want = self.t0 + 1 + self.verts.len() as u64;
        let mut seg = Vec::new();
        for h in line(k, self.c4, -2, 3 * self.c4 + 6) {
            if perp12(k + 1, h.scaled_xy()) > 0 {
                break;
            }
            if dist_from_origin(h) >= want {
                seg.push(h);
            }
        }
        for (i, h) in seg.iter().enumerate() {
            if dist_from_origin(*h) != want + i as u64 {
                return Err(Error::Precondition(format!("spiral segment {} skips a sphere", self.segments.len())));
            }
        }
        let Some(&last) = seg.last() else {
            return Err(Error::Precondition("empty spiral segment".into()));
        };
        self.segments.push((k, want));
        self.verts.extend(seg);
        self.k += 1;
        let kk = self.k % 6;
        let base = proj4(kk, last.scaled_xy());
        let next = dist_from_origin(last) + 1;
        self.c4 = [0, 2, 4, -2]
            .into_iter()
            .map(|dc| base + dc)
            .find(|&c| line(kk, c, -20, 20).iter().any(|&h| dist_from_origin(h) == next))
            .ok_or_else(|| Error::Precondition("spiral cannot turn the corner".into()))?;
        Ok(())
    }

    /// The vertex for relative turn `t0 + 1 + i`.
    pub fn vertex(&mut self, i: usize) -> Result<Hp> {
        while self.verts.len() <= i {
            self.extend()?;
        }
        Ok(self.verts[i])
    }
}

/// Spiral around a ball `N<=t0(center)` that starts burning-as-a-ball when
/// round `start_turn` begins. `k0` is the first cone in global directions.
#[derive(Clone, Debug)]
pub struct HexSpiral {
    k0_global: usize,
    started: Option<(Frame, u32, SpiralPlan)>,
}

impl HexSpiral {
    /// Waits for the first call, checks that the fire is exactly a ball and
    /// spirals around it.
    pub fn from_ball(k0: usize) -> HexSpiral {
        HexSpiral { k0_global: k0, started: None }
    }

    pub fn at(center: Vertex, t0: u64, start_turn: u32, k0: usize) -> Result<HexSpiral> {
        let frame = Frame::at(hexcoord::from_brick(center));
        let plan = SpiralPlan::new(t0, (k0 + frame.rotation()) % 6)?;
        Ok(HexSpiral { k0_global: k0, started: Some((frame, start_turn, plan)) })
    }

    pub fn center(&self) -> Option<(Vertex, u64)> {
        self.started.as_ref().map(|(f, _, p)| (hexcoord::to_brick(f.origin), p.t0))
    }

    pub fn plan(&self) -> Option<&SpiralPlan> {
        self.started.as_ref().map(|s| &s.2)
    }
}

fn require_hex(st: &GameState) -> Result<()> {
    if st.lattice().kind != LatticeKind::Hexagonal {
        return Err(Error::Precondition("strategy needs the hexagonal lattice".into()));
    }
    Ok(())
}

impl Strategy for HexSpiral {
    fn spec(&self) -> StrategySpec {
        StrategySpec::new("hex_spiral", json!({"k0": self.k0_global}))
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        if self.started.is_none() {
            require_hex(st)?;
            let lat = *st.lattice();
            let active = st.active_fires();
            if active.is_empty() {
                return Ok(Vec::new());
            }
            let (c, t) = smallest_ball(&lat, &active);
            let ball = lat.ball(c, t);
            if ball.len() != st.burning_count() || !ball.iter().all(|&v| st.is_burning(v)) {
                return Err(Error::Precondition("hex_spiral needs a fire that burns exactly a ball".into()));
            }
            *self = HexSpiral::at(c, t, st.turn + 1, self.k0_global)?;
        }
        let (frame, start, plan) = self.started.as_mut().unwrap();
        let turn = st.turn + 1;
        if turn < *start || st.remaining_budget() == 0 {
            return Ok(Vec::new());
        }
        let h = plan.vertex((turn - *start) as usize)?;
        let v = hexcoord::to_brick(frame.to_global(h));
        if st.lattice().contains(v) && st.is_free(v) {
            Ok(vec![v])
        } else {
            Ok(Vec::new())
        }
    }
}

/// Idles for `delay` rounds, then collapses the fire onto its smallest
/// covering ball and spirals around that ball.
pub struct HexSlowdown {
    delay: u32,
    k0: usize,
    inner: Option<HexSpiral>,
}

impl HexSlowdown {
    pub fn new(delay: u32, k0: usize) -> HexSlowdown {
        HexSlowdown { delay, k0, inner: None }
    }

    pub fn spiral(&self) -> Option<&HexSpiral> {
        self.inner.as_ref()
    }
}

impl Strategy for HexSlowdown {
    fn spec(&self) -> StrategySpec {
        StrategySpec::new("hex_slowdown", json!({"delay": self.delay, "k0": self.k0}))
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        require_hex(st)?;
        if st.turn < self.delay {
            return Ok(Vec::new());
        }
        if self.inner.is_none() {
            let active = st.active_fires();
            if active.is_empty() {
                return Ok(Vec::new());
            }
            let (c, t) = smallest_ball(st.lattice(), &active);
            self.inner = Some(HexSpiral::at(c, t, st.turn + 1, self.k0)?);
        }
        self.inner.as_mut().unwrap().choose(st)
    }
}
