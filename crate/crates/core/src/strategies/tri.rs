use serde_json::json;

use super::{Strategy, StrategySpec};
use crate::engine::{smallest_ball, GameState};
use crate::error::{Error, Result};
use crate::lattice::{LatticeKind, Vertex};

const E: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

fn add(a: (i64, i64), e: (i64, i64), m: i64) -> (i64, i64) {
    (a.0 + m * e.0, a.1 + m * e.1)
}

/// Two protections per turn around a ball `N<=t0(0)` of the triangular
/// lattice. On turn `s = t0 + 1` both sides of `P = s*e0` are closed; then
/// for `m = 1..=s` the pair `P + m*e(k+1) + (m-1)*e(k+2)`, `P + m*(e(k+1)+e(k+2))`
/// extends the wall along the next cone, after which `P` moves to the last
/// vertex, `s` doubles and `k` advances.
#[derive(Clone, Debug)]
pub struct TriSpiralPlan {
    pub t0: u64,
    turns: Vec<[(i64, i64); 2]>,
    p: (i64, i64),
    s: i64,
    k: usize,
}

impl TriSpiralPlan {
    pub fn new(t0: u64) -> TriSpiralPlan {
        let s = t0 as i64 + 1;
        let p = add((0, 0), E[0], s);
        TriSpiralPlan { t0, turns: vec![[p, add(p, E[1], -1)]], p, s, k: 0 }
    }

    fn extend(&mut self) {
        let (k1, k2) = (E[(self.k + 1) % 6], E[(self.k + 2) % 6]);
        let mut last = self.p;
        for m in 1..=self.s {
            let a = add(add(self.p, k1, m), k2, m - 1);
            let b = add(add(self.p, k1, m), k2, m);
            self.turns.push([a, b]);
            last = b;
        }
        self.p = last;
        self.s *= 2;
        self.k += 1;
    }

    /// Protections for relative turn `t0 + 1 + i`.
    pub fn pair(&mut self, i: usize) -> [(i64, i64); 2] {
        while self.turns.len() <= i {
            self.extend();
        }
        self.turns[i]
    }
}

/// Idles for `delay` rounds, then treats the fire as its smallest covering
/// ball and plays the two-firefighter spiral around it.
pub struct TriSpiral2 {
    delay: u32,
    started: Option<(Vertex, u32, TriSpiralPlan)>,
}

impl TriSpiral2 {
    pub fn new(delay: u32) -> TriSpiral2 {
        TriSpiral2 { delay, started: None }
    }
}

impl Strategy for TriSpiral2 {
    fn spec(&self) -> StrategySpec {
        StrategySpec::new("tri_spiral2", json!({"delay": self.delay}))
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        if st.lattice().kind != LatticeKind::Triangular {
            return Err(Error::Precondition("tri_spiral2 needs the triangular lattice".into()));
        }
        if st.turn < self.delay {
            return Ok(Vec::new());
        }
        if self.started.is_none() {
            let active = st.active_fires();
            if active.is_empty() {
                return Ok(Vec::new());
            }
            let (c, t) = smallest_ball(st.lattice(), &active);
            self.started = Some((c, st.turn + 1, TriSpiralPlan::new(t)));
        }
        let (c, start, plan) = self.started.as_mut().unwrap();
        let pair = plan.pair((st.turn + 1 - *start) as usize);
        let mut out = Vec::new();
        for (p, q) in pair {
            let v = Vertex(c.0 + p, c.1 + q);
            if out.len() < st.remaining_budget() as usize && st.lattice().contains(v) && st.is_free(v) {
                out.push(v);
            }
        }
        Ok(out)
    }
}
