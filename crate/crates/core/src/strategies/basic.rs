use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{Strategy, StrategySpec};
use crate::engine::GameState;
use crate::error::Result;
use crate::lattice::Vertex;

pub struct Idle;

impl Strategy for Idle {
    fn spec(&self) -> StrategySpec {
        StrategySpec::named("idle")
    }

    fn choose(&mut self, _: &GameState) -> Result<Vec<Vertex>> {
        Ok(Vec::new())
    }
}

/// Free neighbors of the fire, most free neighbors first, ties by coordinates.
pub(crate) fn threatened(st: &GameState) -> Vec<Vertex> {
    let lat = st.lattice();
    let mut cand: Vec<Vertex> = st
        .active_fires()
        .into_iter()
        .flat_map(|x| lat.neighbors(x))
        .filter(|&y| st.is_free(y) && lat.contains(y))
        .collect();
    cand.sort();
    cand.dedup();
    let mut scored: Vec<(usize, Vertex)> =
        cand.into_iter().map(|y| (lat.neighbors(y).into_iter().filter(|&z| st.is_free(z)).count(), y)).collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    scored.into_iter().map(|e| e.1).collect()
}

pub struct Greedy;

impl Strategy for Greedy {
    fn spec(&self) -> StrategySpec {
        StrategySpec::named("greedy")
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        let mut c = threatened(st);
        c.truncate(st.remaining_budget() as usize);
        Ok(c)
    }
}

/// Uniform picks among free vertices within `spread` of an active fire.
pub struct Random {
    seed: u64,
    spread: u32,
    rng: ChaCha8Rng,
}

impl Random {
    pub fn new(seed: u64, spread: u32) -> Random {
        Random { seed, spread, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Strategy for Random {
    fn spec(&self) -> StrategySpec {
        StrategySpec::new("random", json!({"seed": self.seed, "spread": self.spread}))
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        let lat = st.lattice();
        let mut cand: Vec<Vertex> = st
            .active_fires()
            .into_iter()
            .flat_map(|x| lat.ball(x, self.spread as u64))
            .filter(|&y| lat.contains(y) && st.is_free(y))
            .collect();
        cand.sort();
        cand.dedup();
        let k = (st.remaining_budget() as usize).min(cand.len());
        Ok(cand.choose_multiple(&mut self.rng, k).copied().collect())
    }
}

/// Replays a fixed list of protections, one entry per round from round 1.
#[derive(Clone)]
pub struct Scripted {
    turns: Vec<Vec<Vertex>>,
}

impl Scripted {
    pub fn new(turns: Vec<Vec<Vertex>>) -> Scripted {
        Scripted { turns }
    }
}

impl Strategy for Scripted {
    fn spec(&self) -> StrategySpec {
        StrategySpec::new("scripted", json!({ "turns": self.turns }))
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        Ok(self.turns.get(st.turn as usize).cloned().unwrap_or_default())
    }
}
