//! Surviving-rate estimates from finished games.

use serde::Serialize;

use crate::engine::{BudgetSchedule, GameState, GameTrace};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateSample {
    pub radius: u64,
    pub ball: u64,
    pub saved: u64,
    pub ratio: f64,
}

/// Per-distance vertex and unburnt counts around `center`, for distances
/// `0..=max_r`. Every vertex of the ball must lie in the lattice window.
pub fn saved_by_distance(st: &GameState, center: Vertex, max_r: u64) -> Result<Vec<(u64, u64)>> {
    let lat = st.lattice();
    let mut hist = vec![(0u64, 0u64); max_r as usize + 1];
    for v in lat.ball(center, max_r) {
        if !lat.in_lattice(v) {
            continue;
        }
        if !lat.contains(v) {
            return Err(Error::OutsideWindow(v, lat.window.unwrap_or(0)));
        }
        let d = lat.dist(center, v) as usize;
        hist[d].0 += 1;
        if !st.is_burning(v) {
            hist[d].1 += 1;
        }
    }
    Ok(hist)
}

/// `|N<=i(center) \ burnt| / |N<=i(center)|` for each radius, measured on the
/// final state of a game. Vertices that are unburnt when the game stops count
/// as saved, so the horizon should cover the radii (we use radii up to half
/// the horizon for strategies whose saved region keeps growing).
pub fn surviving_rate_estimate(st: &GameState, center: Vertex, radii: &[u64]) -> Result<Vec<RateSample>> {
    let max_r = radii.iter().copied().max().unwrap_or(0);
    let hist = saved_by_distance(st, center, max_r)?;
    let mut out = Vec::new();
    for &r in radii {
        let (ball, saved) = hist[..=r as usize].iter().fold((0, 0), |acc, h| (acc.0 + h.0, acc.1 + h.1));
        out.push(RateSample { radius: r, ball, saved, ratio: saved as f64 / ball as f64 });
    }
    Ok(out)
}

/// Gaps between the ratio sequences around two centers.
pub fn center_invariance(st: &GameState, c1: Vertex, c2: Vertex, radii: &[u64]) -> Result<Vec<(u64, f64)>> {
    let a = surviving_rate_estimate(st, c1, radii)?;
    let b = surviving_rate_estimate(st, c2, radii)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x.radius, (x.ratio - y.ratio).abs())).collect())
}

/// `|N_r(c)| / |N<=r(c)|`; balls only approximate a rate when this is small.
pub fn sphere_ball_ratio(lat: &Lattice, c: Vertex, r: u64) -> f64 {
    let sphere = lat.sphere(c, r).len() as f64;
    let ball: usize = (0..=r).map(|k| lat.sphere(c, k).len()).sum();
    sphere / ball as f64
}

/// Largest distance from `v0` of a vertex burnt by the end of round `t`,
/// divided by `t`.
pub fn containment_radius_ratio(trace: &GameTrace, v0: Vertex, t: u32) -> f64 {
    let lat = &trace.lattice;
    let mut far = trace.fires.iter().map(|&f| lat.dist(v0, f)).max().unwrap_or(0);
    for r in trace.rounds.iter().filter(|r| r.turn <= t) {
        for &v in &r.ignited {
            far = far.max(lat.dist(v0, v));
        }
    }
    far as f64 / t as f64
}

/// `sum_r max(|N_r(v)| - r, 0)`: every game from `v` with one firefighter
/// per turn burns at least this many vertices.
pub fn sphere_burn_lower_bound(lat: &Lattice, v: Vertex, max_r: u64) -> u64 {
    (1..=max_r).map(|r| (lat.sphere(v, r).len() as u64).saturating_sub(r)).sum()
}

/// Turns `r` at which more than `sum_{i<=r} budget(i)` vertices of `N_r(v0)`
/// are still unburnt after round `r`. Empty when the sphere bound holds.
pub fn sphere_bound_violations(trace: &GameTrace) -> Result<Vec<(u32, u64)>> {
    if trace.fires.len() != 1 {
        return Err(Error::Precondition("the sphere bound needs a single initial fire".into()));
    }
    let v0 = trace.fires[0];
    let lat = trace.lattice;
    let mut st = trace.initial_state()?;
    let mut spent = 0u64;
    let mut bad = Vec::new();
    for round in &trace.rounds {
        spent += trace.schedule.budget(round.turn) as u64;
        st.protect(&round.protected)?;
        st.spread()?;
        let r = round.turn as u64;
        let unburnt = lat.sphere(v0, r).into_iter().filter(|&u| !st.is_burning(u)).count() as u64;
        if unburnt > spent {
            bad.push((round.turn, unburnt));
        }
    }
    Ok(bad)
}

/// Surviving-rate sequence on the `d`-ary tree when each turn protects
/// `budget` children of burning vertices, computed per level: after `k`
/// turns the fire holds `b_k = d * b_(k-1) - min(budget, d * b_(k-1))`
/// vertices of level `k`.
pub fn tree_rate_by_levels(d: u64, budget: u64, radii: &[u64]) -> Vec<RateSample> {
    let max_r = radii.iter().copied().max().unwrap_or(0);
    let (mut level, mut burning) = (1f64, 1f64);
    let (mut ball, mut burnt) = (vec![1f64], vec![1f64]);
    for _ in 1..=max_r {
        level *= d as f64;
        let threatened = burning * d as f64;
        burning = threatened - (budget as f64).min(threatened);
        ball.push(ball.last().unwrap() + level);
        burnt.push(burnt.last().unwrap() + burning);
    }
    radii
        .iter()
        .map(|&r| {
            let (b, s) = (ball[r as usize], ball[r as usize] - burnt[r as usize]);
            RateSample { radius: r, ball: b as u64, saved: s as u64, ratio: s / b }
        })
        .collect()
}

/// Plays `strategy` from a single fire until containment or `horizon`
/// rounds and returns the final state with its trace.
pub fn play(
    lat: Lattice,
    fire: Vertex,
    schedule: BudgetSchedule,
    strategy: &mut dyn crate::strategies::Strategy,
    horizon: u32,
) -> Result<(GameState, GameTrace)> {
    GameState::new(lat, &[fire], schedule)?.run(strategy, horizon)
}
