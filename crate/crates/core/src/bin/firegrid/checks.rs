use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use firegrid::analysis::{self, appendix, play, translation};
use firegrid::solver::{self, SolveOptions};
use firegrid::strategies::{self, canonical_start, StrategySpec};
use firegrid::{BudgetSchedule, Error, GameState, Lattice, Result, Vertex};

pub const IDS: [&str; 13] = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13"];

#[derive(Serialize)]
pub struct Check {
    pub id: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub summary: String,
    pub detail: Value,
}

pub fn run(id: &str, seed: u64) -> Result<Check> {
    let id = IDS
        .iter()
        .copied()
        .find(|k| k.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::InvalidParams(format!("unknown check '{id}'")))?;
    let start = Instant::now();
    let (pass, summary, detail) = match id {
        "A1" => path_rates()?,
        "A2" => clique_rates()?,
        "A3" => sphere_bound_games(seed)?,
        "A4" => wedge_on_grid(seed)?,
        "A5" => region_constants()?,
        "A6" => profile_vs_counts()?,
        "A7" => infinite_ratios()?,
        "A8" => hex_containment()?,
        "A9" => slowdown()?,
        "A10" => square_containment()?,
        "A11" => translations()?,
        "A12" => pruned_vs_exhaustive()?,
        _ => center_gaps()?,
    };
    Ok(Check { id, pass, seconds: start.elapsed().as_secs_f64(), summary, detail })
}

type Out = (bool, String, Value);

fn path_rates() -> Result<Out> {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in 2..=8u32 {
        let got =
            solver::surviving_rate_exact(&Lattice::path(n), &BudgetSchedule::constant(1), &SolveOptions::default())?;
        let n64 = n as i64;
        let want = Ratio::new(n64 * n64 - 2 * n64 + 2, n64 * n64);
        pass &= got == want;
        rows.push(json!({"n": n, "rate": got.to_string(), "formula": want.to_string()}));
    }
    Ok((pass, "rho(P_n) = 1 - 2/n + 2/n^2 for n = 2..8".into(), json!(rows)))
}

fn clique_rates() -> Result<Out> {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in 2..=6u32 {
        let got = solver::surviving_rate_exact(
            &Lattice::complete(n),
            &BudgetSchedule::constant(1),
            &SolveOptions::default(),
        )?;
        pass &= got == Ratio::new(1, n as i64);
        rows.push(json!({"n": n, "rate": got.to_string()}));
    }
    Ok((pass, "rho(K_n) = 1/n for n = 2..6".into(), json!(rows)))
}

fn sphere_bound_games(seed: u64) -> Result<Out> {
    let n = 25u32;
    let lat = Lattice::finite_square(n);
    let (lo, hi) = Lattice::square_range(n);
    let games: Vec<Result<(usize, usize)>> = (0..1000u64)
        .into_par_iter()
        .map(|g| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ g.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let fire = Vertex(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
            let spec = StrategySpec::new("random", json!({"seed": rng.gen::<u64>(), "spread": rng.gen_range(1..=4)}));
            let mut s = strategies::build(&spec)?;
            let (_, trace) = play(lat, fire, BudgetSchedule::constant(1), s.as_mut(), 4 * n)?;
            Ok((trace.rounds.len(), analysis::sphere_bound_violations(&trace)?.len()))
        })
        .collect();
    let games: Vec<(usize, usize)> = games.into_iter().collect::<Result<_>>()?;
    let pairs: usize = games.iter().map(|g| g.0).sum();
    let violations: usize = games.iter().map(|g| g.1).sum();
    Ok((
        violations == 0,
        format!("{} games, {pairs} (game, r) pairs, {violations} violations", games.len()),
        json!({"games": games.len(), "pairs": pairs, "violations": violations, "seed": seed}),
    ))
}

fn wedge_on_grid(seed: u64) -> Result<Out> {
    let n = 101u32;
    let lat = Lattice::finite_square(n);
    let (lo, hi) = Lattice::square_range(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vertex> = (0..500).map(|_| Vertex(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))).collect();
    let rows: Vec<Result<(f64, f64)>> = starts
        .par_iter()
        .map(|&v| {
            let mut s = strategies::build(&StrategySpec::named("square_wedge"))?;
            let (_, trace) = play(lat, v, BudgetSchedule::constant(1), s.as_mut(), 4 * n)?;
            let saved = trace.outcome.saved.unwrap_or(0) as f64 / (n * n) as f64;
            let c = canonical_start(n, v);
            Ok((saved, appendix::wedge_saved_fraction(c.0 as f64 / n as f64, c.1 as f64 / n as f64)))
        })
        .collect();
    let rows: Vec<(f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
    let mean = rows.iter().map(|r| r.0).sum::<f64>() / rows.len() as f64;
    let worst = rows.iter().map(|r| (r.0 - r.1).abs()).fold(0.0, f64::max);
    Ok((
        (mean - 0.625).abs() <= 0.02 && worst <= 0.05,
        format!("mean saved {mean:.4} (5/8 = 0.625), worst per-start gap {worst:.2e}"),
        json!({"n": n, "starts": rows.len(), "mean": mean, "worst_gap": worst, "seed": seed}),
    ))
}

fn region_constants() -> Result<Out> {
    let t = appendix::theorem1_bounds(1e-10)?;
    let mut pass = (t.total - t.published_total_value).abs() <= 1e-6;
    for r in &t.regions {
        pass &= (r.quadrature - r.published_value).abs() <= 1e-6;
    }
    Ok((pass, format!("total {:.6} vs {}", t.total, t.published_total), serde_json::to_value(&t)?))
}

fn profile_vs_counts() -> Result<Out> {
    let n = 300u32;
    let lat = Lattice::finite_square(n);
    let mut by_case: Vec<Vec<(f64, f64)>> = vec![Vec::new(); appendix::CASES.len()];
    for i in 0..=50 {
        for j in 0..=i {
            let (x, y) = (i as f64 / 100.0, j as f64 / 100.0);
            let case = appendix::classify(x, y)?;
            by_case[appendix::CASES.iter().position(|&c| c == case).unwrap()].push((x, y));
        }
    }
    let mut rows = Vec::new();
    let mut pass = true;
    for (k, pts) in by_case.iter().enumerate() {
        if pts.len() < 4 {
            pass = false;
            continue;
        }
        for q in 0..4 {
            let (x, y) = pts[q * (pts.len() - 1) / 3];
            let v = Vertex((x * n as f64).round() as i64, (y * n as f64).round() as i64);
            let mut worst = 0f64;
            for r in 1..2 * n as u64 {
                let count = lat.sphere(v, r).len() as f64 / n as f64;
                worst = worst.max((count - appendix::sphere_profile(x, y, r as f64 / n as f64)?).abs());
            }
            pass &= worst <= 4.0 / n as f64;
            rows.push(json!({"case": appendix::CASES[k].label(), "x": x, "y": y, "worst": worst}));
        }
    }
    let worst = rows.iter().map(|r| r["worst"].as_f64().unwrap()).fold(0.0, f64::max);
    Ok((pass, format!("{} starts, worst gap {worst:.5} (limit {:.5})", rows.len(), 4.0 / n as f64), json!(rows)))
}

fn ratio_at(
    lat: Lattice,
    name: &str,
    horizon: u32,
    center: Vertex,
    radii: &[u64],
) -> Result<(GameState, Vec<analysis::RateSample>)> {
    let mut s = strategies::build(&StrategySpec::named(name))?;
    let (st, _) = play(lat, Vertex(0, 0), BudgetSchedule::constant(1), s.as_mut(), horizon)?;
    let rates = analysis::surviving_rate_estimate(&st, center, radii)?;
    Ok((st, rates))
}

fn infinite_ratios() -> Result<Out> {
    let (_, w) = ratio_at(Lattice::infinite_square(820), "square_wedge", 800, Vertex(0, 0), &[400])?;
    let (_, h) = ratio_at(Lattice::hexagonal(820), "hex_two_ray", 800, Vertex(0, 0), &[400])?;
    let (w, h) = (w[0].ratio, h[0].ratio);
    Ok((
        (w - 0.25).abs() <= 0.01 && (h - 2.0 / 3.0).abs() <= 0.01,
        format!("wedge {w:.5} (1/4), two-ray {h:.5} (2/3) at radius 400"),
        json!({"square_wedge": w, "hex_two_ray": h}),
    ))
}

fn hex_containment() -> Result<Out> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (t1, t2) in [(1u32, 1u32), (2, 5), (3, 7), (5, 8)] {
        let spec = StrategySpec::new("hex_contain", json!({"t1": t1, "t2": t2}));
        let mut s = strategies::build(&spec)?;
        let (st, trace) =
            play(Lattice::hexagonal(1000), Vertex(0, 0), BudgetSchedule::with_extras(1, &[t1, t2]), s.as_mut(), 3000)?;
        pass &= st.is_contained();
        rows.push(json!({"t1": t1, "t2": t2, "contained": st.is_contained(), "turns": trace.rounds.len(), "burnt": st.burning_count()}));
    }
    let turns: Vec<String> = rows.iter().map(|r| r["turns"].to_string()).collect();
    Ok((pass, format!("contained after {} turns", turns.join(", ")), json!(rows)))
}

fn slowdown() -> Result<Out> {
    let t = 512u32;
    let mut rows = Vec::new();
    let mut pass = true;
    for (lat, name, k) in
        [(Lattice::hexagonal(t + 20), "hex_slowdown", 1), (Lattice::triangular(t + 20), "tri_spiral2", 2)]
    {
        let mut s = strategies::build(&StrategySpec::new(name, json!({"delay": 2})))?;
        let (_, trace) = play(lat, Vertex(0, 0), BudgetSchedule::constant(k), s.as_mut(), t)?;
        let ratio = analysis::containment_radius_ratio(&trace, Vertex(0, 0), t);
        pass &= ratio <= 0.999;
        rows.push(json!({"strategy": name, "ratio": ratio}));
    }
    Ok((pass, format!("ratios {} and {} at T = {t}", rows[0]["ratio"], rows[1]["ratio"]), json!(rows)))
}

fn square_containment() -> Result<Out> {
    let lat = Lattice::infinite_square(12);
    let two = solver::verify_containment_search(&lat, &[Vertex(0, 0)], &BudgetSchedule::constant(2), 8, 500_000_000)?;
    let one = solver::verify_containment_search(&lat, &[Vertex(0, 0)], &BudgetSchedule::constant(1), 6, 500_000_000)?;
    let pass = two.witness.as_ref().is_some_and(|w| w.turns <= 8) && one.witness.is_none() && one.exhaustive;
    let summary = match &two.witness {
        Some(w) => format!(
            "two firefighters: contained in {} turns, {} burnt; one firefighter within 6: none (exhaustive {})",
            w.turns, w.burnt, one.exhaustive
        ),
        None => "two firefighters: no witness".into(),
    };
    Ok((
        pass,
        summary,
        json!({"two": two, "one": {"containable": one.witness.is_some(), "exhaustive": one.exhaustive, "nodes": one.nodes}}),
    ))
}

fn translations() -> Result<Out> {
    let tri = Lattice::triangular(10);
    let cases: [(&[Vertex], u32); 3] = [(&[Vertex(0, 0)], 4), (&[Vertex(0, 0)], 6), (&[Vertex(0, 0), Vertex(1, 0)], 6)];
    let mut rows = Vec::new();
    let mut pass = true;
    for (fires, k) in cases {
        let schedule = BudgetSchedule::constant(k);
        let rep = solver::verify_containment_search(&tri, fires, &schedule, 6, 50_000_000)?;
        let Some(w) = rep.witness else {
            pass = false;
            continue;
        };
        let spec = StrategySpec::new("scripted", json!({ "turns": w.sequence }));
        let (_, _, audit) = translation::translate_and_audit(tri, fires, &schedule, &spec, 40)?;
        pass &=
            audit.turns_hex <= 2 * audit.turns_tri + 1 && audit.burnt_hex <= 2 * audit.burnt_tri + audit.firefighters;
        rows.push(json!({"fires": fires, "budget": k, "audit": audit}));
    }
    Ok((pass, format!("{} translated runs audited", rows.len()), json!(rows)))
}

fn pruned_vs_exhaustive() -> Result<Out> {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in [3u32, 4] {
        let lat = Lattice::finite_square(n);
        for v in lat.vertices()? {
            let st = GameState::new(lat, &[v], BudgetSchedule::constant(1))?;
            let a = solver::solve(&st, &SolveOptions::default())?;
            let b = solver::solve(&st, &SolveOptions::exhaustive())?;
            pass &= a.proved && b.proved && a.sn == b.sn;
            rows.push(json!({"n": n, "fire": v, "pruned": a.sn, "exhaustive": b.sn, "nodes": [a.nodes, b.nodes]}));
        }
    }
    Ok((pass, format!("{} starts agree", rows.len()), json!(rows)))
}

fn center_gaps() -> Result<Out> {
    let radii = [200u64, 300, 400];
    let mut rows = Vec::new();
    let mut pass = true;
    for (lat, name) in [(Lattice::infinite_square(1250), "square_wedge"), (Lattice::hexagonal(1250), "hex_two_ray")] {
        let (st, _) = ratio_at(lat, name, 1200, Vertex(0, 0), &[])?;
        let gaps = analysis::center_invariance(&st, Vertex(0, 0), Vertex(20, 10), &radii)?;
        pass &= gaps.windows(2).all(|w| w[1].1 < w[0].1) && gaps.last().unwrap().1 <= 0.05;
        rows.push(json!({"strategy": name, "gaps": gaps}));
    }
    let last = |i: usize| rows[i]["gaps"][2][1].as_f64().unwrap();
    Ok((pass, format!("final gaps {:.4} and {:.4}", last(0), last(1)), json!(rows)))
}
