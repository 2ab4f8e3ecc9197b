use firegrid::strategies::{
    build, catalog, Greedy, HexContain, HexSlowdown, HexSpiral, HexTwoRay, SpiralPlan, SquareWedge, Strategy,
    StrategySpec, TriSpiral2,
};
use firegrid::{BudgetSchedule, GameState, GameTrace, Lattice, Vertex};
use serde_json::json;

fn play(lat: Lattice, fire: Vertex, schedule: BudgetSchedule, s: &mut dyn Strategy, horizon: u32) -> GameTrace {
    GameState::new(lat, &[fire], schedule).unwrap().run(s, horizon).unwrap().1
}

// Every protection of round t sits at distance exactly t from the fire.
fn assert_sphere_discipline(trace: &GameTrace, from_turn: u32) {
    let v0 = trace.fires[0];
    for r in trace.rounds.iter().filter(|r| r.turn >= from_turn) {
        for &v in &r.protected {
            assert_eq!(trace.lattice.dist(v0, v), r.turn as u64, "turn {}: {v}", r.turn);
        }
    }
}

#[test]
fn hex_two_ray_protects_on_the_sphere() {
    let t = play(Lattice::hexagonal(80), Vertex(0, 0), BudgetSchedule::constant(1), &mut HexTwoRay::new(), 70);
    assert_eq!(t.rounds.len(), 70);
    assert!(t.rounds.iter().all(|r| r.protected.len() == 1));
    assert_sphere_discipline(&t, 1);
}

#[test]
fn hex_spiral_from_a_fresh_fire() {
    for fire in [Vertex(0, 0), Vertex(1, 0), Vertex(-3, 2)] {
        for k0 in [0, 2, 5] {
            let t = play(Lattice::hexagonal(90), fire, BudgetSchedule::constant(1), &mut HexSpiral::from_ball(k0), 80);
            assert!(t.rounds.iter().all(|r| r.protected.len() == 1), "fire {fire} k0 {k0}");
            assert_sphere_discipline(&t, 1);
        }
    }
}

#[test]
fn hex_slowdown_spirals_after_the_delay() {
    for delay in [0u32, 3, 8] {
        let mut s = HexSlowdown::new(delay, 1);
        let t = play(Lattice::hexagonal(100), Vertex(0, 0), BudgetSchedule::constant(1), &mut s, 90);
        assert!(t.rounds.iter().take(delay as usize).all(|r| r.protected.is_empty()));
        assert!(t.rounds.iter().skip(delay as usize).all(|r| r.protected.len() == 1));
        assert_sphere_discipline(&t, delay + 1);
        assert_eq!(s.spiral().unwrap().center(), Some((Vertex(0, 0), delay as u64)));
    }
}

#[test]
fn tri_spiral2_uses_both_firefighters_on_the_sphere() {
    let t = play(Lattice::triangular(80), Vertex(0, 0), BudgetSchedule::constant(2), &mut TriSpiral2::new(0), 70);
    assert!(t.rounds.iter().all(|r| r.protected.len() == 2));
    assert_sphere_discipline(&t, 1);
    let t = play(Lattice::triangular(80), Vertex(2, -1), BudgetSchedule::constant(2), &mut TriSpiral2::new(4), 60);
    assert!(t.rounds[..4].iter().all(|r| r.protected.is_empty()));
    assert_sphere_discipline(&t, 5);
}

// A segment begins where the previous one meets its cone boundary, one turn
// before its first own vertex. Past the first segment those turns double; the
// first segment depends on where the first line cuts its cone.
#[test]
fn spiral_segments_double() {
    for k0 in 0..6 {
        for t0 in [0u64, 1, 2, 3, 5, 10, 17] {
            let mut plan = SpiralPlan::new(t0, k0).unwrap();
            plan.vertex(3000).unwrap();
            let starts: Vec<u64> = plan.segments.iter().map(|s| s.1).collect();
            assert_eq!(starts[0], t0 + 1);
            assert!((starts[1] - 1).abs_diff(2 * starts[0]) <= 2, "k0 {k0} t0 {t0}: {starts:?}");
            for w in starts[1..].windows(2) {
                let (begin, next) = (w[0] - 1, w[1] - 1);
                assert!(2 * begin <= next && next <= 2 * begin + 1, "k0 {k0} t0 {t0}: {starts:?}");
            }
            for w in plan.segments.windows(2) {
                assert_eq!(w[1].0, (w[0].0 + 1) % 6);
            }
        }
    }
    let mut plan = SpiralPlan::new(3, 0).unwrap();
    plan.vertex(40).unwrap();
    assert_eq!(plan.segments[0].1, 4);
    assert_eq!(plan.segments[1].1, 9);
}

#[test]
fn hex_contain_ray_phase_stays_within_one_of_the_sphere() {
    for (t1, t2) in [(1u32, 1u32), (2, 5), (3, 4), (4, 4)] {
        let mut s = HexContain::new(t1, t2).unwrap();
        let t = play(Lattice::hexagonal(800), Vertex(0, 0), BudgetSchedule::with_extras(1, &[t1, t2]), &mut s, 2000);
        assert!(t.outcome.contained, "({t1}, {t2}) not contained");
        let spiral_turn = s.spiral_start.map(|x| x.0).unwrap_or(u32::MAX);
        for r in t.rounds.iter().filter(|r| r.turn < spiral_turn) {
            for &v in &r.protected {
                let d = t.lattice.dist(t.fires[0], v);
                assert!(d == r.turn as u64 || d == r.turn as u64 + 1, "({t1}, {t2}) turn {}: {v} at {d}", r.turn);
            }
        }
        if let Some((start, c, radius)) = s.spiral_start {
            for r in t.rounds.iter().filter(|r| r.turn >= start) {
                for &v in &r.protected {
                    assert_eq!(t.lattice.dist(c, v), radius + 1 + (r.turn - start) as u64);
                }
            }
        }
    }
}

#[test]
fn wedge_saves_a_quarter_of_every_large_ball() {
    let mut s = SquareWedge::new();
    let t = play(Lattice::infinite_square(200), Vertex(0, 0), BudgetSchedule::constant(1), &mut s, 200);
    let st = t.replay(None).unwrap();
    for i in (20..=100u64).step_by(5) {
        let ball = t.lattice.ball(Vertex(0, 0), i);
        let saved = ball.iter().filter(|&&v| !st.is_burning(v)).count() as f64;
        let frac = saved / ball.len() as f64;
        assert!((frac - 0.25).abs() <= 3.0 / i as f64, "radius {i}: {frac}");
    }
}

#[test]
fn wedge_keeps_the_sphere_discipline_on_finite_grids() {
    for n in [9u32, 10, 25] {
        let lat = Lattice::finite_square(n);
        for fire in [Vertex(0, 0), Vertex(-2, 3), Vertex(1, -4)] {
            if lat.check(fire).is_err() {
                continue;
            }
            let t = play(lat, fire, BudgetSchedule::constant(1), &mut SquareWedge::new(), 400);
            assert!(t.outcome.contained);
            assert_sphere_discipline(&t, 1);
        }
    }
}

#[test]
fn greedy_saves_at_least_two_from_the_center_of_three_by_three() {
    let t = play(Lattice::finite_square(3), Vertex(0, 0), BudgetSchedule::constant(1), &mut Greedy, 10);
    assert!(t.outcome.saved.unwrap() >= 2);
}

#[test]
fn catalog_strategies_play_legal_games() {
    let cases: Vec<(StrategySpec, Lattice, u32)> = vec![
        (StrategySpec::named("idle"), Lattice::finite_square(6), 1),
        (StrategySpec::named("greedy"), Lattice::hexagonal(30), 2),
        (StrategySpec::new("random", json!({"seed": 7, "spread": 3})), Lattice::triangular(30), 2),
        (StrategySpec::named("square_wedge"), Lattice::finite_square(15), 1),
        (StrategySpec::named("hex_two_ray"), Lattice::hexagonal(40), 1),
        (StrategySpec::new("hex_spiral", json!({"k0": 3})), Lattice::hexagonal(40), 1),
        (StrategySpec::new("hex_slowdown", json!({"delay": 2})), Lattice::hexagonal(40), 1),
        (StrategySpec::named("tri_spiral2"), Lattice::triangular(40), 2),
    ];
    for (spec, lat, budget) in cases {
        let mut s = build(&spec).unwrap();
        assert_eq!(s.spec().name, spec.name);
        let mut st = GameState::new(lat, &[Vertex(0, 0)], BudgetSchedule::constant(budget)).unwrap();
        for _ in 0..25 {
            if st.is_contained() {
                break;
            }
            let picks = s.choose(&st).unwrap();
            assert!(picks.len() as u32 <= budget, "{}", spec.name);
            assert!(picks.iter().all(|&v| st.is_free(v)), "{}", spec.name);
            st.protect(&picks).unwrap();
            st.spread().unwrap();
        }
    }
    assert_eq!(catalog().len(), 10);
}

#[test]
fn strategies_refuse_the_wrong_lattice() {
    for name in ["hex_two_ray", "hex_spiral", "tri_spiral2", "square_wedge"] {
        let lat = if name == "square_wedge" { Lattice::hexagonal(10) } else { Lattice::finite_square(9) };
        let st = GameState::new(lat, &[Vertex(0, 0)], BudgetSchedule::constant(1)).unwrap();
        let err = build(&StrategySpec::named(name)).unwrap().choose(&st).unwrap_err();
        assert_eq!(err.code(), "PreconditionViolation", "{name}");
    }
    assert_eq!(build(&StrategySpec::named("nope")).err().unwrap().code(), "UnknownStrategy");
    let bad = StrategySpec::new("hex_contain", json!({"t1": -1, "t2": 2}));
    assert_eq!(build(&bad).err().unwrap().code(), "InvalidParams");
}
