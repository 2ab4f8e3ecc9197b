use firegrid::analysis::appendix::{
    burn_fraction_by_profile, burn_fraction_to_stop, classify, closed_form, lower_bound_exact, published_constants,
    published_upper_bound, region_constant, region_constant_exact, sphere_profile, stop_time, theorem1_bounds, Case, Q,
};
use firegrid::analysis::{translate_and_audit, tree_rate_by_levels, Quad};
use firegrid::solver::verify_containment_search;
use firegrid::strategies::{tri_to_hex_vertex, Greedy, StrategySpec};
use firegrid::{BudgetSchedule, GameState, Lattice, Vertex};
use num_traits::{One, Zero};
use serde_json::json;

// Sphere sizes around (a, b) on the grid {0..n-1}^2, counted cell by cell.
fn sphere_counts(n: i64, a: i64, b: i64) -> Vec<i64> {
    let mut c = vec![0i64; 2 * n as usize + 1];
    for i in 0..n {
        for j in 0..n {
            c[((i - a).abs() + (j - b).abs()) as usize] += 1;
        }
    }
    c
}

fn grid_fire(n: i64, x: f64, y: f64) -> (i64, i64) {
    (n / 2 + (x * n as f64).round() as i64, n / 2 + (y * n as f64).round() as i64)
}

// (1/n^2) sum_{R <= tn} (|N_R| - R), the discrete form of int_0^t (profile(r) - r) dr.
fn discrete_burn(n: i64, x: f64, y: f64, t: f64) -> f64 {
    let (a, b) = grid_fire(n, x, y);
    let c = sphere_counts(n, a, b);
    let top = (t * n as f64).floor() as usize;
    (0..=top).map(|r| c[r] - r as i64).sum::<i64>() as f64 / (n * n) as f64
}

fn sample_points() -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for i in 0..=25 {
        for j in 0..=i {
            pts.push((0.02 * i as f64, 0.02 * j as f64));
        }
    }
    pts
}

fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

#[test]
fn region_constants_equal_the_published_fractions() {
    let mut sum = Q::zero();
    for (case, published) in published_constants() {
        let exact = region_constant_exact(case);
        assert_eq!(exact, published, "case {}", case.label());
        sum += exact;
    }
    assert_eq!(Q::one() - Q::from_integer(8) * sum, published_upper_bound());
    assert_eq!(published_upper_bound(), q(67243, 105300));
    assert_eq!(lower_bound_exact(), q(5, 8));
}

#[test]
fn quadrature_agrees_with_exact_constants() {
    let quad = Quad::default();
    for (case, published) in published_constants() {
        let e = region_constant(case, &quad).unwrap();
        let want = *published.numer() as f64 / *published.denom() as f64;
        assert!((e.value - want).abs() < 1e-6, "case {}: {} vs {want}", case.label(), e.value);
    }
    let t = theorem1_bounds(1e-12).unwrap();
    assert!((t.total - 67243.0 / 105300.0).abs() < 1e-6);
    assert!((t.lower - 0.625).abs() < 1e-9);
    assert_eq!(t.total_exact, "67243/105300");
    assert_eq!(t.lower_exact, "5/8");
}

#[test]
fn quadrature_on_known_integrals() {
    let quad = Quad::default();
    let e = quad.integrate(f64::sin, 0.0, std::f64::consts::PI).unwrap();
    assert!((e.value - 2.0).abs() < 1e-12);
    let e = quad.integrate(|x| x.sqrt(), 0.0, 1.0).unwrap();
    assert!((e.value - 2.0 / 3.0).abs() < 1e-10);
    let e = quad.integrate_2d(|x, y| x * y, 0.0, 1.0, |_| 0.0, |x| x).unwrap();
    assert!((e.value - 0.125).abs() < 1e-12);
}

#[test]
fn sphere_profile_matches_grid_counts() {
    let n = 300i64;
    for (x, y) in [(0.0, 0.0), (0.1, 0.05), (0.3, 0.1), (0.25, 0.2), (0.4, 0.35), (0.45, 0.05), (0.5, 0.5)] {
        let (a, b) = grid_fire(n, x, y);
        let c = sphere_counts(n, a, b);
        for r in 1..2 * n as usize {
            let prof = sphere_profile(x, y, r as f64 / n as f64).unwrap();
            let got = c[r] as f64 / n as f64;
            assert!((got - prof).abs() <= 4.0 / n as f64, "({x}, {y}) r {r}: {got} vs {prof}");
        }
    }
}

#[test]
fn closed_forms_match_the_profile_integral_outside_case_5() {
    let quad = Quad::default();
    let mut checked = 0;
    for (x, y) in sample_points() {
        let case = classify(x, y).unwrap();
        if case == Case::C5 {
            continue;
        }
        let by_profile = burn_fraction_to_stop(x, y, &quad).unwrap().value;
        assert!((closed_form(case, x, y) - by_profile).abs() < 1e-9, "({x}, {y}) case {}", case.label());
        checked += 1;
    }
    assert!(checked > 250);
}

#[test]
fn closed_forms_match_grid_sums() {
    let n = 600i64;
    for (x, y) in [(0.1, 0.05), (0.02, 0.0), (0.3, 0.1), (0.2, 0.12), (0.25, 0.1), (0.44, 0.2), (0.45, 0.38)] {
        let case = classify(x, y).unwrap();
        assert_ne!(case, Case::C5);
        let want = discrete_burn(n, x, y, stop_time(case, x, y));
        let got = closed_form(case, x, y);
        assert!((got - want).abs() <= 4.0 / n as f64, "({x}, {y}) case {}: {got} vs {want}", case.label());
    }
}

// In case 5 the quoted closed form is larger than the integral of its own
// sphere profile, which the grid sums confirm.
#[test]
fn case_5_closed_form_overstates_the_profile_integral() {
    let quad = Quad::default();
    let (x, y) = (0.4, 0.35);
    assert_eq!(classify(x, y).unwrap(), Case::C5);
    let closed = closed_form(Case::C5, x, y);
    let to_stop = burn_fraction_to_stop(x, y, &quad).unwrap().value;
    assert!((closed - 0.226875).abs() < 1e-12);
    assert!((to_stop - 0.2215625).abs() < 1e-9);
    assert!((burn_fraction_by_profile(x, y, &quad).unwrap().value - 0.2240625).abs() < 1e-9);
    let grid = discrete_burn(800, x, y, stop_time(Case::C5, x, y));
    assert!((grid - to_stop).abs() < 0.002);
    assert!(closed - grid > 0.004);
    // the best stopping time cannot rescue it either
    for (x, y) in [(0.2, 0.16), (0.3, 0.25), (0.45, 0.44)] {
        assert_eq!(classify(x, y).unwrap(), Case::C5);
        let best = burn_fraction_by_profile(x, y, &quad).unwrap().value;
        assert!(closed_form(Case::C5, x, y) > best + 1e-3, "({x}, {y})");
    }
}

// Integrating the best profile bound over region 5 instead of the closed form.
#[test]
fn region_5_constant_from_the_profile() {
    let quad = Quad { tol: 1e-8, max_intervals: 4000 };
    let fine = Quad::default();
    let f = |x: f64, y: f64| burn_fraction_by_profile(x, y.min(x), &fine).unwrap().value;
    let a = quad.integrate_2d(f, 1.0 / 6.0, 0.3, |x| 0.25 - x / 2.0, |x| x).unwrap();
    let b = quad.integrate_2d(f, 0.3, 0.5, |x| -0.5 + 2.0 * x, |x| x).unwrap();
    let c5 = a.value + b.value;
    assert!((c5 - 0.0113447).abs() < 1e-6, "{c5}");
    assert!(c5 < 1907.0 / 162000.0);
    let bound = 67243.0 / 105300.0 + 8.0 * (1907.0 / 162000.0 - c5);
    assert!((bound - 0.642).abs() < 1e-6, "{bound}");
}

#[test]
fn domain_is_checked() {
    assert_eq!(classify(0.1, 0.2).unwrap_err().code(), "InvalidParams");
    assert_eq!(classify(0.6, 0.0).unwrap_err().code(), "InvalidParams");
    assert!(classify(f64::NAN, 0.0).is_err());
}

#[test]
fn tree_levels_match_a_played_game() {
    let depth = 7u32;
    let lat = Lattice::tree(3, depth);
    let st = GameState::new(lat, &[Vertex(0, 0)], BudgetSchedule::constant(1)).unwrap();
    let (fin, _) = st.run(&mut Greedy, 20).unwrap();
    let radii: Vec<u64> = (0..=depth as u64).collect();
    let rec = tree_rate_by_levels(3, 1, &radii);
    for s in &rec {
        let ball = lat.ball(Vertex(0, 0), s.radius);
        let saved = ball.iter().filter(|&&v| !fin.is_burning(v)).count() as u64;
        assert_eq!(ball.len() as u64, s.ball);
        assert_eq!(saved, s.saved, "radius {}", s.radius);
    }
    // b_k = (3^k + 1) / 2 burning vertices on level k
    let far = tree_rate_by_levels(3, 1, &[30]);
    assert!((far[0].ratio - 0.5).abs() < 1e-6);
}

#[test]
fn embedding_sends_triangular_edges_to_two_step_paths() {
    let hex = Lattice::hexagonal(100);
    let tri = Lattice::triangular(100);
    for p in -4..=4i64 {
        for q in -4..=4i64 {
            let v = Vertex(p, q);
            assert_eq!(tri_to_hex_vertex(v), Vertex(2 * p + q, -q));
            for u in tri.neighbors(v) {
                assert_eq!(hex.dist(tri_to_hex_vertex(v), tri_to_hex_vertex(u)), 2);
            }
        }
    }
}

#[test]
fn translated_witnesses_pass_the_audit() {
    let tri = Lattice::triangular(10);
    let cases: [(&[Vertex], u32); 3] = [(&[Vertex(0, 0)], 4), (&[Vertex(0, 0)], 6), (&[Vertex(0, 0), Vertex(1, 0)], 6)];
    for (fires, k) in cases {
        let schedule = BudgetSchedule::constant(k);
        let rep = verify_containment_search(&tri, fires, &schedule, 6, 5_000_000).unwrap();
        let w = rep.witness.expect("containable");
        let spec = StrategySpec::new("scripted", json!({ "turns": w.sequence }));
        let (t, h, audit) = translate_and_audit(tri, fires, &schedule, &spec, 40).unwrap();
        assert_eq!(audit.turns_tri, w.turns);
        assert_eq!(audit.burnt_tri, w.burnt);
        assert!(audit.turns_hex <= 2 * audit.turns_tri + 1);
        assert!(audit.burnt_hex <= 2 * audit.burnt_tri + audit.firefighters);
        // A vertices are the image of the embedding: a + b even in brick coordinates
        let is_a = |v: &Vertex| (v.0 + v.1).rem_euclid(2) == 0;
        let tri_burnt: Vec<Vertex> = t
            .fires
            .iter()
            .chain(t.rounds.iter().flat_map(|r| r.ignited.iter()))
            .map(|&v| tri_to_hex_vertex(v))
            .collect();
        let hex_burnt: Vec<Vertex> =
            h.fires.iter().chain(h.rounds.iter().flat_map(|r| r.ignited.iter())).copied().collect();
        assert!(hex_burnt.iter().filter(|v| is_a(v)).all(|v| tri_burnt.contains(v)));
        let b_count = hex_burnt.iter().filter(|v| !is_a(v)).count() as u64;
        assert_eq!(b_count, audit.burnt_hex_b);
        assert!(b_count <= audit.burnt_tri + audit.firefighters);
        assert_eq!(audit.b_within_tri_burnt, b_count <= audit.burnt_tri);
        for r in &h.rounds {
            assert!(r.ignited.iter().all(|v| is_a(v) == (r.turn % 2 == 0)), "round {}", r.turn);
        }
    }
}

#[test]
fn audit_rejects_an_uncontained_start() {
    let tri = Lattice::triangular(10);
    let spec = StrategySpec::named("idle");
    let err = translate_and_audit(tri, &[Vertex(0, 0)], &BudgetSchedule::constant(2), &spec, 5).unwrap_err();
    assert_eq!(err.code(), "PreconditionViolation");
}
