pub mod appendix;
pub mod quadrature;
pub mod rates;
pub mod translation;

use num_rational::Ratio;
use serde::Serialize;

pub use appendix::{classify, region_burn_fraction, theorem1_bounds, Case, Theorem1};
pub use quadrature::{Estimate, Quad};
pub use rates::{
    center_invariance, containment_radius_ratio, play, sphere_ball_ratio, sphere_bound_violations,
    sphere_burn_lower_bound, surviving_rate_estimate, tree_rate_by_levels, RateSample,
};
pub use translation::{translate_and_audit, translation_audit, TranslationAudit};

/// Exact surviving rate of the path on `n >= 2` vertices.
pub fn path_rate(n: u32) -> Ratio<i64> {
    let n = n as i64;
    Ratio::new(n * n - 2 * n + 2, n * n)
}

/// Exact surviving rate of the complete graph on `n` vertices.
pub fn complete_rate(n: u32) -> Ratio<i64> {
    Ratio::new(1, n as i64)
}

#[derive(Clone, Debug, Serialize)]
pub struct Constant {
    pub key: &'static str,
    pub num: i128,
    pub den: i128,
    pub value: f64,
    pub note: &'static str,
}

fn constant(key: &'static str, num: i128, den: i128, note: &'static str) -> Constant {
    Constant { key, num, den, value: num as f64 / den as f64, note }
}

/// Reference values used by the checks and reports.
pub fn constants() -> Vec<Constant> {
    let mut v = vec![
        constant("grid_rate_lower", 5, 8, "surviving rate of the n x n grid, lower bound (wedge)"),
        constant("grid_rate_upper", 67243, 105300, "surviving rate of the n x n grid, upper bound"),
        constant("square_wedge_ratio", 1, 4, "saved share of large balls under the wedge, infinite square grid"),
        constant("hex_two_ray_ratio", 2, 3, "saved share of large balls under two rays, hexagonal lattice"),
        constant("slowdown", 256, 257, "burning region inside N<=cT(v0) under the spiral, c = 1/(1 + 2^-8)"),
        constant("tree3_rate", 1, 2, "surviving rate of the ternary tree, one firefighter"),
        constant("strip_factor", 128, 1, "strip length in units of the front radius before spiralling"),
    ];
    for (case, c) in appendix::published_constants() {
        let key = match case {
            Case::C1a => "region_c1a",
            Case::C1b => "region_c1b",
            Case::C1c => "region_c1c",
            Case::C2a => "region_c2a",
            Case::C2b => "region_c2b",
            Case::C3 => "region_c3",
            Case::C4 => "region_c4",
            Case::C5 => "region_c5",
        };
        v.push(constant(key, *c.numer(), *c.denom(), "burnt-proportion integral over one region"));
    }
    v
}
