//! Upper bound on the surviving rate of the `n x n` grid.
//!
//! For a fire at `(xn, yn)` with `0 <= y <= x <= 1/2`, the sphere sizes
//! `|N_rn|/n` follow one of five piecewise-linear profiles, fixed by the
//! order of the border times `tE..tW` and corner times `tNE..tSW`. The
//! burnt proportion is bounded below by integrating `profile(r) - r` up to
//! a stopping time `t`, which gives the closed forms `B`. Integrating `B`
//! over the eight regions of the fundamental triangle gives the constants
//! `C`, and `1 - 8 * sum(C)` bounds the surviving rate.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use super::quadrature::{Estimate, Quad};
use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    #[serde(rename = "1a")]
    C1a,
    #[serde(rename = "1b")]
    C1b,
    #[serde(rename = "1c")]
    C1c,
    #[serde(rename = "2a")]
    C2a,
    #[serde(rename = "2b")]
    C2b,
    #[serde(rename = "3")]
    C3,
    #[serde(rename = "4")]
    C4,
    #[serde(rename = "5")]
    C5,
}

pub const CASES: [Case; 8] = [Case::C1a, Case::C1b, Case::C1c, Case::C2a, Case::C2b, Case::C3, Case::C4, Case::C5];

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::C1a => "1a",
            Case::C1b => "1b",
            Case::C1c => "1c",
            Case::C2a => "2a",
            Case::C2b => "2b",
            Case::C3 => "3",
            Case::C4 => "4",
            Case::C5 => "5",
        }
    }

    /// Which of the five sphere profiles applies.
    pub fn profile_family(self) -> u8 {
        match self {
            Case::C1a | Case::C1b | Case::C1c => 1,
            Case::C2a | Case::C2b => 2,
            Case::C3 => 3,
            Case::C4 => 4,
            Case::C5 => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub e: f64,
    pub n: f64,
    pub s: f64,
    pub w: f64,
    pub ne: f64,
    pub se: f64,
    pub nw: f64,
    pub sw: f64,
}

pub fn thresholds(x: f64, y: f64) -> Thresholds {
    Thresholds {
        e: 0.5 - x,
        n: 0.5 - y,
        s: 0.5 + y,
        w: 0.5 + x,
        ne: 1.0 - x - y,
        se: 1.0 - x + y,
        nw: 1.0 + x - y,
        sw: 1.0 + x + y,
    }
}

fn check_domain(x: f64, y: f64) -> Result<()> {
    const EPS: f64 = 1e-12;
    if !(x.is_finite() && y.is_finite()) || y < -EPS || y > x + EPS || x > 0.5 + EPS {
        return Err(Error::InvalidParams(format!("({x}, {y}) is outside 0 <= y <= x <= 1/2")));
    }
    Ok(())
}

/// Region of the fundamental triangle; boundaries go to the case tested first.
pub fn classify(x: f64, y: f64) -> Result<Case> {
    check_domain(x, y)?;
    let c = if y <= 0.5 - 2.0 * x {
        if y <= 0.2 - x {
            Case::C1a
        } else if y >= -1.0 / 3.0 + 5.0 * x / 3.0 {
            Case::C1b
        } else {
            Case::C1c
        }
    } else if y <= 0.25 - x / 2.0 {
        if y >= -0.5 + 2.0 * x {
            if y >= -1.0 / 3.0 + 5.0 * x / 3.0 {
                Case::C2a
            } else {
                Case::C2b
            }
        } else {
            Case::C3
        }
    } else if y <= -0.5 + 2.0 * x {
        Case::C4
    } else {
        Case::C5
    };
    Ok(c)
}

/// Stopping time `t` used for the case.
pub fn stop_time(case: Case, x: f64, y: f64) -> f64 {
    match case {
        Case::C1a => 0.8,
        Case::C1b | Case::C2a => 0.75 + x / 4.0 + y / 4.0,
        Case::C1c | Case::C2b | Case::C3 | Case::C4 => 2.0 / 3.0 + 2.0 * x / 3.0,
        Case::C5 => 1.0 - x / 2.0 + y / 2.0,
    }
}

/// `|N_rn(a,b)| / n` in the limit, for the profile family of `(x, y)`.
pub fn sphere_profile(x: f64, y: f64, r: f64) -> Result<f64> {
    let case = classify(x, y)?;
    Ok(profile_pieces(case.profile_family(), x, y)
        .into_iter()
        .find(|p| p.lo <= r && r <= p.hi)
        .map_or(0.0, |p| p.c0 + p.c1 * r))
}

/// One linear piece `c0 + c1 * r` on `[lo, hi]`.
#[derive(Clone, Copy, Debug)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub c0: f64,
    pub c1: f64,
}

pub fn profile_pieces(family: u8, x: f64, y: f64) -> Vec<Piece> {
    let t = thresholds(x, y);
    let p = |lo: f64, hi: f64, c0: f64, c1: f64| Piece { lo, hi, c0, c1 };
    let head = [p(0.0, t.e, 0.0, 4.0), p(t.e, t.n, 1.0 - 2.0 * x, 2.0)];
    let tail = match family {
        1 => [
            p(t.n, t.s, 2.0 - 2.0 * x - 2.0 * y, 0.0),
            p(t.s, t.w, 3.0 - 2.0 * x, -2.0),
            p(t.w, t.ne, 4.0, -4.0),
            p(t.ne, t.se, 3.0 + x + y, -3.0),
        ],
        2 => [
            p(t.n, t.s, 2.0 - 2.0 * x - 2.0 * y, 0.0),
            p(t.s, t.ne, 3.0 - 2.0 * x, -2.0),
            p(t.ne, t.w, 2.0 - x + y, -1.0),
            p(t.w, t.se, 3.0 + x + y, -3.0),
        ],
        3 => [
            p(t.n, t.s, 2.0 - 2.0 * x - 2.0 * y, 0.0),
            p(t.s, t.ne, 3.0 - 2.0 * x, -2.0),
            p(t.ne, t.se, 2.0 - x + y, -1.0),
            p(t.se, t.w, 1.0, 0.0),
        ],
        4 => [
            p(t.n, t.ne, 2.0 - 2.0 * x - 2.0 * y, 0.0),
            p(t.ne, t.s, 1.0 - x - y, 1.0),
            p(t.s, t.se, 2.0 - x + y, -1.0),
            p(t.se, t.w, 1.0, 0.0),
        ],
        _ => [
            p(t.n, t.ne, 2.0 - 2.0 * x - 2.0 * y, 0.0),
            p(t.ne, t.s, 1.0 - x - y, 1.0),
            p(t.s, t.w, 2.0 - x + y, -1.0),
            p(t.w, t.se, 3.0 + x + y, -3.0),
        ],
    };
    let last = match family {
        1 | 2 | 5 => [p(t.se, t.nw, 2.0 + 2.0 * x, -2.0), p(t.nw, t.sw, 1.0 + x + y, -1.0)],
        _ => [p(t.w, t.nw, 2.0 + 2.0 * x, -2.0), p(t.nw, t.sw, 1.0 + x + y, -1.0)],
    };
    head.into_iter().chain(tail).chain(last).collect()
}

/// Closed form `B(x, y)` of the case.
pub fn closed_form(case: Case, x: f64, y: f64) -> f64 {
    poly_of(case).eval(x, y)
}

/// Lower bound on the burnt proportion for a fire at `(xn, yn)`.
pub fn region_burn_fraction(x: f64, y: f64) -> Result<f64> {
    Ok(closed_form(classify(x, y)?, x, y))
}

/// `int_0^t (profile(r) - r) dr` with the case's own stopping time `t`, the
/// integrand read off the sphere profile.
pub fn burn_fraction_to_stop(x: f64, y: f64, quad: &Quad) -> Result<Estimate> {
    let case = classify(x, y)?;
    let t = stop_time(case, x, y);
    integrate_profile_excess(case.profile_family(), x, y, t, quad)
}

/// `int_0^{t*} max(profile(r) - r, 0) dr` where `t*` is the first time the
/// excess becomes negative.
pub fn burn_fraction_by_profile(x: f64, y: f64, quad: &Quad) -> Result<Estimate> {
    let case = classify(x, y)?;
    let pieces = profile_pieces(case.profile_family(), x, y);
    let mut t_star = pieces.last().unwrap().hi;
    for p in &pieces {
        // first zero of c0 + (c1 - 1) r on this piece
        if p.c1 < 1.0 {
            let z = p.c0 / (1.0 - p.c1);
            if z >= p.lo - 1e-15 && z <= p.hi + 1e-15 {
                t_star = z.max(p.lo);
                break;
            }
        }
    }
    integrate_profile_excess(case.profile_family(), x, y, t_star, quad)
}

fn integrate_profile_excess(family: u8, x: f64, y: f64, t: f64, quad: &Quad) -> Result<Estimate> {
    let pieces = profile_pieces(family, x, y);
    let mut total = Estimate { value: 0.0, error: 0.0 };
    for p in pieces {
        let hi = p.hi.min(t);
        if hi <= p.lo {
            continue;
        }
        let e = quad.integrate(|r| p.c0 + (p.c1 - 1.0) * r, p.lo, hi)?;
        total.value += e.value;
        total.error += e.error;
    }
    Ok(total)
}

/// The saved proportion guaranteed by the wedge for a fire at `(xn, yn)`.
pub fn wedge_saved_fraction(x: f64, y: f64) -> f64 {
    (0.5 - y).powi(2) + x + y
}

/// Exact polynomial in `x, y` with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2(pub Vec<(Q, u32, u32)>);

fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

impl Poly2 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.0
            .iter()
            .map(|(c, i, j)| (*c.numer() as f64 / *c.denom() as f64) * x.powi(*i as i32) * y.powi(*j as i32))
            .sum()
    }

    /// `int_{x0}^{x1} int_{lo(x)}^{hi(x)} p dy dx` for linear bounds
    /// `lo(x) = lo.0 + lo.1 x`, computed exactly.
    pub fn integrate_exact(&self, x0: Q, x1: Q, lo: (Q, Q), hi: (Q, Q)) -> Q {
        // univariate polynomial in x, coefficient k of x^k
        let mut acc: Vec<Q> = Vec::new();
        let mut add = |k: usize, c: Q| {
            if acc.len() <= k {
                acc.resize(k + 1, Q::zero());
            }
            acc[k] += c;
        };
        for (c, i, j) in &self.0 {
            let m = *j as usize + 1;
            let h = pow_linear(hi, m);
            let l = pow_linear(lo, m);
            for (k, (hk, lk)) in h.iter().zip(l.iter()).enumerate() {
                add(k + *i as usize, *c * (*hk - *lk) / Q::from_integer(m as i128));
            }
        }
        let mut total = Q::zero();
        for (k, c) in acc.iter().enumerate() {
            let e = k as u32 + 1;
            total += *c * (pow(x1, e) - pow(x0, e)) / Q::from_integer(e as i128);
        }
        total
    }
}

fn pow(x: Q, e: u32) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

/// Coefficients of `(a + b x)^m`.
fn pow_linear(l: (Q, Q), m: usize) -> Vec<Q> {
    let mut coef = vec![Q::one()];
    for _ in 0..m {
        let mut next = vec![Q::zero(); coef.len() + 1];
        for (k, c) in coef.iter().enumerate() {
            next[k] += *c * l.0;
            next[k + 1] += *c * l.1;
        }
        coef = next;
    }
    coef
}

pub fn poly_of(case: Case) -> Poly2 {
    match case {
        Case::C1a => Poly2(vec![(q(3, 5), 0, 0), (q(-2, 1), 2, 0), (q(-2, 1), 0, 2)]),
        Case::C1b | Case::C2a => Poly2(vec![
            (q(5, 8), 0, 0),
            (q(-1, 4), 1, 0),
            (q(-11, 8), 2, 0),
            (q(-1, 4), 0, 1),
            (q(-11, 8), 0, 2),
            (q(5, 4), 1, 1),
        ]),
        Case::C1c | Case::C2b | Case::C3 | Case::C4 => {
            Poly2(vec![(q(2, 3), 0, 0), (q(-2, 3), 1, 0), (q(-1, 3), 2, 0), (q(-1, 1), 0, 2)])
        }
        Case::C5 => Poly2(vec![(q(3, 4), 0, 0), (q(-1, 1), 1, 0), (q(-1, 4), 2, 0), (q(-5, 4), 0, 2), (q(1, 2), 1, 1)]),
    }
}

/// A vertical slab `x0..x1` of a region with linear lower and upper bounds.
#[derive(Clone, Copy, Debug)]
pub struct Slab {
    pub x0: Q,
    pub x1: Q,
    pub lo: (Q, Q),
    pub hi: (Q, Q),
}

fn slab(x0: Q, x1: Q, lo: (Q, Q), hi: (Q, Q)) -> Slab {
    Slab { x0, x1, lo, hi }
}

/// Integration limits for each region.
pub fn region_slabs(case: Case) -> Vec<Slab> {
    let zero = (q(0, 1), q(0, 1));
    let diag = (q(0, 1), q(1, 1)); // y = x
    let l1a = (q(1, 5), q(-1, 1)); // y = 1/5 - x
    let l1 = (q(1, 2), q(-2, 1)); // y = 1/2 - 2x
    let lse = (q(-1, 3), q(5, 3)); // y = -1/3 + 5x/3
    let ls = (q(1, 4), q(-1, 2)); // y = 1/4 - x/2
    let lw = (q(-1, 2), q(2, 1)); // y = -1/2 + 2x
    match case {
        Case::C1a => vec![slab(q(0, 1), q(1, 10), zero, diag), slab(q(1, 10), q(1, 5), zero, l1a)],
        Case::C1b => {
            vec![slab(q(1, 10), q(1, 6), l1a, diag), slab(q(1, 6), q(1, 5), l1a, l1), slab(q(1, 5), q(5, 22), lse, l1)]
        }
        Case::C1c => vec![slab(q(1, 5), q(5, 22), zero, lse), slab(q(5, 22), q(1, 4), zero, l1)],
        Case::C2a => vec![slab(q(1, 6), q(5, 22), l1, ls), slab(q(5, 22), q(7, 26), lse, ls)],
        Case::C2b => {
            vec![slab(q(5, 22), q(1, 4), l1, lse), slab(q(1, 4), q(7, 26), lw, lse), slab(q(7, 26), q(3, 10), lw, ls)]
        }
        Case::C3 => vec![slab(q(1, 4), q(3, 10), zero, lw), slab(q(3, 10), q(1, 2), zero, ls)],
        Case::C4 => vec![slab(q(3, 10), q(1, 2), ls, lw)],
        Case::C5 => vec![slab(q(1, 6), q(3, 10), ls, diag), slab(q(3, 10), q(1, 2), lw, diag)],
    }
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Region constant `C` computed exactly from the closed form.
pub fn region_constant_exact(case: Case) -> Q {
    let p = poly_of(case);
    region_slabs(case).iter().map(|s| p.integrate_exact(s.x0, s.x1, s.lo, s.hi)).sum()
}

/// Region constant `C` by 2-D adaptive quadrature of the closed form.
pub fn region_constant(case: Case, quad: &Quad) -> Result<Estimate> {
    let p = poly_of(case);
    let mut total = Estimate { value: 0.0, error: 0.0 };
    for s in region_slabs(case) {
        let (lo, hi) = ((to_f64(s.lo.0), to_f64(s.lo.1)), (to_f64(s.hi.0), to_f64(s.hi.1)));
        let e = quad.integrate_2d(
            |x, y| p.eval(x, y),
            to_f64(s.x0),
            to_f64(s.x1),
            |x| lo.0 + lo.1 * x,
            |x| hi.0 + hi.1 * x,
        )?;
        total.value += e.value;
        total.error += e.error;
    }
    Ok(total)
}

/// The rationals quoted for the region constants and the final bound.
pub fn published_constants() -> Vec<(Case, Q)> {
    vec![
        (Case::C1a, q(43, 7500)),
        (Case::C1b, q(459563, 89842500)),
        (Case::C1c, q(434549, 766656000)),
        (Case::C2a, q(358687, 157907178)),
        (Case::C2b, q(478988221, 280723872000)),
        (Case::C3, q(2807, 576000)),
        (Case::C4, q(473, 36000)),
        (Case::C5, q(1907, 162000)),
    ]
}

pub fn published_upper_bound() -> Q {
    q(67243, 105300)
}

pub fn lower_bound_exact() -> Q {
    q(5, 8)
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionRow {
    pub case: Case,
    pub quadrature: f64,
    pub error: f64,
    pub exact: String,
    pub exact_value: f64,
    pub published: String,
    pub published_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1 {
    pub regions: Vec<RegionRow>,
    pub total: f64,
    pub total_exact: String,
    pub published_total: String,
    pub published_total_value: f64,
    pub lower: f64,
    pub lower_exact: String,
}

/// All region constants, the upper bound `1 - 8 sum(C)` and the wedge lower
/// bound `8 int int ((1/2 - y)^2 + x + y)`, each by quadrature and exactly.
pub fn theorem1_bounds(tol: f64) -> Result<Theorem1> {
    let quad = Quad { tol, ..Quad::default() };
    let mut regions = Vec::new();
    let mut sum = 0.0;
    let mut sum_exact = Q::zero();
    for (case, published) in published_constants() {
        let e = region_constant(case, &quad)?;
        let exact = region_constant_exact(case);
        sum += e.value;
        sum_exact += exact;
        regions.push(RegionRow {
            case,
            quadrature: e.value,
            error: e.error,
            exact: exact.to_string(),
            exact_value: to_f64(exact),
            published: published.to_string(),
            published_value: to_f64(published),
        });
    }
    let total_exact = Q::one() - Q::from_integer(8) * sum_exact;
    let lower = 8.0 * quad.integrate_2d(wedge_saved_fraction, 0.0, 0.5, |_| 0.0, |x| x)?.value;
    let lower_poly = Poly2(vec![(q(1, 4), 0, 0), (q(1, 1), 1, 0), (q(1, 1), 0, 2)]);
    let lower_exact =
        Q::from_integer(8) * lower_poly.integrate_exact(q(0, 1), q(1, 2), (q(0, 1), q(0, 1)), (q(0, 1), q(1, 1)));
    Ok(Theorem1 {
        regions,
        total: 1.0 - 8.0 * sum,
        total_exact: total_exact.to_string(),
        published_total: published_upper_bound().to_string(),
        published_total_value: to_f64(published_upper_bound()),
        lower,
        lower_exact: lower_exact.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        assert_eq!(classify(0.05, 0.02).unwrap(), Case::C1a);
        assert_eq!(classify(0.4, 0.3).unwrap(), Case::C4);
        assert_eq!(classify(0.45, 0.44).unwrap(), Case::C5);
        assert!(classify(0.3, 0.4).is_err());
    }

    #[test]
    fn exact_linear_integral() {
        // int_0^1 int_0^x (x + y) dy dx = 1/2
        let p = Poly2(vec![(q(1, 1), 1, 0), (q(1, 1), 0, 1)]);
        let v = p.integrate_exact(q(0, 1), q(1, 1), (q(0, 1), q(0, 1)), (q(0, 1), q(1, 1)));
        assert_eq!(v, q(1, 2));
    }
}
