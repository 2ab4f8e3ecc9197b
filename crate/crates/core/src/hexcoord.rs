//! Honeycomb coordinates.
//!
//! A hexagonal-lattice vertex is written `(p, q, s)`: `s = 0` is the point
//! `p*e1 + q*e2` of the triangular lattice (sublattice A), `s = 1` is that
//! point shifted by `(e1 + e2) / 3` (sublattice B). `A(p,q)` is adjacent to
//! `B(p,q)`, `B(p-1,q)` and `B(p,q-1)`.
//!
//! The brick-wall vertex `(a, b)` with `a + b` even maps to `A((a+b)/2, -b)`,
//! odd to `B((a+b-1)/2, -b)`.

use crate::lattice::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hp {
    pub p: i64,
    pub q: i64,
    pub s: u8,
}

impl Hp {
    pub const fn a(p: i64, q: i64) -> Hp {
        Hp { p, q, s: 0 }
    }

    pub const fn b(p: i64, q: i64) -> Hp {
        Hp { p, q, s: 1 }
    }

    pub fn is_a(self) -> bool {
        self.s == 0
    }

    pub fn neighbors(self) -> [Hp; 3] {
        let Hp { p, q, .. } = self;
        if self.s == 0 {
            [Hp::b(p, q), Hp::b(p - 1, q), Hp::b(p, q - 1)]
        } else {
            [Hp::a(p, q), Hp::a(p + 1, q), Hp::a(p, q + 1)]
        }
    }

    /// `2x` and `6y/sqrt(3)` of the embedded point; both integral.
    pub fn scaled_xy(self) -> (i64, i64) {
        let s = self.s as i64;
        (2 * self.p + self.q + s, 3 * self.q + s)
    }

    pub fn translate(self, dp: i64, dq: i64) -> Hp {
        Hp { p: self.p + dp, q: self.q + dq, s: self.s }
    }
}

pub fn from_brick(v: Vertex) -> Hp {
    let (a, b) = (v.0, v.1);
    if (a + b).rem_euclid(2) == 0 {
        Hp::a((a + b).div_euclid(2), -b)
    } else {
        Hp::b((a + b - 1).div_euclid(2), -b)
    }
}

pub fn to_brick(h: Hp) -> Vertex {
    let b = -h.q;
    let a = 2 * h.p + h.q + h.s as i64;
    Vertex(a, b)
}

pub fn tri_norm(p: i64, q: i64) -> u64 {
    ((p.abs() + q.abs() + (p + q).abs()) / 2) as u64
}

/// Graph distance from `A(0,0)`.
pub fn dist_from_origin(h: Hp) -> u64 {
    if h.s == 0 {
        2 * tri_norm(h.p, h.q)
    } else {
        let m = tri_norm(h.p, h.q).min(tri_norm(h.p + 1, h.q)).min(tri_norm(h.p, h.q + 1));
        1 + 2 * m
    }
}

/// Isometry taking `origin` to `A(0,0)`.
///
/// For an A origin it is a translation. For a B origin it is the point
/// reflection through the midpoint of the edge `origin`-`A(p,q)` followed by
/// a translation, which turns every direction by 180 degrees. It is an
/// involution in that case, so `to_local` and `to_global` share the formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub origin: Hp,
}

impl Frame {
    pub fn at(origin: Hp) -> Frame {
        Frame { origin }
    }

    pub fn flipped(&self) -> bool {
        self.origin.s == 1
    }

    /// Cone/direction offset (in sixths of a turn) between local and global.
    pub fn rotation(&self) -> usize {
        if self.flipped() {
            3
        } else {
            0
        }
    }

    pub fn to_local(&self, x: Hp) -> Hp {
        let o = self.origin;
        if o.s == 0 {
            Hp { p: x.p - o.p, q: x.q - o.q, s: x.s }
        } else {
            Hp { p: o.p - x.p, q: o.q - x.q, s: 1 - x.s }
        }
    }

    pub fn to_global(&self, l: Hp) -> Hp {
        let o = self.origin;
        if o.s == 0 {
            Hp { p: l.p + o.p, q: l.q + o.q, s: l.s }
        } else {
            Hp { p: o.p - l.p, q: o.q - l.q, s: 1 - l.s }
        }
    }
}

pub fn dist(u: Hp, v: Hp) -> u64 {
    dist_from_origin(Frame::at(u).to_local(v))
}

/// `4 * u_k`, the projection on the unit vector at angle `60k` degrees.
pub fn proj4(k: usize, xy: (i64, i64)) -> i64 {
    let (x2, y6) = xy;
    match k % 6 {
        0 => 2 * x2,
        1 => x2 + y6,
        2 => -x2 + y6,
        3 => -2 * x2,
        4 => -x2 - y6,
        _ => x2 - y6,
    }
}

/// `w_k * 12 / sqrt(3)`, the signed offset to the left of the ray at `60k`.
pub fn perp12(k: usize, xy: (i64, i64)) -> i64 {
    let (x2, y6) = xy;
    match k % 6 {
        0 => 2 * y6,
        1 => -3 * x2 + y6,
        2 => -3 * x2 - y6,
        3 => -2 * y6,
        4 => 3 * x2 - y6,
        _ => 3 * x2 + y6,
    }
}

/// Cones (sectors between rays `60k` and `60k+60`) containing a point.
/// Points on a ray belong to both adjacent cones; the apex belongs to all six.
pub fn cones_of_xy(xy: (i64, i64)) -> Vec<usize> {
    if xy == (0, 0) {
        return (0..6).collect();
    }
    (0..6).filter(|&k| perp12(k, xy) >= 0 && perp12(k + 1, xy) <= 0).collect()
}
