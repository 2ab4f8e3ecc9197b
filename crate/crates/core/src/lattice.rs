use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::hexcoord::{self, Hp};

/// A lattice vertex. Grids use `(a, b)`; trees use `(depth, index)`;
/// paths and cliques use `(i, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex(pub i64, pub i64);

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

pub type Nbrs = SmallVec<[Vertex; 8]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeKind {
    #[serde(alias = "square")]
    FiniteSquare {
        n: u32,
    },
    #[serde(alias = "z2")]
    InfiniteSquare,
    #[serde(alias = "hex")]
    Hexagonal,
    #[serde(alias = "tri")]
    Triangular,
    #[serde(alias = "tree")]
    DaryTree {
        d: u32,
    },
    Path {
        n: u32,
    },
    #[serde(alias = "clique")]
    Complete {
        n: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    #[serde(flatten)]
    pub kind: LatticeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
}

/// Largest dense index space a game may allocate.
pub const MAX_INDEX_SPACE: u64 = 1 << 31;

impl Lattice {
    pub fn new(kind: LatticeKind) -> Lattice {
        Lattice { kind, window: None }
    }

    pub fn finite_square(n: u32) -> Lattice {
        Lattice::new(LatticeKind::FiniteSquare { n })
    }

    pub fn infinite_square(window: u32) -> Lattice {
        Lattice { kind: LatticeKind::InfiniteSquare, window: Some(window) }
    }

    pub fn hexagonal(window: u32) -> Lattice {
        Lattice { kind: LatticeKind::Hexagonal, window: Some(window) }
    }

    pub fn triangular(window: u32) -> Lattice {
        Lattice { kind: LatticeKind::Triangular, window: Some(window) }
    }

    pub fn tree(d: u32, depth: u32) -> Lattice {
        Lattice { kind: LatticeKind::DaryTree { d }, window: Some(depth) }
    }

    pub fn path(n: u32) -> Lattice {
        Lattice::new(LatticeKind::Path { n })
    }

    pub fn complete(n: u32) -> Lattice {
        Lattice::new(LatticeKind::Complete { n })
    }

    pub fn with_window(mut self, w: u32) -> Lattice {
        self.window = Some(w);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            LatticeKind::FiniteSquare { n: 0 } | LatticeKind::Path { n: 0 } | LatticeKind::Complete { n: 0 } => {
                return Err(Error::InvalidLattice("n must be positive".into()));
            }
            LatticeKind::DaryTree { d: 0 } => {
                return Err(Error::InvalidLattice("d must be positive".into()));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, LatticeKind::FiniteSquare { .. } | LatticeKind::Path { .. } | LatticeKind::Complete { .. })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            LatticeKind::FiniteSquare { .. } => "finite_square",
            LatticeKind::InfiniteSquare => "infinite_square",
            LatticeKind::Hexagonal => "hexagonal",
            LatticeKind::Triangular => "triangular",
            LatticeKind::DaryTree { .. } => "dary_tree",
            LatticeKind::Path { .. } => "path",
            LatticeKind::Complete { .. } => "complete",
        }
    }

    /// Coordinate range `lo..=hi` of a finite square grid.
    pub fn square_range(n: u32) -> (i64, i64) {
        let n = n as i64;
        (-(n / 2), (n + 1) / 2 - 1)
    }

    pub fn origin(&self) -> Vertex {
        Vertex(0, 0)
    }

    /// Membership ignoring the window.
    pub fn in_lattice(&self, v: Vertex) -> bool {
        match self.kind {
            LatticeKind::FiniteSquare { n } => {
                let (lo, hi) = Lattice::square_range(n);
                (lo..=hi).contains(&v.0) && (lo..=hi).contains(&v.1)
            }
            LatticeKind::InfiniteSquare | LatticeKind::Hexagonal | LatticeKind::Triangular => true,
            LatticeKind::DaryTree { d } => {
                v.0 >= 0 && v.1 >= 0 && level_width(d, v.0 as u32).is_none_or(|w| (v.1 as u64) < w)
            }
            LatticeKind::Path { n } | LatticeKind::Complete { n } => v.1 == 0 && v.0 >= 0 && v.0 < n as i64,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.in_lattice(v) && self.window.is_none_or(|w| self.is_finite() || self.dist(self.origin(), v) <= w as u64)
    }

    pub fn check(&self, v: Vertex) -> Result<()> {
        if !self.in_lattice(v) {
            let why = match self.kind {
                LatticeKind::FiniteSquare { n } => {
                    let (lo, hi) = Lattice::square_range(n);
                    let bad = if (lo..=hi).contains(&v.0) { "b" } else { "a" };
                    format!("coordinate {bad} outside {lo}..={hi}")
                }
                LatticeKind::DaryTree { .. } => "index outside its level".to_string(),
                _ => "coordinate outside 0..n with b = 0".to_string(),
            };
            return Err(Error::InvalidVertex(v.0, v.1, why));
        }
        if !self.contains(v) {
            return Err(Error::OutsideWindow(v, self.window.unwrap_or(0)));
        }
        Ok(())
    }

    pub fn neighbors(&self, v: Vertex) -> Nbrs {
        let mut out = Nbrs::new();
        let Vertex(a, b) = v;
        match self.kind {
            LatticeKind::FiniteSquare { .. } | LatticeKind::InfiniteSquare => {
                for u in [Vertex(a + 1, b), Vertex(a - 1, b), Vertex(a, b + 1), Vertex(a, b - 1)] {
                    if self.in_lattice(u) {
                        out.push(u);
                    }
                }
            }
            LatticeKind::Hexagonal => {
                out.push(Vertex(a + 1, b));
                out.push(Vertex(a - 1, b));
                if (a + b).rem_euclid(2) == 0 {
                    out.push(Vertex(a, b + 1));
                } else {
                    out.push(Vertex(a, b - 1));
                }
            }
            LatticeKind::Triangular => {
                for (da, db) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
                    out.push(Vertex(a + da, b + db));
                }
            }
            LatticeKind::DaryTree { d } => {
                if a > 0 {
                    out.push(Vertex(a - 1, b / d as i64));
                }
                for j in 0..d as i64 {
                    out.push(Vertex(a + 1, b * d as i64 + j));
                }
            }
            LatticeKind::Path { n } => {
                if a > 0 {
                    out.push(Vertex(a - 1, 0));
                }
                if a + 1 < n as i64 {
                    out.push(Vertex(a + 1, 0));
                }
            }
            LatticeKind::Complete { n } => {
                for i in 0..n as i64 {
                    if i != a {
                        out.push(Vertex(i, 0));
                    }
                }
            }
        }
        out
    }

    pub fn dist(&self, u: Vertex, v: Vertex) -> u64 {
        match self.kind {
            LatticeKind::FiniteSquare { .. } | LatticeKind::InfiniteSquare => {
                (u.0 - v.0).unsigned_abs() + (u.1 - v.1).unsigned_abs()
            }
            LatticeKind::Hexagonal => hexcoord::dist(hexcoord::from_brick(u), hexcoord::from_brick(v)),
            LatticeKind::Triangular => hexcoord::tri_norm(v.0 - u.0, v.1 - u.1),
            LatticeKind::DaryTree { d } => tree_dist(d as i64, u, v),
            LatticeKind::Path { .. } => (u.0 - v.0).unsigned_abs(),
            LatticeKind::Complete { .. } => (u != v) as u64,
        }
    }

    /// Vertices at distance exactly `r` from `v`, sorted. The window is ignored.
    pub fn sphere(&self, v: Vertex, r: u64) -> Vec<Vertex> {
        let mut out = Vec::new();
        match self.kind {
            LatticeKind::FiniteSquare { .. } | LatticeKind::InfiniteSquare => {
                let r = r as i64;
                for da in -r..=r {
                    let rest = r - da.abs();
                    for db in if rest == 0 { vec![0] } else { vec![-rest, rest] } {
                        let u = Vertex(v.0 + da, v.1 + db);
                        if self.in_lattice(u) {
                            out.push(u);
                        }
                    }
                }
            }
            LatticeKind::Hexagonal | LatticeKind::Triangular => {
                let r = r as i64;
                for a in v.0 - r..=v.0 + r {
                    for b in v.1 - r..=v.1 + r {
                        let u = Vertex(a, b);
                        if self.dist(v, u) == r as u64 {
                            out.push(u);
                        }
                    }
                }
            }
            LatticeKind::DaryTree { .. } => {
                out = self.bfs_layers(v, r).pop().unwrap_or_default();
            }
            LatticeKind::Path { n } => {
                for a in [v.0 - r as i64, v.0 + r as i64] {
                    if a >= 0 && a < n as i64 && !out.contains(&Vertex(a, 0)) {
                        out.push(Vertex(a, 0));
                    }
                }
            }
            LatticeKind::Complete { n } => match r {
                0 => out.push(v),
                1 => out.extend((0..n as i64).filter(|&i| i != v.0).map(|i| Vertex(i, 0))),
                _ => {}
            },
        }
        out.sort();
        out
    }

    pub fn ball(&self, v: Vertex, r: u64) -> Vec<Vertex> {
        if matches!(self.kind, LatticeKind::Hexagonal | LatticeKind::Triangular) {
            let r = r as i64;
            let mut out = Vec::new();
            for a in v.0 - r..=v.0 + r {
                for b in v.1 - r..=v.1 + r {
                    if self.dist(v, Vertex(a, b)) <= r as u64 {
                        out.push(Vertex(a, b));
                    }
                }
            }
            return out;
        }
        let mut out: Vec<Vertex> = (0..=r).flat_map(|k| self.sphere(v, k)).collect();
        out.sort();
        out
    }

    /// Breadth-first layers `0..=r` from `v`; the window is ignored.
    pub fn bfs_layers(&self, v: Vertex, r: u64) -> Vec<Vec<Vertex>> {
        let mut seen = HashSet::from([v]);
        let mut layers = vec![vec![v]];
        for _ in 0..r {
            let cur = layers.last().unwrap();
            let mut next = Vec::new();
            for &x in cur {
                for y in self.neighbors(x) {
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            next.sort();
            layers.push(next);
        }
        layers
    }

    /// Cone indices of `v` seen from `apex`, on the hexagonal and triangular
    /// lattices. Cone `k` is the sector from direction `60k` to `60k+60`
    /// degrees; vertices on a bounding ray belong to both cones.
    pub fn cone_of(&self, apex: Vertex, v: Vertex) -> Result<Vec<usize>> {
        match self.kind {
            LatticeKind::Triangular => {
                let (p, q) = (v.0 - apex.0, v.1 - apex.1);
                Ok(hexcoord::cones_of_xy((2 * p + q, 3 * q)))
            }
            LatticeKind::Hexagonal => {
                let frame = hexcoord::Frame::at(hexcoord::from_brick(apex));
                let local = frame.to_local(hexcoord::from_brick(v));
                let rot = frame.rotation();
                let mut ks: Vec<usize> =
                    hexcoord::cones_of_xy(local.scaled_xy()).into_iter().map(|k| (k + rot) % 6).collect();
                ks.sort();
                Ok(ks)
            }
            _ => Err(Error::InvalidLattice("cones are defined on the hexagonal and triangular lattices".into())),
        }
    }

    /// The dense index space used for vertex sets in games.
    pub fn index_space(&self) -> Result<IndexSpace> {
        let space = match self.kind {
            LatticeKind::FiniteSquare { n } => {
                let (lo, _) = Lattice::square_range(n);
                IndexSpace::Grid { lo_a: lo, lo_b: lo, w: n as i64, h: n as i64 }
            }
            LatticeKind::Path { n } | LatticeKind::Complete { n } => {
                IndexSpace::Grid { lo_a: 0, lo_b: 0, w: n as i64, h: 1 }
            }
            LatticeKind::InfiniteSquare | LatticeKind::Hexagonal | LatticeKind::Triangular => {
                let w = self.window.ok_or_else(|| {
                    Error::InvalidLattice(format!("{} lattice needs a window to host a game", self.name()))
                })? as i64;
                IndexSpace::Grid { lo_a: -w, lo_b: -w, w: 2 * w + 1, h: 2 * w + 1 }
            }
            LatticeKind::DaryTree { d } => {
                let depth =
                    self.window.ok_or_else(|| Error::InvalidLattice("tree lattice needs a depth window".into()))?;
                let mut offsets = vec![0u64];
                for k in 0..=depth {
                    let w = level_width(d, k).ok_or(Error::TooLarge { size: u64::MAX, cap: MAX_INDEX_SPACE })?;
                    let next = offsets[k as usize]
                        .checked_add(w)
                        .ok_or(Error::TooLarge { size: u64::MAX, cap: MAX_INDEX_SPACE })?;
                    offsets.push(next);
                }
                IndexSpace::Tree { d: d as i64, offsets }
            }
        };
        if space.len() as u64 > MAX_INDEX_SPACE {
            return Err(Error::TooLarge { size: space.len() as u64, cap: MAX_INDEX_SPACE });
        }
        Ok(space)
    }

    /// All vertices of a finite (or windowed) lattice in index order.
    pub fn vertices(&self) -> Result<Vec<Vertex>> {
        let space = self.index_space()?;
        Ok((0..space.len()).map(|i| space.vertex(i)).filter(|&v| self.contains(v)).collect())
    }

    /// Parses a vertex given as `[a, b]`, or a root path like `"r.0.2"` on trees.
    pub fn parse_vertex(&self, value: &serde_json::Value) -> Result<Vertex> {
        if let (LatticeKind::DaryTree { d }, Some(s)) = (self.kind, value.as_str()) {
            return parse_tree_path(d, s);
        }
        let v: Vertex = serde_json::from_value(value.clone())
            .map_err(|_| Error::InvalidParams(format!("expected a vertex [a, b], got {value}")))?;
        Ok(v)
    }

    pub fn vertex_json(&self, v: Vertex) -> serde_json::Value {
        match self.kind {
            LatticeKind::DaryTree { d } => serde_json::Value::String(tree_path(d, v)),
            _ => serde_json::json!([v.0, v.1]),
        }
    }
}

fn level_width(d: u32, depth: u32) -> Option<u64> {
    (d as u64).checked_pow(depth)
}

fn tree_dist(d: i64, u: Vertex, v: Vertex) -> u64 {
    let (mut x, mut y) = (u, v);
    let mut steps = 0;
    while x.0 > y.0 {
        x = Vertex(x.0 - 1, x.1 / d);
        steps += 1;
    }
    while y.0 > x.0 {
        y = Vertex(y.0 - 1, y.1 / d);
        steps += 1;
    }
    while x != y {
        x = Vertex(x.0 - 1, x.1 / d);
        y = Vertex(y.0 - 1, y.1 / d);
        steps += 2;
    }
    steps
}

pub fn tree_path(d: u32, v: Vertex) -> String {
    let mut digits = Vec::new();
    let mut idx = v.1;
    for _ in 0..v.0 {
        digits.push((idx % d as i64).to_string());
        idx /= d as i64;
    }
    digits.push("r".into());
    digits.reverse();
    digits.join(".")
}

pub fn parse_tree_path(d: u32, s: &str) -> Result<Vertex> {
    let mut parts = s.split('.');
    if parts.next() != Some("r") {
        return Err(Error::InvalidParams(format!("tree path '{s}' must start with 'r'")));
    }
    let (mut depth, mut idx) = (0i64, 0i64);
    for part in parts {
        let c: i64 = part.parse().map_err(|_| Error::InvalidParams(format!("bad child index '{part}' in '{s}'")))?;
        if c < 0 || c >= d as i64 {
            return Err(Error::InvalidVertex(depth + 1, c, format!("child index outside 0..{d}")));
        }
        depth += 1;
        idx = idx * d as i64 + c;
    }
    Ok(Vertex(depth, idx))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexSpace {
    Grid { lo_a: i64, lo_b: i64, w: i64, h: i64 },
    Tree { d: i64, offsets: Vec<u64> },
}

impl IndexSpace {
    pub fn len(&self) -> usize {
        match self {
            IndexSpace::Grid { w, h, .. } => (w * h) as usize,
            IndexSpace::Tree { offsets, .. } => *offsets.last().unwrap() as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, v: Vertex) -> Option<usize> {
        match self {
            IndexSpace::Grid { lo_a, lo_b, w, h } => {
                let (x, y) = (v.0 - lo_a, v.1 - lo_b);
                if x < 0 || y < 0 || x >= *w || y >= *h {
                    None
                } else {
                    Some((y * w + x) as usize)
                }
            }
            IndexSpace::Tree { offsets, .. } => {
                if v.0 < 0 || v.1 < 0 || v.0 as usize + 1 >= offsets.len() {
                    return None;
                }
                let k = v.0 as usize;
                let i = offsets[k] + v.1 as u64;
                (i < offsets[k + 1]).then_some(i as usize)
            }
        }
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        match self {
            IndexSpace::Grid { lo_a, lo_b, w, .. } => {
                let i = i as i64;
                Vertex(lo_a + i % w, lo_b + i / w)
            }
            IndexSpace::Tree { offsets, .. } => {
                let k = offsets.partition_point(|&o| o <= i as u64) - 1;
                Vertex(k as i64, (i as u64 - offsets[k]) as i64)
            }
        }
    }
}

pub fn hex_of(v: Vertex) -> Hp {
    hexcoord::from_brick(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_square_coordinates() {
        assert_eq!(Lattice::square_range(4), (-2, 1));
        assert_eq!(Lattice::square_range(5), (-2, 2));
        let lat = Lattice::finite_square(4);
        assert!(lat.check(Vertex(-2, 1)).is_ok());
        match lat.check(Vertex(2, 0)) {
            Err(Error::InvalidVertex(2, 0, why)) => assert!(why.contains("coordinate a")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn descriptor_json() {
        let lat: Lattice = serde_json::from_str(r#"{"kind":"hexagonal","window":64}"#).unwrap();
        assert_eq!(lat, Lattice::hexagonal(64));
        let lat: Lattice = serde_json::from_str(r#"{"kind":"square","n":3}"#).unwrap();
        assert_eq!(lat, Lattice::finite_square(3));
        let s = serde_json::to_string(&Lattice::finite_square(3)).unwrap();
        assert_eq!(s, r#"{"kind":"finite_square","n":3}"#);
    }

    #[test]
    fn tree_paths() {
        let v = parse_tree_path(3, "r.0.2.1").unwrap();
        assert_eq!(v, Vertex(3, 7));
        assert_eq!(tree_path(3, v), "r.0.2.1");
        assert_eq!(tree_path(3, Vertex(0, 0)), "r");
    }

    #[test]
    fn hex_sphere_sizes() {
        let lat = Lattice::hexagonal(20);
        for r in 1..8 {
            assert_eq!(lat.sphere(Vertex(0, 0), r).len() as u64, 3 * r);
            assert_eq!(lat.sphere(Vertex(1, 0), r).len() as u64, 3 * r);
        }
    }

    #[test]
    fn index_space_round_trip() {
        for lat in [Lattice::finite_square(5), Lattice::hexagonal(3), Lattice::tree(3, 3)] {
            let sp = lat.index_space().unwrap();
            for i in 0..sp.len() {
                assert_eq!(sp.index(sp.vertex(i)), Some(i));
            }
        }
    }

    #[test]
    fn unwindowed_infinite_lattice_cannot_host_a_game() {
        assert!(Lattice::new(LatticeKind::Hexagonal).index_space().is_err());
    }
}
