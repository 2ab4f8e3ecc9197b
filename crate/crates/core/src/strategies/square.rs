use super::{Strategy, StrategySpec};
use crate::engine::GameState;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind, Vertex};

/// Dihedral map of the `n x n` grid sending the fire to `a >= b >= 0`.
#[derive(Clone, Copy, Debug)]
struct Canon {
    sum: i64,
    flip_a: bool,
    flip_b: bool,
    swap: bool,
}

impl Canon {
    fn identity() -> Canon {
        Canon { sum: 0, flip_a: false, flip_b: false, swap: false }
    }

    fn for_start(n: u32, v: Vertex) -> Canon {
        let (lo, hi) = Lattice::square_range(n);
        let sum = lo + hi;
        let mut c = Canon { sum, flip_a: v.0 < 0, flip_b: v.1 < 0, swap: false };
        let w = c.apply_no_swap(v);
        c.swap = w.1 > w.0;
        c
    }

    fn apply_no_swap(&self, v: Vertex) -> Vertex {
        let a = if self.flip_a { self.sum - v.0 } else { v.0 };
        let b = if self.flip_b { self.sum - v.1 } else { v.1 };
        Vertex(a, b)
    }

    fn apply(&self, v: Vertex) -> Vertex {
        let w = self.apply_no_swap(v);
        if self.swap {
            Vertex(w.1, w.0)
        } else {
            w
        }
    }

    fn invert(&self, v: Vertex) -> Vertex {
        let w = if self.swap { Vertex(v.1, v.0) } else { v };
        self.apply_no_swap(w)
    }
}

/// Canonical form `(a, b)` with `a >= b >= 0` of a start on the `n x n` grid.
pub fn canonical_start(n: u32, v: Vertex) -> Vertex {
    Canon::for_start(n, v).apply(v)
}

/// Protection for `turn` in canonical coordinates, fire at `(a, b)`; `north`
/// is the top row (`None` on the infinite grid). Each vertex lies at
/// distance exactly `turn` from the fire.
pub fn wedge_vertex(a: i64, b: i64, north: Option<i64>, turn: u32) -> Vertex {
    let t = turn as i64;
    let k = (t + 1) / 2;
    match north {
        Some(n) if t > 2 * (n - b) => {
            let kk = n - b;
            let j = t - 2 * kk;
            Vertex(a - kk - 1, 2 * b - n - j + 1)
        }
        _ => {
            if t % 2 == 1 {
                Vertex(a - k, b - k + 1)
            } else {
                Vertex(a - k, b + k)
            }
        }
    }
}

/// The two-wall wedge on the square grid. On the finite grid, once the
/// upper wall meets the north border it is replaced by a vertical wall that
/// runs down to the south border.
pub struct SquareWedge {
    start: Option<(Vertex, Canon, Option<i64>)>,
}

impl SquareWedge {
    pub fn new() -> SquareWedge {
        SquareWedge { start: None }
    }
}

impl Default for SquareWedge {
    fn default() -> Self {
        SquareWedge::new()
    }
}

impl Strategy for SquareWedge {
    fn spec(&self) -> StrategySpec {
        StrategySpec::named("square_wedge")
    }

    fn choose(&mut self, st: &GameState) -> Result<Vec<Vertex>> {
        let lat = *st.lattice();
        if self.start.is_none() {
            let fires = st.burning_vertices();
            if fires.len() != 1 || st.turn != 0 {
                return Err(Error::Precondition("square_wedge starts from a single fire at turn 0".into()));
            }
            let (canon, north) = match lat.kind {
                LatticeKind::FiniteSquare { n } => (Canon::for_start(n, fires[0]), Some(Lattice::square_range(n).1)),
                LatticeKind::InfiniteSquare => (Canon::identity(), None),
                _ => return Err(Error::Precondition("square_wedge needs a square lattice".into())),
            };
            self.start = Some((canon.apply(fires[0]), canon, north));
        }
        let (c, canon, north) = self.start.unwrap();
        if st.remaining_budget() == 0 {
            return Ok(Vec::new());
        }
        let v = canon.invert(wedge_vertex(c.0, c.1, north, st.turn + 1));
        if lat.contains(v) && st.is_free(v) {
            Ok(vec![v])
        } else {
            Ok(Vec::new())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_starts() {
        assert_eq!(canonical_start(5, Vertex(-2, 1)), Vertex(2, 1));
        assert_eq!(canonical_start(5, Vertex(1, -2)), Vertex(2, 1));
        // n even: -1 mirrors to 0
        assert_eq!(canonical_start(4, Vertex(-1, -2)), Vertex(1, 0));
    }

    #[test]
    fn canon_inverts() {
        let c = Canon::for_start(6, Vertex(-3, 1));
        for a in -3..3 {
            for b in -3..3 {
                assert_eq!(c.invert(c.apply(Vertex(a, b))), Vertex(a, b));
            }
        }
    }

    #[test]
    fn wedge_vertices_sit_on_the_sphere() {
        let (a, b, n) = (3, 1, 10);
        for t in 1..40 {
            let v = wedge_vertex(a, b, Some(n), t);
            assert_eq!((v.0 - a).abs() + (v.1 - b).abs(), t as i64, "turn {t}");
        }
    }
}
