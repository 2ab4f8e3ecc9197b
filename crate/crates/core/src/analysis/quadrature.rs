//! Adaptive Gauss-Kronrod (7/15) quadrature in one and two dimensions.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod estimate and |Kronrod - Gauss| on one interval.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub tol: f64,
    pub max_intervals: usize,
}

impl Default for Quad {
    fn default() -> Self {
        Quad { tol: 1e-12, max_intervals: 2000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Quad {
    /// Integrates `f` over `[a, b]`, bisecting the worst interval until the
    /// summed error estimate drops below `tol`. Fails rather than return an
    /// unconverged value.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<Estimate> {
        if a == b {
            return Ok(Estimate { value: 0.0, error: 0.0 });
        }
        let (v, e) = gk15(&mut f, a, b);
        let mut parts = vec![(a, b, v, e)];
        loop {
            let value: f64 = parts.iter().map(|p| p.2).sum();
            let error: f64 = parts.iter().map(|p| p.3).sum();
            if error <= self.tol.max(1e-15 * value.abs()) {
                return Ok(Estimate { value, error });
            }
            if parts.len() >= self.max_intervals {
                return Err(Error::Numeric(format!(
                    "quadrature on [{a}, {b}] did not converge: error {error:e} after {} intervals",
                    parts.len()
                )));
            }
            let (i, _) = parts.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).unwrap();
            let (lo, hi, _, _) = parts.swap_remove(i);
            let mid = 0.5 * (lo + hi);
            let (v1, e1) = gk15(&mut f, lo, mid);
            let (v2, e2) = gk15(&mut f, mid, hi);
            parts.push((lo, mid, v1, e1));
            parts.push((mid, hi, v2, e2));
        }
    }

    /// Sum of integrals over consecutive pieces `[pts[i], pts[i+1]]`, for
    /// integrands with kinks at known points.
    pub fn integrate_pieces<F: FnMut(f64) -> f64>(&self, mut f: F, pts: &[f64]) -> Result<Estimate> {
        let mut total = Estimate { value: 0.0, error: 0.0 };
        for w in pts.windows(2) {
            let e = self.integrate(&mut f, w[0], w[1])?;
            total.value += e.value;
            total.error += e.error;
        }
        Ok(total)
    }

    /// `int_{x0}^{x1} int_{lo(x)}^{hi(x)} f(x, y) dy dx`.
    pub fn integrate_2d<F, L, H>(&self, f: F, x0: f64, x1: f64, lo: L, hi: H) -> Result<Estimate>
    where
        F: Fn(f64, f64) -> f64,
        L: Fn(f64) -> f64,
        H: Fn(f64) -> f64,
    {
        let inner = Quad { tol: self.tol * 1e-2, ..*self };
        let mut failure = None;
        let outer = self.integrate(
            |x| match inner.integrate(|y| f(x, y), lo(x), hi(x)) {
                Ok(e) => e.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            x0,
            x1,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        outer
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = Quad::default();
        let e = q.integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0).unwrap();
        assert!((e.value - (9.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn kinks_need_subdivision() {
        let q = Quad::default();
        let e = q.integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0).unwrap();
        assert!((e.value - (0.045 + 0.245)).abs() < 1e-11);
    }

    #[test]
    fn triangle_area() {
        let q = Quad::default();
        let e = q.integrate_2d(|_, _| 1.0, 0.0, 1.0, |_| 0.0, |x| x).unwrap();
        assert!((e.value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn divergence_is_reported() {
        let q = Quad { tol: 1e-14, max_intervals: 20 };
        assert!(q.integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0).is_err());
    }
}
