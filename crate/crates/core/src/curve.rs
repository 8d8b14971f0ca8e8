//! Sampled planar curves `s2 = g(s1)` with shape-preserving interpolation.
//!
//! All synthesis landmarks (the `Z1` boundary, the two switching curves, the
//! backward frame curve) are stored this way: strictly increasing abscissas,
//! evaluation only inside the sampled span. Monotone piecewise-cubic
//! interpolation keeps interpolated values free of overshoot across decision
//! boundaries; the numerically assembled switching curve is kept piecewise
//! linear instead.

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    MonotonePchip,
    Linear,
}

#[derive(Debug, Clone)]
pub struct CurveGraph {
    s1: Vec<f64>,
    s2: Vec<f64>,
    /// Hermite slopes, present for the pchip variant.
    slopes: Option<Vec<f64>>,
    interp: Interpolation,
}

impl CurveGraph {
    pub fn new(points: Vec<(f64, f64)>, interp: Interpolation) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::Geometry(format!(
                "curve needs at least two samples, got {}",
                points.len()
            )));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Geometry(format!(
                    "curve abscissas must be strictly increasing: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        let s1: Vec<f64> = points.iter().map(|p| p.0).collect();
        let s2: Vec<f64> = points.iter().map(|p| p.1).collect();
        let slopes = match interp {
            Interpolation::MonotonePchip => Some(pchip_slopes(&s1, &s2)),
            Interpolation::Linear => None,
        };
        Ok(CurveGraph { s1, s2, slopes, interp })
    }

    pub fn monotone(points: Vec<(f64, f64)>) -> Result<Self, Error> {
        CurveGraph::new(points, Interpolation::MonotonePchip)
    }

    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self, Error> {
        CurveGraph::new(points, Interpolation::Linear)
    }

    pub fn len(&self) -> usize {
        self.s1.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires two samples
    }

    pub fn s1_min(&self) -> f64 {
        self.s1[0]
    }

    pub fn s1_max(&self) -> f64 {
        *self.s1.last().unwrap()
    }

    pub fn first(&self) -> (f64, f64) {
        (self.s1[0], self.s2[0])
    }

    pub fn last(&self) -> (f64, f64) {
        (*self.s1.last().unwrap(), *self.s2.last().unwrap())
    }

    pub fn contains_abscissa(&self, s1: f64) -> bool {
        s1 >= self.s1_min() && s1 <= self.s1_max()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.s1.iter().copied().zip(self.s2.iter().copied())
    }

    /// Interpolated ordinate, `None` outside the sampled span.
    pub fn eval(&self, s1: f64) -> Option<f64> {
        if !self.contains_abscissa(s1) {
            return None;
        }
        let k = self.segment(s1);
        let (x0, x1) = (self.s1[k], self.s1[k + 1]);
        let (y0, y1) = (self.s2[k], self.s2[k + 1]);
        let h = x1 - x0;
        let t = (s1 - x0) / h;
        Some(match self.interp {
            Interpolation::Linear => y0 + t * (y1 - y0),
            Interpolation::MonotonePchip => {
                let d = self.slopes.as_ref().unwrap();
                let (d0, d1) = (d[k], d[k + 1]);
                let t2 = t * t;
                let t3 = t2 * t;
                (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                    + (t3 - 2.0 * t2 + t) * h * d0
                    + (-2.0 * t3 + 3.0 * t2) * y1
                    + (t3 - t2) * h * d1
            }
        })
    }

    fn segment(&self, s1: f64) -> usize {
        let n = self.s1.len();
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.s1[mid] <= s1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// First abscissa (scanning left to right) where the curve crosses the
    /// horizontal level, refined by bisection on the interpolant.
    pub fn first_crossing_below(&self, level: f64) -> Option<f64> {
        let n = self.len();
        if self.s2[0] < level {
            return Some(self.s1[0]);
        }
        for k in 1..n {
            if self.s2[k] < level {
                let mut lo = self.s1[k - 1];
                let mut hi = self.s1[k];
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.eval(mid).unwrap() < level {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Some(0.5 * (lo + hi));
            }
        }
        None
    }
}

/// Fritsch–Carlson shape-preserving slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut h = vec![0.0; n - 1];
    let mut delta = vec![0.0; n - 1];
    for i in 0..n - 1 {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
