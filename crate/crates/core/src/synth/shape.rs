//! One-dimensional envelopes in `t = log|ξ|` and smooth windows.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::profile::Profile;

/// Cutoff in `t`: one on `[lo, hi]`, raised-cosine flanks of width `log_flank`
/// in `log t` on either side (hard edges when `log_flank == 0` or `lo <= 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    pub log_flank: f64,
}

impl Window {
    pub fn hard(lo: f64, hi: f64) -> Self {
        Window { lo, hi, log_flank: 0.0 }
    }

    /// `[α/R, αR]` with flanks `flank` wide in `log t`.
    pub fn log_centered(alpha: f64, r: f64, flank: f64) -> Self {
        Window { lo: alpha / r, hi: alpha * r, log_flank: flank }
    }

    /// Support of the window.
    pub fn outer(&self) -> (f64, f64) {
        if self.log_flank > 0.0 {
            let lo = if self.lo > 0.0 { self.lo * (-self.log_flank).exp() } else { self.lo };
            (lo, self.hi * self.log_flank.exp())
        } else {
            (self.lo, self.hi)
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let (olo, ohi) = self.outer();
        if t < olo || t > ohi {
            return 0.0;
        }
        if t >= self.lo && t <= self.hi {
            return 1.0;
        }
        // inside a flank; log_flank > 0 here
        let d = if t < self.lo { (self.lo / t).ln() } else { (t / self.hi).ln() };
        let c = (0.5 * std::f64::consts::PI * d / self.log_flank).cos();
        c * c
    }

    pub fn breaks(&self) -> Vec<f64> {
        let (olo, ohi) = self.outer();
        let mut b = vec![olo, self.lo, self.hi, ohi];
        b.dedup();
        b
    }
}

/// Envelope of one angular mode.
#[derive(Clone)]
pub enum Shape {
    /// `φ(t/α)`.
    Scaled { profile: Arc<Profile>, alpha: f64 },
    /// Piecewise linear through `values[j]` at `t = (j_min + j) h`.
    Lattice { h: f64, j_min: i64, values: Vec<Complex64> },
    /// `values[i]` on `[edges[i], edges[i+1])`.
    Cells { edges: Vec<f64>, values: Vec<Complex64> },
    /// Arbitrary function on `[lo, hi]`.
    Closure {
        label: String,
        f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
        lo: f64,
        hi: f64,
        breaks: Vec<f64>,
    },
    /// `window(t) · inner(t)`.
    Windowed { inner: Arc<Shape>, window: Window },
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Scaled { profile, alpha } => write!(f, "Scaled({}, α={alpha})", profile.name),
            Shape::Lattice { h, j_min, values } => {
                write!(f, "Lattice(h={h}, j_min={j_min}, {} nodes)", values.len())
            }
            Shape::Cells { values, .. } => write!(f, "Cells({} cells)", values.len()),
            Shape::Closure { label, lo, hi, .. } => write!(f, "Closure({label} on [{lo}, {hi}])"),
            Shape::Windowed { inner, window } => write!(f, "Windowed({inner:?}, {window:?})"),
        }
    }
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl Shape {
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Shape::Scaled { profile, alpha } => Complex64::new(profile.value(t / alpha), 0.0),
            Shape::Lattice { h, j_min, values } => {
                let x = t / h - *j_min as f64;
                if x < 0.0 || x > (values.len() - 1) as f64 {
                    return ZERO;
                }
                let k = (x.floor() as usize).min(values.len().saturating_sub(2));
                let f = x - k as f64;
                if values.len() == 1 {
                    return values[0];
                }
                values[k] * (1.0 - f) + values[k + 1] * f
            }
            Shape::Cells { edges, values } => {
                if values.is_empty() || t < edges[0] || t >= *edges.last().unwrap() {
                    return ZERO;
                }
                let i = edges.partition_point(|e| *e <= t) - 1;
                values[i]
            }
            Shape::Closure { f, lo, hi, .. } => {
                if t < *lo || t > *hi {
                    ZERO
                } else {
                    f(t)
                }
            }
            Shape::Windowed { inner, window } => {
                let w = window.value(t);
                if w == 0.0 {
                    ZERO
                } else {
                    inner.eval(t) * w
                }
            }
        }
    }

    /// Interval outside which the shape vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Shape::Scaled { profile, alpha } => {
                let (a, b) = profile.support();
                (alpha * a, alpha * b)
            }
            Shape::Lattice { h, j_min, values } => {
                (*j_min as f64 * h, (*j_min + values.len() as i64 - 1) as f64 * h)
            }
            Shape::Cells { edges, .. } => (edges[0], *edges.last().unwrap()),
            Shape::Closure { lo, hi, .. } => (*lo, *hi),
            Shape::Windowed { inner, window } => {
                let (a, b) = inner.support();
                let (c, d) = window.outer();
                (a.max(c), b.min(d))
            }
        }
    }

    /// Points where the shape may fail to be smooth.
    pub fn breaks(&self) -> Vec<f64> {
        match self {
            Shape::Scaled { profile, alpha } => profile.breaks().iter().map(|b| alpha * b).collect(),
            Shape::Lattice { h, j_min, values } => {
                (0..values.len()).map(|j| (*j_min + j as i64) as f64 * h).collect()
            }
            Shape::Cells { edges, .. } => edges.clone(),
            Shape::Closure { breaks, lo, hi, .. } => {
                let mut b = breaks.clone();
                b.push(*lo);
                b.push(*hi);
                b
            }
            Shape::Windowed { inner, window } => {
                let (lo, hi) = self.support();
                let mut b: Vec<f64> = inner.breaks();
                b.extend(window.breaks());
                b.retain(|x| *x >= lo && *x <= hi);
                b
            }
        }
    }

    /// Envelope values on the lattice `t = j h`, ready for piecewise-linear
    /// synthesis. Point values where the shape is continuous; near jumps the
    /// hat-weighted average `(1/h)∫ f(t) Λ_j(t) dt`, so features narrower
    /// than `h` keep their mass.
    pub fn sample_lattice(&self, h: f64) -> (i64, Vec<Complex64>) {
        let (lo, hi) = self.support();
        if !(hi > lo) {
            return (0, Vec::new());
        }
        let j_lo = (lo / h).floor() as i64;
        let j_hi = (hi / h).ceil() as i64;
        let eps = 1e-9 * h;
        let mut jumps: Vec<f64> = self
            .breaks()
            .into_iter()
            .filter(|b| b.is_finite() && {
                let d = self.eval(b + eps) - self.eval(b - eps);
                let scale = self.eval(b + eps).norm().max(self.eval(b - eps).norm());
                d.norm() > 1e-6 * scale.max(f64::MIN_POSITIVE)
            })
            .collect();
        jumps.sort_by(f64::total_cmp);
        jumps.dedup();
        let (gx, gw) = crate::numerics::gl_ref(8);
        let values = (j_lo..=j_hi)
            .map(|j| {
                let tj = j as f64 * h;
                let a = jumps.partition_point(|b| *b <= tj - h + eps);
                let b = jumps.partition_point(|b| *b < tj + h - eps);
                if a == b {
                    return self.eval(tj);
                }
                let mut cuts = vec![tj - h, tj, tj + h];
                cuts.extend_from_slice(&jumps[a..b]);
                cuts.sort_by(f64::total_cmp);
                let mut acc = Complex64::new(0.0, 0.0);
                for w in cuts.windows(2) {
                    let (c, d) = (w[0], w[1]);
                    if d - c <= 0.0 {
                        continue;
                    }
                    for (x, wx) in gx.iter().zip(gw) {
                        let t = c + 0.5 * (d - c) * (x + 1.0);
                        acc += self.eval(t) * (0.5 * (d - c) * wx * (1.0 - (t - tj).abs() / h));
                    }
                }
                acc / h
            })
            .collect();
        (j_lo, values)
    }
}
