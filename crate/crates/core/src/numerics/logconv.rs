//! Fast radial synthesis on a uniform log lattice.
//!
//! A radial (or single angular mode) field written in the log variable is a
//! correlation
//!
//! ```text
//! u(s) = ∫ E(t) k(t - s) dt,   k(τ) = e^{-pτ} J_k(e^τ)
//! ```
//!
//! With `E` piecewise linear on the lattice `t_j = j h` and `u` sampled on the
//! same lattice, this is a banded discrete correlation against the hat
//! moments `H_l = ∫ hat(t) k(t + l h) dt`. Below the table range the kernel
//! is its constant limit `k(-∞)`; above it the moments are negligible
//! (they decay like `e^{-(p + 5/2) τ}`).

use num_complex::Complex64;
use rayon::prelude::*;

use super::hankel::{bessel_moment, QuadOptions};
use super::Dimension;
use crate::error::{Error, Result};

const TAU_LO: f64 = -36.0;
const TAU_HI: f64 = 24.0;

#[derive(Debug, Clone)]
pub struct LogHankel {
    order: i32,
    power: i32,
    h: f64,
    l_lo: i64,
    table: Vec<f64>,
    k_inf: f64,
}

impl LogHankel {
    /// Kernel `e^{-pτ} J_order(e^τ)` on the lattice of spacing `h`.
    pub fn new(order: i32, power: u32, h: f64) -> Result<Self> {
        if !(h > 0.0 && h <= 0.5) {
            return Err(Error::invalid(format!("lattice spacing must be in (0, 0.5], got {h}")));
        }
        if power as i32 > order.abs() {
            return Err(Error::invalid("kernel power exceeds Bessel order; kernel unbounded"));
        }
        let power = power as i32;
        let l_lo = (TAU_LO / h).floor() as i64;
        let l_hi = (TAU_HI / h).ceil() as i64;
        let opts = QuadOptions {
            gl_order: 16,
            max_dt: h / 2.0,
            wide_dt: h,
            y_cap: 1e5,
            ..QuadOptions::default()
        };
        let table = (l_lo..=l_hi)
            .into_par_iter()
            .map(|l| {
                let c = l as f64 * h;
                let g = |t: f64| {
                    let hat = 1.0 - ((t - c).abs() / h).min(1.0);
                    Complex64::new(hat * (-f64::from(power) * t).exp(), 0.0)
                };
                bessel_moment(order, 1.0, g, c - h, c + h, &[c], &opts).map(|v| v.re)
            })
            .collect::<Result<Vec<f64>>>()?;
        // lim_{y→0} y^{-p} J_k(y): nonzero only when p = |k|
        let k_inf = if power == order.abs() {
            let mut v = 1.0;
            for j in 1..=power {
                v /= 2.0 * f64::from(j);
            }
            if order < 0 && order % 2 != 0 { -v } else { v }
        } else {
            0.0
        };
        Ok(LogHankel { order, power, h, l_lo, table, k_inf })
    }

    /// Radial kernel of `R^{2N}`: `(re^t)^{-(N-1)} J_{N-1}(r e^t)`.
    pub fn radial(dim: Dimension, h: f64) -> Result<Self> {
        let k = dim.n() as i32 - 1;
        Self::new(k, k as u32, h)
    }

    /// Angular mode `m` in the plane: `J_m(r e^t)`.
    pub fn mode(m: i32, h: f64) -> Result<Self> {
        Self::new(m, 0, h)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn power(&self) -> i32 {
        self.power
    }

    /// Hat moment at lattice offset `l`.
    pub fn moment(&self, l: i64) -> f64 {
        if l < self.l_lo {
            self.k_inf * self.h
        } else {
            let idx = (l - self.l_lo) as usize;
            self.table.get(idx).copied().unwrap_or(0.0)
        }
    }

    fn l_hi(&self) -> i64 {
        self.l_lo + self.table.len() as i64 - 1
    }

    /// Correlate the envelope with nodal values `env[j]` at `t = (j_min + j) h`.
    pub fn apply(&self, j_min: i64, env: &[Complex64]) -> RadialTable {
        let zero = Complex64::new(0.0, 0.0);
        if env.is_empty() {
            return RadialTable { h: self.h, i_min: 0, values: vec![zero], plateau: zero };
        }
        let j_max = j_min + env.len() as i64 - 1;
        let i_min = j_min - self.l_hi();
        let i_max = j_max - self.l_lo;
        let mut prefix = Vec::with_capacity(env.len() + 1);
        prefix.push(zero);
        for e in env {
            let last = *prefix.last().unwrap();
            prefix.push(last + e);
        }
        let total = *prefix.last().unwrap();
        let l_lo = self.l_lo;
        let l_hi = self.l_hi();
        let values: Vec<Complex64> = (i_min..=i_max)
            .into_par_iter()
            .map(|i| {
                // j - i in [l_lo, l_hi] is banded, j - i < l_lo uses k(-∞)
                let band_lo = (i + l_lo).max(j_min);
                let band_hi = (i + l_hi).min(j_max);
                let mut acc = zero;
                if self.k_inf != 0.0 && band_lo > j_min {
                    let n_below = (band_lo - j_min) as usize;
                    acc += prefix[n_below.min(env.len())] * (self.k_inf * self.h);
                }
                let mut j = band_lo;
                while j <= band_hi {
                    let w = self.table[(j - i - l_lo) as usize];
                    acc += env[(j - j_min) as usize] * w;
                    j += 1;
                }
                acc
            })
            .collect();
        RadialTable { h: self.h, i_min, values, plateau: total * (self.k_inf * self.h) }
    }
}

/// Field samples `u(s_i)` at `s_i = i h`, zero below and constant above the range.
#[derive(Debug, Clone)]
pub struct RadialTable {
    pub h: f64,
    pub i_min: i64,
    pub values: Vec<Complex64>,
    pub plateau: Complex64,
}

impl RadialTable {
    pub fn s_min(&self) -> f64 {
        self.i_min as f64 * self.h
    }

    pub fn s_max(&self) -> f64 {
        (self.i_min + self.values.len() as i64 - 1) as f64 * self.h
    }

    fn node(&self, i: i64) -> Complex64 {
        let k = i - self.i_min;
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else if k as usize >= self.values.len() {
            self.plateau
        } else {
            self.values[k as usize]
        }
    }

    /// Cubic (four-point Lagrange) interpolation in `s = -log r`.
    pub fn eval(&self, s: f64) -> Complex64 {
        if s < self.s_min() - self.h {
            return Complex64::new(0.0, 0.0);
        }
        if s > self.s_max() + self.h {
            return self.plateau;
        }
        let x = s / self.h;
        let i = x.floor() as i64;
        let f = x - i as f64;
        let (p0, p1, p2, p3) = (self.node(i - 1), self.node(i), self.node(i + 1), self.node(i + 2));
        let w0 = -f * (f - 1.0) * (f - 2.0) / 6.0;
        let w1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
        let w2 = -(f + 1.0) * f * (f - 2.0) / 2.0;
        let w3 = (f + 1.0) * f * (f - 1.0) / 6.0;
        p0 * w0 + p1 * w1 + p2 * w2 + p3 * w3
    }

    /// `u` at physical radius `r >= 0`.
    pub fn eval_r(&self, r: f64) -> Complex64 {
        if r <= 0.0 {
            self.plateau
        } else {
            self.eval(-r.ln())
        }
    }

    /// `du/ds` by differentiating the cubic interpolant.
    pub fn deriv(&self, s: f64) -> Complex64 {
        if s < self.s_min() - self.h || s > self.s_max() + self.h {
            return Complex64::new(0.0, 0.0);
        }
        let x = s / self.h;
        let i = x.floor() as i64;
        let f = x - i as f64;
        let (p0, p1, p2, p3) = (self.node(i - 1), self.node(i), self.node(i + 1), self.node(i + 2));
        let d0 = -(3.0 * f * f - 6.0 * f + 2.0) / 6.0;
        let d1 = (3.0 * f * f - 4.0 * f - 1.0) / 2.0;
        let d2 = -(3.0 * f * f - 2.0 * f - 2.0) / 2.0;
        let d3 = (3.0 * f * f - 1.0) / 6.0;
        (p0 * d0 + p1 * d1 + p2 * d2 + p3 * d3) / self.h
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(self.plateau.norm(), f64::max)
    }
}
