//! Physical-space synthesis of angular profiles and quadrature samples for
//! norms of the synthesized field.
//!
//! The field of an atom with core `x₀` is, in polar coordinates about `x₀`,
//!
//! ```text
//! u(x₀ + e^{-s} e^{iθ}) = Σ_m i^m e^{imθ} ∫ E_m(t) J_m(e^{t-s}) dt       (plane)
//! u(e^{-s})            = ∫ E(t) e^{-(N-1)(t-s)} J_{N-1}(e^{t-s}) dt      (radial)
//! ```
//!
//! and each mode is one banded correlation on the log lattice.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AngularProfile;
use crate::error::Result;
use crate::norms::MeasuredSamples;
use crate::numerics::{sphere_measure, Dimension, LogHankel, RadialTable};

type KernelKey = (i32, u32, u64);

fn kernel(order: i32, power: u32, h: f64) -> Result<Arc<LogHankel>> {
    static CACHE: OnceLock<Mutex<HashMap<KernelKey, Arc<LogHankel>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (order, power, h.to_bits());
    if let Some(k) = cache.lock().unwrap().get(&key) {
        return Ok(k.clone());
    }
    let k = Arc::new(LogHankel::new(order, power, h)?);
    cache.lock().unwrap().insert(key, k.clone());
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PatchOptions {
    /// Log-lattice spacing in `t` and `s`.
    pub h: f64,
    /// Outer radius of the sampled region.
    pub r_far: f64,
    /// Angular nodes per core patch.
    pub n_theta: usize,
    /// Radial and angular resolution of the far-field grid.
    pub far_dr: f64,
    pub far_theta: usize,
}

impl Default for PatchOptions {
    fn default() -> Self {
        PatchOptions { h: 1.0 / 16.0, r_far: 16.0, n_theta: 32, far_dr: 0.02, far_theta: 128 }
    }
}

impl PatchOptions {
    pub fn refined(&self) -> Self {
        PatchOptions {
            h: 0.5 * self.h,
            n_theta: 2 * self.n_theta,
            far_dr: 0.5 * self.far_dr,
            far_theta: 2 * self.far_theta,
            ..*self
        }
    }
}

#[derive(Debug, Clone)]
struct Part {
    core: [f64; 2],
    m: i32,
    table: RadialTable,
}

/// Sampled physical field of an angular profile.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    dim: Dimension,
    parts: Vec<Part>,
}

/// Quadrature samples with their distance from the origin.
#[derive(Debug, Clone, Default)]
pub struct PhysicalSamples {
    pub samples: MeasuredSamples,
    pub radius: Vec<f64>,
}

impl PhysicalSamples {
    fn push(&mut self, value: f64, ln_w: f64, radius: f64) {
        self.samples.push(value, ln_w);
        self.radius.push(radius);
    }

    /// `∫_{|x| >= r} |u|²`.
    pub fn tail_mass(&self, r: f64) -> f64 {
        self.samples
            .values()
            .iter()
            .zip(self.samples.ln_weights())
            .zip(&self.radius)
            .filter(|(_, rad)| **rad >= r)
            .map(|((u, lw), _)| u * u * lw.exp())
            .sum()
    }
}

impl PhysicalField {
    pub fn synthesize(phi: &AngularProfile, h: f64) -> Result<Self> {
        let dim = phi.dim();
        let radial_power = dim.n() - 1;
        // merge envelopes sharing (core, m) before convolving
        let mut groups: Vec<([f64; 2], i32, i64, Vec<Complex64>)> = Vec::new();
        for atom in phi.atoms() {
            for mode in &atom.modes {
                let (j_min, vals) = mode.shape.sample_lattice(h);
                if vals.is_empty() {
                    continue;
                }
                let c = mode.coef * Complex64::i().powi(mode.m);
                let g = match groups.iter_mut().position(|g| g.0 == atom.core && g.1 == mode.m) {
                    Some(i) => &mut groups[i],
                    None => {
                        groups.push((atom.core, mode.m, j_min, Vec::new()));
                        groups.last_mut().unwrap()
                    }
                };
                accumulate(&mut g.2, &mut g.3, j_min, &vals, c);
            }
        }
        let mut parts = Vec::with_capacity(groups.len());
        for (core, m, j_min, env) in groups {
            let k = if dim.n() == 1 {
                kernel(m, 0, h)?
            } else {
                kernel(radial_power as i32, radial_power, h)?
            };
            parts.push(Part { core, m, table: k.apply(j_min, &env) });
        }
        Ok(PhysicalField { dim, parts })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// Distinct cores, in first-seen order.
    pub fn cores(&self) -> Vec<[f64; 2]> {
        let mut out: Vec<[f64; 2]> = Vec::new();
        for p in &self.parts {
            if !out.contains(&p.core) {
                out.push(p.core);
            }
        }
        out
    }

    fn is_radial(&self) -> bool {
        self.parts.iter().all(|p| p.core == [0.0, 0.0] && p.m == 0)
    }

    /// `u` at `x = core + e^{-s}(cos θ, sin θ)`; exact in the local polar
    /// coordinates of parts centred at `core`.
    pub fn eval_near(&self, core: [f64; 2], s: f64, theta: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let rad = (-s).exp();
        for p in &self.parts {
            let (sp, thp) = if p.core == core {
                (s, theta)
            } else {
                let dx = core[0] - p.core[0] + rad * theta.cos();
                let dy = core[1] - p.core[1] + rad * theta.sin();
                let d = dx.hypot(dy);
                if d == 0.0 {
                    (f64::INFINITY, 0.0)
                } else {
                    (-d.ln(), dy.atan2(dx))
                }
            };
            let v = if sp.is_infinite() { p.table.plateau } else { p.table.eval(sp) };
            acc += if p.m == 0 { v } else { v * Complex64::from_polar(1.0, f64::from(p.m) * thp) };
        }
        acc
    }

    pub fn eval(&self, x: [f64; 2]) -> Complex64 {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            self.eval_near([0.0, 0.0], f64::INFINITY, 0.0)
        } else {
            self.eval_near([0.0, 0.0], -r.ln(), x[1].atan2(x[0]))
        }
    }

    /// Largest `s` resolved by any table about `core`.
    fn s_top(&self, core: [f64; 2]) -> f64 {
        self.parts
            .iter()
            .filter(|p| p.core == core)
            .map(|p| p.table.s_max())
            .fold(0.0, f64::max)
            + 1.0
    }

    /// Quadrature samples of `|u|` over the disk of radius `r_far` (plus the
    /// patches about every core).
    pub fn samples(&self, opts: &PatchOptions) -> PhysicalSamples {
        let mut out = PhysicalSamples::default();
        let h = opts.h;
        if self.parts.is_empty() {
            return out;
        }
        if self.is_radial() {
            let two_n = self.dim.d() as f64;
            let omega = sphere_measure(self.dim);
            let s_lo = -opts.r_far.ln();
            let s_hi = self.s_top([0.0, 0.0]);
            let m = ((s_hi - s_lo) / h).ceil() as usize;
            let ds = (s_hi - s_lo) / m as f64;
            for i in 0..=m {
                let s = s_lo + i as f64 * ds;
                let trap = if i == 0 || i == m { 0.5 } else { 1.0 };
                let u = self.eval_near([0.0, 0.0], s, 0.0).norm();
                out.push(u, (omega * ds * trap).ln() - two_n * s, (-s).exp());
            }
            let inner = self.eval_near([0.0, 0.0], f64::INFINITY, 0.0).norm();
            out.push(inner, (omega / two_n).ln() - two_n * s_hi, 0.0);
            return out;
        }
        let cores = self.cores();
        let radii: Vec<f64> = cores
            .iter()
            .map(|c| {
                cores
                    .iter()
                    .filter(|d| *d != c)
                    .map(|d| 0.5 * (c[0] - d[0]).hypot(c[1] - d[1]))
                    .fold(opts.r_far, f64::min)
            })
            .collect();
        let dth = 2.0 * PI / opts.n_theta as f64;
        for (c, rho) in cores.iter().zip(&radii) {
            let s_lo = -rho.ln();
            let s_hi = self.s_top(*c).max(s_lo + 1.0);
            let m = ((s_hi - s_lo) / h).ceil() as usize;
            let ds = (s_hi - s_lo) / m as f64;
            for i in 0..=m {
                let s = s_lo + i as f64 * ds;
                let trap = if i == 0 || i == m { 0.5 } else { 1.0 };
                let lw = (ds * dth * trap).ln() - 2.0 * s;
                for j in 0..opts.n_theta {
                    let th = (j as f64 + 0.5) * dth;
                    let u = self.eval_near(*c, s, th).norm();
                    let r = (-s).exp();
                    let rad = (c[0] + r * th.cos()).hypot(c[1] + r * th.sin());
                    out.push(u, lw, rad);
                }
            }
            let inner = self.eval_near(*c, f64::INFINITY, 0.0).norm();
            out.push(inner, PI.ln() - 2.0 * s_hi, c[0].hypot(c[1]));
        }
        // far field: disk about the origin minus the core patches
        let nr = (opts.r_far / opts.far_dr).ceil() as usize;
        let dr = opts.r_far / nr as f64;
        let dth = 2.0 * PI / opts.far_theta as f64;
        for i in 0..nr {
            let r = (i as f64 + 0.5) * dr;
            let lw = (r * dr * dth).ln();
            for j in 0..opts.far_theta {
                let th = (j as f64 + 0.5) * dth;
                let x = [r * th.cos(), r * th.sin()];
                let inside = cores
                    .iter()
                    .zip(&radii)
                    .any(|(c, rho)| (x[0] - c[0]).hypot(x[1] - c[1]) < *rho);
                if !inside {
                    out.push(self.eval(x).norm(), lw, r);
                }
            }
        }
        out
    }

    /// Local maxima of `|u|` over the sample grid: the largest sample of each
    /// core patch, then far-field points exceeding their eight neighbours.
    /// Sorted by decreasing `|u|`, at most `count`.
    pub fn peaks(&self, opts: &PatchOptions, count: usize) -> Vec<([f64; 2], f64)> {
        let cores = self.cores();
        let mut out: Vec<([f64; 2], f64)> = Vec::new();
        let rho: Vec<f64> = cores
            .iter()
            .map(|c| {
                cores
                    .iter()
                    .filter(|d| *d != c)
                    .map(|d| 0.5 * (c[0] - d[0]).hypot(c[1] - d[1]))
                    .fold(opts.r_far, f64::min)
            })
            .collect();
        let dth = 2.0 * PI / opts.n_theta as f64;
        for (c, r) in cores.iter().zip(&rho) {
            let mut best = (*c, self.eval_near(*c, f64::INFINITY, 0.0).norm());
            let (s_lo, s_hi) = (-r.ln(), self.s_top(*c));
            let m = ((s_hi - s_lo) / opts.h).ceil().max(1.0) as usize;
            for i in 0..=m {
                let s = s_lo + (s_hi - s_lo) * i as f64 / m as f64;
                for j in 0..opts.n_theta {
                    let th = (j as f64 + 0.5) * dth;
                    let v = self.eval_near(*c, s, th).norm();
                    if v > best.1 * (1.0 + 1e-6) {
                        let e = (-s).exp();
                        best = ([c[0] + e * th.cos(), c[1] + e * th.sin()], v);
                    }
                }
            }
            out.push(best);
        }
        let nr = (opts.r_far / opts.far_dr).ceil() as usize;
        let dr = opts.r_far / nr as f64;
        let nt = opts.far_theta;
        let dth = 2.0 * PI / nt as f64;
        let pos = |i: usize, j: usize| {
            let (r, th) = ((i as f64 + 0.5) * dr, (j as f64 + 0.5) * dth);
            [r * th.cos(), r * th.sin()]
        };
        let grid: Vec<f64> = (0..nr * nt).map(|k| self.eval(pos(k / nt, k % nt)).norm()).collect();
        for i in 1..nr.saturating_sub(1) {
            for j in 0..nt {
                let v = grid[i * nt + j];
                let x = pos(i, j);
                if cores.iter().zip(&rho).any(|(c, r)| (x[0] - c[0]).hypot(x[1] - c[1]) < *r) {
                    continue;
                }
                let is_max = (i - 1..=i + 1).all(|a| {
                    (0..3).all(|b| {
                        let jj = (j + nt + b - 1) % nt;
                        (a == i && jj == j) || grid[a * nt + jj] < v
                    })
                });
                if is_max {
                    out.push((x, v));
                }
            }
        }
        // patch maxima are distinct by construction; far-field ones must
        // stand clear of everything already kept
        let n_patch = cores.len();
        let (mut kept, mut far): (Vec<_>, Vec<_>) = (out[..n_patch].to_vec(), out[n_patch..].to_vec());
        far.sort_by(|a, b| b.1.total_cmp(&a.1));
        for p in far {
            if kept.iter().all(|q: &([f64; 2], f64)| (p.0[0] - q.0[0]).hypot(p.0[1] - q.0[1]) > 0.5 * dr) {
                kept.push(p);
            }
        }
        kept.sort_by(|a, b| b.1.total_cmp(&a.1));
        kept.truncate(count);
        kept
    }

    /// `max |u|` over the table nodes (plus plateaus).
    pub fn sup_estimate(&self) -> f64 {
        // the nodes of a single table bound its own contribution only; sample
        // the full sum on the patch grid instead
        self.samples(&PatchOptions::default()).samples.sup()
    }
}

fn accumulate(j0: &mut i64, acc: &mut Vec<Complex64>, j_min: i64, vals: &[Complex64], c: Complex64) {
    if acc.is_empty() {
        *j0 = j_min;
        acc.extend(vals.iter().map(|v| v * c));
        return;
    }
    let lo = (*j0).min(j_min);
    let hi = (*j0 + acc.len() as i64).max(j_min + vals.len() as i64);
    if lo < *j0 {
        let pad = (*j0 - lo) as usize;
        acc.splice(0..0, std::iter::repeat(Complex64::new(0.0, 0.0)).take(pad));
        *j0 = lo;
    }
    acc.resize((hi - *j0) as usize, Complex64::new(0.0, 0.0));
    for (k, v) in vals.iter().enumerate() {
        acc[(j_min - *j0) as usize + k] += v * c;
    }
}
