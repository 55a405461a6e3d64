//! Angular profiles `φ(t, ω)` as finite sums of translated mode expansions.
//!
//! An atom with core `x` stands for
//!
//! ```text
//! e^{-i x·e^t ω} Σ_m c_m E_m(t) e^{imθ}
//! ```
//!
//! which is the profile coordinate of a field concentrated at `x`. Keeping the
//! translation symbolic avoids sampling the phase `e^{-ix·e^tω}`, hopeless at
//! `t` in the hundreds. Inner products between atoms resolve the angular
//! integral exactly through Jacobi–Anger,
//!
//! ```text
//! ∫ e^{-iδ·e^tω} e^{i(m-m')θ} dθ = 2π (-i)^k J_k(|δ| e^t) e^{-ikθ_δ},  k = m' - m,
//! ```
//!
//! so only one-dimensional Bessel moments in `t` remain. In dimension 2N > 2
//! atoms are radial and sit at the origin.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::shape::{Shape, Window};
use crate::error::{Error, Result};
use crate::numerics::{bessel_moment, sphere_measure, Dimension, QuadOptions};

#[derive(Debug, Clone)]
pub struct Mode {
    pub m: i32,
    pub coef: Complex64,
    pub shape: Arc<Shape>,
}

#[derive(Debug, Clone)]
pub struct Atom {
    pub core: [f64; 2],
    pub modes: Vec<Mode>,
}

impl Atom {
    pub fn radial(core: [f64; 2], coef: Complex64, shape: Shape) -> Self {
        Atom { core, modes: vec![Mode { m: 0, coef, shape: Arc::new(shape) }] }
    }

    pub fn support(&self) -> (f64, f64) {
        self.modes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| {
            let (a, b) = m.shape.support();
            (lo.min(a), hi.max(b))
        })
    }
}

#[derive(Debug, Clone)]
pub struct AngularProfile {
    dim: Dimension,
    atoms: Vec<Atom>,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl AngularProfile {
    pub fn zero(dim: Dimension) -> Self {
        AngularProfile { dim, atoms: Vec::new() }
    }

    pub fn from_atoms(dim: Dimension, atoms: Vec<Atom>) -> Result<Self> {
        let mut p = AngularProfile::zero(dim);
        for a in atoms {
            p.push(a)?;
        }
        Ok(p)
    }

    pub fn push(&mut self, atom: Atom) -> Result<()> {
        if self.dim.n() > 1 && (atom.core != [0.0, 0.0] || atom.modes.iter().any(|m| m.m != 0)) {
            return Err(Error::invalid(
                "angular modes and translated cores are only resolved in the plane (N = 1)",
            ));
        }
        if atom.core.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("core coordinates must be finite"));
        }
        self.atoms.push(atom);
        Ok(())
    }

    pub fn extend(&mut self, other: &AngularProfile) {
        self.atoms.extend(other.atoms.iter().cloned());
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.iter().all(|a| a.modes.iter().all(|m| m.coef == ZERO))
    }

    pub fn support(&self) -> (f64, f64) {
        self.atoms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
            let (x, y) = a.support();
            (lo.min(x), hi.max(y))
        })
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            for m in &mut a.modes {
                m.coef *= c;
            }
        }
        out
    }

    pub fn sum(&self, other: &AngularProfile) -> Self {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn difference(&self, other: &AngularProfile) -> Self {
        self.sum(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Multiply every mode by a window in `t`.
    pub fn windowed(&self, window: Window) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            for m in &mut a.modes {
                m.shape = Arc::new(Shape::Windowed { inner: m.shape.clone(), window });
            }
        }
        out
    }

    /// Multiply every mode by `1 - window(t)`.
    pub fn outside(&self, window: Window) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            for m in &mut a.modes {
                let inner = m.shape.clone();
                let (lo, hi) = inner.support();
                let mut breaks = inner.breaks();
                breaks.extend(window.breaks());
                m.shape = Arc::new(Shape::Closure {
                    label: "outside-window".to_string(),
                    f: Arc::new(move |t| inner.eval(t) * (1.0 - window.value(t))),
                    lo,
                    hi,
                    breaks,
                });
            }
        }
        out
    }

    /// Multiply every mode by a real weight `w(t)` (smooth where the shapes are).
    pub fn weighted(&self, label: &str, w: Arc<dyn Fn(f64) -> f64 + Send + Sync>) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            for m in &mut a.modes {
                let inner = m.shape.clone();
                let (lo, hi) = inner.support();
                let breaks = inner.breaks();
                let w = w.clone();
                m.shape = Arc::new(Shape::Closure {
                    label: label.to_string(),
                    f: Arc::new(move |t| inner.eval(t) * w(t)),
                    lo,
                    hi,
                    breaks,
                });
            }
        }
        out
    }

    /// Demodulation by `e^{ix·ξ}`: every core moves by `-x`.
    pub fn demodulated(&self, x: [f64; 2]) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            a.core = [a.core[0] - x[0], a.core[1] - x[1]];
        }
        out
    }

    /// Surface measure for the angular integral (2π in the plane).
    pub fn sphere(&self) -> f64 {
        sphere_measure(self.dim)
    }

    /// Pointwise value at `(t, θ)`; meaningful only while `|x| e^t` is moderate.
    pub fn eval(&self, t: f64, theta: f64) -> Complex64 {
        let rho = t.exp();
        let (c, s) = (theta.cos(), theta.sin());
        self.atoms
            .iter()
            .map(|a| {
                let phase = Complex64::from_polar(1.0, -rho * (a.core[0] * c + a.core[1] * s));
                let v: Complex64 = a
                    .modes
                    .iter()
                    .map(|m| m.coef * m.shape.eval(t) * Complex64::from_polar(1.0, f64::from(m.m) * theta))
                    .sum();
                phase * v
            })
            .sum()
    }

    /// `∫_{lo}^{hi} ∫_S φ · conj(ψ) dω dt`.
    pub fn inner(&self, other: &AngularProfile, lo: f64, hi: f64, opts: &QuadOptions) -> Result<Complex64> {
        let pairs: Vec<(usize, usize)> = (0..self.atoms.len())
            .flat_map(|i| (0..other.atoms.len()).map(move |j| (i, j)))
            .collect();
        let parts: Vec<Complex64> = pairs
            .par_iter()
            .map(|&(i, j)| atom_inner(&self.atoms[i], &other.atoms[j], lo, hi, opts))
            .collect::<Result<_>>()?;
        Ok(parts.iter().sum::<Complex64>() * self.angular_weight())
    }

    /// `∫_{lo}^{hi} ∫_S |φ|² dω dt`, using the hermitian symmetry of the pair sum.
    pub fn mass(&self, lo: f64, hi: f64, opts: &QuadOptions) -> Result<f64> {
        let n = self.atoms.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let parts: Vec<f64> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let v = atom_inner(&self.atoms[i], &self.atoms[j], lo, hi, opts)?;
                Ok(if i == j { v.re } else { 2.0 * v.re })
            })
            .collect::<Result<_>>()?;
        Ok((parts.iter().sum::<f64>() * self.angular_weight()).max(0.0))
    }

    pub fn norm_sq(&self, opts: &QuadOptions) -> Result<f64> {
        let (lo, hi) = self.support();
        if !(hi > lo) {
            return Ok(0.0);
        }
        self.mass(lo, hi, opts)
    }

    fn angular_weight(&self) -> f64 {
        if self.dim.n() == 1 {
            2.0 * PI
        } else {
            sphere_measure(self.dim)
        }
    }
}

/// `(1/2π) ∫∫ a · conj(b)` over `t ∈ [lo, hi]` (planar normalization; in
/// higher dimension all atoms are radial at the origin and only `k = 0` occurs).
fn atom_inner(a: &Atom, b: &Atom, lo: f64, hi: f64, opts: &QuadOptions) -> Result<Complex64> {
    let dx = a.core[0] - b.core[0];
    let dy = a.core[1] - b.core[1];
    let d = dx.hypot(dy);
    let theta = dy.atan2(dx);
    let mut acc = ZERO;
    for ma in &a.modes {
        for mb in &b.modes {
            let k = mb.m - ma.m;
            if d == 0.0 && k != 0 {
                continue;
            }
            let coef = ma.coef * mb.coef.conj();
            if coef == ZERO {
                continue;
            }
            let (sa, ea) = ma.shape.support();
            let (sb, eb) = mb.shape.support();
            let t0 = lo.max(sa).max(sb);
            let t1 = hi.min(ea).min(eb);
            if !(t1 > t0) {
                continue;
            }
            let mut breaks = ma.shape.breaks();
            breaks.extend(mb.shape.breaks());
            let (fa, fb) = (ma.shape.clone(), mb.shape.clone());
            let g = move |t: f64| fa.eval(t) * fb.eval(t).conj();
            let moment = bessel_moment(k, d, g, t0, t1, &breaks, opts)?;
            let phase = Complex64::from_polar(1.0, -f64::from(k) * (FRAC_PI_2 + theta));
            acc += coef * phase * moment;
        }
    }
    Ok(acc)
}
