//! Oscillation-aware quadrature of Bessel moments in the log variable.
//!
//! The basic object is
//!
//! ```text
//! M_k[g](d) = ∫ g(t) J_k(d e^t) dt
//! ```
//!
//! integrated panelwise in `t`. While `y = d e^t < 1` panels are bounded in
//! `t`; once the kernel oscillates, panel ends sit on consecutive asymptotic
//! zeros `(j + k/2 - 1/4) π` of `J_k`. Above `y_cap` the Hankel asymptotic
//! is integrated by parts piecewise, which leaves the endpoint terms
//! `[g √(2/π) y^{-3/2} sin(y - kπ/2 - π/4)]` of every smooth piece.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::bessel::jn;
use super::gauss::gl_ref;
use super::{sphere_measure, Dimension, LogGrid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadOptions {
    /// Gauss-Legendre points per panel (8, 16 or 32).
    pub gl_order: usize,
    /// Largest panel width in `t` while the kernel is not oscillating.
    pub max_dt: f64,
    /// Panel width used where `y < 1e-3`.
    pub wide_dt: f64,
    /// Argument beyond which the asymptotic tail formula is used.
    pub y_cap: f64,
    /// Panels per half period once oscillating (1 = split at each zero).
    pub splits_per_zero: usize,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            gl_order: 8,
            max_dt: 0.25,
            wide_dt: 2.0,
            y_cap: 2000.0,
            splits_per_zero: 1,
            max_panels: 4_000_000,
        }
    }
}

impl QuadOptions {
    /// Same rule with every panel halved.
    pub fn refined(&self) -> Self {
        QuadOptions {
            max_dt: 0.5 * self.max_dt,
            wide_dt: 0.5 * self.wide_dt,
            splits_per_zero: 2 * self.splits_per_zero,
            ..*self
        }
    }
}

fn sorted_cuts(lo: f64, hi: f64, breaks: &[f64]) -> Vec<f64> {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// `∫_{t_lo}^{t_hi} g(t) J_order(d e^t) dt` for `d >= 0`, `order` any integer.
pub fn bessel_moment<F>(
    order: i32,
    d: f64,
    g: F,
    t_lo: f64,
    t_hi: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(t_hi > t_lo) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::invalid("bessel_moment needs a finite t-range"));
    }
    let (gx, gw) = gl_ref(opts.gl_order);
    let cuts = sorted_cuts(t_lo, t_hi, breaks);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut panels = 0usize;

    let panel = |a: f64, b: f64, kernel: &dyn Fn(f64) -> f64, sum: &mut Complex64| {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in gx.iter().zip(gw) {
            let t = mid + half * x;
            *sum += g(t) * (half * w * kernel(t));
        }
    };

    if d == 0.0 {
        if order != 0 {
            return Ok(sum);
        }
        for win in cuts.windows(2) {
            let n = ((win[1] - win[0]) / opts.max_dt).ceil().max(1.0) as usize;
            let w = (win[1] - win[0]) / n as f64;
            for p in 0..n {
                let a = win[0] + p as f64 * w;
                panel(a, a + w, &|_| 1.0, &mut sum);
            }
            panels += n;
        }
        return check_budget(panels, opts).map(|_| sum);
    }

    let ln_d = d.ln();
    let t_cap = opts.y_cap.ln() - ln_d;
    let kernel = |t: f64| jn(order, (ln_d + t).exp());
    let k_off = f64::from(order.abs()) * 0.5 - 0.25;
    let step = PI / opts.splits_per_zero.max(1) as f64;

    for win in cuts.windows(2) {
        let (a, b) = (win[0], win[1]);
        let top = b.min(t_cap);
        let mut t = a;
        while t < top {
            let y = (ln_d + t).exp();
            let mut next = if y * opts.max_dt.exp() < 1e-3 {
                t + opts.wide_dt
            } else if y < 1.0 {
                t + opts.max_dt
            } else {
                // next asymptotic zero (or sub-zero split point) beyond y
                let j = ((y / step) - k_off * PI / step).floor() + 1.0;
                let y_next = (j + k_off * PI / step) * step;
                let y_next = if y_next <= y * (1.0 + 1e-13) { y_next + step } else { y_next };
                (t + opts.max_dt).min(y_next.ln() - ln_d)
            };
            if next > top || top - next < 1e-12 * (1.0 + top.abs()) {
                next = top;
            }
            panel(t, next, &kernel, &mut sum);
            panels += 1;
            if panels > opts.max_panels {
                return Err(Error::NonConvergence {
                    what: "bessel_moment",
                    detail: format!(
                        "panel budget {} exhausted at t = {t} (order {order}, d = {d})",
                        opts.max_panels
                    ),
                });
            }
            t = next;
        }
        if b > t_cap {
            let lo = a.max(t_cap);
            let chi = f64::from(order) * FRAC_PI_2 + FRAC_PI_4;
            let eps = 1e-10 * (b - lo).max(1e-300);
            let edge = |t: f64| -> Complex64 {
                let ln_y = ln_d + t;
                if ln_y > 700.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let y = ln_y.exp();
                g(t) * ((2.0 / PI).sqrt() * y.powf(-1.5) * (y - chi).sin())
            };
            sum += edge(b - eps) - edge(lo + eps);
        }
    }
    Ok(sum)
}

fn check_budget(panels: usize, opts: &QuadOptions) -> Result<()> {
    if panels > opts.max_panels {
        return Err(Error::NonConvergence {
            what: "bessel_moment",
            detail: format!("panel budget {} exhausted", opts.max_panels),
        });
    }
    Ok(())
}

/// A radial function of `ρ` used as Hankel-transform input.
pub trait RadialSpectrum: Sync {
    fn value(&self, rho: f64) -> f64;
    /// `[ρ_lo, ρ_hi]` outside which the function vanishes.
    fn support(&self) -> (f64, f64);
    /// Points in `t = log ρ` where the function is not smooth.
    fn breaks_t(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Nodal values on a [`LogGrid`] in `t = log ρ`, linearly interpolated.
#[derive(Debug, Clone)]
pub struct SampledSpectrum {
    pub grid: LogGrid,
    pub values: Vec<f64>,
}

impl RadialSpectrum for SampledSpectrum {
    fn value(&self, rho: f64) -> f64 {
        self.grid.interpolate(&self.values, rho.ln())
    }
    fn support(&self) -> (f64, f64) {
        (self.grid.t_min().exp(), self.grid.t_max().exp())
    }
    fn breaks_t(&self) -> Vec<f64> {
        self.grid.nodes().to_vec()
    }
}

/// Closure-backed radial function.
pub struct FnSpectrum<F: Fn(f64) -> f64 + Sync> {
    pub f: F,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub breaks_rho: Vec<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> RadialSpectrum for FnSpectrum<F> {
    fn value(&self, rho: f64) -> f64 {
        if rho < self.rho_lo || rho > self.rho_hi {
            0.0
        } else {
            (self.f)(rho)
        }
    }
    fn support(&self) -> (f64, f64) {
        (self.rho_lo, self.rho_hi)
    }
    fn breaks_t(&self) -> Vec<f64> {
        self.breaks_rho.iter().filter(|r| **r > 0.0).map(|r| r.ln()).collect()
    }
}

/// Samples of a radial function at physical radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

/// `(2π)^N r^{-(N-1)} ∫ f(ρ) J_{N-1}(rρ) ρ^N dρ`, i.e. `∫_{R^{2N}} e^{ix·ξ} f(|ξ|) dξ`
/// at `|x| = r`, with the `r = 0` value `ω ∫ f(ρ) ρ^{2N-1} dρ`.
pub fn hankel_radial(
    dim: Dimension,
    f: &dyn RadialSpectrum,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<Vec<f64>> {
    let n = dim.n() as i32;
    let (rho_lo, rho_hi) = f.support();
    // integrals in t; a zero lower limit is replaced by a point where the
    // integrand ρ^{N+1} f is below machine precision
    let t_lo = if rho_lo > 0.0 { rho_lo.ln() } else { -40.0 };
    let t_hi = rho_hi.ln();
    let breaks = f.breaks_t();
    let omega = sphere_measure(dim);
    let two_pi_n = (2.0 * PI).powi(n);
    points
        .par_iter()
        .map(|&r| {
            if r < 0.0 {
                return Err(Error::invalid("radius must be nonnegative"));
            }
            if r == 0.0 {
                let v = bessel_moment(
                    0,
                    0.0,
                    |t| Complex64::new(f.value(t.exp()) * (2.0 * f64::from(n) * t).exp(), 0.0),
                    t_lo,
                    t_hi,
                    &breaks,
                    opts,
                )?;
                return Ok(omega * v.re);
            }
            let v = bessel_moment(
                n - 1,
                r,
                |t| Complex64::new(f.value(t.exp()) * (f64::from(n + 1) * t).exp(), 0.0),
                t_lo,
                t_hi,
                &breaks,
                opts,
            )?;
            Ok(two_pi_n * r.powi(-(n - 1)) * v.re)
        })
        .collect()
}

/// Inverse-Fourier-side synthesis `F(r) = ∫ e^{ix·ξ} f(|ξ|) dξ`.
pub fn radial_synthesis(
    dim: Dimension,
    spectral: &dyn RadialSpectrum,
    radii: &[f64],
    opts: &QuadOptions,
) -> Result<RadialField> {
    let values = hankel_radial(dim, spectral, radii, opts)?;
    Ok(RadialField {
        radii: radii.to_vec(),
        values,
    })
}

/// Forward transform `û(ρ) = ∫ e^{-ix·ξ} u(|x|) dx` of a radial field.
/// The field is passed as a radial function of `r` (same trait).
pub fn radial_analysis(
    dim: Dimension,
    field: &dyn RadialSpectrum,
    rhos: &[f64],
    opts: &QuadOptions,
) -> Result<Vec<f64>> {
    hankel_radial(dim, field, rhos, opts)
}
