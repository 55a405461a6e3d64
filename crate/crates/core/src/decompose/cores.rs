//! Core extraction by matching pursuit against a finite test dictionary.
//!
//! Demodulating a component at a candidate `x` turns the part concentrated
//! at `x` into a slowly varying envelope, while parts at other cores keep a
//! phase `e^{-iδ·e^tω}` that averages out against any coarse cell. The
//! surrogate `η(x)` is the mass of the demodulated component's projection onto
//! orthonormal cells × angular modes `|m| <= m_max` over the window.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::QuadOptions;
use crate::synth::{AngularProfile, Atom, Mode, PatchOptions, PhysicalField, Shape, Window};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoreOptions {
    pub k_max: usize,
    pub eta_tol: f64,
    /// Cells of the η dictionary.
    pub eta_cells: usize,
    /// Cells used to read off an extracted profile.
    pub profile_cells: usize,
    pub m_max: i32,
    /// Physical-space local maxima kept as candidates.
    pub candidates: usize,
}

impl Default for CoreOptions {
    fn default() -> Self {
        CoreOptions { k_max: 6, eta_tol: 0.01, eta_cells: 32, profile_cells: 256, m_max: 2, candidates: 12 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaSurrogate {
    pub candidates: Vec<[f64; 2]>,
    /// Projection mass per candidate.
    pub masses: Vec<f64>,
    pub eta: f64,
    pub argmax: Option<[f64; 2]>,
    /// Dictionary cells in `t` and the per-candidate mass in each.
    pub cell_edges: Vec<f64>,
    pub cell_masses: Vec<Vec<f64>>,
}

impl EtaSurrogate {
    /// Mass of candidate `i` on cells ending below `t`.
    pub fn mass_below(&self, i: usize, t: f64) -> f64 {
        self.cell_masses[i].iter().zip(self.cell_edges.windows(2)).filter(|(_, e)| e[1] <= t).map(|(m, _)| m).sum()
    }
}

#[derive(Debug, Clone)]
pub struct ExtractedCore {
    pub core: [f64; 2],
    /// Profile demodulated at `core` (atoms at the origin).
    pub phi: AngularProfile,
    /// `t` below which `phi` was cut to keep it null there.
    pub truncated_below: Option<f64>,
    pub eta: f64,
}

#[derive(Debug, Clone)]
pub struct CoreExtraction {
    pub cores: Vec<ExtractedCore>,
    pub remainder: AngularProfile,
    /// η of the remainder after the last step.
    pub residual_eta: f64,
    pub exhausted: bool,
}

fn cell_edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

fn modes(m_max: i32, dim_n: u32) -> Vec<i32> {
    if dim_n == 1 {
        (-m_max..=m_max).collect()
    } else {
        vec![0]
    }
}

/// Coefficients of `phi` (already demodulated) on the orthonormal cells
/// `1_{[e_i, e_{i+1})} e^{imθ} / √(|S| w_i)`; one row per mode.
fn cell_coefficients(phi: &AngularProfile, edges: &[f64], ms: &[i32], quad: &QuadOptions) -> Result<Vec<Vec<Complex64>>> {
    let dim = phi.dim();
    let sphere = if dim.n() == 1 { 2.0 * PI } else { phi.sphere() };
    let jobs: Vec<(usize, usize)> = (0..ms.len()).flat_map(|a| (0..edges.len() - 1).map(move |i| (a, i))).collect();
    let vals: Vec<Complex64> = jobs
        .par_iter()
        .map(|&(a, i)| {
            let (lo, hi) = (edges[i], edges[i + 1]);
            let e = 1.0 / (sphere * (hi - lo)).sqrt();
            let cell = Shape::Cells { edges: vec![lo, hi], values: vec![Complex64::new(e, 0.0)] };
            let atom = Atom { core: [0.0, 0.0], modes: vec![Mode { m: ms[a], coef: Complex64::new(1.0, 0.0), shape: Arc::new(cell) }] };
            phi.inner(&AngularProfile::from_atoms(dim, vec![atom])?, lo, hi, quad)
        })
        .collect::<Result<_>>()?;
    Ok(vals.chunks(edges.len() - 1).map(|c| c.to_vec()).collect())
}

/// Window over which the dictionary lives: the component's support clipped
/// to `t >= 0`.
fn dictionary_window(component: &AngularProfile) -> Option<(f64, f64)> {
    let (lo, hi) = component.support();
    let lo = lo.max(0.0);
    (hi.is_finite() && hi > lo).then_some((lo, hi))
}

pub fn eta_surrogate(
    component: &AngularProfile,
    candidates: &[[f64; 2]],
    opts: &CoreOptions,
    quad: &QuadOptions,
) -> Result<EtaSurrogate> {
    if candidates.is_empty() {
        return Err(Error::invalid("eta_surrogate needs at least one candidate core"));
    }
    let Some((lo, hi)) = dictionary_window(component) else {
        return Ok(EtaSurrogate {
            candidates: candidates.to_vec(),
            masses: vec![0.0; candidates.len()],
            eta: 0.0,
            argmax: None,
            cell_edges: Vec::new(),
            cell_masses: vec![Vec::new(); candidates.len()],
        });
    };
    let edges = cell_edges(lo, hi, opts.eta_cells.max(1));
    let ms = modes(opts.m_max, component.dim().n());
    let cell_masses: Vec<Vec<f64>> = candidates
        .iter()
        .map(|x| {
            let coef = cell_coefficients(&component.demodulated(*x), &edges, &ms, quad)?;
            Ok((0..edges.len() - 1).map(|i| coef.iter().map(|row| row[i].norm_sqr()).sum()).collect())
        })
        .collect::<Result<_>>()?;
    let masses: Vec<f64> = cell_masses.iter().map(|m| m.iter().sum()).collect();
    let (mut eta, mut argmax) = (0.0, None);
    for (x, m) in candidates.iter().zip(&masses) {
        if *m > eta {
            eta = *m;
            argmax = Some(*x);
        }
    }
    Ok(EtaSurrogate { candidates: candidates.to_vec(), masses, eta, argmax, cell_edges: edges, cell_masses })
}

/// Candidate cores: local maxima of `|u|` of the synthesized component.
pub fn core_candidates(component: &AngularProfile, patches: &PatchOptions, count: usize) -> Result<Vec<[f64; 2]>> {
    let field = PhysicalField::synthesize(&component.windowed(Window::hard(0.0, f64::INFINITY)), patches.h)?;
    let mut c: Vec<[f64; 2]> = field.peaks(patches, count).into_iter().map(|p| p.0).collect();
    if c.is_empty() {
        c.push([0.0, 0.0]);
    }
    Ok(c)
}

/// Matching pursuit over cores at scale `alpha`.
pub fn extract_cores(
    component: &AngularProfile,
    alpha: f64,
    opts: &CoreOptions,
    patches: &PatchOptions,
    quad: &QuadOptions,
) -> Result<CoreExtraction> {
    if !(opts.eta_tol > 0.0) || !(alpha > 0.0) {
        return Err(Error::invalid("extract_cores needs eta_tol > 0 and alpha > 0"));
    }
    let dim = component.dim();
    let mut rest = component.clone();
    let mut cores: Vec<ExtractedCore> = Vec::new();
    let Some((lo, hi)) = dictionary_window(component) else {
        return Ok(CoreExtraction { cores, remainder: rest, residual_eta: 0.0, exhausted: false });
    };
    let candidates = core_candidates(component, patches, opts.candidates)?;
    let fine = cell_edges(lo, hi, opts.profile_cells.max(1));
    let ms = modes(opts.m_max, dim.n());
    loop {
        let eta = eta_surrogate(&rest, &candidates, opts, quad)?;
        let Some(x) = eta.argmax.filter(|_| eta.eta >= opts.eta_tol) else {
            return Ok(CoreExtraction { cores, remainder: rest, residual_eta: eta.eta, exhausted: false });
        };
        if cores.len() >= opts.k_max {
            return Ok(CoreExtraction { cores, remainder: rest, residual_eta: eta.eta, exhausted: true });
        }
        let x = earliest_in_cluster(&eta, x, opts.eta_tol);
        let coef = cell_coefficients(&rest.demodulated(x), &fine, &ms, quad)?;
        let sphere = if dim.n() == 1 { 2.0 * PI } else { component.sphere() };
        let mut mode_list = Vec::new();
        for (m, row) in ms.iter().zip(&coef) {
            let energy: f64 = row.iter().map(|c| c.norm_sqr()).sum();
            if energy <= 1e-12 * eta.eta {
                continue;
            }
            let values: Vec<Complex64> =
                row.iter().zip(fine.windows(2)).map(|(c, w)| c / (sphere * (w[1] - w[0])).sqrt()).collect();
            mode_list.push(Mode { m: *m, coef: Complex64::new(1.0, 0.0), shape: Arc::new(Shape::Cells { edges: fine.clone(), values }) });
        }
        let mut phi = AngularProfile::from_atoms(dim, vec![Atom { core: [0.0, 0.0], modes: mode_list }])?;
        // keep ψ null below a = -log|x - x'|/α for cores closer than 1
        let cut = cores
            .iter()
            .map(|c| (x[0] - c.core[0]).hypot(x[1] - c.core[1]))
            .filter(|d| *d < 1.0)
            .map(|d| if d == 0.0 { f64::INFINITY } else { -d.ln() })
            .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |a| a.max(t))));
        if let Some(t_cut) = cut {
            if t_cut > lo {
                phi = phi.windowed(Window::hard(t_cut.min(hi), f64::INFINITY));
            }
        }
        rest = rest.difference(&phi.demodulated([-x[0], -x[1]]));
        cores.push(ExtractedCore { core: x, phi, truncated_below: cut.filter(|t| *t > lo), eta: eta.eta });
    }
}

/// Among live candidates closer than 1 to `x`, the one holding the most mass
/// below its separation frequency `-log d`; extracting it first leaves the
/// later cores null at those frequencies.
fn earliest_in_cluster(eta: &EtaSurrogate, x: [f64; 2], eta_tol: f64) -> [f64; 2] {
    let live: Vec<usize> = (0..eta.candidates.len()).filter(|i| eta.masses[*i] >= eta_tol).collect();
    let near: Vec<usize> = live
        .iter()
        .copied()
        .filter(|i| {
            let c = eta.candidates[*i];
            (c[0] - x[0]).hypot(c[1] - x[1]) < 1.0
        })
        .collect();
    if near.len() < 2 {
        return x;
    }
    let low = |i: usize| {
        let c = eta.candidates[i];
        let d = near
            .iter()
            .filter(|j| **j != i)
            .map(|j| (eta.candidates[*j][0] - c[0]).hypot(eta.candidates[*j][1] - c[1]))
            .fold(f64::INFINITY, f64::min);
        if d == 0.0 { eta.masses[i] } else { eta.mass_below(i, -d.ln()) }
    };
    let mut best = (x, f64::NEG_INFINITY);
    for &i in &near {
        let v = low(i);
        if v > best.1 * (1.0 + 1e-9) || (v >= best.1 * (1.0 - 1e-9) && eta.candidates[i] == x) {
            best = (eta.candidates[i], v);
        }
    }
    best.0
}
