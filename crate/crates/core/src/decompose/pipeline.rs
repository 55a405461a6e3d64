//! The full decomposition: strip, profile coordinates, scales, cores,
//! sphere averages, remainder norms and the stability ledger.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cores::{extract_cores, CoreOptions};
use super::coords::{strip_low_freq, to_profile_coords};
use super::ledger::{stability_ledger, LedgerRecord};
use super::scales::{extract_scales, ScaleOptions};
use super::sphere::{radial_profile, sphere_average};
use crate::diagnostics::{triple_orthogonality, OrthogonalityVerdict, DEFAULT_SLOPE};
use crate::error::Result;
use crate::norms::{b_norm, orlicz_norm, sobolev_norm};
use crate::numerics::QuadOptions;
use crate::synth::{AngularProfile, CoreLaw, PatchOptions, PhysicalField, Profile, ScaleLaw, ScaleTriple, SequenceFamily, Window};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecomposeConfig {
    pub scales: ScaleOptions,
    pub cores: CoreOptions,
    pub quad: QuadOptions,
    pub patches: PatchOptions,
    pub orlicz_tol: f64,
    /// Nodes of each recovered radial profile.
    pub profile_nodes: usize,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            scales: ScaleOptions::default(),
            cores: CoreOptions::default(),
            quad: QuadOptions::default(),
            patches: PatchOptions::default(),
            orlicz_tol: 1e-6,
            profile_nodes: 257,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleRecord {
    pub law: String,
    pub law_error: f64,
    pub alpha: Vec<f64>,
    pub windows: Vec<Window>,
    pub component_mass: Vec<f64>,
    /// Per entry: η left in the component after core extraction.
    pub residual_eta: Vec<f64>,
    pub cores_exhausted: Vec<bool>,
    /// Cores extracted per entry, in extraction order.
    pub cores: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveredTriple {
    pub scale: usize,
    pub alpha: Vec<f64>,
    /// Core per entry; `None` where no extracted core matched.
    pub core: Vec<Option<[f64; 2]>>,
    /// `‖φ‖²` of the sphere-averaged profile per entry.
    pub mass: Vec<f64>,
    pub eta: Vec<f64>,
    pub truncated: bool,
    /// Orlicz norm of the non-radial residual at the largest `n`.
    pub sphere_residual_orlicz: f64,
    /// `φ(s)` read at the largest `n`.
    pub profile: Profile,
    /// Sphere-averaged profile per entry, modulated back to its core.
    #[serde(skip)]
    pub parts: Vec<Option<AngularProfile>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageNorms {
    pub stage: String,
    pub n: u32,
    pub b_norm: f64,
    pub l2: f64,
    pub hn: f64,
    pub orlicz: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub n_list: Vec<u32>,
    pub config: DecomposeConfig,
    pub stripped_mass: Vec<f64>,
    pub scales: Vec<ScaleRecord>,
    pub scales_exhausted: bool,
    pub b_trace: Vec<f64>,
    pub triples: Vec<RecoveredTriple>,
    pub stages: Vec<StageNorms>,
    pub ledger: Vec<LedgerRecord>,
    /// `orlicz / b_norm` of the final remainder at the largest `n`.
    pub remainder_ratio: f64,
    /// Orlicz norm of the input field at the largest `n`.
    pub a0: f64,
    pub orthogonality: Vec<(usize, usize, OrthogonalityVerdict)>,
    pub errors: Vec<String>,
    #[serde(skip)]
    pub inputs: Vec<AngularProfile>,
    #[serde(skip)]
    pub remainders: Vec<AngularProfile>,
}

fn l2_norm(phi: &AngularProfile, quad: &QuadOptions) -> Result<f64> {
    let n = phi.dim().n() as i32;
    let w = Arc::new(move |t: f64| (-f64::from(n) * t).exp());
    Ok(phi.weighted("l2-weight", w).norm_sq(quad)?.sqrt())
}

fn physical_orlicz(phi: &AngularProfile, cfg: &DecomposeConfig) -> Result<f64> {
    if phi.is_empty() {
        return Ok(0.0);
    }
    let field = PhysicalField::synthesize(phi, cfg.patches.h)?;
    orlicz_norm(&field.samples(&cfg.patches).samples, cfg.orlicz_tol)
}

fn stage(name: &str, n: u32, phi: &AngularProfile, cfg: &DecomposeConfig, orlicz: bool) -> Result<StageNorms> {
    Ok(StageNorms {
        stage: name.to_string(),
        n,
        b_norm: b_norm(phi, &cfg.quad)?,
        l2: l2_norm(phi, &cfg.quad)?,
        hn: sobolev_norm(phi, true, &cfg.quad)?,
        orlicz: if orlicz { Some(physical_orlicz(phi, cfg)?) } else { None },
    })
}

/// Scale laws declared by the family, without repeats.
fn declared_laws(family: &SequenceFamily) -> Vec<ScaleLaw> {
    let mut laws: Vec<ScaleLaw> = Vec::new();
    for l in family.triples.iter().map(|t| &t.alpha).chain(family.moser.iter()) {
        if !laws.contains(l) {
            laws.push(l.clone());
        }
    }
    laws
}

struct CoreHit {
    core: [f64; 2],
    part: AngularProfile,
    mass: f64,
    eta: f64,
    truncated: bool,
    residual_orlicz: f64,
    avg: AngularProfile,
}

pub fn decompose_full(family: &SequenceFamily, cfg: &DecomposeConfig) -> Result<DecompositionReport> {
    let quad = &cfg.quad;
    let n_list = family.n_list.clone();
    let last = n_list.len() - 1;
    let mut errors = Vec::new();

    let stripped = family
        .entries
        .par_iter()
        .map(|e| strip_low_freq(&e.profile, quad))
        .collect::<Result<Vec<_>>>()?;
    let stripped_mass: Vec<f64> = stripped.iter().map(|s| s.stripped_mass).collect();
    let inputs: Vec<AngularProfile> = stripped.iter().map(|s| to_profile_coords(&s.field)).collect();

    let ext = extract_scales(&inputs, &n_list, &declared_laws(family), &cfg.scales, quad)?;
    if ext.exhausted {
        errors.push(format!(
            "scale extraction stopped at j_max = {} with B-norm {:.3e}",
            cfg.scales.j_max,
            ext.b_trace.last().copied().unwrap_or(0.0)
        ));
    }

    let mut remainders = ext.remainders.clone();
    let mut scales = Vec::new();
    let mut triples = Vec::new();
    for (j, sc) in ext.scales.iter().enumerate() {
        let per_n: Vec<Result<(Vec<CoreHit>, AngularProfile, f64, bool)>> = sc
            .components
            .par_iter()
            .zip(&sc.alpha)
            .map(|(comp, alpha)| {
                let ce = extract_cores(comp, *alpha, &cfg.cores, &cfg.patches, quad)?;
                let mut rest = ce.remainder;
                let mut hits = Vec::new();
                for c in ce.cores {
                    let sa = sphere_average(&c.phi, &cfg.patches, cfg.orlicz_tol)?;
                    let part = sa.average.demodulated([-c.core[0], -c.core[1]]);
                    rest = rest.sum(&sa.residual.demodulated([-c.core[0], -c.core[1]]));
                    hits.push(CoreHit {
                        core: c.core,
                        mass: part.norm_sq(quad)?,
                        part,
                        eta: c.eta,
                        truncated: c.truncated_below.is_some(),
                        residual_orlicz: sa.residual_orlicz,
                        avg: sa.average,
                    });
                }
                Ok((hits, rest, ce.residual_eta, ce.exhausted))
            })
            .collect();
        let mut hits_n: Vec<Vec<CoreHit>> = Vec::new();
        let (mut residual_eta, mut exhausted) = (Vec::new(), Vec::new());
        for (i, r) in per_n.into_iter().enumerate() {
            match r {
                Ok((hits, rest, eta, ex)) => {
                    remainders[i] = remainders[i].sum(&rest);
                    hits_n.push(hits);
                    residual_eta.push(eta);
                    exhausted.push(ex);
                }
                Err(e) => {
                    errors.push(format!("core extraction failed for scale {j} at n = {}: {e}", n_list[i]));
                    remainders[i] = remainders[i].sum(&sc.components[i]);
                    hits_n.push(Vec::new());
                    residual_eta.push(f64::NAN);
                    exhausted.push(false);
                }
            }
        }
        let component_mass =
            sc.components.iter().map(|c| c.norm_sq(quad)).collect::<Result<Vec<f64>>>()?;
        scales.push(ScaleRecord {
            law: sc.law.clone(),
            law_error: sc.law_error,
            alpha: sc.alpha.clone(),
            windows: sc.windows.clone(),
            component_mass,
            residual_eta,
            cores_exhausted: exhausted,
            cores: hits_n.iter().map(|h| h.iter().map(|c| c.core).collect()).collect(),
        });
        // link cores across n to those found at the largest n
        for (l, top) in hits_n[last].iter().enumerate() {
            let mut core = Vec::new();
            let mut mass = Vec::new();
            let mut eta = Vec::new();
            let mut parts = Vec::new();
            let mut truncated = false;
            for (i, hits) in hits_n.iter().enumerate() {
                let best = if i == last {
                    Some(l)
                } else {
                    hits.iter()
                        .enumerate()
                        .min_by(|a, b| dist(a.1.core, top.core).total_cmp(&dist(b.1.core, top.core)))
                        .map(|x| x.0)
                };
                match best {
                    Some(k) => {
                        let h = &hits[k];
                        core.push(Some(h.core));
                        mass.push(h.mass);
                        eta.push(h.eta);
                        parts.push(Some(h.part.clone()));
                        truncated |= h.truncated;
                    }
                    None => {
                        core.push(None);
                        mass.push(0.0);
                        eta.push(0.0);
                        parts.push(None);
                    }
                }
            }
            let alpha = sc.alpha[last];
            let w = sc.windows[last];
            let (s_lo, s_hi) = (w.outer().0 / alpha, w.outer().1 / alpha);
            let profile = radial_profile(&top.avg, alpha, s_lo, s_hi, cfg.profile_nodes)?;
            triples.push(RecoveredTriple {
                scale: j,
                alpha: sc.alpha.clone(),
                core,
                mass,
                eta,
                truncated,
                sphere_residual_orlicz: top.residual_orlicz,
                profile,
                parts,
            });
        }
    }

    let ledger = (0..n_list.len())
        .into_par_iter()
        .map(|i| {
            let parts: Vec<AngularProfile> = triples.iter().filter_map(|t| t.parts[i].clone()).collect();
            stability_ledger(n_list[i], &inputs[i], &parts, &remainders[i], quad)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut stages = Vec::new();
    stages.push(stage("input", n_list[last], &inputs[last], cfg, false)?);
    stages.push(stage("after-scales", n_list[last], &ext.remainders[last], cfg, false)?);
    let fin = stage("remainder", n_list[last], &remainders[last], cfg, true)?;
    let remainder_ratio = match fin.orlicz {
        Some(o) if fin.b_norm > 0.0 => o / fin.b_norm,
        _ => 0.0,
    };
    stages.push(fin);
    let a0 = physical_orlicz(&inputs[last], cfg)?;

    let mut orthogonality = Vec::new();
    if n_list.len() >= 3 {
        let as_truth: Vec<ScaleTriple> = triples
            .iter()
            .map(|t| ScaleTriple {
                alpha: ScaleLaw::List(t.alpha.clone()),
                core: CoreLaw::Fixed(t.core[last].unwrap_or([0.0, 0.0])),
                profile: t.profile.clone(),
            })
            .collect();
        for a in 0..as_truth.len() {
            for b in a + 1..as_truth.len() {
                match triple_orthogonality(&as_truth[a], &as_truth[b], &n_list, DEFAULT_SLOPE) {
                    Ok(v) => orthogonality.push((a, b, v)),
                    Err(e) => errors.push(format!("orthogonality of recovered triples {a} and {b}: {e}")),
                }
            }
        }
    }

    Ok(DecompositionReport {
        n_list,
        config: *cfg,
        stripped_mass,
        scales,
        scales_exhausted: ext.exhausted,
        b_trace: ext.b_trace,
        triples,
        stages,
        ledger,
        remainder_ratio,
        a0,
        orthogonality,
        errors,
        inputs,
        remainders,
    })
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
