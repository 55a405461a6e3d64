//! Greedy scale extraction on dyadic blocks in `t`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{block_range, dyadic_ledger};
use crate::numerics::QuadOptions;
use crate::synth::{AngularProfile, ScaleLaw, Window};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScaleOptions {
    /// Stop once the remainder's B-norm at the largest `n` drops below this.
    pub eps_b: f64,
    pub j_max: usize,
    /// Windows never reach past `[α/R_w, α R_w]`.
    pub r_w: f64,
    /// Raised-cosine flank width in `log t`.
    pub log_flank: f64,
    /// Blocks below `max(eps_b², run_fraction · peak²)` end a block run.
    pub run_fraction: f64,
    /// Mean `|log(centroid/prediction)|` above which no declared law is trusted.
    pub law_tolerance: f64,
}

impl Default for ScaleOptions {
    fn default() -> Self {
        ScaleOptions { eps_b: 0.03, j_max: 8, r_w: 4.0, log_flank: 0.35, run_fraction: 0.1, law_tolerance: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct ExtractedScale {
    /// Law the scale sequence follows, or `"fitted"`.
    pub law: String,
    /// `α_n` per entry.
    pub alpha: Vec<f64>,
    pub windows: Vec<Window>,
    /// Windowed component per entry.
    pub components: Vec<AngularProfile>,
    /// Mean log-deviation of the per-n centroids from the law.
    pub law_error: f64,
}

#[derive(Debug, Clone)]
pub struct ScaleExtraction {
    pub scales: Vec<ExtractedScale>,
    pub remainders: Vec<AngularProfile>,
    /// B-norm of the remainder at the largest `n` after each step (first: input).
    pub b_trace: Vec<f64>,
    /// `j_max` reached before the B-norm fell below `eps_b`.
    pub exhausted: bool,
}

/// Mass-weighted mean of `t` over `[lo, hi]`, with the mass itself.
fn centroid(phi: &AngularProfile, lo: f64, hi: f64, quad: &QuadOptions) -> Result<(f64, f64)> {
    let mass = phi.mass(lo, hi, quad)?;
    if mass <= 0.0 {
        return Ok((0.5 * (lo + hi), 0.0));
    }
    let first = phi.weighted("sqrt-t", Arc::new(|t: f64| t.max(0.0).sqrt())).mass(lo, hi, quad)?;
    Ok((first / mass, mass))
}

/// Contiguous run of blocks around `k_peak` holding at least `floor`.
fn block_run(blocks: &[(i32, f64)], k_peak: i32, floor: f64) -> (i32, i32) {
    let pos = blocks.iter().position(|b| b.0 == k_peak).unwrap_or(0);
    let (mut a, mut b) = (pos, pos);
    while a > 0 && blocks[a - 1].1 * blocks[a - 1].1 >= floor {
        a -= 1;
    }
    while b + 1 < blocks.len() && blocks[b + 1].1 * blocks[b + 1].1 >= floor {
        b += 1;
    }
    (blocks[a].0, blocks[b].0)
}

/// Greedy dyadic capture: `phi[i]` is the profile of entry `n_list[i]`;
/// `laws` are the scale laws the family declares (possibly none).
pub fn extract_scales(
    phi: &[AngularProfile],
    n_list: &[u32],
    laws: &[ScaleLaw],
    opts: &ScaleOptions,
    quad: &QuadOptions,
) -> Result<ScaleExtraction> {
    if phi.is_empty() || phi.len() != n_list.len() {
        return Err(Error::invalid("extract_scales needs one profile per n"));
    }
    if !(opts.eps_b > 0.0) || !(opts.r_w > 1.0) {
        return Err(Error::invalid("eps_b must be positive and r_w > 1"));
    }
    let last = phi.len() - 1;
    let mut rest: Vec<AngularProfile> = phi.to_vec();
    let mut scales = Vec::new();
    let mut b_trace = Vec::new();
    loop {
        let ledger = dyadic_ledger(&rest[last], quad)?;
        let b = ledger.b_norm();
        b_trace.push(b);
        if b < opts.eps_b {
            return Ok(ScaleExtraction { scales, remainders: rest, b_trace, exhausted: false });
        }
        if scales.len() >= opts.j_max {
            return Ok(ScaleExtraction { scales, remainders: rest, b_trace, exhausted: true });
        }
        let (k_peak, peak) = ledger.argmax().expect("nonzero B-norm has a block");
        let floor = (opts.eps_b * opts.eps_b).max(opts.run_fraction * peak * peak);
        let (ka, kb) = block_run(&ledger.blocks, k_peak, floor);
        let (t_a, t_b) = (block_range(ka).0, block_range(kb).1);
        let (c_top, _) = centroid(&rest[last], t_a, t_b, quad)?;
        let (s_a, s_b) = ((t_a / c_top).max(1.0 / opts.r_w), (t_b / c_top).min(opts.r_w));

        let (law, alpha, law_error) = choose_law(&rest, n_list, laws, c_top, (s_a, s_b), opts, quad)?;
        let windows: Vec<Window> =
            alpha.iter().map(|a| Window { lo: a * s_a, hi: a * s_b, log_flank: opts.log_flank }).collect();
        let components: Vec<AngularProfile> =
            rest.iter().zip(&windows).map(|(p, w)| p.windowed(*w)).collect();
        rest = rest.iter().zip(&windows).map(|(p, w)| p.outside(*w)).collect();
        scales.push(ExtractedScale { law, alpha, windows, components, law_error });
    }
}

/// Pick the declared law whose predictions `c L(n)` best track the mass
/// centroid near them; fall back to per-n centroids.
fn choose_law(
    rest: &[AngularProfile],
    n_list: &[u32],
    laws: &[ScaleLaw],
    c_top: f64,
    run: (f64, f64),
    opts: &ScaleOptions,
    quad: &QuadOptions,
) -> Result<(String, Vec<f64>, f64)> {
    let last = rest.len() - 1;
    let penalty = 4f64.ln();
    let mut best: Option<(String, Vec<f64>, f64)> = None;
    for law in laws {
        let l_top = law.eval(n_list[last], last);
        let pred: Vec<f64> = (0..rest.len()).map(|i| c_top * law.eval(n_list[i], i) / l_top).collect();
        let errs: Vec<f64> = (0..last)
            .into_par_iter()
            .map(|i| {
                let (c, m) = centroid(&rest[i], pred[i] * run.0, pred[i] * run.1, quad)?;
                let (_, m_top) = centroid(&rest[last], c_top * run.0, c_top * run.1, quad)?;
                Ok(if m < 0.1 * m_top { penalty } else { (c / pred[i]).ln().abs().min(penalty) })
            })
            .collect::<Result<_>>()?;
        let err = if errs.is_empty() { 0.0 } else { errs.iter().sum::<f64>() / errs.len() as f64 };
        if best.as_ref().is_none_or(|b| err < b.2) {
            best = Some((law.label(), pred, err));
        }
    }
    if let Some(b) = best {
        if b.2 <= opts.law_tolerance {
            return Ok(b);
        }
    }
    // per-n: centroid of that entry's own dominant block run
    let alpha = rest
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            if i == last {
                return Ok(c_top);
            }
            let ledger = dyadic_ledger(p, quad)?;
            match ledger.argmax() {
                Some((k, peak)) if peak > 0.0 => {
                    let floor = (opts.eps_b * opts.eps_b).max(opts.run_fraction * peak * peak);
                    let (ka, kb) = block_run(&ledger.blocks, k, floor);
                    Ok(centroid(p, block_range(ka).0, block_range(kb).1, quad)?.0)
                }
                _ => Ok(c_top),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(("fitted".to_string(), alpha, 0.0))
}
