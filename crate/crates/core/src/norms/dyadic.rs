//! Dyadic blocks `[2^k, 2^{k+1})` in `t` and the B-norm.

use serde::Serialize;

use crate::error::Result;
use crate::numerics::QuadOptions;
use crate::synth::AngularProfile;

/// Blocks below `2^K_FLOOR` are merged into the block `K_FLOOR`.
pub const K_FLOOR: i32 = -30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicLedger {
    /// `(k, (∫_{2^k}^{2^{k+1}} ∫_S |w|²)^{1/2})`, increasing `k`.
    pub blocks: Vec<(i32, f64)>,
}

impl DyadicLedger {
    pub fn b_norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.1).fold(0.0, f64::max)
    }

    /// Block with maximal mass; ties go to the larger `k`.
    pub fn argmax(&self) -> Option<(i32, f64)> {
        self.blocks
            .iter()
            .copied()
            .fold(None, |best: Option<(i32, f64)>, b| match best {
                Some(x) if x.1 > b.1 => Some(x),
                _ => Some(b),
            })
    }

    pub fn total_sq(&self) -> f64 {
        self.blocks.iter().map(|b| b.1 * b.1).sum()
    }
}

pub fn block_range(k: i32) -> (f64, f64) {
    let lo = if k <= K_FLOOR { 0.0 } else { 2f64.powi(k) };
    (lo, 2f64.powi(k + 1))
}

/// Masses of every block meeting the support of `w` inside `t > 0`.
pub fn dyadic_ledger(w: &AngularProfile, opts: &QuadOptions) -> Result<DyadicLedger> {
    let (lo, hi) = w.support();
    if w.is_empty() || !(hi > 0.0) || !(hi > lo) {
        return Ok(DyadicLedger { blocks: Vec::new() });
    }
    let k_lo = if lo > 0.0 { (lo.log2().floor() as i32).max(K_FLOOR) } else { K_FLOOR };
    // last block starting strictly below hi
    let k_hi = hi.log2().ceil() as i32 - 1;
    let mut blocks = Vec::new();
    for k in k_lo..=k_hi.max(k_lo) {
        let (a, b) = block_range(k);
        let m = w.mass(a.max(lo).max(0.0), b.min(hi), opts)?;
        blocks.push((k, m.sqrt()));
    }
    Ok(DyadicLedger { blocks })
}

/// `sup_k (∫_{2^k}^{2^{k+1}} ∫_S |w|²)^{1/2}`.
pub fn b_norm(w: &AngularProfile, opts: &QuadOptions) -> Result<f64> {
    Ok(dyadic_ledger(w, opts)?.b_norm())
}
