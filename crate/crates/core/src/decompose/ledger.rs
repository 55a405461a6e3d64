//! Energy bookkeeping of a decomposition.

use serde::Serialize;

use crate::error::Result;
use crate::numerics::QuadOptions;
use crate::synth::AngularProfile;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerRecord {
    pub n: u32,
    /// `‖u_n‖²_{Ḣ^N}`.
    pub input: f64,
    /// `‖φ^{(j)}_n‖²` per extracted profile.
    pub parts: Vec<f64>,
    pub remainder: f64,
    /// `input - Σ parts - remainder`.
    pub residual: f64,
    /// `|residual| / input`, 0 for a zero input.
    pub relative: f64,
}

pub fn stability_ledger(
    n: u32,
    input: &AngularProfile,
    parts: &[AngularProfile],
    remainder: &AngularProfile,
    quad: &QuadOptions,
) -> Result<LedgerRecord> {
    let input_sq = input.norm_sq(quad)?;
    let parts_sq = parts.iter().map(|p| p.norm_sq(quad)).collect::<Result<Vec<f64>>>()?;
    let rem = remainder.norm_sq(quad)?;
    let residual = input_sq - parts_sq.iter().sum::<f64>() - rem;
    let relative = if input_sq > 0.0 { residual.abs() / input_sq } else { 0.0 };
    Ok(LedgerRecord { n, input: input_sq, parts: parts_sq, remainder: rem, residual, relative })
}
