//! Orlicz norm of a synthesized profile against its B-norm.

use serde::Serialize;

use super::{b_norm, orlicz_norm};
use crate::error::Result;
use crate::numerics::QuadOptions;
use crate::synth::{AngularProfile, PatchOptions, PhysicalField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessRatio {
    pub orlicz: f64,
    pub b: f64,
    /// `orlicz / b`, reported as 0 when `b = 0`.
    pub ratio: f64,
}

/// Orlicz norm of `w = (2π)^{-N} ∫_{|ξ|>=1} e^{ix·ξ} |ξ|^{-2N} w̃(log|ξ|, ω) dξ`.
pub fn synthesized_orlicz(w: &AngularProfile, patches: &PatchOptions, tol: f64) -> Result<f64> {
    let field = PhysicalField::synthesize(&w.windowed(crate::synth::Window::hard(0.0, f64::INFINITY)), patches.h)?;
    orlicz_norm(&field.samples(patches).samples, tol)
}

pub fn orlicz_from_b_witness(
    w: &AngularProfile,
    patches: &PatchOptions,
    quad: &QuadOptions,
    tol: f64,
) -> Result<WitnessRatio> {
    let b = b_norm(w, quad)?;
    if b == 0.0 {
        return Ok(WitnessRatio { orlicz: 0.0, b: 0.0, ratio: 0.0 });
    }
    let orlicz = synthesized_orlicz(w, patches, tol)?;
    Ok(WitnessRatio { orlicz, b, ratio: orlicz / b })
}
