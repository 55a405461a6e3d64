//! Low-frequency strip and the passage to profile coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::norms::sobolev_norm;
use crate::numerics::{Dimension, QuadOptions};
use crate::synth::{AngularProfile, Window};

/// A spectrum `û(ξ) = (2π)^N |ξ|^{-2N} φ(log|ξ|, ω)`, held through `φ`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    phi: AngularProfile,
}

impl SpectralField {
    pub fn dim(&self) -> Dimension {
        self.phi.dim()
    }

    /// `û` at frequency `ρ (cos θ, sin θ)`; requires `ρ > 0`.
    pub fn eval(&self, rho: f64, theta: f64) -> Complex64 {
        let n = self.phi.dim().n() as i32;
        let t = rho.ln();
        self.phi.eval(t, theta) * ((2.0 * PI).powi(n) * (-2.0 * f64::from(n) * t).exp())
    }

    /// Lower edge of the frequency support (`|ξ| >= 1` after a strip).
    pub fn rho_min(&self) -> f64 {
        self.phi.support().0.exp()
    }
}

/// Inverse of [`to_profile_coords`].
pub fn from_profile_coords(phi: &AngularProfile) -> SpectralField {
    SpectralField { phi: phi.clone() }
}

/// `φ(t, ω) = (2π)^{-N} e^{2Nt} û(e^t ω)`, so that `‖φ‖_{L²(dt dω)} = ‖u‖_{Ḣ^N}`.
pub fn to_profile_coords(spectral: &SpectralField) -> AngularProfile {
    spectral.phi.clone()
}

#[derive(Debug, Clone)]
pub struct Stripped {
    pub field: SpectralField,
    /// Squared `H^N` norm of the removed part `|ξ| < 1`.
    pub stripped_mass: f64,
}

/// Cut the spectrum to `|ξ| >= 1`.
pub fn strip_low_freq(phi: &AngularProfile, opts: &QuadOptions) -> Result<Stripped> {
    let (lo, _) = phi.support();
    if phi.is_empty() || lo >= 0.0 {
        return Ok(Stripped { field: from_profile_coords(phi), stripped_mass: 0.0 });
    }
    let low = phi.windowed(Window::hard(lo, 0.0));
    let stripped_mass = sobolev_norm(&low, false, opts)?.powi(2);
    let high = phi.windowed(Window::hard(0.0, f64::INFINITY));
    Ok(Stripped { field: from_profile_coords(&high), stripped_mass })
}
