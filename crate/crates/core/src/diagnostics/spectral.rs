use serde::Serialize;

use super::{tail_indices, Trace};
use crate::error::{Error, Result};
use crate::numerics::QuadOptions;
use crate::synth::{AngularProfile, PhysicalSamples};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationReport {
    pub n_list: Vec<u32>,
    /// `∫_{t <= α_n/R} |φ_n|²`.
    pub low: Trace,
    /// `∫_{t >= R α_n} |φ_n|²`.
    pub high: Trace,
    /// `(R, max over the tail of the n-list of low + high)`.
    pub limsup: Vec<(f64, f64)>,
}

fn check_lengths(profiles: &[AngularProfile], alpha: &[f64], n_list: &[u32]) -> Result<()> {
    if profiles.len() != alpha.len() || profiles.len() != n_list.len() {
        return Err(Error::invalid("profiles, scales and index list must have equal lengths"));
    }
    if alpha.iter().any(|a| !(*a > 0.0)) {
        return Err(Error::invalid("scales must be positive"));
    }
    Ok(())
}

/// Spectral mass outside the log-window `[α_n/R, R α_n]`, in profile
/// coordinates (the `Ḣ^N`-weighted spectrum).
pub fn log_oscillation_defect(
    profiles: &[AngularProfile],
    alpha: &[f64],
    n_list: &[u32],
    r_list: &[f64],
    opts: &QuadOptions,
) -> Result<OscillationReport> {
    check_lengths(profiles, alpha, n_list)?;
    if r_list.iter().any(|r| !(*r >= 1.0)) {
        return Err(Error::invalid("R values must be >= 1"));
    }
    let mut low = Trace::default();
    let mut high = Trace::default();
    let mut limsup = Vec::new();
    for &r in r_list {
        let mut worst = 0.0f64;
        for (i, (p, a)) in profiles.iter().zip(alpha).enumerate() {
            let (lo, hi) = p.support();
            let l = if lo < a / r { p.mass(lo, a / r, opts)? } else { 0.0 };
            let h = if hi > a * r { p.mass(a * r, hi, opts)? } else { 0.0 };
            low.push(n_list[i], r, l);
            high.push(n_list[i], r, h);
            if tail_indices(n_list.len()).contains(&i) {
                worst = worst.max(l + h);
            }
        }
        limsup.push((r, worst));
    }
    Ok(OscillationReport { n_list: n_list.to_vec(), low, high, limsup })
}

/// `∫_{a α_n}^{b α_n} |φ_n|²` per `n`.
pub fn unrelatedness_defect(
    profiles: &[AngularProfile],
    alpha: &[f64],
    n_list: &[u32],
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<Trace> {
    check_lengths(profiles, alpha, n_list)?;
    if !(a > 0.0 && b > a) {
        return Err(Error::invalid(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let mut out = Trace::default();
    for (i, (p, al)) in profiles.iter().zip(alpha).enumerate() {
        out.push(n_list[i], b, p.mass(a * al, b * al, opts)?);
    }
    Ok(out)
}

/// Captured mass of `φ_n` over `t ∈ [α_n/R, α_n R]` per `(n, R)`.
pub fn concentration_profile(
    profiles: &[AngularProfile],
    alpha: &[f64],
    n_list: &[u32],
    r_list: &[f64],
    opts: &QuadOptions,
) -> Result<Trace> {
    check_lengths(profiles, alpha, n_list)?;
    let mut out = Trace::default();
    for (i, (p, a)) in profiles.iter().zip(alpha).enumerate() {
        for &r in r_list {
            if !(r >= 1.0) {
                return Err(Error::invalid("R values must be >= 1"));
            }
            out.push(n_list[i], r, p.mass(a / r, a * r, opts)?);
        }
    }
    Ok(out)
}

/// `∫_{|x| >= R} |u_n|²` per `(n, R)`.
pub fn compactness_defect(samples: &[PhysicalSamples], n_list: &[u32], r_list: &[f64]) -> Result<Trace> {
    if samples.len() != n_list.len() {
        return Err(Error::invalid("one sample set per index required"));
    }
    let mut out = Trace::default();
    for (s, n) in samples.iter().zip(n_list) {
        for &r in r_list {
            out.push(*n, r, s.tail_mass(r));
        }
    }
    Ok(out)
}
