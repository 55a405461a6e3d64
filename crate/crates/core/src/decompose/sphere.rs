//! Averaging an angular profile over the sphere.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::norms::synthesized_orlicz;
use crate::numerics::sphere_measure;
use crate::synth::{AngularProfile, Atom, Mode, PatchOptions, Profile, Shape};

#[derive(Debug, Clone)]
pub struct SphereAverage {
    /// Mean over the sphere (the `m = 0` content), as an angular profile.
    pub average: AngularProfile,
    /// `Φ - average`.
    pub residual: AngularProfile,
    /// Orlicz norm of the synthesized residual.
    pub residual_orlicz: f64,
}

/// Average of `Φ` over `S^{2N-1}`; `Φ` must be centred (all cores at the origin).
pub fn sphere_average(phi: &AngularProfile, patches: &PatchOptions, tol: f64) -> Result<SphereAverage> {
    if phi.atoms().iter().any(|a| a.core != [0.0, 0.0]) {
        return Err(Error::invalid("sphere_average expects a demodulated profile (cores at the origin)"));
    }
    let mut avg = Vec::new();
    let mut rest = Vec::new();
    for a in phi.atoms() {
        let (m0, other): (Vec<Mode>, Vec<Mode>) = a.modes.iter().cloned().partition(|m| m.m == 0);
        if !m0.is_empty() {
            avg.push(Atom { core: a.core, modes: m0 });
        }
        if !other.is_empty() {
            rest.push(Atom { core: a.core, modes: other });
        }
    }
    let average = AngularProfile::from_atoms(phi.dim(), avg)?;
    let residual = AngularProfile::from_atoms(phi.dim(), rest)?;
    let residual_orlicz = if residual.is_empty() { 0.0 } else { synthesized_orlicz(&residual, patches, tol)? };
    Ok(SphereAverage { average, residual, residual_orlicz })
}

/// Read back a radial profile `φ(s) = √(αω) Φ̄(αs)` on `m` nodes over `[s_lo, s_hi]`.
pub fn radial_profile(avg: &AngularProfile, alpha: f64, s_lo: f64, s_hi: f64, m: usize) -> Result<Profile> {
    let scale = (alpha * sphere_measure(avg.dim())).sqrt();
    let m = m.max(2);
    let s: Vec<f64> = (0..m).map(|i| s_lo + (s_hi - s_lo) * i as f64 / (m - 1) as f64).collect();
    let vals: Vec<f64> = s
        .iter()
        .map(|x| {
            let t = alpha * x;
            let v: Complex64 = avg
                .atoms()
                .iter()
                .flat_map(|a| a.modes.iter().filter(|m| m.m == 0))
                .map(|m| m.coef * m.shape.eval(t))
                .sum();
            v.re * scale
        })
        .collect();
    Profile::sampled(s, vals)
}

/// `Φ(t, θ) = c φ(t/α) cos θ` in the plane (two modes `m = ±1`).
pub fn cosine_profile(profile: &Profile, alpha: f64, c: f64) -> Result<AngularProfile> {
    let dim = crate::numerics::Dimension::new(1)?;
    let shape = Arc::new(Shape::Scaled { profile: Arc::new(profile.clone()), alpha });
    let half = Complex64::new(0.5 * c, 0.0);
    let atom = Atom {
        core: [0.0, 0.0],
        modes: vec![Mode { m: 1, coef: half, shape: shape.clone() }, Mode { m: -1, coef: half, shape }],
    };
    AngularProfile::from_atoms(dim, vec![atom])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Dimension;
    use crate::synth::elementary_profile;

    #[test]
    fn radial_profile_is_unchanged() {
        let d = Dimension::new(1).unwrap();
        let p = Profile::preset("bump").unwrap();
        let phi = elementary_profile(d, 8.0, [0.0, 0.0], &p).unwrap();
        let sa = sphere_average(&phi, &PatchOptions::default(), 1e-6).unwrap();
        assert_eq!(sa.residual_orlicz, 0.0);
        let back = radial_profile(&sa.average, 8.0, 0.0, 2.0, 401).unwrap();
        for i in 0..40 {
            let s = 0.05 * i as f64;
            assert!((back.value(s) - p.value(s)).abs() < 1e-3);
        }
    }

    #[test]
    fn cosine_averages_to_zero() {
        let p = Profile::preset("bump").unwrap();
        let phi = cosine_profile(&p, 6.0, 1.0 / (6.0f64 * 2.0 * std::f64::consts::PI).sqrt()).unwrap();
        let sa = sphere_average(&phi, &PatchOptions::default(), 1e-6).unwrap();
        assert!(sa.average.is_empty());
        assert!(sa.residual_orlicz > 0.0);
    }

    #[test]
    fn translated_input_is_rejected() {
        let d = Dimension::new(1).unwrap();
        let phi = elementary_profile(d, 8.0, [0.1, 0.0], &Profile::preset("bump").unwrap()).unwrap();
        assert!(sphere_average(&phi, &PatchOptions::default(), 1e-6).is_err());
    }
}
