//! Sobolev norms on the Fourier side, normalized so that
//! `‖u‖²_{H^N} = (2π)^{-2N} ∫ (1+|ξ|²)^N |û|² dξ`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{sphere_measure, Dimension, LogGrid, QuadOptions};
use crate::synth::AngularProfile;

/// Norm of the field whose profile coordinates are `phi`
/// (`û = (2π)^N |ξ|^{-2N} φ(log|ξ|, ω)`).
pub fn sobolev_norm(phi: &AngularProfile, homogeneous: bool, opts: &QuadOptions) -> Result<f64> {
    if homogeneous {
        return Ok(phi.norm_sq(opts)?.sqrt());
    }
    let n = phi.dim().n() as i32;
    let w = Arc::new(move |t: f64| (1.0 + (-2.0 * t).exp()).powi(n).sqrt());
    Ok(phi.weighted("sobolev-weight", w).norm_sq(opts)?.sqrt())
}

/// Same norm from sampled spectra `û_m(ρ)` on a grid in `t = log ρ`; in the
/// plane `modes` are angular Fourier modes `e^{imθ}`, otherwise only `m = 0`.
pub fn sobolev_norm_sampled(
    dim: Dimension,
    grid: &LogGrid,
    modes: &[(i32, Vec<Complex64>)],
    homogeneous: bool,
) -> Result<f64> {
    let n = dim.n() as i32;
    let ang = if n == 1 { 2.0 * PI } else { sphere_measure(dim) };
    let mut sum = 0.0;
    for (m, vals) in modes {
        if n > 1 && *m != 0 {
            return Err(Error::invalid("angular modes are only resolved for N = 1"));
        }
        if vals.len() != grid.len() {
            return Err(Error::invalid("spectrum length does not match its grid"));
        }
        for ((t, w), v) in grid.nodes().iter().zip(grid.weights()).zip(vals) {
            let rho2 = (2.0 * t).exp();
            let weight = if homogeneous { rho2.powi(n) } else { (1.0 + rho2).powi(n) };
            sum += w * weight * v.norm_sqr() * rho2.powi(n);
        }
    }
    Ok(((2.0 * PI).powi(-2 * n) * ang * sum).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_log_grid;
    use crate::synth::{Atom, Profile, Shape};

    #[test]
    fn profile_and_sampled_agree() {
        let dim = Dimension::new(1).unwrap();
        let p = Arc::new(Profile::preset("bump").unwrap());
        let alpha = 6.0;
        let shape = Shape::Scaled { profile: p.clone(), alpha };
        let c = 1.0 / (alpha * 2.0 * PI).sqrt();
        let phi = AngularProfile::from_atoms(dim, vec![Atom::radial([0.0, 0.0], Complex64::new(c, 0.0), shape)])
            .unwrap();
        let o = QuadOptions::default();
        let h = sobolev_norm(&phi, true, &o).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        let grid = make_log_grid(0.0, 9.0, 20001).unwrap();
        let uhat: Vec<Complex64> = grid
            .nodes()
            .iter()
            .map(|t| Complex64::new(2.0 * PI * (-2.0 * t).exp() * c * p.value(t / alpha), 0.0))
            .collect();
        let hs = sobolev_norm_sampled(dim, &grid, &[(0, uhat.clone())], true).unwrap();
        assert!((hs - h).abs() < 1e-6);
        let full = sobolev_norm(&phi, false, &o).unwrap();
        let fulls = sobolev_norm_sampled(dim, &grid, &[(0, uhat)], false).unwrap();
        assert!(full >= h);
        assert!((full - fulls).abs() < 1e-6);
    }

    #[test]
    fn zero_spectrum() {
        let dim = Dimension::new(2).unwrap();
        let grid = make_log_grid(0.0, 1.0, 5).unwrap();
        let v = sobolev_norm_sampled(dim, &grid, &[(0, vec![Complex64::new(0.0, 0.0); 5])], false).unwrap();
        assert_eq!(v, 0.0);
        assert!(sobolev_norm_sampled(dim, &grid, &[(1, vec![Complex64::new(0.0, 0.0); 5])], false).is_err());
    }
}
