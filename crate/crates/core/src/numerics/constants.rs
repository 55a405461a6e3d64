use std::f64::consts::PI;

use serde::Serialize;

use super::Dimension;

/// Measure of the unit sphere S^{2N-1}: `2π^N / (N-1)!`.
pub fn sphere_measure(dim: Dimension) -> f64 {
    let n = dim.n();
    let fact: f64 = (1..n).map(f64::from).product();
    2.0 * PI.powi(n as i32) / fact
}

/// Constants attached to H^N(R^{2N}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub n: u32,
    /// |S^{2N-1}|
    pub omega: f64,
    /// Sharp Moser-Trudinger exponent β_N.
    pub beta: f64,
    /// Prefactor C_N of the elementary concentrations.
    pub c_synth: f64,
    /// Prefactor C̃_N of the generalized Moser functions.
    pub c_moser: f64,
}

pub fn constants(dim: Dimension) -> Constants {
    let n = dim.n() as i32;
    let omega = sphere_measure(dim);
    let two_pi_n = (2.0 * PI).powi(n);
    Constants {
        n: dim.n(),
        omega,
        beta: 2.0 * f64::from(dim.n()) * PI.powi(2 * n) * 2f64.powi(2 * n) / omega,
        c_synth: 1.0 / (two_pi_n * omega.sqrt()),
        c_moser: omega.sqrt() / two_pi_n,
    }
}
