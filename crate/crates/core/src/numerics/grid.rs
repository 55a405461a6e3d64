use crate::error::{Error, Result};

use super::gauss::gauss_legendre;

/// Half the space dimension: the ambient space is R^{2N}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub const MAX: u32 = 8;

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX {
            return Err(Error::invalid(format!(
                "dimension N must lie in 1..={}, got {n}",
                Self::MAX
            )));
        }
        Ok(Dimension(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }

    /// Space dimension d = 2N.
    pub fn d(self) -> u32 {
        2 * self.0
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Dimension::new(n)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

/// Uniform grid in the log variable `t = log ρ` with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

pub fn make_log_grid(t_min: f64, t_max: f64, m: usize) -> Result<LogGrid> {
    if m < 2 {
        return Err(Error::invalid(format!("log grid needs M >= 2 nodes, got {m}")));
    }
    if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(Error::invalid(format!(
            "log grid needs finite t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    let h = (t_max - t_min) / (m - 1) as f64;
    let nodes: Vec<f64> = (0..m)
        .map(|i| if i == m - 1 { t_max } else { t_min + i as f64 * h })
        .collect();
    let mut weights = vec![h; m];
    weights[0] = 0.5 * h;
    weights[m - 1] = 0.5 * h;
    Ok(LogGrid { nodes, weights })
}

impl LogGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn t_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn t_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn spacing(&self) -> f64 {
        self.nodes[1] - self.nodes[0]
    }

    /// Piecewise-linear interpolation of nodal `values` at `t`; zero outside the grid.
    pub fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        if t < self.t_min() || t > self.t_max() {
            return 0.0;
        }
        let h = self.spacing();
        let x = (t - self.t_min()) / h;
        let i = (x.floor() as usize).min(self.len() - 2);
        let frac = x - i as f64;
        values[i] * (1.0 - frac) + values[i + 1] * frac
    }
}

/// Physical radii with quadrature weights for `∫_{R^{2N}} f(|x|) dx`.
///
/// Weights are stored as natural logarithms so that cells at radii far below
/// `e^{-300}` keep a meaningful measure.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    radii: Vec<f64>,
    ln_weights: Vec<f64>,
    /// Log-radius `-s = log r` of each node, kept exact where `r` underflows.
    log_radii: Vec<f64>,
}

impl RadialGrid {
    /// Composite Gauss-Legendre grid in `log r` between `r_min` and `r_max`
    /// with panels no wider than `max_dlog` in `log r`, split at `breaks`.
    /// Radii are given by their logarithms so extreme concentrations stay exact.
    pub fn log_gauss(
        dim: Dimension,
        log_r_min: f64,
        log_r_max: f64,
        log_breaks: &[f64],
        max_dlog: f64,
        order: usize,
    ) -> Result<Self> {
        if !(log_r_min < log_r_max) {
            return Err(Error::invalid("radial grid needs log_r_min < log_r_max"));
        }
        if !(max_dlog > 0.0) {
            return Err(Error::invalid("radial grid panel width must be positive"));
        }
        let omega = super::sphere_measure(dim);
        let two_n = dim.d() as f64;
        let (gx, gw) = gauss_legendre(order);
        let mut cuts: Vec<f64> = log_breaks
            .iter()
            .copied()
            .filter(|b| *b > log_r_min && *b < log_r_max)
            .collect();
        cuts.push(log_r_min);
        cuts.push(log_r_max);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut radii = Vec::new();
        let mut ln_weights = Vec::new();
        let mut log_radii = Vec::new();
        for win in cuts.windows(2) {
            let (a, b) = (win[0], win[1]);
            let panels = ((b - a) / max_dlog).ceil().max(1.0) as usize;
            let w = (b - a) / panels as f64;
            for p in 0..panels {
                let lo = a + p as f64 * w;
                for (x, wx) in gx.iter().zip(&gw) {
                    let lr = lo + 0.5 * w * (x + 1.0);
                    log_radii.push(lr);
                    radii.push(lr.exp());
                    // dx = ω r^{2N-1} dr = ω r^{2N} d(log r)
                    ln_weights.push((omega * 0.5 * w * wx).ln() + two_n * lr);
                }
            }
        }
        Ok(RadialGrid {
            radii,
            ln_weights,
            log_radii,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn log_radii(&self) -> &[f64] {
        &self.log_radii
    }

    pub fn ln_weights(&self) -> &[f64] {
        &self.ln_weights
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}
