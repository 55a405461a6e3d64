//! Numerical tests of the qualitative hypotheses: log-oscillation,
//! log-unrelatedness, `1/α`-concentration, orthogonality of triples and
//! compactness at infinity.
//!
//! Every "limsup over n" is replaced by the maximum over the last half of the
//! index list, and every verdict carries the list it was computed on.

mod orthogonality;
mod spectral;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub use orthogonality::{divergence_slope, triple_orthogonality, OrthoKind, OrthogonalityVerdict, DEFAULT_SLOPE};
pub use spectral::{
    compactness_defect, concentration_profile, log_oscillation_defect, unrelatedness_defect, OscillationReport,
};

/// `(n, R, value)` rows.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trace {
    pub rows: Vec<(u32, f64, f64)>,
}

impl Trace {
    pub fn push(&mut self, n: u32, r: f64, v: f64) {
        self.rows.push((n, r, v));
    }

    /// Values at parameter `r`, in row order.
    pub fn at(&self, r: f64) -> Vec<(u32, f64)> {
        self.rows.iter().filter(|x| x.1 == r).map(|x| (x.0, x.2)).collect()
    }

    pub fn write_csv(&self, path: &Path, banner: &str) -> Result<()> {
        let mut s = String::new();
        let _ = writeln!(s, "# {banner}");
        s.push_str("n,R,value\n");
        for (n, r, v) in &self.rows {
            let _ = writeln!(s, "{n},{r:e},{v:e}");
        }
        std::fs::write(path, s).map_err(|e| Error::io(path, e))
    }
}

/// Indices of the last half of a list of length `len` (at least one).
pub fn tail_indices(len: usize) -> std::ops::Range<usize> {
    (len / 2).min(len.saturating_sub(1))..len
}
