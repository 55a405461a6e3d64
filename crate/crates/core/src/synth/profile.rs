//! Profiles: square-integrable functions of `s = t/α` on the half line.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_panels, read_two_column, write_two_column};

/// Names accepted by [`Profile::preset`].
pub const PRESETS: [&str; 3] = ["moser-L", "bump", "two-step"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `height` on `[a, b)`.
    Indicator { a: f64, b: f64, height: f64 },
    /// `height · exp(-1/(1-z²))`, `z = (s - center)/half_width`.
    Bump { center: f64, half_width: f64, height: f64 },
    /// Piecewise constant: `values[i]` on `[edges[i], edges[i+1])`.
    Steps { edges: Vec<f64>, values: Vec<f64> },
    /// Piecewise linear through `(s[i], phi[i])`, zero outside.
    Sampled { s: Vec<f64>, phi: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub name: String,
    pub kind: ProfileKind,
}

fn bump_raw(z: f64) -> f64 {
    if z.abs() < 1.0 {
        (-1.0 / (1.0 - z * z)).exp()
    } else {
        0.0
    }
}

impl Profile {
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b > a && b.is_finite()) {
            return Err(Error::invalid(format!("indicator needs 0 <= a < b, got [{a}, {b})")));
        }
        Ok(Profile {
            name: format!("indicator[{a},{b})"),
            kind: ProfileKind::Indicator { a, b, height: 1.0 },
        })
    }

    /// Unit-L² smooth bump on `[center - half_width, center + half_width]`.
    pub fn bump(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && center - half_width >= 0.0) {
            return Err(Error::invalid("bump must sit inside s >= 0 with positive width"));
        }
        let mut p = Profile {
            name: format!("bump({center},{half_width})"),
            kind: ProfileKind::Bump { center, half_width, height: 1.0 },
        };
        let n = p.l2_norm();
        p.kind = ProfileKind::Bump { center, half_width, height: 1.0 / n };
        Ok(p)
    }

    pub fn steps(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if edges.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::invalid("steps need len(edges) = len(values) + 1 >= 2"));
        }
        if edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("step edges must be increasing and >= 0"));
        }
        Ok(Profile { name: "steps".into(), kind: ProfileKind::Steps { edges, values } })
    }

    pub fn sampled(s: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if s.len() != phi.len() || s.len() < 2 {
            return Err(Error::invalid("sampled profile needs >= 2 matching (s, phi) pairs"));
        }
        if s[0] < 0.0 || s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("profile nodes must be increasing and >= 0"));
        }
        Ok(Profile { name: "sampled".into(), kind: ProfileKind::Sampled { s, phi } })
    }

    /// `moser-L` is `1_[0,1)` (so that `ψ = L`), `bump` a unit bump on
    /// `[0.6, 1.4]`, `two-step` is `1` on `[0.5, 1)` and `1/2` on `[1, 2)`.
    pub fn preset(name: &str) -> Result<Self> {
        let mut p = match name {
            "moser-L" => Profile::indicator(0.0, 1.0)?,
            "bump" => Profile::bump(1.0, 0.4)?,
            "two-step" => Profile::steps(vec![0.5, 1.0, 2.0], vec![1.0, 0.5])?,
            other => {
                return Err(Error::invalid(format!(
                    "unknown profile preset {other:?}; expected one of {PRESETS:?}"
                )))
            }
        };
        p.name = name.to_string();
        Ok(p)
    }

    pub fn from_csv(path: &Path) -> Result<Self> {
        let (_, _, s, phi) = read_two_column(path)?;
        let mut p = Profile::sampled(s, phi)?;
        p.name = path.display().to_string();
        Ok(p)
    }

    pub fn to_csv(&self, path: &Path, m: usize) -> Result<()> {
        let (lo, hi) = self.support();
        let m = m.max(2);
        let s: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
        let phi: Vec<f64> = s.iter().map(|&x| self.value(x)).collect();
        write_two_column(path, "profile-s", 0.0, &s, &phi)
    }

    pub fn value(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::Indicator { a, b, height } => {
                if s >= *a && s < *b {
                    *height
                } else {
                    0.0
                }
            }
            ProfileKind::Bump { center, half_width, height } => {
                height * bump_raw((s - center) / half_width)
            }
            ProfileKind::Steps { edges, values } => {
                if s < edges[0] || s >= *edges.last().unwrap() {
                    return 0.0;
                }
                let i = edges.partition_point(|e| *e <= s) - 1;
                values[i]
            }
            ProfileKind::Sampled { s: xs, phi } => {
                if s < xs[0] || s > *xs.last().unwrap() {
                    return 0.0;
                }
                let i = (xs.partition_point(|x| *x <= s)).clamp(1, xs.len() - 1);
                let f = (s - xs[i - 1]) / (xs[i] - xs[i - 1]);
                phi[i - 1] + f * (phi[i] - phi[i - 1])
            }
        }
    }

    /// Closed interval outside which `φ = 0`.
    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            ProfileKind::Indicator { a, b, .. } => (*a, *b),
            ProfileKind::Bump { center, half_width, .. } => (center - half_width, center + half_width),
            ProfileKind::Steps { edges, .. } => (edges[0], *edges.last().unwrap()),
            ProfileKind::Sampled { s, .. } => (s[0], *s.last().unwrap()),
        }
    }

    /// Points of non-smoothness (including the support ends).
    pub fn breaks(&self) -> Vec<f64> {
        match &self.kind {
            ProfileKind::Indicator { a, b, .. } => vec![*a, *b],
            ProfileKind::Bump { center, half_width, .. } => {
                vec![center - half_width, *center, center + half_width]
            }
            ProfileKind::Steps { edges, .. } => edges.clone(),
            ProfileKind::Sampled { s, .. } => s.clone(),
        }
    }

    /// `ψ(s) = ∫_0^s φ`.
    pub fn psi(&self, s: f64) -> f64 {
        let (lo, hi) = self.support();
        let top = s.min(hi);
        if top <= lo {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::Indicator { a, height, .. } => height * (top - a),
            _ => integrate_panels(|x| self.value(x), lo, top, &self.breaks(), 0.05, 16),
        }
    }

    pub fn integral(&self) -> f64 {
        self.psi(f64::INFINITY)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        let (lo, hi) = self.support();
        integrate_panels(|x| self.value(x).powi(2), lo, hi, &self.breaks(), 0.05, 16)
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `max_{s>0} |ψ(s)|/√s` sampled on a fine grid over the support and beyond.
    pub fn psi_ratio_max(&self) -> f64 {
        let (_, hi) = self.support();
        let m = 4000;
        let mut best = 0.0f64;
        for i in 1..=m {
            let s = 2.0 * hi * i as f64 / m as f64;
            best = best.max(self.psi(s).abs() / s.sqrt());
        }
        for b in self.breaks() {
            if b > 0.0 {
                best = best.max(self.psi(b).abs() / b.sqrt());
            }
        }
        best
    }

    /// Scaled copy `c · φ`.
    pub fn scaled(&self, c: f64) -> Profile {
        let kind = match &self.kind {
            ProfileKind::Indicator { a, b, height } => ProfileKind::Indicator { a: *a, b: *b, height: c * height },
            ProfileKind::Bump { center, half_width, height } => ProfileKind::Bump {
                center: *center,
                half_width: *half_width,
                height: c * height,
            },
            ProfileKind::Steps { edges, values } => ProfileKind::Steps {
                edges: edges.clone(),
                values: values.iter().map(|v| c * v).collect(),
            },
            ProfileKind::Sampled { s, phi } => ProfileKind::Sampled {
                s: s.clone(),
                phi: phi.iter().map(|v| c * v).collect(),
            },
        };
        Profile { name: self.name.clone(), kind }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moser_preset_integrates_to_l() {
        let p = Profile::preset("moser-L").unwrap();
        assert_eq!(p.psi(0.0), 0.0);
        assert!((p.psi(0.25) - 0.25).abs() < 1e-15);
        assert!((p.psi(3.0) - 1.0).abs() < 1e-15);
        assert!((p.l2_norm_sq() - 1.0).abs() < 1e-14);
        assert!((p.psi_ratio_max() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bump_has_unit_norm() {
        let p = Profile::preset("bump").unwrap();
        assert!((p.l2_norm() - 1.0).abs() < 1e-12);
        assert_eq!(p.value(0.5), 0.0);
        assert!(p.value(1.0) > 0.0);
    }

    #[test]
    fn psi_is_cauchy_schwarz_lipschitz() {
        for name in PRESETS {
            let p = Profile::preset(name).unwrap();
            let n = p.l2_norm();
            for i in 0..50 {
                let s0 = 0.05 * i as f64;
                let s1 = s0 + 0.037;
                assert!((p.psi(s1) - p.psi(s0)).abs() <= n * (s1 - s0).sqrt() + 1e-12);
            }
        }
    }

    #[test]
    fn two_step_values() {
        let p = Profile::preset("two-step").unwrap();
        assert_eq!(p.value(0.4), 0.0);
        assert_eq!(p.value(0.7), 1.0);
        assert_eq!(p.value(1.5), 0.5);
        assert_eq!(p.value(2.0), 0.0);
        assert!((p.psi(5.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_preset_lists_names() {
        let e = Profile::preset("nope").unwrap_err().to_string();
        assert!(e.contains("moser-L"));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let p = Profile::sampled(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 0.0]).unwrap();
        p.to_csv(&path, 3).unwrap();
        let q = Profile::from_csv(&path).unwrap();
        assert_eq!(q.kind, p.kind);
        assert!((q.value(0.25) - 1.0).abs() < 1e-15);
    }
}
