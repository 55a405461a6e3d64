use serde::Serialize;

use super::tail_indices;
use crate::error::{Error, Result};
use crate::synth::ScaleTriple;

/// Default threshold for the divergence slope against `log n`.
pub const DEFAULT_SLOPE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrthoKind {
    Scale,
    Core,
    NonOrthogonal,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityVerdict {
    pub kind: OrthoKind,
    /// Fitted limit of `-log|x_n - x̃_n| / α_n` (equal scales only);
    /// `+∞` for coincident cores.
    pub a_estimate: Option<f64>,
    pub psi_nullity_ok: bool,
    pub slope: f64,
    pub n_list: Vec<u32>,
    pub note: String,
}

/// Least-squares slope of `q` against `log n`.
pub fn divergence_slope(n_list: &[u32], q: &[f64]) -> f64 {
    let x: Vec<f64> = n_list.iter().map(|n| f64::from(*n).ln()).collect();
    let m = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / m, q.iter().sum::<f64>() / m);
    let sxy: f64 = x.iter().zip(q).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn psi_null_below(t: &ScaleTriple, a: f64) -> bool {
    let scale = t.profile.l2_norm().max(1.0);
    (0..=400).all(|i| t.profile.psi(a * i as f64 / 400.0).abs() <= 1e-10 * scale)
}

/// Classify a pair of triples over `n_list` (at least three indices).
pub fn triple_orthogonality(
    t1: &ScaleTriple,
    t2: &ScaleTriple,
    n_list: &[u32],
    slope_threshold: f64,
) -> Result<OrthogonalityVerdict> {
    if n_list.len() < 3 {
        return Err(Error::invalid("orthogonality needs at least three indices"));
    }
    t1.alpha.validate(n_list)?;
    t2.alpha.validate(n_list)?;
    let a1: Vec<f64> = (0..n_list.len()).map(|i| t1.alpha_at(n_list, i)).collect();
    let a2: Vec<f64> = (0..n_list.len()).map(|i| t2.alpha_at(n_list, i)).collect();
    let q: Vec<f64> = a1.iter().zip(&a2).map(|(x, y)| (y / x).ln().abs()).collect();
    let slope = divergence_slope(n_list, &q);
    let mut v = OrthogonalityVerdict {
        kind: OrthoKind::Inconclusive,
        a_estimate: None,
        psi_nullity_ok: false,
        slope,
        n_list: n_list.to_vec(),
        note: String::new(),
    };
    let equal = a1.iter().zip(&a2).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs());
    if !equal {
        let increasing = q.windows(2).all(|w| w[1] >= w[0] - 1e-12);
        if slope > slope_threshold && increasing {
            v.kind = OrthoKind::Scale;
            v.note = "log-ratio of scales diverges".into();
        } else if slope <= slope_threshold && q.windows(2).all(|w| (w[1] - w[0]).abs() < 1e-9 * (1.0 + w[0])) {
            v.kind = OrthoKind::NonOrthogonal;
            v.note = "scales differ by a bounded ratio".into();
        } else {
            v.note = "log-ratio trend is neither flat nor monotonically diverging".into();
        }
        return Ok(v);
    }
    // equal scales: fit a_n = a + c/α_n on the tail
    let dist: Vec<f64> = a1
        .iter()
        .map(|al| {
            let (x, y) = (t1.core.eval(*al), t2.core.eval(*al));
            (x[0] - y[0]).hypot(x[1] - y[1])
        })
        .collect();
    if dist.iter().all(|d| *d == 0.0) {
        v.a_estimate = Some(f64::INFINITY);
        v.kind = OrthoKind::NonOrthogonal;
        v.note = "identical scales and cores".into();
        return Ok(v);
    }
    if dist.iter().any(|d| *d == 0.0) {
        v.note = "cores coincide at some but not all indices".into();
        return Ok(v);
    }
    let tail: Vec<usize> = tail_indices(n_list.len()).collect();
    let idx: Vec<usize> = if tail.len() >= 2 { tail } else { (0..n_list.len()).collect() };
    let xs: Vec<f64> = idx.iter().map(|&i| 1.0 / a1[i]).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| -dist[i].ln() / a1[i]).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let c = if sxx > 0.0 { xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx } else { 0.0 };
    let a = my - c * mx;
    let resid = xs.iter().zip(&ys).map(|(x, y)| (y - a - c * x).abs()).fold(0.0, f64::max);
    v.a_estimate = Some(a);
    if resid > 0.05 * (1.0 + a.abs()) {
        v.note = format!("core-distance exponent not stable over the tail (residual {resid:.3e})");
        return Ok(v);
    }
    let a_eff = if a.abs() < 1e-6 { 0.0 } else { a };
    if a_eff <= 0.0 {
        v.kind = OrthoKind::Core;
        v.psi_nullity_ok = true;
        v.note = "cores separate on the scale (a <= 0)".into();
    } else {
        v.psi_nullity_ok = psi_null_below(t1, a_eff) || psi_null_below(t2, a_eff);
        v.kind = if v.psi_nullity_ok { OrthoKind::Core } else { OrthoKind::NonOrthogonal };
        v.note = format!("a = {a_eff:.6}; psi nullity on [0, a) {}", if v.psi_nullity_ok { "holds" } else { "fails" });
    }
    Ok(v)
}
