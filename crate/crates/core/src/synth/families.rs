//! Moser functions, profile generalizations, elementary concentrations,
//! superpositions and spread remainders.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AngularProfile, Atom, Mode, Profile, Shape};
use crate::error::{Error, Result};
use crate::norms::MeasuredSamples;
use crate::numerics::{
    constants, radial_synthesis, sphere_measure, Dimension, FnSpectrum, QuadOptions, RadialField, RadialGrid,
};

/// Exact Moser function `f_α` of the plane at `|x| = e^{-s}`.
pub fn moser_at_log(alpha: f64, s: f64) -> f64 {
    if s >= alpha {
        (alpha / (2.0 * PI)).sqrt()
    } else if s > 0.0 {
        s / (2.0 * PI * alpha).sqrt()
    } else {
        0.0
    }
}

/// `f_α` sampled at the given radii.
pub fn moser(alpha: f64, radii: &[f64]) -> Result<RadialField> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha must be positive"));
    }
    let values = radii
        .iter()
        .map(|&r| if r <= 0.0 { moser_at_log(alpha, f64::INFINITY) } else { moser_at_log(alpha, -r.ln()) })
        .collect();
    Ok(RadialField { radii: radii.to_vec(), values })
}

/// Exact quadrature samples of `f_α`: Gauss nodes on the annulus
/// `e^{-α} < r < 1` plus one weight for the inner disk, where it is constant.
pub fn moser_samples(alpha: f64) -> Result<MeasuredSamples> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha must be positive"));
    }
    let grid = RadialGrid::log_gauss(Dimension::new(1)?, -alpha, 0.0, &[], 0.5, 12)?;
    let values: Vec<f64> = grid.log_radii().iter().map(|lr| moser_at_log(alpha, -lr)).collect();
    let mut u = MeasuredSamples::from_ln_weights(values, grid.ln_weights().to_vec())?;
    u.push(moser_at_log(alpha, f64::INFINITY), PI.ln() - 2.0 * alpha);
    Ok(u)
}

/// `C̃_N √α ψ(s/α)` at `|x| = e^{-s}`, zero outside the unit ball.
pub fn general_moser_at_log(dim: Dimension, alpha: f64, profile: &Profile, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    constants(dim).c_moser * alpha.sqrt() * profile.psi(s / alpha)
}

pub fn general_moser(dim: Dimension, alpha: f64, profile: &Profile, radii: &[f64]) -> Result<RadialField> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha must be positive"));
    }
    let values = radii
        .iter()
        .map(|&r| {
            let s = if r <= 0.0 { f64::INFINITY } else { -r.ln() };
            general_moser_at_log(dim, alpha, profile, s)
        })
        .collect();
    Ok(RadialField { radii: radii.to_vec(), values })
}

/// `(C_N/√α) ∫_{|ξ|>=1} e^{i(x-x₀)·ξ} |ξ|^{-2N} φ(log|ξ|/α) dξ` at the
/// distances `radii = |x - x₀|`.
pub fn elementary_concentration(
    dim: Dimension,
    alpha: f64,
    profile: &Profile,
    radii: &[f64],
    opts: &QuadOptions,
) -> Result<RadialField> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha must be positive"));
    }
    let (a, b) = profile.support();
    let two_n = dim.d() as i32;
    let c = constants(dim).c_synth / alpha.sqrt();
    let p = profile.clone();
    let spec = FnSpectrum {
        f: move |rho: f64| c * rho.powi(-two_n) * p.value(rho.ln() / alpha),
        rho_lo: (alpha * a).exp().max(1.0),
        rho_hi: (alpha * b).exp(),
        breaks_rho: profile.breaks().iter().map(|s| (alpha * s).exp()).collect(),
    };
    radial_synthesis(dim, &spec, radii, opts)
}

/// Profile coordinates of the elementary concentration: one radial atom with
/// envelope `φ(t/α)/√(αω)` at `core`.
pub fn elementary_profile(dim: Dimension, alpha: f64, core: [f64; 2], profile: &Profile) -> Result<AngularProfile> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha must be positive"));
    }
    let c = 1.0 / (alpha * sphere_measure(dim)).sqrt();
    let shape = Shape::Scaled { profile: Arc::new(profile.clone()), alpha };
    AngularProfile::from_atoms(dim, vec![Atom::radial(core, Complex64::new(c, 0.0), shape)])
}

fn j0_shifted(label: &str, shift: f64, lo: f64, hi: f64) -> Shape {
    // J0(e^{t-shift}); panel breaks at the asymptotic zeros once oscillating
    let mut breaks = Vec::new();
    let mut j = 1.0;
    loop {
        let t = shift + ((j - 0.25) * PI).ln();
        if t >= hi {
            break;
        }
        breaks.push(t);
        j += 1.0;
    }
    Shape::Closure {
        label: label.to_string(),
        f: Arc::new(move |t: f64| Complex64::new(crate::numerics::jn(0, (t - shift).exp()), 0.0)),
        lo,
        hi,
        breaks,
    }
}

/// Exact profile coordinates of `f_α`:
/// `(J0(e^{t-α}) - J0(e^t))/√(2πα)`, truncated where both terms carry
/// less than `e^{-12}` of squared mass.
pub fn moser_profile(alpha: f64) -> Result<AngularProfile> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha must be positive"));
    }
    let dim = Dimension::new(1)?;
    let c = 1.0 / (2.0 * PI * alpha).sqrt();
    let far = j0_shifted("moser-outer", alpha, -10.0, alpha + 12.0);
    let near = j0_shifted("moser-inner", 0.0, -10.0, 12.0);
    let atom = Atom {
        core: [0.0, 0.0],
        modes: vec![
            Mode { m: 0, coef: Complex64::new(c, 0.0), shape: Arc::new(far) },
            Mode { m: 0, coef: Complex64::new(-c, 0.0), shape: Arc::new(near) },
        ],
    };
    AngularProfile::from_atoms(dim, vec![atom])
}

/// Scale sequence law over the index `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleLaw {
    /// `"n"`, `"n^2"` or `"2^n"`.
    Named(String),
    /// Explicit values, one per entry of the index list.
    List(Vec<f64>),
}

impl ScaleLaw {
    pub fn validate(&self, n_list: &[u32]) -> Result<()> {
        match self {
            ScaleLaw::Named(s) if ["n", "n^2", "2^n"].contains(&s.as_str()) => Ok(()),
            ScaleLaw::Named(s) => Err(Error::invalid(format!(
                "unknown alpha_expr {s:?}; expected \"n\", \"n^2\", \"2^n\" or a list"
            ))),
            ScaleLaw::List(v) => {
                if v.len() != n_list.len() {
                    return Err(Error::invalid("explicit scale list must match the index list"));
                }
                if v.iter().any(|a| !(*a > 0.0)) || v.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("scales must be positive and increasing"));
                }
                Ok(())
            }
        }
    }

    /// Scale at index `n` (position `idx` in the index list).
    pub fn eval(&self, n: u32, idx: usize) -> f64 {
        let x = f64::from(n);
        match self {
            ScaleLaw::Named(s) => match s.as_str() {
                "n" => x,
                "n^2" => x * x,
                _ => 2f64.powf(x),
            },
            ScaleLaw::List(v) => v[idx],
        }
    }

    pub fn label(&self) -> String {
        match self {
            ScaleLaw::Named(s) => s.clone(),
            ScaleLaw::List(_) => "list".into(),
        }
    }
}

/// Core sequence: fixed, or `base + dir · e^{-a α_n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoreLaw {
    Fixed([f64; 2]),
    Approach { base: [f64; 2], dir: [f64; 2], a: f64 },
}

impl CoreLaw {
    pub fn eval(&self, alpha: f64) -> [f64; 2] {
        match self {
            CoreLaw::Fixed(x) => *x,
            CoreLaw::Approach { base, dir, a } => {
                let f = (-a * alpha).exp();
                [base[0] + dir[0] * f, base[1] + dir[1] * f]
            }
        }
    }
}

/// Ground-truth triple `(α_n, x_n, φ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleTriple {
    pub alpha: ScaleLaw,
    pub core: CoreLaw,
    pub profile: Profile,
}

impl ScaleTriple {
    pub fn alpha_at(&self, n_list: &[u32], idx: usize) -> f64 {
        self.alpha.eval(n_list[idx], idx)
    }
}

/// Spread remainder: per-block amplitude `ε 2^{-k/2}/√ω` with seeded random
/// signs on blocks `k0..=k1`, so every block has mass exactly `ε`.
pub fn spread_remainder(dim: Dimension, epsilon: f64, k0: i32, k1: i32, seed: u64) -> Result<AngularProfile> {
    if !(k1 > k0) {
        return Err(Error::invalid(format!("block range needs k1 > k0, got {k0}..{k1}")));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::invalid("epsilon must be nonnegative"));
    }
    if epsilon == 0.0 {
        return Ok(AngularProfile::zero(dim));
    }
    if k0 <= crate::norms::K_FLOOR || k1 > 30 {
        return Err(Error::invalid("block range out of supported bounds"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = sphere_measure(dim);
    let mut edges = Vec::new();
    let mut values = Vec::new();
    for k in k0..=k1 {
        edges.push(2f64.powi(k));
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        values.push(Complex64::new(sign * epsilon * 2f64.powf(-0.5 * f64::from(k)) / omega.sqrt(), 0.0));
    }
    edges.push(2f64.powi(k1 + 1));
    let shape = Shape::Cells { edges, values };
    AngularProfile::from_atoms(dim, vec![Atom::radial([0.0, 0.0], Complex64::new(1.0, 0.0), shape)])
}

/// One member `u_n` of a synthetic family.
#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub n: u32,
    pub profile: AngularProfile,
    /// `(α_n, x_n)` of every ground-truth triple.
    pub truth: Vec<(f64, [f64; 2])>,
}

/// Sum of translated elementary concentrations plus an optional remainder.
/// Triples sharing both scale law and core law are rejected unless
/// `allow_degenerate` (they are not orthogonal).
pub fn superpose(
    dim: Dimension,
    triples: &[ScaleTriple],
    remainder: Option<&AngularProfile>,
    n_list: &[u32],
    idx: usize,
    allow_degenerate: bool,
) -> Result<FamilyEntry> {
    if idx >= n_list.len() {
        return Err(Error::invalid("index outside the n-list"));
    }
    for t in triples {
        t.alpha.validate(n_list)?;
    }
    if !allow_degenerate {
        for (i, a) in triples.iter().enumerate() {
            for b in &triples[i + 1..] {
                if a.alpha == b.alpha && a.core == b.core {
                    return Err(Error::invalid(
                        "two triples share scale and core; pass allow_degenerate to keep them",
                    ));
                }
            }
        }
    }
    let mut profile = AngularProfile::zero(dim);
    let mut truth = Vec::new();
    for t in triples {
        let alpha = t.alpha_at(n_list, idx);
        let core = t.core.eval(alpha);
        profile.extend(&elementary_profile(dim, alpha, core, &t.profile)?);
        truth.push((alpha, core));
    }
    if let Some(r) = remainder {
        profile.extend(r);
    }
    Ok(FamilyEntry { n: n_list[idx], profile, truth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{b_norm, sobolev_norm};

    fn dim1() -> Dimension {
        Dimension::new(1).unwrap()
    }

    #[test]
    fn moser_pieces() {
        let a = 7.0;
        let f = moser(a, &[0.0, (-8.0f64).exp(), (-3.5f64).exp(), 1.0, 2.0]).unwrap();
        let top = (a / (2.0 * PI)).sqrt();
        assert_eq!(f.values[0], top);
        assert_eq!(f.values[1], top);
        assert!((f.values[2] - 0.5 * top).abs() < 1e-14);
        assert_eq!(f.values[3], 0.0);
        assert_eq!(f.values[4], 0.0);
    }

    #[test]
    fn general_moser_reduces_to_moser() {
        let p = Profile::preset("moser-L").unwrap();
        for &s in &[-1.0, 0.0, 0.3, 2.0, 6.9, 7.0, 30.0] {
            let a = moser_at_log(7.0, s);
            let b = general_moser_at_log(dim1(), 7.0, &p, s);
            assert!((a - b).abs() < 1e-15 * a.max(1.0), "s={s}");
        }
    }

    #[test]
    fn moser_profile_has_unit_energy() {
        let o = QuadOptions::default();
        for &a in &[3.0, 10.0] {
            let h = sobolev_norm(&moser_profile(a).unwrap(), true, &o).unwrap();
            assert!((h - 1.0).abs() < 1e-5, "alpha={a}: {h}");
        }
    }

    #[test]
    fn elementary_value_at_core() {
        let p = Profile::preset("moser-L").unwrap();
        let alpha = 9.0;
        let f = elementary_concentration(dim1(), alpha, &p, &[0.0], &QuadOptions::default()).unwrap();
        let want = (alpha / (2.0 * PI)).sqrt();
        assert!((f.values[0] - want).abs() < 1e-10 * want);
    }

    #[test]
    fn spread_remainder_blocks() {
        let o = QuadOptions::default();
        let r = spread_remainder(dim1(), 0.1, 0, 9, 42).unwrap();
        let b = b_norm(&r, &o).unwrap();
        assert!((b - 0.1).abs() < 1e-12);
        let l2 = r.norm_sq(&o).unwrap().sqrt();
        assert!((l2 - 0.1 * 10f64.sqrt()).abs() < 1e-12);
        let again = spread_remainder(dim1(), 0.1, 0, 9, 42).unwrap();
        assert_eq!(format!("{:?}", again.atoms()[0].modes[0].shape), format!("{:?}", r.atoms()[0].modes[0].shape));
        assert!(spread_remainder(dim1(), 0.0, 0, 3, 1).unwrap().is_empty());
        assert!(spread_remainder(dim1(), 0.1, 3, 3, 1).is_err());
    }

    #[test]
    fn superpose_rejects_degenerate() {
        let t = ScaleTriple {
            alpha: ScaleLaw::Named("n".into()),
            core: CoreLaw::Fixed([0.0, 0.0]),
            profile: Profile::preset("bump").unwrap(),
        };
        let n = [4, 5];
        assert!(superpose(dim1(), &[t.clone(), t.clone()], None, &n, 0, false).is_err());
        assert!(superpose(dim1(), &[t.clone(), t], None, &n, 0, true).is_ok());
        let e = superpose(dim1(), &[], None, &n, 1, false).unwrap();
        assert!(e.profile.is_empty());
    }
}
