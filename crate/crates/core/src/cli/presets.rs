//! `verify` presets: closed-form and property checks runnable in one command.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{num, RunReport, Table};
use super::{ExperimentConfig, ManifestRef};
use crate::decompose::{cosine_profile, sphere_average};
use crate::error::{Error, Result};
use crate::norms::{mt_functional, orlicz_from_b_witness, orlicz_norm, sobolev_norm, MeasuredSamples};
use crate::numerics::{
    constants, radial_synthesis, sphere_measure, Dimension, FnSpectrum, QuadOptions, RadialGrid,
};
use crate::synth::{
    elementary_concentration, elementary_profile, general_moser_at_log, moser_samples, spread_remainder, FamilyManifest,
    PatchOptions, Profile,
};

pub const PRESETS: [&str; 10] = [
    "constants",
    "orlicz-indicator",
    "plancherel",
    "moser-limit",
    "moser-residual",
    "b-norm-witness",
    "gaussian",
    "recovery",
    "sphere-average",
    "mt-criticality",
];

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
    pass: bool,
}

fn check(report: &mut RunReport, name: &'static str, value: f64, tolerance: f64, pass: bool) -> Result<()> {
    report.insert("check", Check { name, value, tolerance, pass })
}

fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn alphas_or(cfg: &ExperimentConfig, default: &[f64]) -> Vec<f64> {
    if cfg.alphas.is_empty() {
        default.to_vec()
    } else {
        cfg.alphas.clone()
    }
}

pub fn run_preset(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let name = cfg.preset.as_deref().unwrap_or("");
    report.insert("preset", name)?;
    match name {
        "constants" => constants_table(report),
        "orlicz-indicator" => orlicz_indicator(cfg, report),
        "plancherel" => plancherel(cfg, report),
        "moser-limit" => moser_limit(cfg, report),
        "moser-residual" => moser_residual(cfg, report),
        "b-norm-witness" => b_norm_witness(cfg, report),
        "gaussian" => gaussian(report),
        "recovery" => recovery(cfg, report),
        "sphere-average" => sphere(cfg, report),
        "mt-criticality" => mt_criticality(cfg, report),
        other => Err(Error::Config {
            path: "preset".into(),
            msg: format!("unknown preset {other:?}; expected one of {PRESETS:?}"),
        }),
    }
}

fn constants_table(report: &mut RunReport) -> Result<()> {
    let mut t = Table::new("constants.csv", &["N", "omega", "beta", "c_synth", "c_moser"]);
    for n in 1..=3 {
        let c = constants(Dimension::new(n)?);
        t.push(vec![n.to_string(), num(c.omega), num(c.beta), num(c.c_synth), num(c.c_moser)]);
    }
    report.tables.push(t);
    let c1 = constants(Dimension::new(1)?);
    let dev = ((c1.beta - 4.0 * PI) / (4.0 * PI)).abs().max(((c1.omega - 2.0 * PI) / (2.0 * PI)).abs());
    check(report, "N=1: beta = 4pi, omega = 2pi", dev, 1e-12, dev <= 1e-12)
}

fn orlicz_indicator(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let mut t = Table::new("orlicz_indicator.csv", &["c", "measure", "orlicz", "exact"]);
    let mut worst = 0.0f64;
    for c in [0.1, 1.0, 3.0, 10.0] {
        for v in [1e-6, 1e-2, 0.5, 1.0, 50.0] {
            let u = MeasuredSamples::new(vec![c], vec![v])?;
            let got = orlicz_norm(&u, cfg.orlicz_tol.min(1e-10))?;
            let exact = c / (1.0 + 1.0 / v).ln().sqrt();
            worst = worst.max((got - exact).abs() / exact);
            t.push(vec![num(c), num(v), num(got), num(exact)]);
        }
    }
    report.tables.push(t);
    check(report, "indicator closed form", worst, 1e-6, worst <= 1e-6)
}

fn plancherel(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let d = Dimension::new(1)?;
    let p = Profile::preset("moser-L")?;
    let mut t = Table::new("plancherel.csv", &["alpha", "hn_norm"]);
    let mut worst = 0.0f64;
    for a in alphas_or(cfg, &[10.0, 20.0, 40.0]) {
        let v = sobolev_norm(&elementary_profile(d, a, [0.0, 0.0], &p)?, true, &cfg.decompose.quad)?;
        worst = worst.max((v - 1.0).abs());
        t.push(vec![num(a), num(v)]);
    }
    report.tables.push(t);
    check(report, "unit-profile concentration has unit norm", worst, 1e-3, worst <= 1e-3)
}

fn moser_limit(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let limit = 1.0 / (4.0 * PI).sqrt();
    let mut t = Table::new("moser_limit.csv", &["alpha", "orlicz", "limit"]);
    let mut last = f64::NAN;
    for a in alphas_or(cfg, &[10.0, 20.0, 40.0, 80.0]) {
        last = orlicz_norm(&moser_samples(a)?, cfg.orlicz_tol.min(1e-10))?;
        t.push(vec![num(a), num(last), num(limit)]);
    }
    report.tables.push(t);
    let gap = (last - limit).abs() / limit;
    check(report, "final relative gap to 1/sqrt(4pi)", gap, 0.1, gap <= 0.1)
}

/// Elementary concentration of the unit profile against its Moser-type
/// approximation `C̃ √α ψ(s/α)`.
fn moser_residual(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let d = Dimension::new(1)?;
    let p = Profile::preset("moser-L")?;
    let quad = &cfg.decompose.quad;
    let alphas = alphas_or(cfg, &[5.0, 10.0, 20.0, 40.0]);
    let mut t = Table::new("moser_residual.csv", &["alpha", "sup_residual", "orlicz_residual"]);
    let mut sups = Vec::new();
    for &a in &alphas {
        // fine near the unit circle (r-scale oscillation) and inside (s-scale)
        let grid = RadialGrid::log_gauss(d, -a - 6.0, 20f64.ln(), &[-a, 0.0], 0.02, 8)?;
        let g = elementary_concentration(d, a, &p, grid.radii(), quad)?;
        let res: Vec<f64> =
            grid.log_radii().iter().zip(&g.values).map(|(lr, v)| v - general_moser_at_log(d, a, &p, -lr)).collect();
        let mut u = MeasuredSamples::from_ln_weights(res, grid.ln_weights().to_vec())?;
        let g0 = elementary_concentration(d, a, &p, &[0.0], quad)?.values[0];
        u.push(g0 - general_moser_at_log(d, a, &p, f64::INFINITY), PI.ln() - 2.0 * (a + 6.0));
        let o = orlicz_norm(&u, cfg.orlicz_tol.min(1e-8))?;
        t.push(vec![num(a), num(u.sup()), num(o)]);
        sups.push(u.sup());
    }
    report.tables.push(t);
    let slope = loglog_slope(&alphas, &sups);
    check(report, "sup residual decay exponent", slope, -0.3, (-0.7..=-0.3).contains(&slope))
}

fn b_norm_witness(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let d = Dimension::new(1)?;
    let quad = cfg.decompose.quad;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(6));
    let cases: Vec<(i32, i32, u64)> = (0..100)
        .map(|i| {
            let blocks = rng.gen_range(4..=16);
            let k1 = rng.gen_range(3..=8);
            (k1 - blocks + 1, k1, 1000 + i)
        })
        .collect();
    let ratios = |patches: &PatchOptions| -> Result<Vec<(f64, f64, f64)>> {
        cases
            .par_iter()
            .map(|&(k0, k1, seed)| {
                let w = spread_remainder(d, 0.05, k0, k1, seed)?;
                let r = orlicz_from_b_witness(&w, patches, &quad, 1e-8)?;
                Ok((r.b, r.orlicz, r.ratio))
            })
            .collect()
    };
    let coarse = ratios(&cfg.decompose.patches)?;
    let mut t = Table::new("b_norm_witness.csv", &["case", "k0", "k1", "b_norm", "orlicz", "ratio"]);
    for (i, ((k0, k1, _), (b, o, r))) in cases.iter().zip(&coarse).enumerate() {
        t.push(vec![i.to_string(), k0.to_string(), k1.to_string(), num(*b), num(*o), num(*r)]);
    }
    report.tables.push(t);
    let max_c = coarse.iter().map(|x| x.2).fold(0.0, f64::max);
    let max_f = ratios(&cfg.decompose.patches.refined())?.iter().map(|x| x.2).fold(0.0, f64::max);
    report.insert("max_ratio", [max_c, max_f])?;
    let change = (max_f - max_c).abs() / max_c;
    check(report, "max orlicz/b stable under 2x refinement", change, 0.1, max_c.is_finite() && change < 0.1)
}

fn gaussian(report: &mut RunReport) -> Result<()> {
    let spec = FnSpectrum { f: |rho: f64| (-0.5 * rho * rho).exp(), rho_lo: 0.0, rho_hi: 40.0, breaks_rho: vec![] };
    let radii: Vec<f64> = (0..=800).map(|i| 0.01 * i as f64).collect();
    let opts = QuadOptions { gl_order: 16, ..QuadOptions::default() };
    let out = radial_synthesis(Dimension::new(1)?, &spec, &radii, &opts)?;
    let mut t = Table::new("gaussian.csv", &["r", "synthesized", "exact"]);
    let mut sup = 0.0f64;
    for (r, v) in radii.iter().zip(&out.values) {
        let exact = 2.0 * PI * (-0.5 * r * r).exp();
        sup = sup.max((v - exact).abs() / (2.0 * PI));
        t.push(vec![num(*r), num(*v), num(exact)]);
    }
    report.tables.push(t);
    check(report, "sup relative error on [0, 8]", sup, 1e-6, sup <= 1e-6)
}

pub fn recovery_manifest() -> FamilyManifest {
    FamilyManifest::from_json(
        r#"{
            "dimension": 1,
            "n_list": [4, 5, 6, 7, 8, 9],
            "triples": [
                {"alpha_expr": "n", "core": [0.0, 0.0], "profile": "two-step"},
                {"alpha_expr": "n^2", "core": [0.5, 0.0], "profile": "bump"},
                {"alpha_expr": "2^n", "core": [-0.25, 0.5],
                 "profile": {"name": "unit", "kind": {"kind": "indicator", "a": 0.5, "b": 1.5, "height": 1.0}}}
            ],
            "remainder": {"epsilon": 0.02, "k0": -2, "k1": 10, "seed": 11}
        }"#,
    )
    .expect("built-in manifest parses")
}

fn recovery(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let mut c = cfg.clone();
    if c.manifest.is_none() {
        c.manifest = Some(ManifestRef::Inline(Box::new(recovery_manifest())));
    }
    super::commands::decompose_into(&c, report)?;
    let d = &report.outputs["decomposition"];
    let ledger = d["ledger"].as_array().and_then(|l| l.last()).and_then(|l| l["relative"].as_f64()).unwrap_or(f64::NAN);
    check(report, "ledger residual at the largest n", ledger, 0.05, ledger <= 0.05)
}

fn sphere(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let bump = Profile::preset("bump")?;
    let alphas = alphas_or(cfg, &[5.0, 10.0, 20.0, 40.0]);
    let mut t = Table::new("sphere_average.csv", &["alpha", "average_mass", "residual_orlicz"]);
    let mut res = Vec::new();
    for &a in &alphas {
        let phi = cosine_profile(&bump, a, 1.0 / (a * sphere_measure(Dimension::new(1)?)).sqrt())?;
        let out = sphere_average(&phi, &cfg.decompose.patches, cfg.orlicz_tol.min(1e-8))?;
        let m = out.average.norm_sq(&cfg.decompose.quad)?;
        t.push(vec![num(a), num(m), num(out.residual_orlicz)]);
        res.push(out.residual_orlicz);
    }
    report.tables.push(t);
    let slope = loglog_slope(&alphas, &res);
    check(report, "residual Orlicz decay exponent", slope, -0.3, slope <= -0.3)
}

fn mt_criticality(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let alphas = alphas_or(cfg, &[5.0, 10.0, 20.0, 40.0]);
    let mut t = Table::new("mt_criticality.csv", &["alpha", "mt_4pi", "mt_5pi"]);
    let (mut crit, mut sup) = (Vec::new(), Vec::new());
    for &a in &alphas {
        let u = moser_samples(a)?;
        crit.push(mt_functional(4.0 * PI, &u)?);
        sup.push(mt_functional(5.0 * PI, &u)?);
        t.push(vec![num(a), num(crit[crit.len() - 1]), num(sup[sup.len() - 1])]);
    }
    report.tables.push(t);
    let (lo, hi) = crit.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    let growth = sup[sup.len() - 1] / sup[0];
    report.insert("band_ratio", hi / lo)?;
    check(report, "supercritical growth across the ladder", growth, 10.0, hi / lo < 10.0 && growth >= 10.0)
}
