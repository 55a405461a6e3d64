//! Command implementations. Each appends to the report as it goes, so a
//! failure part-way still leaves the finished outputs on disk.

use std::time::Instant;

use super::report::{num, RunReport, Table};
use super::{presets, Command, ExperimentConfig};
use crate::decompose::decompose_full;
use crate::diagnostics::{compactness_defect, log_oscillation_defect};
use crate::error::{Error, Result};
use crate::norms::{b_norm, orlicz_norm, sobolev_norm, synthesized_orlicz};
use crate::numerics::{constants, Dimension};
use crate::synth::{moser_samples, PhysicalField};

/// Run a validated config. Errors are recorded in the report.
pub fn run(cfg: &ExperimentConfig) -> RunReport {
    let start = Instant::now();
    let command = cfg.command.unwrap_or(Command::Constants);
    let mut report = RunReport::new(command.name(), cfg);
    let out = match command {
        Command::Constants => run_constants(cfg, &mut report),
        Command::Synth => run_synth(cfg, &mut report),
        Command::Norm => run_norm(cfg, &mut report),
        Command::Diagnose => run_diagnose(cfg, &mut report),
        Command::Decompose => decompose_into(cfg, &mut report),
        Command::Verify => presets::run_preset(cfg, &mut report),
    };
    if let Err(e) = out {
        report.fail(&e);
    }
    report.seal();
    report.wall_time_s = start.elapsed().as_secs_f64();
    report
}

fn run_constants(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let c = constants(Dimension::new(cfg.dimension)?);
    report.insert("constants", c)
}

fn run_synth(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let fam = cfg.family()?;
    let quad = &cfg.decompose.quad;
    let mut truth = Table::new("truth.csv", &["n", "triple", "alpha", "x0", "x1"]);
    let mut members = Table::new("members.csv", &["n", "hn_norm", "b_norm"]);
    let mut rows = Vec::new();
    for e in &fam.entries {
        for (j, (a, x)) in e.truth.iter().enumerate() {
            truth.push(vec![e.n.to_string(), j.to_string(), num(*a), num(x[0]), num(x[1])]);
        }
        let hn = sobolev_norm(&e.profile, true, quad)?;
        let b = b_norm(&e.profile, quad)?;
        members.push(vec![e.n.to_string(), num(hn), num(b)]);
        rows.push(serde_json::json!({ "n": e.n, "truth": e.truth, "hn_norm": hn, "b_norm": b }));
    }
    report.tables.extend([truth, members]);
    report.insert("dimension", fam.dim.n())?;
    report.insert("members", rows)
}

fn run_norm(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let quad = &cfg.decompose.quad;
    if !cfg.alphas.is_empty() {
        let mut t = Table::new("moser_norms.csv", &["alpha", "orlicz"]);
        let mut vals = Vec::new();
        for &a in &cfg.alphas {
            let v = orlicz_norm(&moser_samples(a)?, cfg.orlicz_tol)?;
            t.push(vec![num(a), num(v)]);
            vals.push((a, v));
        }
        report.tables.push(t);
        report.insert("moser", vals)?;
    }
    if cfg.manifest.is_none() {
        if cfg.alphas.is_empty() {
            return Err(Error::Config { path: "manifest".into(), msg: "norm needs a manifest or alphas".into() });
        }
        return Ok(());
    }
    let fam = cfg.family()?;
    let mut t = Table::new("norms.csv", &["n", "hn_norm", "h_norm", "b_norm", "orlicz"]);
    let mut rows = Vec::new();
    for e in &fam.entries {
        let hn = sobolev_norm(&e.profile, true, quad)?;
        let h = sobolev_norm(&e.profile, false, quad)?;
        let b = b_norm(&e.profile, quad)?;
        let o = synthesized_orlicz(&e.profile, &cfg.decompose.patches, cfg.orlicz_tol)?;
        t.push(vec![e.n.to_string(), num(hn), num(h), num(b), num(o)]);
        rows.push(serde_json::json!({ "n": e.n, "hn_norm": hn, "h_norm": h, "b_norm": b, "orlicz": o }));
        // keep finished rows if a later member fails
        report.insert("members", &rows)?;
    }
    report.tables.push(t);
    Ok(())
}

fn run_diagnose(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let fam = cfg.family()?;
    let quad = &cfg.decompose.quad;
    let profiles: Vec<_> = fam.entries.iter().map(|e| e.profile.clone()).collect();
    // scale of reference: the first declared concentration
    let alpha: Vec<f64> = fam
        .entries
        .iter()
        .map(|e| e.truth.first().map(|t| t.0))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Config { path: "manifest.triples".into(), msg: "diagnose needs a declared scale".into() })?;
    let osc = log_oscillation_defect(&profiles, &alpha, &fam.n_list, &cfg.r_list, quad)?;
    let mut t = Table::new("oscillation.csv", &["n", "R", "low", "high"]);
    for (l, h) in osc.low.rows.iter().zip(&osc.high.rows) {
        t.push(vec![l.0.to_string(), num(l.1), num(l.2), num(h.2)]);
    }
    report.tables.push(t);
    report.insert("log_oscillation_limsup", &osc.limsup)?;
    let samples = profiles
        .iter()
        .map(|p| Ok(PhysicalField::synthesize(p, cfg.decompose.patches.h)?.samples(&cfg.decompose.patches)))
        .collect::<Result<Vec<_>>>()?;
    let tail = compactness_defect(&samples, &fam.n_list, &cfg.r_list)?;
    let mut t = Table::new("compactness.csv", &["n", "R", "tail_mass"]);
    for (n, r, v) in &tail.rows {
        t.push(vec![n.to_string(), num(*r), num(*v)]);
    }
    report.tables.push(t);
    report.insert("compactness", &tail.rows)
}

pub(super) fn decompose_into(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let fam = cfg.family()?;
    let d = decompose_full(&fam, &cfg.decompose)?;
    let mut scales = Table::new(
        "scales.csv",
        &["scale", "law", "law_error", "n", "alpha", "component_mass", "residual_eta", "cores"],
    );
    for (j, s) in d.scales.iter().enumerate() {
        for (i, n) in d.n_list.iter().enumerate() {
            let cores: Vec<String> = s.cores[i].iter().map(|c| format!("{}:{}", num(c[0]), num(c[1]))).collect();
            scales.push(vec![
                j.to_string(),
                s.law.clone(),
                num(s.law_error),
                n.to_string(),
                num(s.alpha[i]),
                num(s.component_mass[i]),
                num(s.residual_eta[i]),
                cores.join(" "),
            ]);
        }
    }
    let mut ledger = Table::new("ledger.csv", &["n", "input", "parts", "remainder", "residual", "relative"]);
    for l in &d.ledger {
        ledger.push(vec![
            l.n.to_string(),
            num(l.input),
            num(l.parts.iter().sum()),
            num(l.remainder),
            num(l.residual),
            num(l.relative),
        ]);
    }
    let mut stages = Table::new("stages.csv", &["stage", "n", "b_norm", "l2", "hn", "orlicz"]);
    for s in &d.stages {
        stages.push(vec![
            s.stage.clone(),
            s.n.to_string(),
            num(s.b_norm),
            num(s.l2),
            num(s.hn),
            s.orlicz.map(num).unwrap_or_default(),
        ]);
    }
    report.tables.extend([scales, ledger, stages]);
    report.insert("decomposition", &d)
}
