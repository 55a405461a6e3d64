//! Experiment configuration: schema, defaults and validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::decompose::DecomposeConfig;
use crate::error::{Error, Result};
use crate::synth::{FamilyManifest, SequenceFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Constants,
    Synth,
    Norm,
    Diagnose,
    Decompose,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::Synth => "synth",
            Command::Norm => "norm",
            Command::Diagnose => "diagnose",
            Command::Decompose => "decompose",
            Command::Verify => "verify",
        }
    }
}

/// A manifest file (relative to the config) or an inline manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ManifestRef {
    Path(PathBuf),
    Inline(Box<FamilyManifest>),
}

fn one() -> u32 {
    1
}
fn default_r_list() -> Vec<f64> {
    vec![2.0, 4.0, 8.0]
}
fn default_orlicz_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub command: Option<Command>,
    /// Half the space dimension, `R^{2N}`.
    #[serde(default = "one")]
    pub dimension: u32,
    /// `verify` preset name.
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub manifest: Option<ManifestRef>,
    /// Replaces the manifest's index list.
    #[serde(default)]
    pub n_list: Option<Vec<u32>>,
    /// Scales for Moser-family runs of `norm`.
    #[serde(default)]
    pub alphas: Vec<f64>,
    /// Window ratios / radii for `diagnose`.
    #[serde(default = "default_r_list")]
    pub r_list: Vec<f64>,
    /// Replaces the remainder seed of the manifest and seeds random presets.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_orlicz_tol")]
    pub orlicz_tol: f64,
    /// Grids, quadrature and greedy-loop tolerances.
    #[serde(default)]
    pub decompose: DecomposeConfig,
    /// Not part of the config identity: moving a run does not change its hash.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    /// Directory against which manifest paths resolve.
    #[serde(skip)]
    pub base: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: None,
            dimension: 1,
            preset: None,
            manifest: None,
            n_list: None,
            alphas: Vec::new(),
            r_list: default_r_list(),
            seed: None,
            orlicz_tol: default_orlicz_tol(),
            decompose: DecomposeConfig::default(),
            out: None,
            base: PathBuf::from("."),
        }
    }
}

fn field(path: &str, msg: impl Into<String>) -> Error {
    Error::Config { path: path.to_string(), msg: msg.into() }
}

/// Parse JSON text; errors carry the offending field path.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        field(if path.is_empty() { "." } else { &path }, e.into_inner().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = parse_config(&text)?;
    cfg.base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=8).contains(&self.dimension) {
            return Err(field("dimension", "must be in 1..=8"));
        }
        let d = &self.decompose;
        for (path, v) in [
            ("orlicz_tol", self.orlicz_tol),
            ("decompose.orlicz_tol", d.orlicz_tol),
            ("decompose.scales.eps_b", d.scales.eps_b),
            ("decompose.scales.law_tolerance", d.scales.law_tolerance),
            ("decompose.cores.eta_tol", d.cores.eta_tol),
            ("decompose.quad.max_dt", d.quad.max_dt),
            ("decompose.quad.wide_dt", d.quad.wide_dt),
            ("decompose.patches.h", d.patches.h),
            ("decompose.patches.far_dr", d.patches.far_dr),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(field(path, format!("must be positive, got {v}")));
            }
        }
        if let Some(n) = &self.n_list {
            if n.is_empty() || n.windows(2).any(|w| w[1] <= w[0]) {
                return Err(field("n_list", "must be nonempty and increasing"));
            }
        }
        if let Some((i, a)) = self.alphas.iter().enumerate().find(|(_, a)| !(**a > 0.0)) {
            return Err(field(&format!("alphas[{i}]"), format!("must be positive, got {a}")));
        }
        if let Some((i, r)) = self.r_list.iter().enumerate().find(|(_, r)| !(**r >= 1.0)) {
            return Err(field(&format!("r_list[{i}]"), format!("must be >= 1, got {r}")));
        }
        Ok(())
    }

    /// The manifest with `n_list` and `seed` overrides applied.
    pub fn manifest(&self) -> Result<FamilyManifest> {
        let mut m = match &self.manifest {
            None => return Err(field("manifest", "required by this command")),
            Some(ManifestRef::Inline(m)) => (**m).clone(),
            Some(ManifestRef::Path(p)) => {
                let path = self.base.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                let de = &mut serde_json::Deserializer::from_str(&text);
                serde_path_to_error::deserialize(de).map_err(|e| {
                    field(&format!("manifest({}).{}", p.display(), e.path()), e.into_inner().to_string())
                })?
            }
        };
        if let Some(n) = &self.n_list {
            m.n_list = n.clone();
        }
        if let (Some(seed), Some(r)) = (self.seed, m.remainder.as_mut()) {
            r.seed = seed;
        }
        Ok(m)
    }

    pub fn family(&self) -> Result<SequenceFamily> {
        let m = self.manifest()?;
        m.build(&self.base).map_err(|e| match e {
            Error::InvalidArgument(msg) => field("manifest", msg),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config("{}").unwrap();
        assert_eq!(c.dimension, 1);
        assert_eq!(c.orlicz_tol, 1e-6);
        assert_eq!(c.decompose, DecomposeConfig::default());
        let c = parse_config(r#"{"decompose": {"scales": {"eps_b": 0.05}}}"#).unwrap();
        assert_eq!(c.decompose.scales.eps_b, 0.05);
        assert_eq!(c.decompose.scales.j_max, DecomposeConfig::default().scales.j_max);
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_config(r#"{"decompose": {"cores": {"eta_tol": -1.0}}}"#).unwrap_err().to_string();
        assert!(e.contains("decompose.cores.eta_tol"), "{e}");
        let e = parse_config(r#"{"decompose": {"quad": {"bogus": 1}}}"#).unwrap_err().to_string();
        assert!(e.contains("decompose.quad") && e.contains("bogus"), "{e}");
        let e = parse_config(r#"{"command": "plot"}"#).unwrap_err().to_string();
        assert!(e.contains("command") && e.contains("decompose") && e.contains("verify"), "{e}");
        let e = parse_config(r#"{"manifest": {"triples": []}}"#).unwrap_err().to_string();
        assert!(e.contains("manifest"), "{e}");
    }
}
