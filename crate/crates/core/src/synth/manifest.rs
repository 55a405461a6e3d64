//! JSON family manifests.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{moser_profile, spread_remainder, superpose, CoreLaw, FamilyEntry, Profile, ScaleLaw, ScaleTriple};
use crate::error::{Error, Result};
use crate::numerics::Dimension;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileRef {
    Preset(String),
    File { csv: PathBuf },
    Inline(Profile),
}

impl ProfileRef {
    pub fn resolve(&self, base: &Path) -> Result<Profile> {
        match self {
            ProfileRef::Preset(name) => Profile::preset(name),
            ProfileRef::File { csv } => Profile::from_csv(&base.join(csv)),
            ProfileRef::Inline(p) => Ok(p.clone()),
        }
    }
}

fn origin() -> CoreLaw {
    CoreLaw::Fixed([0.0, 0.0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleSpec {
    pub alpha_expr: ScaleLaw,
    #[serde(default = "origin")]
    pub core: CoreLaw,
    pub profile: ProfileRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemainderSpec {
    pub epsilon: f64,
    pub k0: i32,
    pub k1: i32,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyManifest {
    #[serde(default = "one")]
    pub dimension: u32,
    pub n_list: Vec<u32>,
    #[serde(default)]
    pub triples: Vec<TripleSpec>,
    #[serde(default)]
    pub remainder: Option<RemainderSpec>,
    /// Add the exact Moser function at this scale law.
    #[serde(default)]
    pub moser: Option<ScaleLaw>,
    #[serde(default)]
    pub allow_degenerate: bool,
}

/// A synthetic sequence `(u_n)` over an index list, with its ground truth.
#[derive(Debug, Clone)]
pub struct SequenceFamily {
    pub dim: Dimension,
    pub n_list: Vec<u32>,
    pub triples: Vec<ScaleTriple>,
    pub moser: Option<ScaleLaw>,
    pub remainder: Option<RemainderSpec>,
    pub entries: Vec<FamilyEntry>,
}

impl SequenceFamily {
    /// Largest `n` first is never assumed; entries follow `n_list` order.
    pub fn last(&self) -> Option<&FamilyEntry> {
        self.entries.last()
    }
}

impl FamilyManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self, base: &Path) -> Result<SequenceFamily> {
        let dim = Dimension::new(self.dimension)?;
        if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("n_list must be nonempty and increasing"));
        }
        let triples = self
            .triples
            .iter()
            .map(|t| {
                Ok(ScaleTriple { alpha: t.alpha_expr.clone(), core: t.core.clone(), profile: t.profile.resolve(base)? })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(m) = &self.moser {
            m.validate(&self.n_list)?;
            if dim.n() != 1 {
                return Err(Error::invalid("the Moser family is planar (N = 1)"));
            }
        }
        let remainder = match &self.remainder {
            Some(r) => Some(spread_remainder(dim, r.epsilon, r.k0, r.k1, r.seed)?),
            None => None,
        };
        let mut entries = Vec::with_capacity(self.n_list.len());
        for idx in 0..self.n_list.len() {
            let mut e = superpose(dim, &triples, remainder.as_ref(), &self.n_list, idx, self.allow_degenerate)?;
            if let Some(m) = &self.moser {
                let alpha = m.eval(self.n_list[idx], idx);
                e.profile.extend(&moser_profile(alpha)?);
                e.truth.push((alpha, [0.0, 0.0]));
            }
            entries.push(e);
        }
        Ok(SequenceFamily {
            dim,
            n_list: self.n_list.clone(),
            triples,
            moser: self.moser.clone(),
            remainder: self.remainder,
            entries,
        })
    }
}
