//! Run configuration read from a TOML file. Every table rejects unknown keys
//! so that a typo fails loudly instead of silently falling back to a default.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub output: OutputSection,
    pub source: Option<SourceSection>,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub equiv: EquivSection,
    #[serde(default)]
    pub erm: ErmSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub losses: Option<Vec<String>>,
    pub measures: Option<usize>,
    pub seed: Option<u64>,
    pub min_cells: Option<usize>,
    pub max_cells: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivSection {
    pub generators: Option<Vec<String>>,
    pub pairs: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErmSection {
    pub losses: Option<Vec<String>>,
    pub n: Option<Vec<usize>>,
    pub seeds: Option<u64>,
    pub seed_base: Option<u64>,
    pub grid_points: Option<usize>,
    pub gamma_bound: Option<f64>,
    pub mismatch: Option<String>,
    pub mismatch_base: Option<String>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("malformed config {}", path.display()))
    }
}
