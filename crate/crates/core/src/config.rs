//! Model and flag configuration files (TOML or JSON).
//!
//! ```toml
//! [model]
//! type = "projective"
//! n = 2
//! d = 2
//!
//! [flag]
//! variant = "curve"
//! xi1 = "z0 z2 - z1^2"
//! param = ["u^2", "u t", "t^2"]
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::flags::FlagSpec;
use crate::models::Model;
use crate::poly::{CurveParam, MultiPoly};

/// Environment variable bounding the truncation level.
pub const MAX_LEVEL_CAP_VAR: &str = "OKOUNKOV_MAX_LEVEL_CAP";
pub const DEFAULT_MAX_LEVEL_CAP: u32 = 12;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Projective { n: usize, d: u32 },
    Toric { vertices: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum FlagConfig {
    Coordinate { order: Vec<usize> },
    Curve { xi1: String, param: Vec<String> },
    ToricVertex { vertex: Vec<i64>, edges: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: ModelConfig,
    pub flag: FlagConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigFormat {
    Toml,
    Json,
}

impl ModelConfig {
    pub fn build(&self) -> Result<Model> {
        match self {
            ModelConfig::Projective { n, d } => Model::projective(*n, *d),
            ModelConfig::Toric { vertices } => Model::toric(vertices),
        }
    }
}

impl FlagConfig {
    /// Builds the flag; curve forms are read in the variables of `model`.
    pub fn build(&self, model: &Model) -> Result<FlagSpec> {
        Ok(match self {
            FlagConfig::Coordinate { order } => FlagSpec::Coordinate { order: order.clone() },
            FlagConfig::Curve { xi1, param } => {
                let vars = match model {
                    Model::Projective(p) => p.num_vars(),
                    Model::Toric(_) => return Err(Error::Config("curve flags need a projective model".into())),
                };
                let xi1 = MultiPoly::parse(xi1, vars).map_err(|e| Error::Config(format!("xi1: {e}")))?;
                let comps: Vec<&str> = param.iter().map(String::as_str).collect();
                let param = CurveParam::parse(&comps).map_err(|e| Error::Config(format!("param: {e}")))?;
                FlagSpec::Curve { xi1, param }
            }
            FlagConfig::ToricVertex { vertex, edges } => {
                FlagSpec::ToricVertex { vertex: vertex.clone(), edges: edges.clone() }
            }
        })
    }
}

pub fn parse_config(text: &str, format: ConfigFormat) -> Result<(Model, FlagSpec)> {
    let cfg: ConfigFile = match format {
        ConfigFormat::Toml => toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?,
        ConfigFormat::Json => serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?,
    };
    let model = cfg.model.build().map_err(|e| match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    })?;
    let flag = cfg.flag.build(&model)?;
    Ok((model, flag))
}

/// Reads a config file; `.json` files are JSON, everything else TOML.
pub fn load_config(path: &Path) -> Result<(Model, FlagSpec)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => ConfigFormat::Json,
        _ => ConfigFormat::Toml,
    };
    parse_config(&text, format)
}

/// The level cap from the environment, defaulting to 12.
pub fn max_level_cap() -> Result<u32> {
    match std::env::var(MAX_LEVEL_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("{MAX_LEVEL_CAP_VAR}={v:?} is not a level"))),
        Err(_) => Ok(DEFAULT_MAX_LEVEL_CAP),
    }
}
