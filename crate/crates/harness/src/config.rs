//! Experiment configuration read from JSON.
//!
//! ```json
//! {
//!   "check": "hardy_sharp",
//!   "params": { "p": 2, "delta_max": 50 },
//!   "quad": { "rel_tol": 1e-10 },
//!   "out": "reports/hardy.csv",
//!   "seed": 7,
//!   "tol": 1e-3
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use hardyspace::{make_function, FnSpec, QuadratureConfig, RealFn, WeightSpec};

use crate::checks;
use crate::error::{HarnessError, Result};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Harness default: tighter than the library default so closed-form checks
/// can resolve 1e-8 relative errors.
pub fn default_quad() -> QuadratureConfig {
    QuadratureConfig::default().with_rel_tol(1e-10)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadOverrides {
    pub lower_cut: Option<f64>,
    pub upper_cut: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

impl QuadOverrides {
    pub fn apply(&self, mut base: QuadratureConfig) -> QuadratureConfig {
        if let Some(v) = self.lower_cut {
            base.lower_cut = v;
        }
        if let Some(v) = self.upper_cut {
            base.upper_cut = v;
        }
        if let Some(v) = self.rel_tol {
            base.rel_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            base.max_subdivisions = v;
        }
        base
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// A registered check name or `all`.
    pub check: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub quad: QuadOverrides,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn named(check: &str) -> Self {
        ExperimentConfig {
            check: check.to_string(),
            params: Map::new(),
            quad: QuadOverrides::default(),
            out: None,
            seed: None,
            tol: None,
        }
    }

    /// Parse and validate. Unknown check names are rejected here, before any
    /// numerical work.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.check != "all" && checks::find(&self.check).is_none() {
            return Err(HarnessError::UnknownCheck(self.check.clone()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(HarnessError::ConfigParse(format!("tol must be positive, got {t}")));
            }
        }
        self.quad_config().validate()?;
        Ok(())
    }

    pub fn quad_config(&self) -> QuadratureConfig {
        self.quad.apply(default_quad())
    }
}

/// Typed access to the free-form `params` object.
#[derive(Debug, Clone, Copy)]
pub struct Params<'a>(pub &'a Map<String, Value>);

impl<'a> Params<'a> {
    fn bad(key: &str, detail: impl Into<String>) -> HarnessError {
        HarnessError::Param {
            key: key.to_string(),
            detail: detail.into(),
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| Self::bad(key, "expected a number")),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Self::bad(key, "expected a nonnegative integer")),
        }
    }

    pub fn vec_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.0.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| Self::bad(key, "expected numbers")))
                .collect(),
            Some(v) => v
                .as_f64()
                .map(|x| vec![x])
                .ok_or_else(|| Self::bad(key, "expected a number or an array of numbers")),
        }
    }

    pub fn function(&self, key: &str) -> Result<Option<RealFn>> {
        let Some(v) = self.0.get(key) else {
            return Ok(None);
        };
        let spec: FnSpec =
            serde_json::from_value(v.clone()).map_err(|e| Self::bad(key, e.to_string()))?;
        Ok(Some(make_function(&spec)?))
    }

    pub fn weight(&self, key: &str) -> Result<Option<WeightSpec>> {
        let Some(v) = self.0.get(key) else {
            return Ok(None);
        };
        let w: WeightSpec =
            serde_json::from_value(v.clone()).map_err(|e| Self::bad(key, e.to_string()))?;
        w.validate()?;
        Ok(Some(w))
    }
}
