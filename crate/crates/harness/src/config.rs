//! Harness configuration file (JSON). Every field is optional.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use rpn_core::{BankSpec, DiscSpec, MatchConfig, PipelineParams};

use crate::sweep::MetricsOn;
use crate::transform::Interpolation;

/// Φ = N = 200 spiral disc filling a 200 × 200 frame.
pub fn default_disc() -> DiscSpec {
    DiscSpec::spiral(200, 200, 100.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub disc: DiscSpec,
    pub params: PipelineParams,
    /// Bank used by `bank run`, `enroll`, `match` and the demo. Defaults to the
    /// standard three-orientation, three-density bank on `disc`.
    pub bank: Option<BankSpec>,
    #[serde(rename = "match")]
    pub matching: MatchConfig,
    pub interpolation: Interpolation,
    pub metrics_on: MetricsOn,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            disc: default_disc(),
            params: PipelineParams::default(),
            bank: None,
            matching: MatchConfig::default(),
            interpolation: Interpolation::Bilinear,
            metrics_on: MetricsOn::Normalized,
        }
    }
}

impl HarnessConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.disc.validate()?;
        self.params.validate()?;
        self.bank_spec().validate()?;
        Ok(())
    }

    pub fn bank_spec(&self) -> BankSpec {
        self.bank.clone().unwrap_or_else(|| BankSpec::standard(self.disc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg: HarnessConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, HarnessConfig::default());
        assert_eq!(cfg.bank_spec().densities, vec![200, 100, 50]);
    }

    #[test]
    fn partial_override() {
        let cfg: HarnessConfig = serde_json::from_str(
            r#"{"disc": {"arms": 30, "rings": 10, "radius": 10.0, "geometry": "spoke", "twist_gain": 0.0},
                "match": {"prune_threshold": 0.5, "warmup": 2}}"#,
        )
        .unwrap();
        assert_eq!(cfg.disc.arms, 30);
        assert_eq!(cfg.matching.warmup, 2);
        assert!(cfg.validate().is_ok());
        assert!(serde_json::from_str::<HarnessConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
