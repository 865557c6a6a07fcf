// Copyright 2026 The dam-forecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::CsvSchema;
use crate::error::{Error, Result};
use crate::features::DEFAULT_PCA_K;
use crate::outliers::{Bandwidth, KdeConfig, Kernel, RpcaConfig, DEFAULT_IQR_K};
use crate::regression::{ModelSuiteConfig, SplitConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PcaSettings {
    pub enabled: bool,
    pub k: usize,
}

impl Default for PcaSettings {
    fn default() -> Self {
        Self {
            enabled: true,
            k: DEFAULT_PCA_K,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KdeSettings {
    pub kernel: Kernel,
    pub bandwidth: Bandwidth,
    /// Points with leave-one-out density below this quantile are flagged.
    pub quantile: f64,
}

impl Default for KdeSettings {
    fn default() -> Self {
        Self {
            kernel: Kernel::default(),
            bandwidth: Bandwidth::Auto,
            quantile: 0.01,
        }
    }
}

impl KdeSettings {
    pub fn config(&self) -> KdeConfig {
        KdeConfig {
            kernel: self.kernel,
            bandwidth: self.bandwidth,
        }
    }
}

/// Everything a run needs. Loaded from a JSON file, then overridden by
/// command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    /// Preset name (`default`, `clean`) or path to a JSON synth spec.
    pub synth: Option<String>,
    pub schema: CsvSchema,
    pub iqr_k: f64,
    pub iqr_per_hour: bool,
    pub rpca: RpcaConfig,
    pub pca: PcaSettings,
    pub split: SplitConfig,
    pub kde: KdeSettings,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: None,
            synth: None,
            schema: CsvSchema::default(),
            iqr_k: DEFAULT_IQR_K,
            iqr_per_hour: false,
            rpca: RpcaConfig::default(),
            pca: PcaSettings::default(),
            split: SplitConfig::default(),
            kde: KdeSettings::default(),
            out_dir: PathBuf::from("out"),
            seed: 42,
        }
    }
}

impl PipelineConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Open {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Range checks on every numeric knob. The data source is checked
    /// separately because some subcommands do not need one.
    pub fn validate(&self) -> Result<()> {
        if !(self.iqr_k > 0.0 && self.iqr_k.is_finite()) {
            return Err(Error::Config(format!(
                "iqr_k must be > 0, got {}",
                self.iqr_k
            )));
        }
        self.rpca.validate()?;
        if !(1..=7).contains(&self.pca.k) {
            return Err(Error::Config(format!(
                "pca.k must be in 1..=7, got {}",
                self.pca.k
            )));
        }
        let f = self.split.train_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::Config(format!(
                "split.train_fraction must be in (0, 1), got {f}"
            )));
        }
        if !(self.kde.quantile > 0.0 && self.kde.quantile < 1.0) {
            return Err(Error::Config(format!(
                "kde.quantile must be in (0, 1), got {}",
                self.kde.quantile
            )));
        }
        if let Bandwidth::Fixed(h) = self.kde.bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Config(format!("kde bandwidth must be > 0, got {h}")));
            }
        }
        if !self.schema.delimiter.is_ascii() {
            return Err(Error::Config(
                "schema.delimiter must be a single ASCII character".into(),
            ));
        }
        Ok(())
    }

    pub fn suite(&self) -> ModelSuiteConfig {
        ModelSuiteConfig {
            iqr_k: self.iqr_k,
            iqr_per_hour: self.iqr_per_hour,
            rpca: self.rpca,
            pca_enabled: self.pca.enabled,
            pca_k: self.pca.k,
            split: self.split,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outliers::LambdaMode;

    #[test]
    fn round_trip() {
        let mut c = PipelineConfig {
            synth: Some("default".into()),
            ..Default::default()
        };
        c.rpca.lambda_mode = LambdaMode::Explicit(0.07);
        c.kde.bandwidth = Bandwidth::Fixed(2.5);
        let back = PipelineConfig::from_json_str(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let c =
            PipelineConfig::from_json_str(r#"{"iqr_k": 3.0, "rpca": {"lambda_mode": "paper"}}"#)
                .unwrap();
        assert_eq!(c.iqr_k, 3.0);
        assert_eq!(c.rpca.lambda_mode, LambdaMode::Paper);
        assert_eq!(c.rpca.max_iterations, 500);
        assert_eq!(c.pca.k, 5);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(PipelineConfig::from_json_str(r#"{"iqr": 1.5}"#).is_err());
        assert!(PipelineConfig::from_json_str(r#"{"rpca": {"tol": 1e-5}}"#).is_err());
        assert!(PipelineConfig::from_json_str(r#"{"pca": {"k": 3, "whiten": true}}"#).is_err());
    }

    #[test]
    fn range_checks() {
        let ok = PipelineConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            PipelineConfig {
                iqr_k: 0.0,
                ..ok.clone()
            },
            PipelineConfig {
                pca: PcaSettings {
                    enabled: true,
                    k: 8,
                },
                ..ok.clone()
            },
            PipelineConfig {
                split: SplitConfig {
                    train_fraction: 1.0,
                },
                ..ok.clone()
            },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))));
        }
    }
}
