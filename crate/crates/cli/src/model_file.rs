//! Self-validating on-disk model envelope.

use serde::{Deserialize, Serialize};

use cowhealth::baselines::BaselineModel;
use cowhealth::classifier::Classifier;
use cowhealth::herd::{FEATURE_NAMES, NUM_FEATURES};
use cowhealth::MulticlassModel;

use crate::error::{CliError, CliResult};
use crate::output::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StoredModel {
    Hposvm { model: MulticlassModel },
    Baseline { model: BaselineModel },
}

impl StoredModel {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Hposvm { .. } => "hposvm",
            Self::Baseline { model } => model.name(),
        }
    }

    pub fn classifier(&self) -> &dyn Classifier {
        match self {
            Self::Hposvm { model } => model,
            Self::Baseline { model } => model,
        }
    }
}

/// Where a model came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub seed: u64,
    pub data_sha256: String,
    /// `None` when trained on every row.
    pub train_fraction: Option<f64>,
    pub split_seed: u64,
    /// Hash of the tuning output the hyperparameters came from.
    pub tuner_sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub config_sha256: String,
    pub kind: String,
    pub feature_names: Vec<String>,
    pub provenance: Provenance,
    pub model: StoredModel,
}

impl ModelFile {
    pub fn new(model: StoredModel, provenance: Provenance, config_sha256: String) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config_sha256,
            kind: model.kind().to_string(),
            feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            provenance,
            model,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        crate::output::json_bytes(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> CliResult<Self> {
        let file: Self = serde_json::from_slice(bytes).map_err(|e| CliError::data("model file", e))?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> CliResult<()> {
        let fail = |m: String| Err(CliError::data("model file", m));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!("unsupported schema_version {}", self.schema_version));
        }
        if self.feature_names.len() != NUM_FEATURES || self.feature_names.iter().zip(FEATURE_NAMES).any(|(a, b)| a != b) {
            return fail("feature names differ from the 30-feature schema".into());
        }
        if self.kind != self.model.kind() {
            return fail(format!("kind {:?} does not match stored {} model", self.kind, self.model.kind()));
        }
        let checked = match &self.model {
            StoredModel::Hposvm { model } => model.check().map_err(|e| e.to_string()),
            StoredModel::Baseline { model } => model.check(),
        };
        if let Err(e) = checked {
            return fail(e);
        }
        let dim = self.model.classifier().dim();
        if dim != NUM_FEATURES {
            return fail(format!("model expects {dim} features, schema has {NUM_FEATURES}"));
        }
        Ok(())
    }
}
