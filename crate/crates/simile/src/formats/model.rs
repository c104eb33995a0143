//! Versioned model container. JSON with round-trip float formatting, so every
//! parameter survives save/load bit for bit.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use simile_core::classifier::{featurize, featurize_parts, Prediction, SvmParams, TrainedModel, TrainerSpec};
use simile_core::{normalize_connector, CandidateSimile, StemRuleSet};
use thiserror::Error;

pub const MODEL_FORMAT: &str = "simile-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    /// Stemmer rule file the features were built with; `None` means the
    /// built-in rules.
    #[serde(default)]
    pub stem_rules: Option<String>,
    pub model: TrainedModel,
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("not a model file (format {0:?})")]
    Format(String),
    #[error("unsupported model version {0}, expected {MODEL_VERSION}")]
    Version(u32),
    #[error("embedded stemmer rules: {0}")]
    Rules(simile_core::stemmer::StemError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ModelFile {
    pub fn new(model: TrainedModel, stem_rules: Option<String>) -> Self {
        ModelFile {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            stem_rules,
            model,
        }
    }

    pub fn rules(&self) -> Result<StemRuleSet, ModelFileError> {
        match &self.stem_rules {
            Some(text) => StemRuleSet::parse(text).map_err(ModelFileError::Rules),
            None => Ok(StemRuleSet::default_serbian()),
        }
    }

    /// The trainer that produced this model, for cross-validating with the
    /// same hyperparameters.
    pub fn trainer(&self) -> TrainerSpec {
        match &self.model {
            TrainedModel::Nb(m) => TrainerSpec::Nb { alpha: m.alpha },
            TrainedModel::Svm(m) => TrainerSpec::Svm(SvmParams {
                c: m.c,
                kernel: m.kernel,
                tol: m.tol,
                max_iter: None,
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model fields are finite and serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelFileError> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.format != MODEL_FORMAT {
            return Err(ModelFileError::Format(file.format));
        }
        if file.version != MODEL_VERSION {
            return Err(ModelFileError::Version(file.version));
        }
        file.rules()?;
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let json = self.to_json();
        super::write_atomic(path, |w| io::Write::write_all(w, json.as_bytes()))
    }

    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// A loaded model with its stemmer rules, ready to score.
#[derive(Debug, Clone)]
pub struct Scorer {
    pub model: TrainedModel,
    pub rules: StemRuleSet,
}

impl Scorer {
    pub fn new(file: ModelFile) -> Result<Self, ModelFileError> {
        Ok(Scorer {
            rules: file.rules()?,
            model: file.model,
        })
    }

    pub fn classify(&self, c: &CandidateSimile, threshold: f64) -> Prediction {
        self.model
            .predict_with_threshold(&featurize(c, &self.rules), threshold)
    }

    /// Score a free-text phrase, split at its first connector. `None` when it
    /// has no connector.
    pub fn score_phrase(&self, phrase: &str) -> Option<f64> {
        let words: Vec<&str> = phrase.split_whitespace().collect();
        let at = words.iter().position(|w| normalize_connector(w).is_ok())?;
        let v = featurize_parts(
            &words[..at].join(" "),
            words[at],
            &words[at + 1..].join(" "),
            &self.rules,
        );
        Some(self.model.score(&v))
    }
}
