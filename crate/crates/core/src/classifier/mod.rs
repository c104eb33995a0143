//! Simile vs. non-simile classification over six lexical features.
//!
//! Each candidate becomes a bag of namespaced strings: the whole phrase, its
//! stemmed form, the left side (before the connector), its stem, the right
//! side and its stem. Two learners are provided, multinomial naive Bayes and
//! an SVM trained with SMO, plus metrics and stratified cross-validation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::extractor::{CandidateSimile, CANONICAL_CONNECTOR};
use crate::stemmer::{stem_phrase, StemRuleSet};
use crate::text::{fold_case, is_connector};

pub mod cv;
pub mod metrics;
pub mod nb;
pub mod svm;
pub mod synthetic;

pub use cv::{cross_validate, CvReport};
pub use metrics::{evaluate, Confusion, Metrics};
pub use nb::{train_nb, NbModel};
pub use svm::{train_svm, Kernel, SvmModel, SvmParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn index(self) -> usize {
        match self {
            Label::Negative => 0,
            Label::Positive => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }
}

/// Namespaces of the six lexical features, in emission order.
pub const NAMESPACES: [&str; 6] = ["full", "full_stem", "left", "left_stem", "right", "right_stem"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FeatureVector {
    pub features: Vec<String>,
}

impl FeatureVector {
    pub fn new<I, S>(features: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FeatureVector {
            features: features.into_iter().map(Into::into).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub vector: FeatureVector,
    pub label: Label,
}

/// One line of labeled training data: a candidate's parts and its label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPhrase {
    pub label: Label,
    pub left: String,
    pub connector_surface: String,
    pub right: String,
}

impl LabeledPhrase {
    pub fn to_example(&self, rules: &StemRuleSet) -> LabeledExample {
        LabeledExample {
            vector: featurize_parts(&self.left, &self.connector_surface, &self.right, rules),
            label: self.label,
        }
    }
}

/// The six features from the parts of a candidate. Text is case-folded; the
/// stemmed full phrase uses the canonical connector.
pub fn featurize_parts(
    left: &str,
    connector_surface: &str,
    right: &str,
    rules: &StemRuleSet,
) -> FeatureVector {
    let left = collapse(&fold_case(left));
    let right = collapse(&fold_case(right));
    let connector = collapse(&fold_case(connector_surface));
    let full = join3(&left, &connector, &right);
    let stem_connector = if is_connector(&connector) {
        CANONICAL_CONNECTOR.to_string()
    } else {
        connector.clone()
    };
    let stem_or_empty = |s: &str| stem_phrase(s, rules).unwrap_or_default();
    let full_stem = stem_or_empty(&join3(&left, &stem_connector, &right));
    let left_stem = stem_or_empty(&left);
    let right_stem = stem_or_empty(&right);
    FeatureVector::new([
        format!("full:{full}"),
        format!("full_stem:{full_stem}"),
        format!("left:{left}"),
        format!("left_stem:{left_stem}"),
        format!("right:{right}"),
        format!("right_stem:{right_stem}"),
    ])
}

pub fn featurize(c: &CandidateSimile, rules: &StemRuleSet) -> FeatureVector {
    featurize_parts(&c.left, &c.connector_surface, &c.right, rules)
}

fn collapse(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for w in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

fn join3(a: &str, b: &str, c: &str) -> String {
    let mut out = String::new();
    for part in [a, b, c] {
        if part.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(part);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierError {
    SingleClass,
    EmptyData,
    InvalidParameter(&'static str),
    NotConverged {
        iterations: usize,
        max_violation: f64,
    },
    TooFewExamples {
        needed: usize,
        got: usize,
    },
}

impl fmt::Display for ClassifierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierError::SingleClass => f.write_str("training data must contain both classes"),
            ClassifierError::EmptyData => f.write_str("no examples"),
            ClassifierError::InvalidParameter(p) => write!(f, "invalid parameter: {p}"),
            ClassifierError::NotConverged {
                iterations,
                max_violation,
            } => write!(
                f,
                "SMO did not converge after {iterations} iterations (KKT gap {max_violation:.3e})"
            ),
            ClassifierError::TooFewExamples { needed, got } => {
                write!(f, "need at least {needed} examples, got {got}")
            }
        }
    }
}

impl core::error::Error for ClassifierError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// Log-posterior margin (nb) or decision value (svm).
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrainedModel {
    Nb(NbModel),
    Svm(SvmModel),
}

impl TrainedModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TrainedModel::Nb(_) => "nb",
            TrainedModel::Svm(_) => "svm",
        }
    }

    pub fn score(&self, v: &FeatureVector) -> f64 {
        match self {
            TrainedModel::Nb(m) => m.margin(v),
            TrainedModel::Svm(m) => m.decision_value(v),
        }
    }

    /// Positive iff the score is strictly above `threshold` (ties go negative).
    pub fn predict_with_threshold(&self, v: &FeatureVector, threshold: f64) -> Prediction {
        let score = self.score(v);
        let label = if score > threshold {
            Label::Positive
        } else {
            Label::Negative
        };
        Prediction { label, score }
    }

    pub fn predict(&self, v: &FeatureVector) -> Prediction {
        self.predict_with_threshold(v, 0.0)
    }
}

/// Which learner to fit, with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainerSpec {
    Nb { alpha: f64 },
    Svm(SvmParams),
}

impl TrainerSpec {
    pub fn train(&self, data: &[LabeledExample]) -> Result<TrainedModel, ClassifierError> {
        match *self {
            TrainerSpec::Nb { alpha } => train_nb(data, alpha).map(TrainedModel::Nb),
            TrainerSpec::Svm(params) => train_svm(data, &params).map(TrainedModel::Svm),
        }
    }
}

pub(crate) fn check_both_classes(data: &[LabeledExample]) -> Result<(), ClassifierError> {
    if data.is_empty() {
        return Err(ClassifierError::EmptyData);
    }
    let has = |l| data.iter().any(|e| e.label == l);
    if has(Label::Positive) && has(Label::Negative) {
        Ok(())
    } else {
        Err(ClassifierError::SingleClass)
    }
}
