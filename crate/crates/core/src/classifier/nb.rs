//! Multinomial naive Bayes with additive smoothing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_both_classes, ClassifierError, FeatureVector, LabeledExample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub alpha: f64,
    /// Feature string → row in `log_likelihood`.
    pub vocabulary: BTreeMap<String, usize>,
    /// Indexed by [`super::Label::index`].
    pub log_prior: [f64; 2],
    pub log_likelihood: Vec<[f64; 2]>,
}

pub fn train_nb(data: &[LabeledExample], alpha: f64) -> Result<NbModel, ClassifierError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(ClassifierError::InvalidParameter("alpha must be positive"));
    }
    check_both_classes(data)?;

    let mut vocabulary = BTreeMap::new();
    for ex in data {
        for f in ex.vector.iter() {
            let next = vocabulary.len();
            vocabulary.entry(String::from(f)).or_insert(next);
        }
    }
    let mut counts = alloc::vec![[0.0f64; 2]; vocabulary.len()];
    let mut totals = [0.0f64; 2];
    let mut docs = [0usize; 2];
    for ex in data {
        let c = ex.label.index();
        docs[c] += 1;
        for f in ex.vector.iter() {
            counts[vocabulary[f]][c] += 1.0;
            totals[c] += 1.0;
        }
    }
    let n = data.len() as f64;
    let v = vocabulary.len() as f64;
    let log_prior = [
        libm::log(docs[0] as f64 / n),
        libm::log(docs[1] as f64 / n),
    ];
    let log_likelihood = counts
        .iter()
        .map(|row| {
            [
                libm::log((row[0] + alpha) / (totals[0] + alpha * v)),
                libm::log((row[1] + alpha) / (totals[1] + alpha * v)),
            ]
        })
        .collect();
    Ok(NbModel {
        alpha,
        vocabulary,
        log_prior,
        log_likelihood,
    })
}

impl NbModel {
    /// Unnormalized log joint per class. Features outside the vocabulary
    /// contribute the same smoothed mass to both classes and are skipped.
    pub fn log_joint(&self, v: &FeatureVector) -> [f64; 2] {
        let mut joint = self.log_prior;
        for f in v.iter() {
            if let Some(&row) = self.vocabulary.get(f) {
                joint[0] += self.log_likelihood[row][0];
                joint[1] += self.log_likelihood[row][1];
            }
        }
        joint
    }

    /// Normalized log posteriors.
    pub fn log_posteriors(&self, v: &FeatureVector) -> [f64; 2] {
        let joint = self.log_joint(v);
        let max = joint[0].max(joint[1]);
        let lse = max + libm::log(libm::exp(joint[0] - max) + libm::exp(joint[1] - max));
        [joint[0] - lse, joint[1] - lse]
    }

    /// log P(positive | v) − log P(negative | v).
    pub fn margin(&self, v: &FeatureVector) -> f64 {
        let joint = self.log_joint(v);
        joint[1] - joint[0]
    }
}
