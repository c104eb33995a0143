//! Stratified k-fold cross-validation with a seeded shuffle.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::metrics::{evaluate_with_threshold, Confusion, Metrics};
use super::{ClassifierError, LabeledExample, Label, TrainerSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    /// False when some class had fewer than `k` members and a plain shuffle
    /// was used instead.
    pub stratified: bool,
    pub folds: Vec<Metrics>,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f_measure: f64,
    /// Confusion counts summed over all folds.
    pub pooled: Metrics,
}

/// Fold id for each example, in input order.
pub fn assign_folds(data: &[LabeledExample], k: usize, seed: u64) -> (Vec<usize>, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = alloc::vec![0usize; data.len()];
    let by_class = |label: Label| -> Vec<usize> {
        (0..data.len()).filter(|&i| data[i].label == label).collect()
    };
    let neg = by_class(Label::Negative);
    let pos = by_class(Label::Positive);
    let stratified = neg.len() >= k && pos.len() >= k;
    let groups = if stratified {
        alloc::vec![neg, pos]
    } else {
        alloc::vec![(0..data.len()).collect()]
    };
    let mut next = 0;
    for mut group in groups {
        group.shuffle(&mut rng);
        for idx in group {
            fold_of[idx] = next % k;
            next += 1;
        }
    }
    (fold_of, stratified)
}

pub fn cross_validate(
    data: &[LabeledExample],
    k: usize,
    seed: u64,
    trainer: &TrainerSpec,
) -> Result<CvReport, ClassifierError> {
    cross_validate_with_threshold(data, k, seed, trainer, 0.0)
}

pub fn cross_validate_with_threshold(
    data: &[LabeledExample],
    k: usize,
    seed: u64,
    trainer: &TrainerSpec,
    threshold: f64,
) -> Result<CvReport, ClassifierError> {
    if k < 2 {
        return Err(ClassifierError::InvalidParameter("k must be at least 2"));
    }
    if data.len() < k {
        return Err(ClassifierError::TooFewExamples {
            needed: k,
            got: data.len(),
        });
    }
    let (fold_of, stratified) = assign_folds(data, k, seed);
    let mut folds = Vec::with_capacity(k);
    let mut pooled = Confusion::default();
    for fold in 0..k {
        let (mut train, mut test) = (Vec::new(), Vec::new());
        for (ex, &f) in data.iter().zip(&fold_of) {
            if f == fold {
                test.push(ex.clone());
            } else {
                train.push(ex.clone());
            }
        }
        let model = trainer.train(&train)?;
        let m = evaluate_with_threshold(&model, &test, threshold);
        pooled.add(&m.confusion);
        folds.push(m);
    }
    let mean = |f: fn(&Metrics) -> f64| folds.iter().map(f).sum::<f64>() / k as f64;
    Ok(CvReport {
        k,
        seed,
        stratified,
        mean_precision: mean(|m| m.precision),
        mean_recall: mean(|m| m.recall),
        mean_f_measure: mean(|m| m.f_measure),
        pooled: Metrics::from_confusion(pooled),
        folds,
    })
}
