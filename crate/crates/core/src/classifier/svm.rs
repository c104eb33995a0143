//! Soft-margin SVM trained by sequential minimal optimization.
//!
//! Each step optimizes the pair of multipliers that most violates the KKT
//! conditions (largest `-y·∇` in the "up" set against the smallest in the
//! "low" set). Training stops once that gap is within `tol`, which bounds
//! every multiplier's KKT residual by `tol`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_both_classes, ClassifierError, FeatureVector, LabeledExample};

/// Sorted `(dimension, value)` pairs.
pub type SparseVector = Vec<(u32, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Kernel {
    Linear,
    /// `(x·y + 1)^degree`
    Polynomial { degree: u32 },
}

pub fn dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut sum) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                sum += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

fn powu(mut base: f64, mut exp: u32) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

impl Kernel {
    pub fn eval(&self, a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
        match *self {
            Kernel::Linear => dot(a, b),
            Kernel::Polynomial { degree } => powu(dot(a, b) + 1.0, degree),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub kernel: Kernel,
    pub tol: f64,
    /// Cap on pair updates; `None` scales with the data size.
    pub max_iter: Option<usize>,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            kernel: Kernel::Polynomial { degree: 2 },
            tol: 1e-3,
            max_iter: None,
        }
    }
}

impl SvmParams {
    fn validate(&self) -> Result<(), ClassifierError> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ClassifierError::InvalidParameter("C must be positive"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(ClassifierError::InvalidParameter("tol must be positive"));
        }
        if let Kernel::Polynomial { degree: 0 } = self.kernel {
            return Err(ClassifierError::InvalidParameter("degree must be at least 1"));
        }
        Ok(())
    }
}

/// Raw dual solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// Final maximal violating-pair gap.
    pub gap: f64,
}

const TAU: f64 = 1e-12;

/// Solve the dual for points `x` with labels `y` in {−1, +1}.
pub fn smo(x: &[SparseVector], y: &[f64], params: &SvmParams) -> Result<SmoSolution, ClassifierError> {
    params.validate()?;
    let n = x.len();
    if n == 0 {
        return Err(ClassifierError::EmptyData);
    }
    if !(y.iter().any(|&v| v > 0.0) && y.iter().any(|&v| v < 0.0)) {
        return Err(ClassifierError::SingleClass);
    }
    let c = params.c;
    let kernel = params.kernel;
    let max_iter = params.max_iter.unwrap_or_else(|| 100_000usize.max(200 * n));
    let diag: Vec<f64> = x.iter().map(|xi| kernel.eval(xi, xi)).collect();

    let mut alpha = alloc::vec![0.0f64; n];
    // u[k] = Σ α_l y_l K(x_l, x_k), the decision value without bias.
    let mut u = alloc::vec![0.0f64; n];
    let in_up = |a: f64, yk: f64| (yk > 0.0 && a < c) || (yk < 0.0 && a > 0.0);
    let in_low = |a: f64, yk: f64| (yk > 0.0 && a > 0.0) || (yk < 0.0 && a < c);

    let mut iterations = 0;
    loop {
        // v_k = y_k − u_k; KKT holds for some bias b iff max_up v ≤ min_low v.
        let mut up = None::<(usize, f64)>;
        let mut low = None::<(usize, f64)>;
        for k in 0..n {
            let v = y[k] - u[k];
            if in_up(alpha[k], y[k]) && up.is_none_or(|(_, best)| v > best) {
                up = Some((k, v));
            }
            if in_low(alpha[k], y[k]) && low.is_none_or(|(_, best)| v < best) {
                low = Some((k, v));
            }
        }
        let (Some((i, m)), Some((j, big_m))) = (up, low) else {
            // One set empty: every multiplier sits at a bound compatible with KKT.
            let bias = up.or(low).map(|(_, v)| v).unwrap_or(0.0);
            return Ok(SmoSolution {
                alpha,
                bias,
                iterations,
                gap: 0.0,
            });
        };
        let gap = m - big_m;
        if gap <= params.tol {
            let bias = bias_from(&alpha, &u, y, c).unwrap_or((m + big_m) / 2.0);
            return Ok(SmoSolution {
                alpha,
                bias,
                iterations,
                gap,
            });
        }
        if iterations >= max_iter {
            return Err(ClassifierError::NotConverged {
                iterations,
                max_violation: gap,
            });
        }
        iterations += 1;

        let kij = kernel.eval(&x[i], &x[j]);
        let mut eta = diag[i] + diag[j] - 2.0 * kij;
        if eta <= 0.0 {
            eta = TAU;
        }
        let (ai, aj) = (alpha[i], alpha[j]);
        let (lo, hi) = if y[i] != y[j] {
            ((aj - ai).max(0.0), (c + aj - ai).min(c))
        } else {
            ((ai + aj - c).max(0.0), (ai + aj).min(c))
        };
        // E_i − E_j with E_k = u_k − y_k equals v_j − v_i.
        let mut aj_new = aj + y[j] * (big_m - m) / eta;
        aj_new = aj_new.clamp(lo, hi);
        let mut ai_new = ai + y[i] * y[j] * (aj - aj_new);
        // Snap to the box so bound membership is exact.
        ai_new = snap(ai_new, c);
        aj_new = snap(aj_new, c);
        let (di, dj) = ((ai_new - ai) * y[i], (aj_new - aj) * y[j]);
        alpha[i] = ai_new;
        alpha[j] = aj_new;
        if di == 0.0 && dj == 0.0 {
            continue;
        }
        for k in 0..n {
            let mut delta = 0.0;
            if di != 0.0 {
                delta += di * if k == i { diag[i] } else { kernel.eval(&x[i], &x[k]) };
            }
            if dj != 0.0 {
                delta += dj * if k == j { diag[j] } else { kernel.eval(&x[j], &x[k]) };
            }
            u[k] += delta;
        }
    }
}

fn snap(a: f64, c: f64) -> f64 {
    let eps = 1e-12 * c.max(1.0);
    if a < eps {
        0.0
    } else if a > c - eps {
        c
    } else {
        a
    }
}

fn bias_from(alpha: &[f64], u: &[f64], y: &[f64], c: f64) -> Option<f64> {
    let (sum, count) = alpha
        .iter()
        .zip(u)
        .zip(y)
        .filter(|((&a, _), _)| a > 0.0 && a < c)
        .fold((0.0, 0usize), |(s, n), ((_, &uk), &yk)| (s + (yk - uk), n + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Largest KKT residual of a dual solution, measured on `y·f(x)`.
pub fn kkt_residual(
    x: &[SparseVector],
    y: &[f64],
    alpha: &[f64],
    bias: f64,
    kernel: Kernel,
    c: f64,
) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..x.len() {
        let f: f64 = (0..x.len())
            .filter(|&l| alpha[l] != 0.0)
            .map(|l| alpha[l] * y[l] * kernel.eval(&x[l], &x[k]))
            .sum::<f64>()
            + bias;
        let margin = y[k] * f;
        let r = if alpha[k] == 0.0 {
            (1.0 - margin).max(0.0)
        } else if alpha[k] == c {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(r);
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel: Kernel,
    pub c: f64,
    pub tol: f64,
    pub bias: f64,
    pub support_vectors: Vec<SparseVector>,
    /// `α_i · y_i` for each support vector.
    pub coefficients: Vec<f64>,
    pub feature_index: BTreeMap<String, u32>,
}

impl SvmModel {
    pub fn from_solution(
        x: &[SparseVector],
        y: &[f64],
        sol: &SmoSolution,
        params: &SvmParams,
        feature_index: BTreeMap<String, u32>,
    ) -> Self {
        let (support_vectors, coefficients) = x
            .iter()
            .zip(y)
            .zip(&sol.alpha)
            .filter(|(_, &a)| a > 0.0)
            .map(|((xi, &yi), &a)| (xi.clone(), a * yi))
            .unzip();
        SvmModel {
            kernel: params.kernel,
            c: params.c,
            tol: params.tol,
            bias: sol.bias,
            support_vectors,
            coefficients,
            feature_index,
        }
    }

    pub fn decision_value_sparse(&self, x: &[(u32, f64)]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, &coef)| coef * self.kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }

    /// Binary presence vector over the training feature index; unseen
    /// features are dropped.
    pub fn vectorize(&self, v: &FeatureVector) -> SparseVector {
        binary_vector(v.iter().filter_map(|f| self.feature_index.get(f).copied()))
    }

    pub fn decision_value(&self, v: &FeatureVector) -> f64 {
        self.decision_value_sparse(&self.vectorize(v))
    }
}

fn binary_vector(ids: impl Iterator<Item = u32>) -> SparseVector {
    let mut ids: Vec<u32> = ids.collect();
    ids.sort_unstable();
    ids.dedup();
    ids.into_iter().map(|i| (i, 1.0)).collect()
}

pub fn train_svm(data: &[LabeledExample], params: &SvmParams) -> Result<SvmModel, ClassifierError> {
    params.validate()?;
    check_both_classes(data)?;
    let mut feature_index: BTreeMap<String, u32> = BTreeMap::new();
    for ex in data {
        for f in ex.vector.iter() {
            let next = feature_index.len() as u32;
            feature_index.entry(String::from(f)).or_insert(next);
        }
    }
    let x: Vec<SparseVector> = data
        .iter()
        .map(|ex| binary_vector(ex.vector.iter().map(|f| feature_index[f])))
        .collect();
    let y: Vec<f64> = data.iter().map(|ex| ex.label.sign()).collect();
    let sol = smo(&x, &y, params)?;
    Ok(SvmModel::from_solution(&x, &y, &sol, params, feature_index))
}
