use proptest::prelude::*;
use simile_core::classifier::cv::cross_validate;
use simile_core::classifier::svm::{kkt_residual, smo, Kernel, SparseVector, SvmParams};
use simile_core::classifier::{
    Confusion, FeatureVector, Label, LabeledExample, Metrics, TrainedModel, TrainerSpec,
};

#[test]
fn metrics_over_every_small_confusion_matrix() {
    for tp in 0..=5 {
        for fp in 0..=5 {
            for fn_ in 0..=5 {
                for tn in 0..=5 {
                    let mut pairs = Vec::new();
                    pairs.extend(std::iter::repeat_n((Label::Positive, Label::Positive), tp));
                    pairs.extend(std::iter::repeat_n((Label::Positive, Label::Negative), fp));
                    pairs.extend(std::iter::repeat_n((Label::Negative, Label::Positive), fn_));
                    pairs.extend(std::iter::repeat_n((Label::Negative, Label::Negative), tn));
                    let m = Metrics::from_predictions(pairs);
                    assert_eq!(m.confusion, Confusion { tp, fp, fn_, tn });
                    let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
                    let r = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
                    // F1 in count form, independent of P and R.
                    let f = if tp == 0 { 0.0 } else { 2.0 * tp as f64 / (2 * tp + fp + fn_) as f64 };
                    assert_eq!(m.precision, p);
                    assert_eq!(m.recall, r);
                    assert!((m.f_measure - f).abs() < 1e-12, "{tp} {fp} {fn_} {tn}");
                }
            }
        }
    }
}

fn dense(v: &[f64]) -> SparseVector {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(i, &x)| (i as u32, x))
        .collect()
}

#[test]
fn xor_needs_the_polynomial_kernel() {
    let x: Vec<SparseVector> = [[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]]
        .iter()
        .map(|p| dense(p))
        .collect();
    let y = [1.0, 1.0, -1.0, -1.0];
    let params = SvmParams {
        c: 10.0,
        kernel: Kernel::Polynomial { degree: 2 },
        ..SvmParams::default()
    };
    let sol = smo(&x, &y, &params).unwrap();
    assert!(kkt_residual(&x, &y, &sol.alpha, sol.bias, params.kernel, params.c) <= params.tol + 1e-9);
    for (xi, &yi) in x.iter().zip(&y) {
        let f: f64 = x
            .iter()
            .zip(&y)
            .zip(&sol.alpha)
            .map(|((xl, &yl), &a)| a * yl * params.kernel.eval(xl, xi))
            .sum::<f64>()
            + sol.bias;
        assert!(f * yi >= 1.0 - 1e-6);
    }
    // The linear kernel cannot separate XOR; its best fit leaves margin violations.
    let lin = SvmParams { kernel: Kernel::Linear, ..params };
    let sol = smo(&x, &y, &lin).unwrap();
    assert!(sol.alpha.contains(&lin.c));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smo_solutions_satisfy_kkt(
        pts in proptest::collection::vec((proptest::collection::vec(-2i8..=2, 3), any::<bool>()), 2..14),
        c in prop_oneof![Just(1.0), Just(0.1), Just(10.0)],
        degree in 1u32..=3,
    ) {
        prop_assume!(pts.iter().any(|p| p.1) && pts.iter().any(|p| !p.1));
        let x: Vec<SparseVector> = pts.iter().map(|(v, _)| dense(&v.iter().map(|&a| a as f64).collect::<Vec<_>>())).collect();
        let y: Vec<f64> = pts.iter().map(|p| if p.1 { 1.0 } else { -1.0 }).collect();
        let kernel = if degree == 1 { Kernel::Linear } else { Kernel::Polynomial { degree } };
        let params = SvmParams { c, kernel, ..SvmParams::default() };
        let sol = smo(&x, &y, &params).unwrap();
        let sum: f64 = sol.alpha.iter().zip(&y).map(|(a, y)| a * y).sum();
        prop_assert!(sum.abs() < 1e-9, "equality constraint {sum}");
        prop_assert!(sol.alpha.iter().all(|&a| (0.0..=c).contains(&a)));
        let r = kkt_residual(&x, &y, &sol.alpha, sol.bias, kernel, c);
        prop_assert!(r <= params.tol * (1.0 + 1e-6) + 1e-9, "residual {r}");
    }
}

fn toy_data() -> Vec<LabeledExample> {
    let rows: [(&[&str], Label); 9] = [
        (&["a", "b"], Label::Positive),
        (&["a", "c"], Label::Positive),
        (&["a"], Label::Positive),
        (&["b", "d"], Label::Positive),
        (&["d", "e"], Label::Negative),
        (&["e"], Label::Negative),
        (&["c", "e"], Label::Negative),
        (&["b", "e", "d"], Label::Negative),
        (&["a", "e"], Label::Negative),
    ];
    rows.iter()
        .map(|(f, l)| LabeledExample { vector: FeatureVector::new(f.iter().copied()), label: *l })
        .collect()
}

#[test]
fn leave_one_out_matches_manual_enumeration() {
    let data = toy_data();
    for trainer in [TrainerSpec::Nb { alpha: 1.0 }, TrainerSpec::Svm(SvmParams::default())] {
        let report = cross_validate(&data, data.len(), 3, &trainer).unwrap();
        let mut manual = Confusion::default();
        let mut f_sum = 0.0;
        for i in 0..data.len() {
            let train: Vec<LabeledExample> =
                data.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, e)| e.clone()).collect();
            let model: TrainedModel = trainer.train(&train).unwrap();
            let mut one = Confusion::default();
            one.record(model.predict(&data[i].vector).label, data[i].label);
            f_sum += Metrics::from_confusion(one).f_measure;
            manual.add(&one);
        }
        assert_eq!(report.pooled.confusion, manual);
        assert!((report.mean_f_measure - f_sum / data.len() as f64).abs() < 1e-12);
        assert!(!report.stratified);
    }
}
