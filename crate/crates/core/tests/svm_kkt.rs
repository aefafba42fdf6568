use cowhealth::svm::{train_binary, KernelSpec, SolverConfig, SvmHyperparams};
use proptest::prelude::*;

fn dataset() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<i8>)> {
    (2usize..=4, 4usize..=40).prop_flat_map(|(p, n)| {
        (
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, p), n),
            prop::collection::vec(prop::bool::ANY, n),
        )
            .prop_filter("both classes present", |(_, l)| l.iter().any(|&b| b) && l.iter().any(|&b| !b))
            .prop_map(|(rows, l)| (rows, l.into_iter().map(|b| if b { 1 } else { -1 }).collect()))
    })
}

fn kernel() -> impl Strategy<Value = KernelSpec<f64>> {
    prop_oneof![Just(KernelSpec::Linear), (0.05f64..3.0).prop_map(KernelSpec::rbf)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn trained_models_satisfy_kkt((rows, labels) in dataset(), kernel in kernel(), c in 0.1f64..50.0) {
        let tol = 1e-3;
        let cfg = SolverConfig::with_tolerance(tol);
        let report = train_binary(&rows, &labels, &SvmHyperparams { c, kernel }, &cfg, 7).unwrap();
        prop_assert!(report.converged, "iterations {} gap {} kernel {kernel:?} c {c}", report.iterations, report.gap);
        let balance: f64 = report.multipliers.iter().zip(&labels).map(|(b, &l)| b * l as f64).sum();
        prop_assert!(balance.abs() < 1e-8, "sum b l = {balance}");
        let slack = 1e-9;
        for ((row, &l), &b) in rows.iter().zip(&labels).zip(&report.multipliers) {
            prop_assert!((0.0..=c).contains(&b));
            let margin = l as f64 * report.model.decision_value(row).unwrap();
            if b == 0.0 {
                prop_assert!(margin >= 1.0 - tol - slack, "b = 0, margin {margin}");
            } else if b == c {
                prop_assert!(margin <= 1.0 + tol + slack, "b = c, margin {margin}");
            } else {
                prop_assert!((margin - 1.0).abs() <= tol + slack, "free b = {b}, margin {margin}");
            }
        }
    }

    #[test]
    fn input_order_does_not_change_predictions((rows, labels) in dataset(), kernel in kernel(), c in 0.1f64..20.0) {
        let hp = SvmHyperparams { c, kernel };
        let cfg = SolverConfig::with_tolerance(1e-4);
        let forward = train_binary(&rows, &labels, &hp, &cfg, 3).unwrap();
        let mut rev_rows = rows.clone();
        let mut rev_labels = labels.clone();
        rev_rows.reverse();
        rev_labels.reverse();
        let backward = train_binary(&rev_rows, &rev_labels, &hp, &cfg, 3).unwrap();
        for row in &rows {
            let (a, b) = (forward.model.decision_value(row).unwrap(), backward.model.decision_value(row).unwrap());
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
