mod support {
    pub mod oracles;
}

use eeq_core::xai::tree::TIE_TOLERANCE;
use eeq_core::xai::{
    build_feature_matrix, feature_importance, fit_tree, pcc_matrix, pearson, r_squared, rmse,
    FeatureMatrix, Node, TreeParams,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use support::oracles::{best_split_oracle, pearson_exact, random_snapshot};

fn matrix(rows: Vec<Vec<f64>>, target: Vec<f64>) -> FeatureMatrix {
    let d = rows[0].len();
    let ids = (0..rows.len()).map(|i| format!("{i:05}")).collect();
    FeatureMatrix::new((0..d).map(|i| format!("f{i}")).collect(), rows, target, ids).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (2usize..=8, 1usize..=3).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(prop::collection::vec((0i32..4).prop_map(f64::from), d), n),
            prop::collection::vec((0i32..10).prop_map(f64::from), n),
        )
    })
}

fn unlimited() -> TreeParams {
    TreeParams {
        max_depth: 64,
        min_samples_leaf: 1,
        min_impurity_decrease: 0.0,
    }
}

proptest! {
    #[test]
    fn root_split_matches_enumeration((rows, target) in small_matrix(), min_leaf in 1usize..3) {
        let m = matrix(rows.clone(), target.clone());
        let params = TreeParams { max_depth: 1, min_samples_leaf: min_leaf, min_impurity_decrease: 0.0 };
        let tree = fit_tree(&m, &params).unwrap();
        let expected = if rows.len() < 2 * min_leaf {
            None
        } else {
            best_split_oracle(&rows, &target, min_leaf, TIE_TOLERANCE)
        };
        match (tree.root(), expected) {
            (Node::Leaf { .. }, None) => {}
            (&Node::Split { feature_index, threshold, .. }, Some(oracle)) => {
                prop_assert_eq!(feature_index, oracle.feature_index);
                prop_assert_eq!(threshold, oracle.threshold);
            }
            (root, oracle) => prop_assert!(false, "tree root {:?} vs oracle {:?}", root, oracle),
        }
    }

    #[test]
    fn importances_are_a_distribution((rows, target) in small_matrix()) {
        let m = matrix(rows, target);
        let tree = fit_tree(&m, &unlimited()).unwrap();
        let imp = feature_importance(&tree, m.feature_names()).unwrap();
        prop_assert!(imp.weights().iter().all(|w| w.weight >= 0.0));
        // Zero-gain splits are allowed (they are needed to memorize XOR-like
        // targets), so "all zero" means no split reduced impurity.
        let reducing = tree.nodes().iter().any(|n| matches!(n, Node::Split { impurity_decrease, .. } if *impurity_decrease > 0.0));
        if imp.is_all_zero() {
            prop_assert!(!reducing);
        } else {
            prop_assert!((imp.total() - 1.0).abs() <= 1e-9);
        }
        for pair in imp.weights().windows(2) {
            prop_assert!(pair[0].weight > pair[1].weight
                || (pair[0].weight == pair[1].weight && pair[0].feature < pair[1].feature));
        }
    }

    #[test]
    fn memorizes_distinct_rows(n in 2usize..40, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 * 0.5, rng.gen_range(0.0..1.0)]).collect();
        let target: Vec<f64> = (0..n).map(|_| rng.gen_range(-100.0..100.0)).collect();
        let m = matrix(rows, target.clone());
        let params = TreeParams { max_depth: n, min_samples_leaf: 1, min_impurity_decrease: 0.0 };
        let predicted = fit_tree(&m, &params).unwrap().predict_matrix(&m).unwrap();
        prop_assert_eq!(rmse(&predicted, &target).unwrap(), 0.0);
        prop_assert_eq!(r_squared(&predicted, &target).unwrap(), 1.0);
    }

    #[test]
    fn affine_feature_transform_keeps_partition(seed in any::<u64>(), scale in 0.5..20.0f64, shift in -50.0..50.0f64, f in 0usize..3) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..60).map(|_| (0..3).map(|_| rng.gen_range(0..20) as f64).collect()).collect();
        let target: Vec<f64> = rows.iter().map(|r| r[0] * 3.0 + r[1] * r[2] + rng.gen_range(0.0..5.0)).collect();
        let transformed: Vec<Vec<f64>> = rows.iter().map(|r| {
            let mut r = r.clone();
            r[f] = r[f] * scale + shift;
            r
        }).collect();
        let params = TreeParams { max_depth: 5, min_samples_leaf: 2, min_impurity_decrease: 0.0 };
        let a = fit_tree(&matrix(rows.clone(), target.clone()), &params).unwrap();
        let b = fit_tree(&matrix(transformed.clone(), target), &params).unwrap();
        for (r, t) in rows.iter().zip(&transformed) {
            prop_assert_eq!(a.leaf_index(r).unwrap(), b.leaf_index(t).unwrap());
        }
    }

    #[test]
    fn pearson_matches_exact_sums(
        pair in (2usize..50).prop_flat_map(|n| (
            prop::collection::vec(-1000i64..1000, n),
            prop::collection::vec(-1000i64..1000, n),
        ))
    ) {
        let (xi, yi) = pair;
        let x: Vec<f64> = xi.iter().map(|&v| v as f64).collect();
        let y: Vec<f64> = yi.iter().map(|&v| v as f64).collect();
        let r = pearson(&x, &y).unwrap();
        let oracle = pearson_exact(&xi, &yi);
        match (r, oracle) {
            (None, None) => {}
            (Some(r), Some(o)) => {
                prop_assert!((r - o).abs() <= 1e-12, "{} vs {}", r, o);
                prop_assert!((-1.0..=1.0).contains(&r));
                prop_assert_eq!(Some(r), pearson(&y, &x).unwrap());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn pearson_affine(x in prop::collection::vec(-100.0..100.0f64, 3..30), a in 0.1..10.0f64, b in -10.0..10.0f64) {
        prop_assume!(x.iter().any(|&v| v != x[0]));
        let up: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let down: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
        prop_assert!((pearson(&x, &up).unwrap().unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!((pearson(&x, &down).unwrap().unwrap() + 1.0).abs() <= 1e-12);
    }
}

#[test]
fn importance_follows_feature_names_under_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let snapshot = random_snapshot(&mut rng, 80);
    let m = build_feature_matrix(&snapshot);
    let d = m.n_features();
    let perm: Vec<usize> = (0..d).rev().collect();
    let permuted = FeatureMatrix::new(
        perm.iter().map(|&i| m.feature_names()[i].clone()).collect(),
        m.rows().iter().map(|r| perm.iter().map(|&i| r[i]).collect()).collect(),
        m.target().to_vec(),
        m.row_ids().to_vec(),
    )
    .unwrap();
    let params = TreeParams::default();
    let a = feature_importance(&fit_tree(&m, &params).unwrap(), m.feature_names()).unwrap();
    let b = feature_importance(&fit_tree(&permuted, &params).unwrap(), permuted.feature_names()).unwrap();
    for w in a.weights() {
        assert!((b.get(&w.feature).unwrap() - w.weight).abs() <= 1e-12, "{}", w.feature);
    }
}

#[test]
fn deterministic_outputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let snapshot = random_snapshot(&mut rng, 120);
    let m = build_feature_matrix(&snapshot);
    let run = || {
        let tree = fit_tree(&m, &TreeParams::default()).unwrap();
        let imp = feature_importance(&tree, m.feature_names()).unwrap();
        let pcc = pcc_matrix(&m, m.feature_names(), m.feature_names()).unwrap();
        serde_json::to_string(&(tree, imp, pcc)).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn full_pcc_is_symmetric_with_unit_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = build_feature_matrix(&random_snapshot(&mut rng, 50));
    let names = m.feature_names();
    let pcc = pcc_matrix(&m, names, names).unwrap();
    for i in 0..names.len() {
        assert_eq!(pcc.values[i][i], Some(1.0), "{}", names[i]);
        for j in 0..names.len() {
            assert_eq!(pcc.values[i][j], pcc.values[j][i]);
            if let Some(v) = pcc.values[i][j] {
                assert!((-1.0..=1.0).contains(&v));
            }
        }
    }
}

#[test]
fn feature_matrix_shares() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let snapshot = random_snapshot(&mut rng, 3);
    let mut records = snapshot.records().to_vec();
    records[0].owner_occupied = 60.0;
    records[0].renter_occupied = 40.0;
    let pop = records[0].total_population;
    records[0].race_counts = eeq_core::ingest::RaceCounts { white: pop, black: 0.0, asian: 0.0, other: 0.0 };
    let snapshot = eeq_core::Snapshot::new(records, *snapshot.rates(), "").unwrap();
    let m = build_feature_matrix(&snapshot);
    assert_eq!(m.n_rows(), snapshot.len());
    let mut sorted = m.row_ids().to_vec();
    sorted.sort();
    assert_eq!(m.row_ids(), sorted.as_slice());
    let row = &m.rows()[0];
    let at = |name: &str| row[m.feature_index(name).unwrap()];
    assert_eq!(at("renter_share"), 0.4);
    assert_eq!(at("owner_share"), 0.6);
    assert_eq!(at("white_share"), 1.0);
    assert_eq!(at("black_share"), 0.0);
    assert_eq!(at("asian_share"), 0.0);
    assert_eq!(m.target()[0], snapshot.records()[0].annual_kwh_per_household);
}
