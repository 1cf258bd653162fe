use indexmap::IndexMap;
use proptest::prelude::*;

use likert_mst::discriminant::{
    classify, fit_classification_functions, rank_by_coefficient, FitOptions, LabeledMatrix,
};
use likert_mst::graph::{
    brute_force_max_spanning_weight, kruskal_max_forest, validate_forest, Edge, WeightedGraph,
};
use likert_mst::pipeline::select_positive_edges;
use likert_mst::stats::{correlation_matrix, pearson, CorrelationMatrix};
use likert_mst::survey::{aggregate_composites, group_scores, impute_mean, AttributeSchema, SurveyTable};

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("r{i}")).collect()
}

fn cols(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("v{i}")).collect()
}

/// Tables of Likert integers with some cells missing, every column keeping at
/// least one observation.
fn likert_table() -> impl Strategy<Value = SurveyTable> {
    (2usize..25, 1usize..6).prop_flat_map(|(n, k)| {
        proptest::collection::vec(proptest::collection::vec((1u8..=5, 0u8..10), k), n).prop_map(
            move |rows| {
                let mut cells: Vec<Vec<Option<f64>>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|&(v, m)| if m < 3 { None } else { Some(v as f64) })
                            .collect()
                    })
                    .collect();
                for c in 0..k {
                    if cells.iter().all(|r| r[c].is_none()) {
                        cells[0][c] = Some(rows[0][c].0 as f64);
                    }
                }
                SurveyTable::new(ids(n), cols(k), cells).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn impute_is_idempotent(t in likert_table()) {
        let once = impute_mean(&t).unwrap();
        prop_assert_eq!(once.missing_count(), 0);
        prop_assert_eq!(impute_mean(&once).unwrap(), once);
    }

    #[test]
    fn impute_preserves_observed_means(t in likert_table()) {
        let out = impute_mean(&t).unwrap();
        for (c, name) in t.attribute_names().iter().enumerate() {
            let observed: Vec<f64> = t.cells().iter().filter_map(|r| r[c]).collect();
            let before = observed.iter().sum::<f64>() / observed.len() as f64;
            let col = out.column(name).unwrap();
            let after = col.iter().sum::<f64>() / col.len() as f64;
            prop_assert!((before - after).abs() < 1e-12);
            for (r, row) in t.cells().iter().enumerate() {
                if let Some(v) = row[c] {
                    prop_assert_eq!(out.get(r, c), Some(v));
                }
            }
        }
    }

    #[test]
    fn composites_stay_within_constituent_range(
        rows in proptest::collection::vec(proptest::collection::vec(1u8..=5, 6), 1..20)
    ) {
        let n = rows.len();
        let t = SurveyTable::from_complete(
            ids(n),
            cols(6),
            rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect(),
        ).unwrap();
        let schema = AttributeSchema::from_json(
            r#"{"composites": {"a": ["v0", "v1", "v2"], "b": ["v3", "v4"]}, "groups": {"G": ["a", "b"], "H": ["v5"]}}"#,
        ).unwrap();
        let out = aggregate_composites(&t, &schema).unwrap();
        for (r, row) in rows.iter().enumerate() {
            for (name, parts) in [("a", 0..3), ("b", 3..5)] {
                let vals: Vec<f64> = row[parts].iter().map(|&v| v as f64).collect();
                let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let v = out.column(name).unwrap()[r];
                prop_assert!(v >= lo && v <= hi);
            }
        }
    }

    #[test]
    fn respondent_permutation_permutes_rows(
        rows in proptest::collection::vec(proptest::collection::vec(1u8..=5, 4), 2..15),
        rotate in 0usize..15,
    ) {
        let n = rows.len();
        let mk = |order: &[usize]| {
            SurveyTable::from_complete(
                order.iter().map(|&i| format!("r{i}")).collect(),
                cols(4),
                order.iter().map(|&i| rows[i].iter().map(|&v| v as f64).collect()).collect(),
            ).unwrap()
        };
        let base: Vec<usize> = (0..n).collect();
        let mut perm = base.clone();
        perm.rotate_left(rotate % n);
        perm.reverse();
        let schema = AttributeSchema::from_json(
            r#"{"composites": {"a": ["v0", "v1"]}, "groups": {"G": ["a", "v2"], "H": ["v3"]}}"#,
        ).unwrap();
        let run = |t: &SurveyTable| group_scores(&aggregate_composites(t, &schema).unwrap(), &schema).unwrap();
        let a = run(&mk(&base));
        let b = run(&mk(&perm));
        for (pos, &orig) in perm.iter().enumerate() {
            for c in 0..2 {
                prop_assert_eq!(b.get(pos, c), a.get(orig, c));
            }
        }
    }

    #[test]
    fn pearson_symmetric_and_bounded(
        pairs in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 2..60)
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let a = pearson(&x, &y).unwrap();
        let b = pearson(&y, &x).unwrap();
        prop_assert_eq!(a, b);
        if let Some(r) = a {
            prop_assert!(r.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn pearson_affine_invariance(
        pairs in proptest::collection::vec((1.0f64..5.0, 1.0f64..5.0), 3..100),
        scale in 0.1f64..10.0,
        shift in -10.0f64..10.0,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let r = pearson(&x, &y).unwrap().unwrap();
        let up: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
        let down: Vec<f64> = x.iter().map(|v| -scale * v + shift).collect();
        prop_assert!((pearson(&up, &y).unwrap().unwrap() - r).abs() < 1e-9);
        prop_assert!((pearson(&down, &y).unwrap().unwrap() + r).abs() < 1e-9);
    }

    #[test]
    fn rank_is_a_permutation(values in proptest::collection::vec(-5i32..5, 1..12)) {
        let m: IndexMap<String, f64> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (format!("n{i:02}"), v as f64))
            .collect();
        let order = rank_by_coefficient(&m).unwrap();
        let mut sorted = order.clone();
        sorted.sort();
        let mut keys: Vec<String> = m.keys().cloned().collect();
        keys.sort();
        prop_assert_eq!(sorted, keys);
        for w in order.windows(2) {
            let (a, b) = (m[&w[0]], m[&w[1]]);
            prop_assert!(a > b || (a == b && w[0] < w[1]));
        }
        prop_assert_eq!(rank_by_coefficient(&m).unwrap(), order);
    }
}

/// Random simple graph: `n` nodes, each pair present with probability
/// `density`, weights uniform in [-1, 1].
fn random_graph() -> impl Strategy<Value = WeightedGraph> {
    (1usize..=7, 0.0f64..=1.0).prop_flat_map(|(n, density)| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec((0.0f64..1.0, -1.0f64..=1.0), pairs).prop_map(move |draws| {
            let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let (coin, w) = draws[k];
                    k += 1;
                    if coin < density {
                        edges.push(Edge::new(nodes[i].clone(), nodes[j].clone(), w));
                    }
                }
            }
            WeightedGraph::new(nodes, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kruskal_matches_enumeration(g in random_graph()) {
        let f = kruskal_max_forest(&g);
        let best = brute_force_max_spanning_weight(&g).unwrap();
        prop_assert!((f.total_weight - best).abs() < 1e-12);
        prop_assert_eq!(f.edges.len() + f.component_count, g.nodes().len());
        let report = validate_forest(&g, &f).unwrap();
        prop_assert!(report.passed(), "{:?}", report.violations);
        prop_assert_eq!(kruskal_max_forest(&g), f);
    }

    #[test]
    fn scaling_weights_scales_total(g in random_graph(), a in 0.01f64..100.0) {
        let f = kruskal_max_forest(&g);
        let scaled = kruskal_max_forest(&g.scaled(a).unwrap());
        prop_assert!((scaled.total_weight - a * f.total_weight).abs() < 1e-9 * (1.0 + a));
        let mut ws: Vec<f64> = g.edges().iter().map(|e| e.w).collect();
        ws.sort_by(f64::total_cmp);
        if ws.windows(2).all(|p| p[0] != p[1]) {
            let ka: Vec<_> = f.edges.iter().map(|e| e.key()).collect();
            let kb: Vec<_> = scaled.edges.iter().map(|e| e.key()).collect();
            prop_assert_eq!(ka, kb);
        }
    }

    #[test]
    fn adding_positive_edge_never_lowers_forest(
        g in random_graph(),
        pick in 0usize..100,
        w in 0.0001f64..1.0,
    ) {
        let n = g.nodes().len();
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                !g.edges().iter().any(|e| e.key() == (g.nodes()[i].as_str(), g.nodes()[j].as_str()))
            })
            .collect();
        prop_assume!(!missing.is_empty());
        let (i, j) = missing[pick % missing.len()];
        let mut edges = g.edges().to_vec();
        edges.push(Edge::new(g.nodes()[i].clone(), g.nodes()[j].clone(), w));
        let bigger = WeightedGraph::new(g.nodes().to_vec(), edges).unwrap();
        let before = brute_force_max_spanning_weight(&g).unwrap();
        let after = kruskal_max_forest(&bigger).total_weight;
        prop_assert!(after >= before - 1e-12);
    }
}

fn random_matrix() -> impl Strategy<Value = CorrelationMatrix> {
    (2usize..8).prop_flat_map(|k| {
        proptest::collection::vec(prop_oneof![Just(None), Just(Some(0.0)), (-1.0f64..=1.0).prop_map(Some)], k * k)
            .prop_map(move |vals| {
                let mut e = vec![vec![Some(1.0); k]; k];
                for i in 0..k {
                    for j in i + 1..k {
                        e[i][j] = vals[i * k + j];
                        e[j][i] = vals[i * k + j];
                    }
                }
                CorrelationMatrix::new((0..k).map(|i| format!("p{i}")).collect(), e).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn selection_keeps_only_positive(m in random_matrix()) {
        let (g, removed) = select_positive_edges(&m);
        prop_assert!(g.edges().iter().all(|e| e.w > 0.0));
        prop_assert!(removed.iter().all(|r| r.r.is_none_or(|v| v <= 0.0)));
        prop_assert_eq!(g.edges().len() + removed.len(), m.len() * (m.len() - 1) / 2);
    }

    #[test]
    fn selection_on_real_tables_with_constant_columns(
        rows in proptest::collection::vec(proptest::collection::vec(1u8..=5, 4), 3..20),
        constant in 0usize..4,
    ) {
        let n = rows.len();
        let data: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().enumerate().map(|(c, &v)| if c == constant { 3.0 } else { v as f64 }).collect())
            .collect();
        let t = SurveyTable::from_complete(ids(n), cols(4), data).unwrap();
        let m = correlation_matrix(&t, &cols(4)).unwrap();
        let (g, removed) = select_positive_edges(&m);
        prop_assert!(g.edges().iter().all(|e| e.w > 0.0 && e.u != cols(4)[constant] && e.v != cols(4)[constant]));
        prop_assert!(removed.iter().filter(|r| r.r.is_none()).count() >= 3);
    }
}

// ---- discriminant properties ----

/// Gaussian elimination with partial pivoting; independent of the
/// library's Cholesky path.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

fn labeled_data() -> impl Strategy<Value = LabeledMatrix> {
    (2usize..=4, 1usize..=3).prop_flat_map(|(k, p)| {
        proptest::collection::vec(
            (proptest::collection::vec(-5.0f64..5.0, p), proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, p), 4..8)),
            k,
        )
        .prop_map(move |classes| {
            let mut features = Vec::new();
            let mut labels = Vec::new();
            for (ci, (center, noise)) in classes.iter().enumerate() {
                for e in noise {
                    features.push(center.iter().zip(e).map(|(c, d)| c + d).collect());
                    labels.push(format!("c{ci}"));
                }
            }
            LabeledMatrix::new(features, labels, (0..p).map(|i| format!("f{i}")).collect()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn classification_matches_mahalanobis_nearest_mean(
        data in labeled_data(),
        xs in proptest::collection::vec(proptest::collection::vec(-8.0f64..8.0, 3), 20),
    ) {
        let Ok(model) = fit_classification_functions(&data, &FitOptions::default()) else {
            return Ok(());
        };
        let cov = model.pooled_covariance().unwrap().to_vec();
        let p = data.feature_names().len();
        for x in &xs {
            let x = &x[..p];
            let dists: Vec<(f64, &str)> = model
                .classes()
                .iter()
                .map(|c| {
                    let mu = c.mean.as_ref().unwrap();
                    let d: Vec<f64> = x.iter().zip(mu).map(|(a, b)| a - b).collect();
                    let s = solve(cov.clone(), d.clone());
                    (d.iter().zip(&s).map(|(a, b)| a * b).sum(), c.name.as_str())
                })
                .collect();
            let best = dists.iter().cloned().fold(f64::INFINITY, |m, (d, _)| m.min(d));
            let got = classify(&model, x).unwrap();
            let got_d = dists.iter().find(|(_, n)| *n == got).unwrap().0;
            prop_assert!(got_d <= best + 1e-7 * (1.0 + best.abs()));
        }
    }

    #[test]
    fn fitted_coefficients_reconstruct(data in labeled_data()) {
        let Ok(model) = fit_classification_functions(&data, &FitOptions::default()) else {
            return Ok(());
        };
        let cov = model.pooled_covariance().unwrap();
        let priors: f64 = model.classes().iter().map(|c| c.prior.unwrap()).sum();
        prop_assert!((priors - 1.0).abs() < 1e-12);
        for i in 0..cov.len() {
            for j in 0..cov.len() {
                prop_assert!((cov[i][j] - cov[j][i]).abs() < 1e-10);
            }
        }
        for c in model.classes() {
            let mu = c.mean.as_ref().unwrap();
            // Σ c_k = μ_k
            for (row, m) in cov.iter().zip(mu) {
                let v: f64 = row.iter().zip(&c.coefficients).map(|(a, b)| a * b).sum();
                prop_assert!((v - m).abs() < 1e-8 * (1.0 + m.abs()));
            }
            let quad: f64 = mu.iter().zip(&c.coefficients).map(|(a, b)| a * b).sum();
            prop_assert!((c.constant - (-0.5 * quad + c.prior.unwrap().ln())).abs() < 1e-8 * (1.0 + quad.abs()));
        }
    }

    #[test]
    fn translation_leaves_classification_unchanged(
        data in labeled_data(),
        shift in proptest::collection::vec(-3.0f64..3.0, 3),
        xs in proptest::collection::vec(proptest::collection::vec(-8.0f64..8.0, 3), 10),
    ) {
        let Ok(model) = fit_classification_functions(&data, &FitOptions::default()) else {
            return Ok(());
        };
        let p = data.feature_names().len();
        let t = &shift[..p];
        let shifted = shift_data(&data, t);
        let moved = fit_classification_functions(&shifted, &FitOptions::default()).unwrap();
        let (c0, c1) = (model.pooled_covariance().unwrap(), moved.pooled_covariance().unwrap());
        for (a, b) in c0.iter().flatten().zip(c1.iter().flatten()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        for x in &xs {
            let x = &x[..p];
            let xt: Vec<f64> = x.iter().zip(t).map(|(a, b)| a + b).collect();
            let before = model.scores(x).unwrap();
            // compare only when the winner is clear of round-off
            let mut sorted = before.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            if sorted[0] - sorted[1] > 1e-6 * (1.0 + sorted[0].abs()) {
                prop_assert_eq!(classify(&model, x).unwrap(), classify(&moved, &xt).unwrap());
            }
        }
    }
}

fn shift_data(data: &LabeledMatrix, t: &[f64]) -> LabeledMatrix {
    let (features, labels) = data.observations();
    LabeledMatrix::new(
        features.iter().map(|r| r.iter().zip(t).map(|(a, b)| a + b).collect()).collect(),
        labels.to_vec(),
        data.feature_names().to_vec(),
    )
    .unwrap()
}
