mod common;

use proptest::prelude::*;
use simpson_core::adjust::{adjust_table, adjust_value, adjusted_decision, AdjustedRule, AdjustmentPolicy};
use simpson_core::rules::Outcome;
use simpson_core::{datasets, CohortCount, Exact, PreferenceTable, SizeStats};

/// Plain floating-point evaluation of the reweighting, column by column.
fn oracle_weights(t: &PreferenceTable, delta: f64, k: f64) -> Vec<Vec<f64>> {
    let m = t.num_alternatives();
    let mut out = vec![vec![0.0; t.num_groups()]; m];
    for g in 0..t.num_groups() {
        let sizes: Vec<f64> = (0..m).map(|a| t.cell(a, g).trials() as f64).collect();
        let mean = sizes.iter().sum::<f64>() / m as f64;
        let var = sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / m as f64;
        for a in 0..m {
            let c = t.cell(a, g);
            let rate = c.successes() as f64 / c.trials() as f64;
            out[a][g] = if sizes[a] < mean && var > 0.0 {
                k * rate * (-delta * (sizes[a] - mean).powi(2) / var).exp()
            } else {
                rate
            };
        }
    }
    out
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn table2_recomputed() {
    let t = datasets::table2();
    let adjusted = adjust_table(&t, &AdjustmentPolicy::default());
    let oracle = oracle_weights(&t, 0.5, 1.0);
    for a in 0..2 {
        for g in 0..6 {
            assert!(close(adjusted.cells[a][g].adjusted_weight, oracle[a][g], 1e-12));
        }
    }
    // penalized entries alternate between the two rows
    let penalized: Vec<f64> = (0..6)
        .map(|g| {
            let a = if g % 2 == 0 { 0 } else { 1 };
            assert!(adjusted.cells[a][g].penalized && !adjusted.cells[1 - a][g].penalized);
            adjusted.cells[a][g].adjusted_weight
        })
        .collect();
    let printed = [0.38, 0.54, 0.36, 0.52, 0.42, 0.56];
    for (got, want) in penalized.iter().zip(printed) {
        assert!((got - want).abs() <= 0.02, "{got} vs {want}");
    }
}

#[test]
fn table1_recomputed() {
    let t = datasets::table1();
    let adjusted = adjust_table(&t, &AdjustmentPolicy::default());
    let oracle = oracle_weights(&t, 0.5, 1.0);
    for a in 0..2 {
        for g in 0..3 {
            assert!(close(adjusted.cells[a][g].adjusted_weight, oracle[a][g], 1e-12));
        }
    }
    assert!((adjusted.cells[1][1].adjusted_weight - 0.60).abs() < 0.01);
    assert!((adjusted.cells[1][2].adjusted_weight - 0.45).abs() < 0.01);
}

#[test]
fn three_alternative_tables() {
    let t = datasets::table5();
    let adjusted = adjust_table(&t, &AdjustmentPolicy::default());
    let oracle = oracle_weights(&t, 0.5, 1.0);
    let flags: Vec<Vec<bool>> = adjusted.cells.iter().map(|r| r.iter().map(|c| c.penalized).collect()).collect();
    // group 1 mean 140/3 penalizes A only; group 2 mean 160/3 penalizes B and C
    assert_eq!(flags, vec![vec![true, false], vec![false, true], vec![false, true]]);
    for a in 0..3 {
        for g in 0..2 {
            assert!(close(adjusted.cells[a][g].adjusted_weight, oracle[a][g], 1e-12));
        }
    }
}

#[test]
fn closing_example() {
    let t = datasets::three_sizes();
    let adjusted = adjust_table(&t, &AdjustmentPolicy::default());
    let w: Vec<f64> = adjusted.cells.iter().map(|r| r[0].adjusted_weight).collect();
    assert!((w[0] - 0.5 * (-0.75f64).exp()).abs() < 1e-15);
    assert!((w[0] - 0.2362).abs() < 1e-4);
    assert!(!adjusted.cells[1][0].penalized && !adjusted.cells[2][0].penalized);
    assert!(w[0] < w[1] && w[0] < w[2]);
    assert_eq!(adjusted.group_winner(0), Outcome::Winner(1));
}

#[test]
fn custom_policy_matches_oracle() {
    let t = datasets::table2();
    let policy = AdjustmentPolicy::new(Exact::new(3.into(), 2.into()), Exact::new(9.into(), 10.into())).unwrap();
    let adjusted = adjust_table(&t, &policy);
    let oracle = oracle_weights(&t, 1.5, 0.9);
    for a in 0..2 {
        for g in 0..6 {
            assert!(close(adjusted.cells[a][g].adjusted_weight, oracle[a][g], 1e-12));
        }
    }
}

#[test]
fn table1_sum_rule() {
    let d = adjusted_decision(&datasets::table1(), &AdjustmentPolicy::default(), AdjustedRule::Sum).unwrap();
    let oracle = oracle_weights(&datasets::table1(), 0.5, 1.0);
    let sums: Vec<f64> = oracle.iter().map(|r| r.iter().sum()).collect();
    assert_eq!(d.winner, if sums[0] > sums[1] { Outcome::Winner(0) } else { Outcome::Winner(1) });
    assert!(close(d.margin, (sums[0] - sums[1]).abs(), 1e-12));
}

fn two_size_column() -> impl Strategy<Value = PreferenceTable> {
    (2usize..6, 1u64..50, 1u64..50, 1usize..5, prop::collection::vec(0u64..1000, 6))
        .prop_filter("distinct sizes", |(_, a, b, _, _)| a != b)
        .prop_map(|(m, small, large, n_small, succ)| {
            let n_small = n_small.min(m - 1);
            let sizes: Vec<u64> = (0..m).map(|i| if i < n_small { small } else { large }).collect();
            let cells: Vec<Vec<CohortCount>> = sizes
                .iter()
                .zip(&succ)
                .map(|(&t, &s)| vec![CohortCount::new(s % (t + 1), t).unwrap()])
                .collect();
            let alts: Vec<String> = (0..m).map(|i| format!("A{i}")).collect();
            PreferenceTable::new(alts, vec!["G".into()], cells).unwrap()
        })
}

proptest! {
    #[test]
    fn two_distinct_sizes_give_exp_minus_half(t in two_size_column()) {
        let adjusted = adjust_table(&t, &AdjustmentPolicy::default());
        for row in &adjusted.cells {
            if row[0].penalized {
                let sizes: Vec<u64> = (0..t.num_alternatives()).map(|a| t.cell(a, 0).trials()).collect();
                let small = row[0].size;
                let n_small = sizes.iter().filter(|&&s| s == small).count() as f64;
                let p = n_small / sizes.len() as f64;
                // gap^2 / var = (1-p)/p for a two-point distribution
                let expected = (-0.5 * (1.0 - p) / p).exp();
                prop_assert!((row[0].multiplier - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn monotone_below_mean(mean_num in 20u64..200, var in 100u64..500, s1 in 1u64..20, s2 in 1u64..20, succ in 0u64..20) {
        let stats = SizeStats { mean: Exact::new(mean_num.into(), 1.into()), variance: Exact::new(var.into(), 1.into()) };
        let (lo, hi) = (s1.min(s2), s1.max(s2));
        let rate = CohortCount::new(succ.min(lo), lo).unwrap().rate();
        let p = AdjustmentPolicy::default();
        let a = adjust_value(rate, lo, &stats, &p);
        let b = adjust_value(rate, hi, &stats, &p);
        prop_assert!(a.adjusted_weight <= b.adjusted_weight);
        prop_assert!(a.multiplier > 0.0 && a.multiplier < 1.0);
        prop_assert!(a.adjusted_weight <= rate.to_f64());
    }

    #[test]
    fn equal_sizes_are_identity(t in common::table(2..=4, 1..=4), size in 1u64..30) {
        let rows: Vec<Vec<CohortCount>> = t.rows().iter()
            .map(|r| r.iter().map(|c| CohortCount::new(c.successes() % (size + 1), size).unwrap()).collect())
            .collect();
        let t = PreferenceTable::new(t.alternatives().to_vec(), t.groups().to_vec(), rows).unwrap();
        let once = adjust_table(&t, &AdjustmentPolicy::default());
        let twice = adjust_table(&t, &AdjustmentPolicy::default());
        prop_assert_eq!(&once, &twice);
        for (a, row) in once.cells.iter().enumerate() {
            for (g, c) in row.iter().enumerate() {
                prop_assert!(!c.penalized);
                prop_assert_eq!(c.adjusted_weight, t.rate_at(a, g).to_f64());
            }
        }
    }

    #[test]
    fn equal_size_cells_keep_their_order(t in common::table(3..=5, 1..=3)) {
        let adjusted = adjust_table(&t, &AdjustmentPolicy::default());
        for g in 0..t.num_groups() {
            for a in 0..t.num_alternatives() {
                for b in 0..t.num_alternatives() {
                    let (ca, cb) = (&adjusted.cells[a][g], &adjusted.cells[b][g]);
                    if ca.size == cb.size && t.rate_at(a, g) > t.rate_at(b, g) {
                        prop_assert!(ca.adjusted_weight > cb.adjusted_weight);
                    }
                }
            }
        }
    }
}

#[test]
fn continuous_at_the_mean() {
    let p = AdjustmentPolicy::default();
    let rate = CohortCount::new(1, 2).unwrap().rate();
    let mut last = 0.0;
    for variance in [1u64, 100, 10_000, 1_000_000] {
        let stats = SizeStats { mean: Exact::new(1000.into(), 1.into()), variance: Exact::new(variance.into(), 1.into()) };
        let c = adjust_value(rate, 999, &stats, &p);
        assert!(c.multiplier > last);
        last = c.multiplier;
    }
    assert!(1.0 - last < 1e-6);
}
