mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use simpson_core::lab::{
    estimate_paradox_probability, find_reversing_split, is_paradox_point, SAMPLES_PER_STREAM,
};
use simpson_core::rules::detect_reversal;
use simpson_core::{CohortCount, PreferenceTable};

/// Straight-line re-implementation: same random streams, rates by division.
fn reference_hits(samples: u64, seed: u64) -> u64 {
    let mut hits = 0;
    let mut done = 0;
    let mut block = 0;
    while done < samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        let len = SAMPLES_PER_STREAM.min(samples - done);
        for _ in 0..len {
            let raw: Vec<f64> = (0..8).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
            // p[t*4 + g*2 + o]
            let rate = |s: f64, f: f64| s / (s + f);
            let g0 = (rate(p[0], p[1]), rate(p[4], p[5]));
            let g1 = (rate(p[2], p[3]), rate(p[6], p[7]));
            let pooled = (rate(p[0] + p[2], p[1] + p[3]), rate(p[4] + p[6], p[5] + p[7]));
            let t1_groups = g0.0 > g0.1 && g1.0 > g1.1;
            let t2_groups = g0.0 < g0.1 && g1.0 < g1.1;
            if (t1_groups && pooled.0 < pooled.1) || (t2_groups && pooled.0 > pooled.1) {
                hits += 1;
            }
        }
        done += len;
        block += 1;
    }
    hits
}

#[test]
fn matches_reference_implementation() {
    for seed in [1, 7, 2024] {
        let e = estimate_paradox_probability(10_000, seed, 1).unwrap();
        assert_eq!(e.hits, reference_hits(10_000, seed), "seed {seed}");
    }
    let e = estimate_paradox_probability(12_345, 5, 3).unwrap();
    assert_eq!(e.hits, reference_hits(12_345, 5));
}

#[test]
fn doubling_samples_converges() {
    let a = estimate_paradox_probability(100_000, 11, 2).unwrap();
    let b = estimate_paradox_probability(200_000, 11, 2).unwrap();
    let combined = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    assert!((a.estimate - b.estimate).abs() <= 6.0 * combined);
    assert_eq!(a.seed, 11);
}

fn masses(t: &PreferenceTable) -> [f64; 8] {
    let mut m = [0.0; 8];
    for a in 0..2 {
        for g in 0..2 {
            let c = t.cell(a, g);
            m[a * 4 + g * 2] = c.successes() as f64;
            m[a * 4 + g * 2 + 1] = (c.trials() - c.successes()) as f64;
        }
    }
    m
}

proptest! {
    #[test]
    fn point_predicate_agrees_with_table_detector(t in common::table(2..=2, 2..=2)) {
        prop_assert_eq!(is_paradox_point(&masses(&t)), detect_reversal(&t).unwrap().reversed);
    }
}

type Split = Vec<(u64, u64, u64, u64)>;

/// All ways to cut `(s, t)` into `k` cohorts with at least `min` trials each.
fn cohort_splits(s: u64, t: u64, k: usize, min: u64) -> Vec<Vec<(u64, u64)>> {
    if k == 1 {
        return if t >= min && s <= t { vec![vec![(s, t)]] } else { vec![] };
    }
    let mut out = Vec::new();
    for ti in min..=t {
        for si in 0..=s.min(ti) {
            for mut rest in cohort_splits(s - si, t - ti, k - 1, min) {
                rest.insert(0, (si, ti));
                out.push(rest);
            }
        }
    }
    out
}

fn brute_force_split(a: (u64, u64), b: (u64, u64), k: usize, min: u64) -> Option<Split> {
    let pooled_a_wins = common::frac_gt(a.0, a.1, b.0, b.1);
    let mut best: Option<Split> = None;
    for sa in cohort_splits(a.0, a.1, k, min) {
        for sb in cohort_splits(b.0, b.1, k, min) {
            let ok = sa.iter().zip(&sb).all(|(x, y)| {
                if pooled_a_wins {
                    common::frac_gt(y.0, y.1, x.0, x.1)
                } else {
                    common::frac_gt(x.0, x.1, y.0, y.1)
                }
            });
            if ok {
                let cand: Split = sa.iter().zip(&sb).map(|(x, y)| (x.0, x.1, y.0, y.1)).collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

fn flatten(w: &simpson_core::lab::SplitWitness) -> Split {
    w.groups
        .iter()
        .map(|(x, y)| (x.successes(), x.trials(), y.successes(), y.trials()))
        .collect()
}

#[test]
fn worked_totals_match_brute_force() {
    let cc = |s, t| CohortCount::new(s, t).unwrap();
    let w = find_reversing_split(cc(6, 10), cc(5, 10), 3, 1).unwrap().unwrap();
    assert_eq!(Some(flatten(&w)), brute_force_split((6, 10), (5, 10), 3, 1));
    assert!(detect_reversal(&w.to_table()).unwrap().reversed);

    let found = find_reversing_split(cc(1, 2), cc(2, 3), 2, 1).unwrap();
    let oracle = brute_force_split((1, 2), (2, 3), 2, 1);
    assert_eq!(found.as_ref().map(flatten), oracle);
    if let Some(w) = found {
        assert!(detect_reversal(&w.to_table()).unwrap().reversed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn search_matches_brute_force(
        at in 2u64..8, bt in 2u64..8, asx in 0u64..8, bsx in 0u64..8, k in 2usize..4, min in 1u64..3,
    ) {
        let (a_s, b_s) = (asx % (at + 1), bsx % (bt + 1));
        prop_assume!(!common::frac_eq(a_s, at, b_s, bt));
        prop_assume!(k as u64 * min <= at.min(bt));
        let found = find_reversing_split(
            CohortCount::new(a_s, at).unwrap(), CohortCount::new(b_s, bt).unwrap(), k, min,
        ).unwrap();
        prop_assert_eq!(found.as_ref().map(flatten), brute_force_split((a_s, at), (b_s, bt), k, min));
    }
}
