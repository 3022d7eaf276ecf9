#![allow(dead_code)]

use proptest::prelude::*;
use simpson_core::PreferenceTable;

fn cell() -> impl Strategy<Value = (u64, u64)> {
    (1u64..=40).prop_flat_map(|t| (0..=t, Just(t)))
}

/// Random `m × n` table with labels `A0..`, `G0..`.
pub fn table(m: std::ops::RangeInclusive<usize>, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PreferenceTable> {
    (m, n).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(cell(), n), m).prop_map(move |rows| {
            let alts: Vec<String> = (0..m).map(|i| format!("A{i}")).collect();
            let groups: Vec<String> = (0..n).map(|j| format!("G{j}")).collect();
            let refs: Vec<&[(u64, u64)]> = rows.iter().map(|r| r.as_slice()).collect();
            PreferenceTable::from_counts(&alts, &groups, &refs).unwrap()
        })
    })
}

/// `a/b > c/d` by cross-multiplication.
pub fn frac_gt(a: u64, b: u64, c: u64, d: u64) -> bool {
    u128::from(a) * u128::from(d) > u128::from(c) * u128::from(b)
}

pub fn frac_eq(a: u64, b: u64, c: u64, d: u64) -> bool {
    u128::from(a) * u128::from(d) == u128::from(c) * u128::from(b)
}
