//! Worked tables used throughout the documentation and tests.

use crate::table::PreferenceTable;

/// Two treatments observed by three agents; every agent favours treatment 2,
/// the pooled counts favour treatment 1.
pub fn table1() -> PreferenceTable {
    PreferenceTable::from_counts(
        &["Treatment 1", "Treatment 2"],
        &["Agent 1", "Agent 2", "Agent 3"],
        &[&[(0, 1), (3, 4), (3, 5)], &[(1, 5), (1, 1), (3, 4)]],
    )
    .expect("valid table")
}

/// The six-agent version of [`table1`].
pub fn table2() -> PreferenceTable {
    PreferenceTable::from_counts(
        &["Treatment 1", "Treatment 2"],
        &["Agent 1", "Agent 2", "Agent 3", "Agent 4", "Agent 5", "Agent 6"],
        &[
            &[(5, 8), (23, 27), (15, 24), (68, 81), (55, 80), (234, 270)],
            &[(19, 26), (8, 9), (57, 78), (23, 27), (192, 263), (81, 87)],
        ],
    )
    .expect("valid table")
}

/// Three alternatives in two groups; the within-group ranking is the
/// reverse of the pooled ranking.
pub fn table5() -> PreferenceTable {
    PreferenceTable::from_counts(
        &["A", "B", "C"],
        &["Group 1", "Group 2"],
        &[&[(1, 10), (69, 90)], &[(10, 50), (40, 50)], &[(22, 80), (18, 20)]],
    )
    .expect("valid table")
}

/// Three alternatives in a single group with sizes 4, 7 and 10.
pub fn three_sizes() -> PreferenceTable {
    PreferenceTable::from_counts(
        &["First", "Second", "Third"],
        &["Group"],
        &[&[(2, 4)], &[(3, 7)], &[(4, 10)]],
    )
    .expect("valid table")
}
