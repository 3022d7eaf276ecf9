//! Exact analysis of preference reversals in grouped trial data.
//!
//! A [`PreferenceTable`] holds successes out of trials for a set of
//! alternatives observed in several groups. On top of it this crate offers:
//!
//! - decision rules (pooled rate, sum of rates, group majority) and detection
//!   of Simpson-style reversals between group-level and pooled preferences
//!   ([`rules`]);
//! - cross-group comparison of two alternatives by switched pairs and by all
//!   permutations of the group assignment ([`cross`]);
//! - reweighting of rates from cohorts smaller than their column mean
//!   ([`adjust`]);
//! - Monte Carlo estimation of how often random tables reverse, and an
//!   exhaustive search for groupings of pooled counts that reverse them
//!   ([`lab`]).
//!
//! All comparisons between rates are exact rational comparisons.
//!
//! ```
//! use simpson_core::{datasets, rules};
//!
//! let table = datasets::table1();
//! let report = rules::detect_reversal(&table).unwrap();
//! assert!(report.reversed);
//! ```

pub mod adjust;
pub mod cross;
pub mod datasets;
mod error;
pub mod format;
pub mod lab;
pub mod rules;
pub mod table;

pub use error::{Error, Result};
pub use table::{display_2dp, exact_text, CohortCount, Exact, PreferenceTable, Rate, SizeStats};

/// Runs the code blocks of the guide in `book/` as doc-tests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/tables.md")]
    pub struct Tables;
    #[doc = include_str!("../../../book/src/decision-rules.md")]
    pub struct DecisionRules;
    #[doc = include_str!("../../../book/src/cross-comparison.md")]
    pub struct CrossComparison;
    #[doc = include_str!("../../../book/src/size-adjustment.md")]
    pub struct SizeAdjustment;
    #[doc = include_str!("../../../book/src/paradox-lab.md")]
    pub struct ParadoxLab;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
