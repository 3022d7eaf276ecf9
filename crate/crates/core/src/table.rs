//! Grouped trial data: cohorts, exact rates, tables and per-column size statistics.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for sums, margins and statistics.
pub type Exact = BigRational;

/// Successes out of trials for one alternative in one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CohortCount {
    successes: u64,
    trials: u64,
}

impl CohortCount {
    pub fn new(successes: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::ZeroTrials);
        }
        if successes > trials {
            return Err(Error::SuccessesExceedTrials { successes, trials });
        }
        Ok(CohortCount { successes, trials })
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn rate(&self) -> Rate {
        Rate(Ratio::new(self.successes, self.trials))
    }
}

impl fmt::Display for CohortCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.successes, self.trials)
    }
}

/// A success rate in `[0, 1]`, kept as a reduced fraction.
///
/// Ordering is exact; no floating point is involved in comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rate(Ratio<u64>);

impl Rate {
    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_exact(&self) -> Exact {
        Exact::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Alternatives (rows) by groups (columns) of cohort counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceTable {
    alternatives: Vec<String>,
    groups: Vec<String>,
    cells: Vec<Vec<CohortCount>>,
}

impl PreferenceTable {
    /// Builds a table, validating shape and label uniqueness.
    ///
    /// At least two alternatives and one group are required.
    pub fn new(
        alternatives: Vec<String>,
        groups: Vec<String>,
        cells: Vec<Vec<CohortCount>>,
    ) -> Result<Self> {
        if alternatives.len() < 2 {
            return Err(Error::TooFewAlternatives {
                min: 2,
                found: alternatives.len(),
            });
        }
        if groups.is_empty() {
            return Err(Error::NoGroups);
        }
        check_unique("alternative", &alternatives)?;
        check_unique("group", &groups)?;
        if cells.len() != alternatives.len() {
            return Err(Error::RaggedRow {
                alternative: "<table>".into(),
                expected: alternatives.len(),
                found: cells.len(),
            });
        }
        for (label, row) in alternatives.iter().zip(&cells) {
            if row.len() != groups.len() {
                return Err(Error::RaggedRow {
                    alternative: label.clone(),
                    expected: groups.len(),
                    found: row.len(),
                });
            }
        }
        Ok(PreferenceTable {
            alternatives,
            groups,
            cells,
        })
    }

    /// Convenience constructor from `(successes, trials)` pairs.
    pub fn from_counts<A, G>(alternatives: &[A], groups: &[G], counts: &[&[(u64, u64)]]) -> Result<Self>
    where
        A: AsRef<str>,
        G: AsRef<str>,
    {
        let cells = counts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(s, t)| CohortCount::new(s, t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            alternatives.iter().map(|a| a.as_ref().to_owned()).collect(),
            groups.iter().map(|g| g.as_ref().to_owned()).collect(),
            cells,
        )
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn groups(&self) -> &[String] {
        &self.groups
    }

    pub fn num_alternatives(&self) -> usize {
        self.alternatives.len()
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn rows(&self) -> &[Vec<CohortCount>] {
        &self.cells
    }

    pub fn cell(&self, alternative: usize, group: usize) -> CohortCount {
        self.cells[alternative][group]
    }

    pub fn rate_at(&self, alternative: usize, group: usize) -> Rate {
        self.cells[alternative][group].rate()
    }

    pub fn alternative_index(&self, label: &str) -> Result<usize> {
        self.alternatives
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownAlternative(label.to_owned()))
    }

    pub fn group_index(&self, label: &str) -> Result<usize> {
        self.groups
            .iter()
            .position(|g| g == label)
            .ok_or_else(|| Error::UnknownGroup(label.to_owned()))
    }

    /// Summed successes and trials over the alternative's row.
    pub fn pooled_count_at(&self, alternative: usize) -> CohortCount {
        let (s, t) = self.cells[alternative]
            .iter()
            .fold((0, 0), |(s, t), c| (s + c.successes, t + c.trials));
        CohortCount {
            successes: s,
            trials: t,
        }
    }

    pub fn pooled_rate_at(&self, alternative: usize) -> Rate {
        self.pooled_count_at(alternative).rate()
    }

    pub fn pooled_rate(&self, alternative: &str) -> Result<Rate> {
        Ok(self.pooled_rate_at(self.alternative_index(alternative)?))
    }

    /// Unweighted sum of per-group rates.
    pub fn rate_sum_at(&self, alternative: usize) -> Exact {
        self.cells[alternative]
            .iter()
            .fold(Exact::zero(), |acc, c| acc + c.rate().to_exact())
    }

    pub fn rate_sum(&self, alternative: &str) -> Result<Exact> {
        Ok(self.rate_sum_at(self.alternative_index(alternative)?))
    }

    pub fn column_size_stats_at(&self, group: usize) -> SizeStats {
        SizeStats::from_sizes(self.cells.iter().map(|row| row[group].trials))
    }

    pub fn column_size_stats(&self, group: &str) -> Result<SizeStats> {
        Ok(self.column_size_stats_at(self.group_index(group)?))
    }

    /// Returns a copy with two alternative rows exchanged.
    pub fn with_rows_swapped(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.alternatives.swap(a, b);
        out.cells.swap(a, b);
        out
    }
}

fn check_unique(axis: &'static str, labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel {
                axis,
                label: label.clone(),
            });
        }
    }
    Ok(())
}

/// Mean and population variance of cohort sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeStats {
    pub mean: Exact,
    pub variance: Exact,
}

impl SizeStats {
    /// Panics on an empty iterator.
    pub fn from_sizes<I: IntoIterator<Item = u64>>(sizes: I) -> Self {
        let sizes: Vec<BigInt> = sizes.into_iter().map(BigInt::from).collect();
        assert!(!sizes.is_empty(), "size statistics need at least one size");
        let count = BigInt::from(sizes.len());
        let sum: BigInt = sizes.iter().sum();
        let sum_sq: BigInt = sizes.iter().map(|s| s * s).sum();
        let mean = Exact::new(sum, count.clone());
        let variance = Exact::new(sum_sq, count) - &mean * &mean;
        SizeStats { mean, variance }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// Formats an exact value as a decimal with two places, rounding halves away from zero.
pub fn display_2dp(value: &Exact) -> String {
    let negative = value < &Exact::zero();
    let abs = if negative { -value.clone() } else { value.clone() };
    let hundred = BigInt::from(100);
    let scaled = abs.numer() * &hundred * 2 + abs.denom();
    let cents: BigInt = scaled / (abs.denom() * 2);
    let whole = &cents / &hundred;
    let frac = &cents % &hundred;
    let sign = if negative && !cents.is_zero() { "-" } else { "" };
    format!("{sign}{whole}.{frac:0>2}")
}

/// `num/den` text for an exact value.
pub fn exact_text(value: &Exact) -> String {
    format!("{}/{}", value.numer(), value.denom())
}
