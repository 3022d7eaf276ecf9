//! Reweighting of preference rates for unequal cohort sizes.
//!
//! A rate obtained from a cohort at least as large as its column mean is kept
//! as is. A rate from a smaller cohort of size `g` is scaled by
//! `k * exp(-delta * (g - mean)^2 / variance)`, where mean and population
//! variance are taken over the cohort sizes of that column. With the default
//! `delta = 1/2` a cohort `v` standard deviations below the mean keeps
//! `exp(-v^2 / 2)` of its weight.
//!
//! The exponent is evaluated exactly and only converted to floating point for
//! the final `exp`, so adjusted weights are reproducible bit for bit.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rules::{strict_max, MajorityTally, Outcome};
use crate::table::{Exact, PreferenceTable, Rate, SizeStats};

/// Relative tolerance used when comparing real-valued adjusted weights.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustmentPolicy {
    delta: Exact,
    k: Exact,
}

impl Default for AdjustmentPolicy {
    fn default() -> Self {
        AdjustmentPolicy {
            delta: Exact::new(BigInt::one(), BigInt::from(2)),
            k: Exact::one(),
        }
    }
}

impl AdjustmentPolicy {
    pub fn new(delta: Exact, k: Exact) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::InvalidPolicy("delta must be positive"));
        }
        if !k.is_positive() {
            return Err(Error::InvalidPolicy("k must be positive"));
        }
        Ok(AdjustmentPolicy { delta, k })
    }

    pub fn delta(&self) -> &Exact {
        &self.delta
    }

    pub fn k(&self) -> &Exact {
        &self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustedCell {
    pub original_rate: Rate,
    pub size: u64,
    /// `exp(-W)`; exactly 1 when the cell is not penalized.
    pub multiplier: f64,
    pub adjusted_weight: f64,
    pub penalized: bool,
}

impl AdjustedCell {
    fn unchanged(rate: Rate, size: u64) -> Self {
        AdjustedCell {
            original_rate: rate,
            size,
            multiplier: 1.0,
            adjusted_weight: rate.to_f64(),
            penalized: false,
        }
    }
}

/// `exp(-v^2 / 2)` for a cohort `v` standard deviations below the mean.
pub fn deviation_multiplier(v: f64) -> f64 {
    (-0.5 * v * v).exp()
}

/// The exponent `delta * (size - mean)^2 / variance`, exactly.
///
/// `None` when the cell is not penalized.
pub fn penalty_exponent(size: u64, stats: &SizeStats, policy: &AdjustmentPolicy) -> Option<Exact> {
    let size = Exact::from_integer(BigInt::from(size));
    if stats.variance.is_zero() || size >= stats.mean {
        return None;
    }
    let gap = &size - &stats.mean;
    Some(&policy.delta * &gap * &gap / &stats.variance)
}

pub fn adjust_value(rate: Rate, size: u64, stats: &SizeStats, policy: &AdjustmentPolicy) -> AdjustedCell {
    match penalty_exponent(size, stats, policy) {
        None => AdjustedCell::unchanged(rate, size),
        Some(w) => {
            let multiplier = (-w.to_f64().unwrap_or(f64::INFINITY)).exp();
            let k = policy.k.to_f64().unwrap_or(1.0);
            AdjustedCell {
                original_rate: rate,
                size,
                multiplier,
                adjusted_weight: k * rate.to_f64() * multiplier,
                penalized: true,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjustedTable {
    /// Indexed `[alternative][group]`.
    pub cells: Vec<Vec<AdjustedCell>>,
    pub column_stats: Vec<SizeStats>,
}

pub fn adjust_table(table: &PreferenceTable, policy: &AdjustmentPolicy) -> AdjustedTable {
    let column_stats: Vec<SizeStats> = (0..table.num_groups())
        .map(|g| table.column_size_stats_at(g))
        .collect();
    let cells = table
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .zip(&column_stats)
                .map(|(cell, stats)| adjust_value(cell.rate(), cell.trials(), stats, policy))
                .collect()
        })
        .collect();
    AdjustedTable { cells, column_stats }
}

/// Compares two reals, treating values within [`WEIGHT_TOLERANCE`] (relative) as equal.
pub fn compare_reals(a: f64, b: f64) -> Ordering {
    let scale = a.abs().max(b.abs());
    if (a - b).abs() <= WEIGHT_TOLERANCE * scale {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Exact when both cells are unpenalized, tolerance-based otherwise.
pub fn compare_weights(a: &AdjustedCell, b: &AdjustedCell) -> Ordering {
    if !a.penalized && !b.penalized {
        a.original_rate.cmp(&b.original_rate)
    } else {
        compare_reals(a.adjusted_weight, b.adjusted_weight)
    }
}

impl AdjustedTable {
    pub fn group_winner(&self, group: usize) -> Outcome {
        let column: Vec<AdjustedCell> = self.cells.iter().map(|row| row[group]).collect();
        strict_max(&column, compare_weights).0
    }

    pub fn group_winners(&self) -> Vec<Outcome> {
        (0..self.column_stats.len()).map(|g| self.group_winner(g)).collect()
    }

    pub fn weight_sums(&self) -> Vec<f64> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|c| c.adjusted_weight).sum())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdjustedRule {
    /// Majority over per-group winners of adjusted weights (two alternatives).
    Majority,
    /// Largest sum of adjusted weights.
    Sum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjustedDecision {
    pub winner: Outcome,
    pub rule: AdjustedRule,
    /// Difference in group wins for majority, in weight sums otherwise; zero on a tie.
    pub margin: f64,
    pub tally: Option<MajorityTally>,
}

pub fn adjusted_decision(
    table: &PreferenceTable,
    policy: &AdjustmentPolicy,
    rule: AdjustedRule,
) -> Result<AdjustedDecision> {
    let adjusted = adjust_table(table, policy);
    match rule {
        AdjustedRule::Majority => {
            if table.num_alternatives() != 2 {
                return Err(Error::NotBinary(table.num_alternatives()));
            }
            let tally = MajorityTally::from_outcomes(adjusted.group_winners());
            let decision = tally.decision();
            Ok(AdjustedDecision {
                winner: decision.winner,
                rule,
                margin: decision.margin.to_f64().unwrap_or(0.0),
                tally: Some(tally),
            })
        }
        AdjustedRule::Sum => {
            let sums = adjusted.weight_sums();
            let (winner, top, second) = strict_max(&sums, |a, b| compare_reals(*a, *b));
            let margin = match winner {
                Outcome::Tie => 0.0,
                Outcome::Winner(_) => sums[top] - sums[second],
            };
            Ok(AdjustedDecision {
                winner,
                rule,
                margin,
                tally: None,
            })
        }
    }
}
