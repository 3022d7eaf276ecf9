//! Decision rules over a preference table and reversal detection.
//!
//! Every winner predicate is a strict exact inequality. Ties are reported as
//! such and never broken.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::{Exact, PreferenceTable};

/// Winner of a comparison: an alternative index or a tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Winner(usize),
    Tie,
}

impl Outcome {
    pub fn winner(self) -> Option<usize> {
        match self {
            Outcome::Winner(i) => Some(i),
            Outcome::Tie => None,
        }
    }

    pub fn label(self, table: &PreferenceTable) -> String {
        match self {
            Outcome::Winner(i) => table.alternatives()[i].clone(),
            Outcome::Tie => "tie".to_owned(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Pooled,
    RateSum,
    Majority,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub winner: Outcome,
    pub rule: Rule,
    /// Winner score minus runner-up score; zero for a tie.
    pub margin: Exact,
}

/// Picks the strict maximum of `scores`, with margin to the runner-up.
///
/// Needs at least two scores.
pub(crate) fn strict_max<T, F>(scores: &[T], cmp: F) -> (Outcome, usize, usize)
where
    F: Fn(&T, &T) -> Ordering,
{
    debug_assert!(scores.len() >= 2);
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| cmp(&scores[b], &scores[a]).then(a.cmp(&b)));
    let (top, second) = (order[0], order[1]);
    let outcome = match cmp(&scores[top], &scores[second]) {
        Ordering::Greater => Outcome::Winner(top),
        _ => Outcome::Tie,
    };
    (outcome, top, second)
}

fn decide_exact(scores: Vec<Exact>, rule: Rule) -> Decision {
    let (winner, top, second) = strict_max(&scores, |a, b| a.cmp(b));
    let margin = match winner {
        Outcome::Tie => Exact::zero(),
        Outcome::Winner(_) => &scores[top] - &scores[second],
    };
    Decision {
        winner,
        rule,
        margin,
    }
}

fn require_binary(table: &PreferenceTable) -> Result<()> {
    match table.num_alternatives() {
        2 => Ok(()),
        m => Err(Error::NotBinary(m)),
    }
}

pub fn group_winner_at(table: &PreferenceTable, group: usize) -> Outcome {
    let rates: Vec<_> = (0..table.num_alternatives())
        .map(|a| table.rate_at(a, group))
        .collect();
    strict_max(&rates, |a, b| a.cmp(b)).0
}

pub fn group_winner(table: &PreferenceTable, group: &str) -> Result<Outcome> {
    Ok(group_winner_at(table, table.group_index(group)?))
}

/// Per-group `rate(alt 2) - rate(alt 1)`.
pub fn margin_vector(table: &PreferenceTable) -> Result<Vec<Exact>> {
    require_binary(table)?;
    Ok((0..table.num_groups())
        .map(|g| table.rate_at(1, g).to_exact() - table.rate_at(0, g).to_exact())
        .collect())
}

pub fn pooled_decision(table: &PreferenceTable) -> Decision {
    let scores = (0..table.num_alternatives())
        .map(|a| table.pooled_rate_at(a).to_exact())
        .collect();
    decide_exact(scores, Rule::Pooled)
}

pub fn rate_sum_decision(table: &PreferenceTable) -> Decision {
    let scores = (0..table.num_alternatives())
        .map(|a| table.rate_sum_at(a))
        .collect();
    decide_exact(scores, Rule::RateSum)
}

/// Group wins for each of two alternatives plus tied groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MajorityTally {
    pub wins: [usize; 2],
    pub ties: usize,
}

impl MajorityTally {
    pub fn from_outcomes<I: IntoIterator<Item = Outcome>>(outcomes: I) -> Self {
        let mut tally = MajorityTally {
            wins: [0, 0],
            ties: 0,
        };
        for o in outcomes {
            match o {
                Outcome::Winner(i) => tally.wins[i] += 1,
                Outcome::Tie => tally.ties += 1,
            }
        }
        tally
    }

    pub fn decision(&self) -> Decision {
        let scores = vec![
            Exact::from_integer(BigInt::from(self.wins[0])),
            Exact::from_integer(BigInt::from(self.wins[1])),
        ];
        decide_exact(scores, Rule::Majority)
    }
}

pub fn majority_tally(table: &PreferenceTable) -> Result<MajorityTally> {
    require_binary(table)?;
    Ok(MajorityTally::from_outcomes(
        (0..table.num_groups()).map(|g| group_winner_at(table, g)),
    ))
}

/// Alternative winning strictly more groups; the margin is the difference in group wins.
pub fn majority_decision(table: &PreferenceTable) -> Result<Decision> {
    Ok(majority_tally(table)?.decision())
}

pub fn decide(table: &PreferenceTable, rule: Rule) -> Result<Decision> {
    match rule {
        Rule::Pooled => Ok(pooled_decision(table)),
        Rule::RateSum => Ok(rate_sum_decision(table)),
        Rule::Majority => majority_decision(table),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversalReport {
    pub per_group_winners: Vec<Outcome>,
    pub pooled_winner: Outcome,
    pub reversed: bool,
    /// Same as [`margin_vector`].
    pub margins: Vec<Exact>,
}

/// True iff one alternative wins every group strictly and the other wins the pooled data strictly.
pub(crate) fn is_reversal(per_group: &[Outcome], pooled: Outcome) -> bool {
    let Some(first) = per_group.first().and_then(|o| o.winner()) else {
        return false;
    };
    let uniform = per_group.iter().all(|&o| o == Outcome::Winner(first));
    matches!(pooled, Outcome::Winner(p) if p != first) && uniform
}

pub fn detect_reversal(table: &PreferenceTable) -> Result<ReversalReport> {
    let margins = margin_vector(table)?;
    let per_group_winners: Vec<_> = (0..table.num_groups())
        .map(|g| group_winner_at(table, g))
        .collect();
    let pooled_winner = pooled_decision(table).winner;
    Ok(ReversalReport {
        reversed: is_reversal(&per_group_winners, pooled_winner),
        per_group_winners,
        pooled_winner,
        margins,
    })
}

/// Alternatives ordered best first; each tier holds alternatives with equal scores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranking(pub Vec<Vec<usize>>);

impl Ranking {
    fn from_scores<T: Ord>(scores: &[T]) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
        let mut tiers: Vec<Vec<usize>> = Vec::new();
        for idx in order {
            match tiers.last_mut() {
                Some(tier) if scores[tier[0]] == scores[idx] => tier.push(idx),
                _ => tiers.push(vec![idx]),
            }
        }
        Ranking(tiers)
    }

    pub fn is_strict(&self) -> bool {
        self.0.iter().all(|tier| tier.len() == 1)
    }

    pub fn reversed(&self) -> Ranking {
        Ranking(self.0.iter().rev().cloned().collect())
    }

    /// Renders as `C > B > A`, with `=` inside tiers.
    pub fn render(&self, table: &PreferenceTable) -> String {
        self.0
            .iter()
            .map(|tier| {
                tier.iter()
                    .map(|&i| table.alternatives()[i].as_str())
                    .collect::<Vec<_>>()
                    .join(" = ")
            })
            .collect::<Vec<_>>()
            .join(" > ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingReport {
    pub per_group_rankings: Vec<Ranking>,
    pub pooled_ranking: Ranking,
    pub fully_reversed: bool,
}

pub fn rank_report(table: &PreferenceTable) -> RankingReport {
    let m = table.num_alternatives();
    let per_group_rankings: Vec<_> = (0..table.num_groups())
        .map(|g| {
            let rates: Vec<_> = (0..m).map(|a| table.rate_at(a, g)).collect();
            Ranking::from_scores(&rates)
        })
        .collect();
    let pooled: Vec<_> = (0..m).map(|a| table.pooled_rate_at(a)).collect();
    let pooled_ranking = Ranking::from_scores(&pooled);
    let first = &per_group_rankings[0];
    let fully_reversed = per_group_rankings.iter().all(|r| r.is_strict() && r == first)
        && pooled_ranking == first.reversed();
    RankingReport {
        per_group_rankings,
        pooled_ranking,
        fully_reversed,
    }
}
