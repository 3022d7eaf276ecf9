//! Cross-group comparison of two alternatives.
//!
//! Instead of comparing the two alternatives only inside each group, these
//! schemes also compare alternative 1 in one group against alternative 2 in
//! another: first pairwise with the groups switched, then across every
//! permutation of the group assignment.

use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::table::{PreferenceTable, Rate};

/// Largest group count walked permutation by permutation.
pub const ENUMERATION_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSwitchResult {
    pub group_a: usize,
    pub group_b: usize,
    pub wins_alt1: u32,
    pub wins_alt2: u32,
    pub ties: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairTotals {
    pub wins_alt1: u64,
    pub wins_alt2: u64,
    pub ties: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchedPairs {
    pub pairs: Vec<PairSwitchResult>,
    pub totals: PairTotals,
}

/// Tallies of alternative 2 against alternative 1 over `n * n!` comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationScore {
    pub wins_alt2: BigUint,
    pub ties: BigUint,
    pub losses_alt2: BigUint,
    pub total: BigUint,
}

fn binary(table: &PreferenceTable) -> Result<()> {
    match table.num_alternatives() {
        2 => Ok(()),
        m => Err(Error::NotBinary(m)),
    }
}

/// Ordering of alternative 2's rate against alternative 1's.
fn duel(alt1: Rate, alt2: Rate) -> Ordering {
    alt2.cmp(&alt1)
}

pub fn switched_pair_at(table: &PreferenceTable, a: usize, b: usize) -> Result<PairSwitchResult> {
    binary(table)?;
    if a == b {
        return Err(Error::SameGroup(table.groups()[a].clone()));
    }
    let mut result = PairSwitchResult {
        group_a: a,
        group_b: b,
        wins_alt1: 0,
        wins_alt2: 0,
        ties: 0,
    };
    for (x, y) in [(a, b), (b, a)] {
        match duel(table.rate_at(0, x), table.rate_at(1, y)) {
            Ordering::Greater => result.wins_alt2 += 1,
            Ordering::Less => result.wins_alt1 += 1,
            Ordering::Equal => result.ties += 1,
        }
    }
    Ok(result)
}

pub fn switched_pair(table: &PreferenceTable, group_a: &str, group_b: &str) -> Result<PairSwitchResult> {
    let a = table.group_index(group_a)?;
    let b = table.group_index(group_b)?;
    switched_pair_at(table, a, b)
}

/// One result per unordered group pair, in lexicographic pair order.
pub fn all_switched_pairs(table: &PreferenceTable) -> Result<SwitchedPairs> {
    binary(table)?;
    let n = table.num_groups();
    if n < 2 {
        return Err(Error::TooFewGroups { min: 2, found: n });
    }
    let mut totals = PairTotals::default();
    let pairs = (0..n)
        .tuple_combinations()
        .map(|(a, b)| {
            let r = switched_pair_at(table, a, b)?;
            totals.wins_alt1 += u64::from(r.wins_alt1);
            totals.wins_alt2 += u64::from(r.wins_alt2);
            totals.ties += u64::from(r.ties);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SwitchedPairs { pairs, totals })
}

/// Walks every permutation of the groups explicitly. Capped at [`ENUMERATION_CAP`] groups.
pub fn permutation_score(table: &PreferenceTable) -> Result<PermutationScore> {
    binary(table)?;
    let n = table.num_groups();
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            cap: ENUMERATION_CAP,
            found: n,
        });
    }
    let alt1: Vec<Rate> = (0..n).map(|g| table.rate_at(0, g)).collect();
    let alt2: Vec<Rate> = (0..n).map(|g| table.rate_at(1, g)).collect();
    let (mut wins, mut ties, mut losses) = (0u64, 0u64, 0u64);
    for perm in (0..n).permutations(n) {
        for (i, &j) in perm.iter().enumerate() {
            match duel(alt1[i], alt2[j]) {
                Ordering::Greater => wins += 1,
                Ordering::Equal => ties += 1,
                Ordering::Less => losses += 1,
            }
        }
    }
    Ok(PermutationScore {
        wins_alt2: wins.into(),
        ties: ties.into(),
        losses_alt2: losses.into(),
        total: (wins + ties + losses).into(),
    })
}

/// Same tallies as [`permutation_score`] in `O(n²)`: every ordered pairing of
/// groups `(i, j)` occurs in exactly `(n-1)!` permutations.
pub fn permutation_score_fast(table: &PreferenceTable) -> Result<PermutationScore> {
    binary(table)?;
    let n = table.num_groups();
    let (mut wins, mut ties, mut losses) = (0u64, 0u64, 0u64);
    for i in 0..n {
        let a = table.rate_at(0, i);
        for j in 0..n {
            match duel(a, table.rate_at(1, j)) {
                Ordering::Greater => wins += 1,
                Ordering::Equal => ties += 1,
                Ordering::Less => losses += 1,
            }
        }
    }
    let weight = factorial(n - 1);
    Ok(PermutationScore {
        wins_alt2: &weight * wins,
        ties: &weight * ties,
        losses_alt2: &weight * losses,
        total: factorial(n) * BigUint::from(n),
    })
}

/// Enumerates up to the cap, closed form beyond it.
pub fn permutation_score_auto(table: &PreferenceTable) -> Result<PermutationScore> {
    if table.num_groups() <= ENUMERATION_CAP {
        permutation_score(table)
    } else {
        permutation_score_fast(table)
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

impl PermutationScore {
    pub fn is_consistent(&self) -> bool {
        &self.wins_alt2 + &self.ties + &self.losses_alt2 == self.total && !self.total.is_zero()
    }
}
