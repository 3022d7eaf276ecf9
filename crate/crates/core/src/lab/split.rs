//! Exhaustive search for a grouping of pooled counts that reverses the pooled preference.
//!
//! Groups are filled in order. For each group the candidate tuple
//! `(alt1 successes, alt1 trials, alt2 successes, alt2 trials)` is tried in
//! increasing lexicographic order and the last group takes whatever remains,
//! so the first witness found is the lexicographically smallest one.

use crate::error::{Error, Result};
use crate::rules::detect_reversal;
use crate::table::{CohortCount, PreferenceTable};

/// Upper bound on candidate group tuples examined before giving up.
pub const SPLIT_SEARCH_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness {
    /// `(alt1, alt2)` counts per group.
    pub groups: Vec<(CohortCount, CohortCount)>,
    /// Index (0 or 1) of the alternative the pooled data favours.
    pub pooled_winner: usize,
    pub candidates_examined: u64,
}

impl SplitWitness {
    pub fn to_table(&self) -> PreferenceTable {
        let groups: Vec<String> = (1..=self.groups.len()).map(|g| format!("Group {g}")).collect();
        let rows = vec![
            self.groups.iter().map(|g| g.0).collect(),
            self.groups.iter().map(|g| g.1).collect(),
        ];
        PreferenceTable::new(vec!["Alternative 1".into(), "Alternative 2".into()], groups, rows)
            .expect("witness groups have valid counts")
    }
}

#[derive(Clone, Copy)]
struct Remaining {
    a_s: u64,
    a_t: u64,
    b_s: u64,
    b_t: u64,
}

struct Search {
    k: usize,
    min_trials: u64,
    /// Alternative that must win every group (the pooled loser).
    group_winner: usize,
    cap: u64,
    examined: u64,
    chosen: Vec<(CohortCount, CohortCount)>,
}

/// `a_s/a_t < b_s/b_t` when `group_winner == 1`, reversed otherwise.
fn favours(group_winner: usize, a_s: u64, a_t: u64, b_s: u64, b_t: u64) -> bool {
    let lhs = u128::from(a_s) * u128::from(b_t);
    let rhs = u128::from(b_s) * u128::from(a_t);
    if group_winner == 1 {
        lhs < rhs
    } else {
        lhs > rhs
    }
}

impl Search {
    /// The group-winner needs a success and the loser a failure in each of `groups` groups.
    fn can_fill(&self, rem: &Remaining, groups: u64) -> bool {
        let (w_s, l_fail) = if self.group_winner == 1 {
            (rem.b_s, rem.a_t - rem.a_s)
        } else {
            (rem.a_s, rem.b_t - rem.b_s)
        };
        rem.a_t >= groups * self.min_trials
            && rem.b_t >= groups * self.min_trials
            && w_s >= groups
            && l_fail >= groups
    }

    fn tick(&mut self) -> Result<()> {
        self.examined += 1;
        if self.examined > self.cap {
            return Err(Error::SearchCapExceeded { cap: self.cap });
        }
        Ok(())
    }

    fn push(&mut self, a: (u64, u64), b: (u64, u64)) {
        self.chosen.push((
            CohortCount::new(a.0, a.1).expect("successes within trials"),
            CohortCount::new(b.0, b.1).expect("successes within trials"),
        ));
    }

    fn descend(&mut self, rem: Remaining) -> Result<bool> {
        let after = (self.k - self.chosen.len() - 1) as u64;
        if after == 0 {
            self.tick()?;
            if favours(self.group_winner, rem.a_s, rem.a_t, rem.b_s, rem.b_t) {
                self.push((rem.a_s, rem.a_t), (rem.b_s, rem.b_t));
                return Ok(true);
            }
            return Ok(false);
        }
        let reserve = after * self.min_trials;
        for a_s in 0..=rem.a_s {
            for a_t in a_s.max(self.min_trials)..=rem.a_t.saturating_sub(reserve) {
                if rem.a_s - a_s > rem.a_t - a_t {
                    continue;
                }
                for b_s in 0..=rem.b_s {
                    for b_t in b_s.max(self.min_trials)..=rem.b_t.saturating_sub(reserve) {
                        if rem.b_s - b_s > rem.b_t - b_t {
                            continue;
                        }
                        self.tick()?;
                        if !favours(self.group_winner, a_s, a_t, b_s, b_t) {
                            continue;
                        }
                        let next = Remaining {
                            a_s: rem.a_s - a_s,
                            a_t: rem.a_t - a_t,
                            b_s: rem.b_s - b_s,
                            b_t: rem.b_t - b_t,
                        };
                        if !self.can_fill(&next, after) {
                            continue;
                        }
                        self.push((a_s, a_t), (b_s, b_t));
                        if self.descend(next)? {
                            return Ok(true);
                        }
                        self.chosen.pop();
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Splits the pooled counts of two alternatives into `k` groups so that every
/// group strictly favours the alternative the pooled counts disfavour.
///
/// Returns the lexicographically smallest such split, or `None` when no split
/// exists. Each group gets at least `min_trials` trials per alternative. A
/// returned witness has been checked with [`detect_reversal`].
pub fn find_reversing_split(
    totals_alt1: CohortCount,
    totals_alt2: CohortCount,
    k: usize,
    min_trials: u64,
) -> Result<Option<SplitWitness>> {
    find_reversing_split_capped(totals_alt1, totals_alt2, k, min_trials, SPLIT_SEARCH_CAP)
}

pub(crate) fn find_reversing_split_capped(
    totals_alt1: CohortCount,
    totals_alt2: CohortCount,
    k: usize,
    min_trials: u64,
    cap: u64,
) -> Result<Option<SplitWitness>> {
    if k == 0 {
        return Err(Error::InfeasibleSplit("at least one group is required".into()));
    }
    if min_trials == 0 {
        return Err(Error::InfeasibleSplit("every group needs at least one trial".into()));
    }
    for (name, t) in [("alternative 1", totals_alt1), ("alternative 2", totals_alt2)] {
        if (k as u64).saturating_mul(min_trials) > t.trials() {
            return Err(Error::InfeasibleSplit(format!(
                "{name} has {} trials, fewer than {k} groups of {min_trials}",
                t.trials()
            )));
        }
    }
    let pooled_winner = match totals_alt1.rate().cmp(&totals_alt2.rate()) {
        std::cmp::Ordering::Greater => 0,
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Equal => return Err(Error::PooledTie),
    };
    if k == 1 {
        return Ok(None);
    }
    let mut search = Search {
        k,
        min_trials,
        group_winner: 1 - pooled_winner,
        cap,
        examined: 0,
        chosen: Vec::with_capacity(k),
    };
    let start = Remaining {
        a_s: totals_alt1.successes(),
        a_t: totals_alt1.trials(),
        b_s: totals_alt2.successes(),
        b_t: totals_alt2.trials(),
    };
    if !search.can_fill(&start, k as u64) || !search.descend(start)? {
        return Ok(None);
    }
    let witness = SplitWitness {
        groups: search.chosen,
        pooled_winner,
        candidates_examined: search.examined,
    };
    let verified = detect_reversal(&witness.to_table())?;
    assert!(
        verified.reversed,
        "split search produced a non-reversing witness: {witness:?}"
    );
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(s: u64, t: u64) -> CohortCount {
        CohortCount::new(s, t).unwrap()
    }

    #[test]
    fn three_groups_from_table1_totals() {
        let w = find_reversing_split(cc(6, 10), cc(5, 10), 3, 1).unwrap().unwrap();
        assert_eq!(w.groups.len(), 3);
        assert_eq!(w.pooled_winner, 0);
        let a: (u64, u64) = w.groups.iter().fold((0, 0), |acc, g| (acc.0 + g.0.successes(), acc.1 + g.0.trials()));
        assert_eq!(a, (6, 10));
    }

    #[test]
    fn single_group_never_reverses() {
        assert_eq!(find_reversing_split(cc(6, 10), cc(5, 10), 1, 1).unwrap(), None);
    }

    #[test]
    fn error_paths() {
        assert_eq!(find_reversing_split(cc(5, 10), cc(1, 2), 2, 1), Err(Error::PooledTie));
        assert!(matches!(find_reversing_split(cc(6, 10), cc(5, 10), 0, 1), Err(Error::InfeasibleSplit(_))));
        assert!(matches!(find_reversing_split(cc(6, 10), cc(5, 10), 3, 4), Err(Error::InfeasibleSplit(_))));
        assert!(matches!(find_reversing_split(cc(6, 10), cc(5, 10), 2, 0), Err(Error::InfeasibleSplit(_))));
    }

    #[test]
    fn cap_is_reported() {
        let r = find_reversing_split_capped(cc(6, 10), cc(5, 10), 3, 1, 10);
        assert_eq!(r, Err(Error::SearchCapExceeded { cap: 10 }));
    }

    #[test]
    fn all_or_nothing_rates_have_no_witness() {
        // alt1 always succeeds; no group can favour alt2 strictly
        assert_eq!(find_reversing_split(cc(4, 4), cc(1, 4), 2, 1).unwrap(), None);
    }
}
