use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use simpson_core::adjust::{AdjustedDecision, AdjustedTable, AdjustmentPolicy};
use simpson_core::cross::{PermutationScore, SwitchedPairs};
use simpson_core::format::to_csv;
use simpson_core::lab::{ParadoxEstimate, SplitWitness};
use simpson_core::rules::{Decision, MajorityTally, RankingReport, ReversalReport, Rule};
use simpson_core::{display_2dp, exact_text, CohortCount, Exact, PreferenceTable, Rate};

/// A command's results.
///
/// `results` carries display values (two decimals); `exact` maps the JSON
/// pointer of every such value to its exact `num/den` form, or to the full
/// double for real-valued weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub table_digest: Option<String>,
    pub results: Value,
    pub exact: BTreeMap<String, String>,
    text: Vec<String>,
}

fn digest(table: &PreferenceTable) -> String {
    hex::encode(Sha256::digest(to_csv(table).as_bytes()))
}

fn both(v: &Exact) -> String {
    format!("{} ({})", exact_text(v), display_2dp(v))
}

fn real_2dp(x: f64) -> String {
    format!("{:.2}", (x * 100.0).round() / 100.0)
}

fn rule_name(rule: Rule) -> &'static str {
    match rule {
        Rule::Pooled => "pooled",
        Rule::RateSum => "rate-sum",
        Rule::Majority => "majority",
    }
}

fn big_to_exact(n: &BigUint, d: &BigUint) -> Exact {
    Exact::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// Collects exact values while the results tree is assembled.
struct Builder {
    exact: BTreeMap<String, String>,
    text: Vec<String>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            exact: BTreeMap::new(),
            text: Vec::new(),
        }
    }

    fn rat(&mut self, pointer: &str, v: &Exact) -> Value {
        self.exact.insert(pointer.to_owned(), exact_text(v));
        Value::String(display_2dp(v))
    }

    fn rate(&mut self, pointer: &str, r: Rate) -> Value {
        self.rat(pointer, &r.to_exact())
    }

    fn real(&mut self, pointer: &str, x: f64) -> Value {
        self.exact.insert(pointer.to_owned(), format!("{x:?}"));
        Value::String(real_2dp(x))
    }

    fn line(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }

    fn finish(self, command: &str, table: Option<&PreferenceTable>, results: Value) -> Report {
        Report {
            command: command.to_owned(),
            table_digest: table.map(digest),
            results,
            exact: self.exact,
            text: self.text,
        }
    }
}

fn decision_json(b: &mut Builder, pointer: &str, table: &PreferenceTable, d: &Decision) -> Value {
    json!({
        "rule": rule_name(d.rule),
        "winner": d.winner.label(table),
        "margin": b.rat(&format!("{pointer}/margin"), &d.margin),
    })
}

fn tally_text(tally: &MajorityTally) -> String {
    let verdict = match tally.wins[0].cmp(&tally.wins[1]) {
        std::cmp::Ordering::Equal => " tie",
        _ => "",
    };
    format!("{}-{}{verdict}", tally.wins[0], tally.wins[1])
}

impl Report {
    pub fn render_json(&self) -> String {
        let doc = json!({
            "command": self.command,
            "table_digest": self.table_digest,
            "results": self.results,
            "exact": self.exact,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for line in &self.text {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn detect(table: &PreferenceTable, reversal: &ReversalReport, pooled: &Decision) -> Report {
        let mut b = Builder::new();
        let mut groups = Vec::new();
        for (g, label) in table.groups().iter().enumerate() {
            let winner = reversal.per_group_winners[g].label(table);
            let margin = &reversal.margins[g];
            b.line(format!("{label}: winner {winner}, margin {}", both(margin)));
            groups.push(json!({
                "group": label,
                "winner": winner,
                "margin": b.rat(&format!("/groups/{g}/margin"), margin),
                "rates": [
                    b.rate(&format!("/groups/{g}/rates/0"), table.rate_at(0, g)),
                    b.rate(&format!("/groups/{g}/rates/1"), table.rate_at(1, g)),
                ],
            }));
        }
        b.line(format!(
            "pooled: winner {}, margin {}",
            pooled.winner.label(table),
            both(&pooled.margin)
        ));
        b.line(format!("reversed: {}", reversal.reversed));
        let pooled_json = json!({
            "winner": pooled.winner.label(table),
            "margin": b.rat("/pooled/margin", &pooled.margin),
            "rates": [
                b.rate("/pooled/rates/0", table.pooled_rate_at(0)),
                b.rate("/pooled/rates/1", table.pooled_rate_at(1)),
            ],
        });
        let results = json!({
            "alternatives": table.alternatives(),
            "groups": groups,
            "pooled": pooled_json,
            "reversed": reversal.reversed,
        });
        b.finish("detect", Some(table), results)
    }

    pub fn rank(table: &PreferenceTable, report: &RankingReport) -> Report {
        let mut b = Builder::new();
        let mut groups = Vec::new();
        for (g, label) in table.groups().iter().enumerate() {
            let ranking = report.per_group_rankings[g].render(table);
            b.line(format!("{label}: {ranking}"));
            groups.push(json!({ "group": label, "ranking": ranking }));
        }
        let pooled_rates: Vec<Value> = (0..table.num_alternatives())
            .map(|a| {
                let r = table.pooled_rate_at(a);
                b.line(format!("pooled {}: {}", table.alternatives()[a], both(&r.to_exact())));
                b.rate(&format!("/pooled/rates/{a}"), r)
            })
            .collect();
        let pooled_ranking = report.pooled_ranking.render(table);
        b.line(format!("pooled: {pooled_ranking}"));
        b.line(format!("fully reversed: {}", report.fully_reversed));
        let results = json!({
            "alternatives": table.alternatives(),
            "groups": groups,
            "pooled": { "ranking": pooled_ranking, "rates": pooled_rates },
            "fully_reversed": report.fully_reversed,
        });
        b.finish("rank", Some(table), results)
    }

    pub fn permutations(table: &PreferenceTable, score: &PermutationScore, method: &str) -> Report {
        let mut b = Builder::new();
        let label = &table.alternatives()[1];
        let frac = format!("{}/{}", score.wins_alt2, score.total);
        let share = big_to_exact(&score.wins_alt2, &score.total);
        b.line(format!("{label} wins {frac} comparisons ({})", display_2dp(&share)));
        b.line(format!("ties {}, losses {}", score.ties, score.losses_alt2));
        let results = json!({
            "mode": "permutations",
            "method": method,
            "alternative": label,
            "score": frac,
            "share": b.rat("/share", &share),
            "wins": score.wins_alt2.to_string(),
            "ties": score.ties.to_string(),
            "losses": score.losses_alt2.to_string(),
            "total": score.total.to_string(),
        });
        b.finish("compare", Some(table), results)
    }

    pub fn pairwise(table: &PreferenceTable, pairs: &SwitchedPairs) -> Report {
        let mut b = Builder::new();
        let groups = table.groups();
        let list: Vec<Value> = pairs
            .pairs
            .iter()
            .map(|p| {
                b.line(format!(
                    "{} / {}: alt1 {}, alt2 {}, ties {}",
                    groups[p.group_a], groups[p.group_b], p.wins_alt1, p.wins_alt2, p.ties
                ));
                json!({
                    "group_a": groups[p.group_a],
                    "group_b": groups[p.group_b],
                    "wins_alt1": p.wins_alt1,
                    "wins_alt2": p.wins_alt2,
                    "ties": p.ties,
                })
            })
            .collect();
        let t = &pairs.totals;
        b.line(format!("total: alt1 {}, alt2 {}, ties {}", t.wins_alt1, t.wins_alt2, t.ties));
        let results = json!({
            "mode": "pairwise",
            "pairs": list,
            "totals": { "wins_alt1": t.wins_alt1, "wins_alt2": t.wins_alt2, "ties": t.ties },
        });
        b.finish("compare", Some(table), results)
    }

    pub fn adjust(
        table: &PreferenceTable,
        policy: &AdjustmentPolicy,
        adjusted: &AdjustedTable,
        majority: Option<&AdjustedDecision>,
        sum: &AdjustedDecision,
    ) -> Report {
        let mut b = Builder::new();
        b.line(format!("delta {}, k {}", both(policy.delta()), both(policy.k())));
        let policy_json = json!({
            "delta": b.rat("/policy/delta", policy.delta()),
            "k": b.rat("/policy/k", policy.k()),
        });
        let mut rows = Vec::new();
        for (a, row) in adjusted.cells.iter().enumerate() {
            let mut cells = Vec::new();
            for (g, cell) in row.iter().enumerate() {
                let base = format!("/cells/{a}/{g}");
                cells.push(json!({
                    "counts": table.cell(a, g).to_string(),
                    "rate": b.rate(&format!("{base}/rate"), cell.original_rate),
                    "weight": b.real(&format!("{base}/weight"), cell.adjusted_weight),
                    "multiplier": b.real(&format!("{base}/multiplier"), cell.multiplier),
                    "penalized": cell.penalized,
                }));
            }
            let rendered: Vec<String> = row
                .iter()
                .map(|c| {
                    let mark = if c.penalized { "*" } else { "" };
                    format!("{}{mark}", real_2dp(c.adjusted_weight))
                })
                .collect();
            b.line(format!("{}: {}", table.alternatives()[a], rendered.join(" ")));
            rows.push(Value::Array(cells));
        }
        let stats: Vec<Value> = adjusted
            .column_stats
            .iter()
            .enumerate()
            .map(|(g, s)| {
                json!({
                    "group": table.groups()[g],
                    "mean": b.rat(&format!("/column_stats/{g}/mean"), &s.mean),
                    "variance": b.rat(&format!("/column_stats/{g}/variance"), &s.variance),
                })
            })
            .collect();
        let winners: Vec<String> = adjusted.group_winners().into_iter().map(|o| o.label(table)).collect();
        b.line(format!("group winners: {}", winners.join(", ")));
        let majority_json = match majority {
            Some(d) => {
                let tally = d.tally.expect("majority carries a tally");
                let text = tally_text(&tally);
                b.line(format!("adjusted majority: {text} ({})", d.winner.label(table)));
                json!({ "winner": d.winner.label(table), "tally": text, "ties": tally.ties })
            }
            None => Value::Null,
        };
        b.line(format!(
            "adjusted sum: {} by {}",
            sum.winner.label(table),
            real_2dp(sum.margin)
        ));
        let sum_json = json!({
            "winner": sum.winner.label(table),
            "margin": b.real("/sum/margin", sum.margin),
        });
        let results = json!({
            "policy": policy_json,
            "alternatives": table.alternatives(),
            "groups": table.groups(),
            "cells": rows,
            "column_stats": stats,
            "group_winners": winners,
            "majority": majority_json,
            "sum": sum_json,
        });
        b.finish("adjust", Some(table), results)
    }

    pub fn decide(table: &PreferenceTable, decision: &Decision, tally: Option<&MajorityTally>) -> Report {
        let mut b = Builder::new();
        let mut results = decision_json(&mut b, "", table, decision);
        b.line(format!(
            "{}: winner {}, margin {}",
            rule_name(decision.rule),
            decision.winner.label(table),
            both(&decision.margin)
        ));
        if let Some(t) = tally {
            results["tally"] = Value::String(tally_text(t));
            results["tied_groups"] = json!(t.ties);
            b.line(format!("groups won: {}", tally_text(t)));
        }
        b.finish("decide", Some(table), results)
    }

    pub fn monte_carlo(estimate: &ParadoxEstimate, workers: usize) -> Report {
        let mut b = Builder::new();
        b.line(format!(
            "{} reversals in {} samples: {:.5} +/- {:.5} (seed {})",
            estimate.hits, estimate.samples, estimate.estimate, estimate.std_error, estimate.seed
        ));
        let results = json!({
            "samples": estimate.samples,
            "hits": estimate.hits,
            "fraction": format!("{}/{}", estimate.hits, estimate.samples),
            "estimate": estimate.estimate,
            "std_error": estimate.std_error,
            "seed": estimate.seed,
            "workers": workers,
        });
        b.finish("mc", None, results)
    }

    pub fn split(
        alt1: CohortCount,
        alt2: CohortCount,
        groups: usize,
        min_trials: u64,
        witness: Option<&SplitWitness>,
    ) -> Report {
        let mut b = Builder::new();
        b.line(format!("totals: {alt1} vs {alt2}, {groups} groups, min trials {min_trials}"));
        let witness_json = match witness {
            Some(w) => {
                let parts: Vec<Value> = w
                    .groups
                    .iter()
                    .map(|(x, y)| json!({ "alt1": x.to_string(), "alt2": y.to_string() }))
                    .collect();
                let rendered: Vec<String> = w.groups.iter().map(|(x, y)| format!("{x} | {y}")).collect();
                b.line(format!("witness: {}", rendered.join(", ")));
                json!({
                    "groups": parts,
                    "pooled_winner": if w.pooled_winner == 0 { "alt1" } else { "alt2" },
                    "candidates_examined": w.candidates_examined,
                    "verified": true,
                })
            }
            None => {
                b.line("no reversing split exists");
                Value::Null
            }
        };
        let results = json!({
            "totals": [alt1.to_string(), alt2.to_string()],
            "groups": groups,
            "min_trials": min_trials,
            "witness": witness_json,
        });
        b.finish("split", None, results)
    }
}
