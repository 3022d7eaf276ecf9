//! Text encodings of a [`PreferenceTable`].
//!
//! CSV: a header `alternative,G1,G2,...` followed by one row per alternative
//! with `successes/trials` cells.
//!
//! JSON: `{"alternatives": [{"name": .., "cells": [{"successes": .., "trials": ..}]}], "groups": [..]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{CohortCount, PreferenceTable};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses `s/g`. Lines and columns in errors are 1-based.
fn parse_cell(text: &str, line: usize, column: usize) -> Result<CohortCount> {
    let (s, t) = text
        .split_once('/')
        .ok_or_else(|| parse_error(line, column, format!("malformed cell `{text}`, expected s/g")))?;
    let num = |part: &str| {
        part.trim()
            .parse::<u64>()
            .map_err(|_| parse_error(line, column, format!("malformed cell `{text}`, expected s/g")))
    };
    let (s, t) = (num(s)?, num(t)?);
    CohortCount::new(s, t).map_err(|e| match e {
        Error::SuccessesExceedTrials { .. } => parse_error(line, column, "successes exceed trials"),
        Error::ZeroTrials => parse_error(line, column, "cell has zero trials"),
        other => other,
    })
}

pub fn parse_csv(input: &str) -> Result<PreferenceTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input.as_bytes());
    let mut header: Option<(usize, Vec<String>)> = None;
    let mut alternatives = Vec::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let Some((_, groups)) = &header else {
            let mut fields = record.iter();
            if !fields.next().is_some_and(|f| f.eq_ignore_ascii_case("alternative")) {
                return Err(parse_error(line, 1, "header must start with `alternative`"));
            }
            let groups: Vec<String> = fields.map(str::to_owned).collect();
            if groups.is_empty() {
                return Err(parse_error(line, 2, "header names no groups"));
            }
            if let Some(pos) = (1..groups.len()).find(|&j| groups[..j].contains(&groups[j])) {
                return Err(parse_error(line, pos + 2, format!("duplicate group label `{}`", groups[pos])));
            }
            header = Some((line, groups));
            continue;
        };
        if record.len() != groups.len() + 1 {
            return Err(parse_error(
                line,
                record.len().min(groups.len() + 1),
                format!("row has {} cells, expected {}", record.len() - 1, groups.len()),
            ));
        }
        let label = record[0].to_owned();
        if alternatives.contains(&label) {
            return Err(parse_error(line, 1, format!("duplicate alternative label `{label}`")));
        }
        let cells = record
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, text)| parse_cell(text, line, j + 1))
            .collect::<Result<Vec<_>>>()?;
        alternatives.push(label);
        rows.push(cells);
    }
    let (line, groups) = header.ok_or_else(|| parse_error(1, 1, "empty input"))?;
    PreferenceTable::new(alternatives, groups, rows).map_err(|e| parse_error(line, 1, e.to_string()))
}

pub fn to_csv(table: &PreferenceTable) -> String {
    let mut out = String::from("alternative");
    for g in table.groups() {
        out.push(',');
        out.push_str(g);
    }
    out.push('\n');
    for (label, row) in table.alternatives().iter().zip(table.rows()) {
        out.push_str(label);
        for cell in row {
            out.push(',');
            out.push_str(&cell.to_string());
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonCell {
    successes: u64,
    trials: u64,
}

#[derive(Serialize, Deserialize)]
struct JsonAlternative {
    name: String,
    cells: Vec<JsonCell>,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    alternatives: Vec<JsonAlternative>,
    groups: Vec<String>,
}

pub fn parse_json(input: &str) -> Result<PreferenceTable> {
    let raw: JsonTable =
        serde_json::from_str(input).map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    let mut alternatives = Vec::with_capacity(raw.alternatives.len());
    let mut rows = Vec::with_capacity(raw.alternatives.len());
    for (i, alt) in raw.alternatives.into_iter().enumerate() {
        let cells = alt
            .cells
            .iter()
            .enumerate()
            .map(|(j, c)| {
                CohortCount::new(c.successes, c.trials)
                    .map_err(|e| Error::Json(format!("alternatives[{i}].cells[{j}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        alternatives.push(alt.name);
        rows.push(cells);
    }
    PreferenceTable::new(alternatives, raw.groups, rows).map_err(|e| Error::Json(e.to_string()))
}

pub fn to_json(table: &PreferenceTable) -> String {
    let raw = JsonTable {
        alternatives: table
            .alternatives()
            .iter()
            .zip(table.rows())
            .map(|(name, row)| JsonAlternative {
                name: name.clone(),
                cells: row
                    .iter()
                    .map(|c| JsonCell {
                        successes: c.successes(),
                        trials: c.trials(),
                    })
                    .collect(),
            })
            .collect(),
        groups: table.groups().to_vec(),
    };
    serde_json::to_string_pretty(&raw).expect("table serializes")
}
