//! Command dispatch and report rendering for the `simpson` binary.
//!
//! [`run`] takes the full argument vector and returns what the process should
//! print and its exit code, so the whole command surface can be driven from
//! tests without spawning a process.

mod report;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use simpson_core::adjust::{adjust_table, adjusted_decision, AdjustedRule, AdjustmentPolicy};
use simpson_core::cross::{all_switched_pairs, permutation_score_auto, ENUMERATION_CAP};
use simpson_core::format::{parse_csv, parse_json};
use simpson_core::lab::{estimate_paradox_probability, find_reversing_split};
use simpson_core::rules::{self, Rule};
use simpson_core::{CohortCount, Error, Exact, PreferenceTable};

pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_WITNESS: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "simpson", version, about = "Detect and analyse preference reversals in grouped trial data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Human-readable rendering instead of JSON.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Debug, Args)]
struct Input {
    /// Table file (`-` for standard input).
    file: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Permutations,
    Pairwise,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Pooled,
    RateSum,
    Majority,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-group and pooled winners and the reversal verdict (two alternatives).
    Detect(Input),
    /// Per-group and pooled rankings.
    Rank(Input),
    /// Cross-group comparison of two alternatives.
    Compare {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "permutations")]
        mode: Mode,
    },
    /// Reweight rates from cohorts smaller than their column mean.
    Adjust {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1/2", value_parser = parse_positive_rational)]
        delta: Exact,
        #[arg(long, default_value = "1", value_parser = parse_positive_rational)]
        k: Exact,
    },
    /// Apply one decision rule.
    Decide {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "pooled")]
        rule: RuleArg,
    },
    /// Monte Carlo frequency of reversals in uniformly random 2x2x2 tables.
    Mc {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Search for a grouping of pooled counts that reverses their preference.
    Split {
        /// Pooled counts of alternative 1 as `s/g`.
        #[arg(value_parser = parse_cohort)]
        alt1: CohortCount,
        /// Pooled counts of alternative 2 as `s/g`.
        #[arg(value_parser = parse_cohort)]
        alt2: CohortCount,
        /// Number of groups.
        #[arg(long, default_value_t = 2)]
        groups: usize,
        #[arg(long, default_value_t = 1)]
        min_trials: u64,
    },
}

/// Accepts `3`, `0.5` or `1/2`.
pub fn parse_rational(text: &str) -> Option<Exact> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| Exact::new(n, d));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let value = Exact::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
    Some(if negative { -value } else { value })
}

fn parse_positive_rational(text: &str) -> Result<Exact, String> {
    match parse_rational(text) {
        Some(v) if v.is_positive() => Ok(v),
        Some(_) => Err("must be positive".into()),
        None => Err(format!("`{text}` is not a number")),
    }
}

fn parse_cohort(text: &str) -> Result<CohortCount, String> {
    let (s, t) = text.split_once('/').ok_or("expected s/g")?;
    let s = s.trim().parse().map_err(|_| "expected s/g".to_owned())?;
    let t = t.trim().parse().map_err(|_| "expected s/g".to_owned())?;
    CohortCount::new(s, t).map_err(|e| e.to_string())
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Execution {
    fn failure(code: i32, message: impl std::fmt::Display) -> Self {
        Execution {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::SearchCapExceeded { .. } => EXIT_CAP,
        Error::NoSamples => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

fn load(input: &Input) -> Result<PreferenceTable, Error> {
    let text = if input.file == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(&input.file)
    }
    .map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", input.file.display()),
    })?;
    let format = input.format.unwrap_or_else(|| {
        match input.file.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    });
    match format {
        Format::Csv => parse_csv(&text),
        Format::Json => parse_json(&text),
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Execution {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Execution {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    let (report, code) = match execute(&cli.command) {
        Ok(done) => done,
        Err(e) => return Execution::failure(exit_code(&e), e),
    };
    let body = if cli.text { report.render_text() } else { report.render_json() };
    match &cli.output {
        Some(path) => match fs::write(path, &body) {
            Ok(()) => Execution {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Execution::failure(EXIT_USAGE, format!("cannot write {}: {e}", path.display())),
        },
        None => Execution {
            code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

fn execute(command: &Command) -> Result<(Report, i32), Error> {
    match command {
        Command::Detect(input) => {
            let table = load(input)?;
            let reversal = rules::detect_reversal(&table)?;
            let pooled = rules::pooled_decision(&table);
            Ok((Report::detect(&table, &reversal, &pooled), EXIT_OK))
        }
        Command::Rank(input) => {
            let table = load(input)?;
            Ok((Report::rank(&table, &rules::rank_report(&table)), EXIT_OK))
        }
        Command::Compare { input, mode } => {
            let table = load(input)?;
            let report = match mode {
                Mode::Permutations => {
                    let score = permutation_score_auto(&table)?;
                    let method = if table.num_groups() <= ENUMERATION_CAP {
                        "enumeration"
                    } else {
                        "closed-form"
                    };
                    Report::permutations(&table, &score, method)
                }
                Mode::Pairwise => Report::pairwise(&table, &all_switched_pairs(&table)?),
            };
            Ok((report, EXIT_OK))
        }
        Command::Adjust { input, delta, k } => {
            let table = load(input)?;
            let policy = AdjustmentPolicy::new(delta.clone(), k.clone())?;
            let adjusted = adjust_table(&table, &policy);
            let majority = if table.num_alternatives() == 2 {
                Some(adjusted_decision(&table, &policy, AdjustedRule::Majority)?)
            } else {
                None
            };
            let sum = adjusted_decision(&table, &policy, AdjustedRule::Sum)?;
            Ok((
                Report::adjust(&table, &policy, &adjusted, majority.as_ref(), &sum),
                EXIT_OK,
            ))
        }
        Command::Decide { input, rule } => {
            let table = load(input)?;
            let rule = match rule {
                RuleArg::Pooled => Rule::Pooled,
                RuleArg::RateSum => Rule::RateSum,
                RuleArg::Majority => Rule::Majority,
            };
            let decision = rules::decide(&table, rule)?;
            let tally = match rule {
                Rule::Majority => Some(rules::majority_tally(&table)?),
                _ => None,
            };
            Ok((Report::decide(&table, &decision, tally.as_ref()), EXIT_OK))
        }
        Command::Mc {
            samples,
            seed,
            workers,
        } => {
            let estimate = estimate_paradox_probability(*samples, *seed, *workers)?;
            Ok((Report::monte_carlo(&estimate, *workers), EXIT_OK))
        }
        Command::Split {
            alt1,
            alt2,
            groups,
            min_trials,
        } => {
            let witness = find_reversing_split(*alt1, *alt2, *groups, *min_trials)?;
            let code = if witness.is_some() { EXIT_OK } else { EXIT_NO_WITNESS };
            Ok((Report::split(*alt1, *alt2, *groups, *min_trials, witness.as_ref()), code))
        }
    }
}
