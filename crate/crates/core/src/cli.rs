//! Command-line front end.
//!
//! Exit status: 0 for yes / holds, 1 for no / counterexample, 2 for usage,
//! parse and resource errors, 3 for internal inconsistencies (including an
//! oracle disagreement).

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use either::Either;
use serde::Serialize;

use crate::engine::Engine;
use crate::error::Error;
use crate::evidence::Decision;
use crate::parser::{is_identifier, parse, parse_auto, pretty, ParseError};
use crate::sn::{oracle_decide, SnAtom, SnTheory};
use crate::Formula;

pub const DEFAULT_MAX_PRODUCTS: usize = 10_000;
pub const DEFAULT_MAX_LITERALS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "qelim",
    version,
    about = "Decide successor-arithmetic formulas with evidence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a formula, optionally reporting witnesses and counterexamples.
    Decide(DecideArgs),
    /// Print a quantifier-free equivalent.
    Eliminate(CommonArgs),
    /// Decide with the brute-force oracle and compare against `decide`.
    Oracle(CommonArgs),
    /// For a formula with one free variable: holds for all values, or a counterexample.
    Split(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Formula text, e.g. "exists x. x + 3 = y".
    pub formula: String,

    /// Value of a free variable, as name=value. Repeatable.
    #[arg(long = "env", value_name = "NAME=VALUE", value_parser = parse_binding)]
    pub env: Vec<(String, u64)>,

    /// Emit JSON on standard output.
    #[arg(long)]
    pub json: bool,

    /// Largest DNF (in products) built while eliminating a quantifier.
    #[arg(long, default_value_t = DEFAULT_MAX_PRODUCTS)]
    pub max_products: usize,

    /// Largest number of literals one elimination step may produce.
    #[arg(long, default_value_t = DEFAULT_MAX_LITERALS)]
    pub max_literals: usize,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Report witnesses, counterexamples and evidence.
    #[arg(long)]
    pub evidence: bool,

    /// Instantiate universal evidence at this value. Repeatable.
    #[arg(long, value_name = "N")]
    pub instantiate: Vec<u64>,
}

/// Parses a `name=value` environment binding.
pub fn parse_binding(s: &str) -> Result<(String, u64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(format!("invalid variable name {name:?}"));
    }
    let value = value
        .trim()
        .parse::<u64>()
        .map_err(|e| format!("invalid value for {name}: {e}"))?;
    Ok((name.to_string(), value))
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(status: u8, stdout: String) -> Self {
        Outcome {
            status,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(status: u8, message: impl std::fmt::Display) -> Self {
        Outcome {
            status,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(ParseError),
    Engine(Error),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn into_outcome(self) -> Outcome {
        match self {
            Failure::Usage(m) => Outcome::error(2, m),
            Failure::Parse(e) => Outcome::error(2, e),
            Failure::Engine(
                e @ (Error::DnfLimit { .. }
                | Error::EliminationLimit { .. }
                | Error::OracleBudget { .. }
                | Error::Overflow(_)),
            ) => Outcome::error(2, format!("resource limit: {e}")),
            Failure::Engine(e) => Outcome::error(3, e),
        }
    }
}

/// Parses arguments (the first being the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    status,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(status, text)
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Decide(args) => decide(args),
        Command::Eliminate(args) => eliminate(args),
        Command::Oracle(args) => oracle(args),
        Command::Split(args) => split(args),
    };
    result.unwrap_or_else(Failure::into_outcome)
}

struct Input {
    formula: Formula<SnAtom>,
    names: Vec<String>,
    env: Vec<u64>,
}

fn load(args: &CommonArgs) -> Result<Input, Failure> {
    let (formula, names) = parse_auto(&args.formula)?;
    let mut env = vec![None; names.len()];
    for (name, value) in &args.env {
        let Some(i) = names.iter().position(|n| n == name) else {
            return Err(Failure::Usage(format!(
                "`{name}` is not a free variable of the formula"
            )));
        };
        if env[i].replace(*value).is_some() {
            return Err(Failure::Usage(format!("`{name}` is bound more than once")));
        }
    }
    let env = env
        .into_iter()
        .zip(&names)
        .map(|(v, n)| {
            v.ok_or_else(|| {
                Failure::Usage(format!(
                    "no value given for free variable `{n}` (use --env {n}=N)"
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Input {
        formula,
        names,
        env,
    })
}

fn engine(args: &CommonArgs) -> Engine<SnTheory> {
    Engine::new(SnTheory)
        .with_product_limit(args.max_products)
        .with_literal_limit(args.max_literals)
}

fn verdict(yes: bool) -> &'static str {
    if yes {
        "yes"
    } else {
        "no"
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Instance {
    value: u64,
    evidence: String,
}

#[derive(Serialize)]
struct DecideReport {
    result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evidence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    universal: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    instances: Vec<Instance>,
    qf_equivalent: String,
}

fn decide(args: &DecideArgs) -> Result<Outcome, Failure> {
    let common = &args.common;
    let input = load(common)?;
    let engine = engine(common);
    let qf = engine.lift_qe(&input.formula)?;
    let qf_text = pretty(&qf, &input.names)?;
    let decision = engine.decide(&input.formula, &input.env)?;

    let mut report = DecideReport {
        result: verdict(decision.is_yes()),
        witnesses: None,
        counterexample: None,
        evidence: None,
        universal: None,
        instances: Vec::new(),
        qf_equivalent: qf_text,
    };
    if args.evidence || !args.instantiate.is_empty() {
        match &decision {
            Decision::Yes(ev) => {
                if args.evidence {
                    report.witnesses = Some(ev.witnesses());
                    report.evidence = Some(ev.to_string());
                }
                let universal = ev.first_universal();
                report.universal = Some(universal.is_some());
                if let Some(u) = universal {
                    for &v in &args.instantiate {
                        let instance = u.instantiate(v)?;
                        report.instances.push(Instance {
                            value: v,
                            evidence: instance.to_string(),
                        });
                    }
                }
            }
            Decision::No(r) => {
                if args.evidence {
                    report.counterexample = r.counterexample().copied();
                    report.evidence = Some(r.to_string());
                }
            }
        }
    }

    let status = if decision.is_yes() { 0 } else { 1 };
    if common.json {
        return Ok(Outcome::ok(status, json_line(&report)));
    }
    let mut out = format!("{}\n", report.result);
    if let Some(ev) = &report.evidence {
        let label = if decision.is_yes() {
            "evidence"
        } else {
            "refutation"
        };
        let _ = writeln!(out, "{label}: {ev}");
    }
    if let Some(ws) = report.witnesses.as_ref().filter(|ws| !ws.is_empty()) {
        let ws: Vec<String> = ws.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "witnesses: {}", ws.join(", "));
    }
    if let Some(c) = report.counterexample {
        let _ = writeln!(out, "counterexample: {c}");
    }
    match report.universal {
        Some(true) => {
            let _ = writeln!(
                out,
                "universal: holds for every value; evidence is produced on request with --instantiate N"
            );
        }
        Some(false) if !args.instantiate.is_empty() => {
            let _ = writeln!(
                out,
                "universal: no universal evidence on the satisfying path"
            );
        }
        _ => {}
    }
    for inst in &report.instances {
        let _ = writeln!(out, "instance {}: {}", inst.value, inst.evidence);
    }
    Ok(Outcome::ok(status, out))
}

fn eliminate(args: &CommonArgs) -> Result<Outcome, Failure> {
    let (formula, names) = parse_auto(&args.formula)?;
    if !args.env.is_empty() {
        return Err(Failure::Usage("eliminate takes no --env bindings".into()));
    }
    let qf = engine(args).lift_qe(&formula)?;
    let text = pretty(&qf, &names)?;
    let out = if args.json {
        json_line(&serde_json::json!({ "qf_equivalent": text }))
    } else {
        format!("{text}\n")
    };
    Ok(Outcome::ok(0, out))
}

fn oracle(args: &CommonArgs) -> Result<Outcome, Failure> {
    let input = load(args)?;
    let expected = oracle_decide(&input.formula, &input.env)?;
    let decided = engine(args).decide(&input.formula, &input.env)?.is_yes();
    let agree = expected == decided;
    let status = match (agree, expected) {
        (false, _) => 3,
        (true, true) => 0,
        (true, false) => 1,
    };
    let out = if args.json {
        json_line(&serde_json::json!({
            "oracle": verdict(expected),
            "decide": verdict(decided),
            "agree": agree,
        }))
    } else {
        format!(
            "oracle: {}\ndecide: {}\n{}\n",
            verdict(expected),
            verdict(decided),
            if agree { "agree" } else { "DISAGREE" }
        )
    };
    Ok(Outcome::ok(status, out))
}

fn split(args: &CommonArgs) -> Result<Outcome, Failure> {
    let (_, names) = parse_auto(&args.formula)?;
    if names.len() != 1 {
        return Err(Failure::Usage(format!(
            "split needs exactly one free variable, found {}",
            names.len()
        )));
    }
    if !args.env.is_empty() {
        return Err(Failure::Usage("split takes no --env bindings".into()));
    }
    let body = parse(&args.formula, &names)?;
    let (status, text, value) = match engine(args).forall_or_counterexample(&body, &[])? {
        Either::Left(_) => (0, "forall: holds for all values".to_string(), None),
        Either::Right((v, _)) => (1, format!("counterexample: {v}"), Some(v)),
    };
    let out = if args.json {
        let mut obj = serde_json::json!({
            "result": if value.is_some() { "counterexample" } else { "forall" },
            "variable": names[0],
        });
        if let Some(v) = value {
            obj["counterexample"] = v.into();
        }
        json_line(&obj)
    } else {
        format!("{text}\n")
    };
    Ok(Outcome::ok(status, out))
}
