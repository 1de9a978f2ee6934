//! `sdg`: command-line frontend for disclosure-core.
//!
//! Results go to the output stream, diagnostics to the error stream.
//! Exit codes: 0 success, 1 usage error, 2 validation or parse error,
//! 3 undefined query (impossible observation, infeasible θ).

mod text;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use disclosure_core::analysis::{
    compare_evidence, consent_table, mutual_consent, posterior, win_probability, AnalysisError,
    Policy, Prior, Willingness,
};
use disclosure_core::dsl::{compile, parse};
use disclosure_core::model::{ModelError, Verdict};
use disclosure_core::simulate::SimulationError;
use disclosure_core::{simulate, DiscreteModel, Rational, ScenarioRef};
use serde::Serialize;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNDEFINED: i32 = 3;

const SCENARIO_HELP: &str = "\
Scenarios are a built-in reference `name[:args]` or a path to a .sdg file:
  monty                  intentional host, fair coin when the car is behind Door 1
  monty-biased:<q>       host opens Door 2 with probability q (e.g. monty-biased:3/4)
  forgetful              host opens a random door; y4 means the car was revealed
  guard-single           guard answers prisoner A
  guard-joint            guard answers A and B; outcomes are (A1,A2)
  news                   first reported execution, random order
  news-promised:<set>    same, with promises to prisoners in <set> (e.g. AB)";

#[derive(Debug, Parser)]
#[command(name = "sdg", version, about = "Likelihood analysis of selective disclosure games", after_help = SCENARIO_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write the result to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct PriorArg {
    /// Comma-separated prior weights in parameter order (default: uniform
    /// over feasible parameters).
    #[arg(long)]
    prior: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the model table with a Total row.
    Table { scenario: String },
    /// Likelihood vector and MLE set for an observation.
    Likelihood {
        scenario: String,
        #[arg(long)]
        obs: String,
    },
    /// Switch/stay decision for an observation and initial choice.
    Decide {
        scenario: String,
        #[arg(long)]
        obs: String,
        #[arg(long)]
        initial: Option<String>,
    },
    /// Exact posterior over parameters.
    Posterior {
        scenario: String,
        #[arg(long)]
        obs: String,
        #[command(flatten)]
        prior: PriorArg,
    },
    /// Exact win and cancellation probabilities of a policy.
    Winprob {
        scenario: String,
        /// stay, switch or mle.
        #[arg(long)]
        policy: String,
        #[arg(long)]
        initial: Option<String>,
        #[command(flatten)]
        prior: PriorArg,
    },
    /// Read the same observation through two models.
    Compare {
        left: String,
        right: String,
        #[arg(long)]
        obs: String,
        /// Outcome label in the second model, when it differs.
        #[arg(long)]
        obs_b: Option<String>,
        #[arg(long)]
        initial: Option<String>,
    },
    /// Two-prisoner swap analysis: consent table and mutual consent.
    Paradox {
        /// Require strict advantage before a prisoner agrees to swap.
        #[arg(long)]
        strict: bool,
    },
    /// Monte Carlo run checked against the exact probabilities.
    Simulate {
        scenario: String,
        /// Comma-separated policies.
        #[arg(long, default_value = "stay,switch")]
        policy: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        initial: Option<String>,
        #[command(flatten)]
        prior: PriorArg,
    },
    /// Parse and compile a .sdg file.
    Check { file: PathBuf },
}

/// A failed command: exit code plus diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn undefined(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_UNDEFINED,
            message: message.into(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::UnknownOutcome(_) | ModelError::UnknownParam(_) => Failure::usage(e.to_string()),
            ModelError::InfeasibleParam(_) => Failure::undefined(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Model(m) => m.into(),
            AnalysisError::ZeroProbabilityOutcome(_)
            | AnalysisError::InconsistentObservation(_)
            | AnalysisError::PriorOnInfeasible(_) => Failure::undefined(e.to_string()),
            AnalysisError::UnknownPolicy(_) | AnalysisError::PriorLength { .. } => {
                Failure::usage(e.to_string())
            }
            AnalysisError::NegativePrior(_) | AnalysisError::PriorSum(_) => {
                Failure::invalid(e.to_string())
            }
        }
    }
}

impl From<SimulationError> for Failure {
    fn from(e: SimulationError) -> Self {
        match e {
            SimulationError::Analysis(a) => a.into(),
            SimulationError::NoTrials | SimulationError::NoPolicies => Failure::usage(e.to_string()),
        }
    }
}

/// What a command produced: rendered text, its JSON form, and the exit code.
struct Rendered {
    text: String,
    json: serde_json::Value,
    code: i32,
}

impl Rendered {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Self {
            text,
            json,
            code: EXIT_OK,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn load_scenario(reference: &str) -> Result<DiscreteModel, Failure> {
    if reference.ends_with(".sdg") {
        return load_file(Path::new(reference));
    }
    let r: ScenarioRef = reference
        .parse()
        .map_err(|e: disclosure_core::scenarios::ScenarioError| Failure::usage(e.to_string()))?;
    Ok(r.build())
}

fn load_file(path: &Path) -> Result<DiscreteModel, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let doc = parse(&text).map_err(|e| Failure::invalid(format!("{}:{e}", path.display())))?;
    compile(&doc).map_err(|e| Failure::invalid(format!("{}:{e}", path.display())))
}

fn initial_or_default(model: &DiscreteModel, initial: Option<String>) -> Result<String, Failure> {
    let initial = initial.unwrap_or_else(|| model.params()[0].clone());
    model.param_index(&initial)?;
    Ok(initial)
}

fn load_prior(model: &DiscreteModel, arg: &PriorArg) -> Result<Prior, Failure> {
    match &arg.prior {
        None => Ok(Prior::uniform(model)),
        Some(s) => {
            let weights = s
                .split(',')
                .map(|w| w.trim().parse::<Rational>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::usage(format!("--prior: {e}")))?;
            Ok(Prior::new(model, weights)?)
        }
    }
}

fn parse_policies(s: &str) -> Result<Vec<Policy>, Failure> {
    s.split(',')
        .map(|p| p.trim().parse::<Policy>().map_err(Failure::from))
        .collect()
}

fn execute(command: Command) -> Result<Rendered, Failure> {
    match command {
        Command::Table { scenario } => {
            let model = load_scenario(&scenario)?;
            Ok(Rendered::ok(
                text::table(&model),
                json!({
                    "command": "table",
                    "model": to_json(&model),
                    "columns": to_json(&model.validate().columns),
                    "estimates": model.outcomes().iter().map(|o| {
                        json!({ "outcome": o, "mle": text::estimate(&model, o) })
                    }).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Likelihood { scenario, obs } => {
            let model = load_scenario(&scenario)?;
            let lik = model.likelihood(&obs)?;
            let mle = model.mle(&obs)?;
            let impossible = lik.is_zero();
            let mut out = Rendered::ok(
                text::likelihood(&model, &obs, &lik, &mle),
                json!({
                    "command": "likelihood",
                    "model": model.name(),
                    "outcome": obs,
                    "likelihood": to_json(&lik),
                    "mle": mle,
                    "impossible": impossible,
                    "game_off": model.is_game_off(&obs),
                }),
            );
            if impossible {
                out.code = EXIT_UNDEFINED;
            }
            Ok(out)
        }
        Command::Decide {
            scenario,
            obs,
            initial,
        } => {
            let model = load_scenario(&scenario)?;
            let initial = initial_or_default(&model, initial)?;
            let decision = model.decide(&obs, &initial)?;
            let mut out = Rendered::ok(
                format!("{decision}\n"),
                json!({
                    "command": "decide",
                    "model": model.name(),
                    "outcome": obs,
                    "initial": initial,
                    "decision": to_json(&decision),
                }),
            );
            if decision.verdict == Verdict::Undefined {
                out.code = EXIT_UNDEFINED;
            }
            Ok(out)
        }
        Command::Posterior {
            scenario,
            obs,
            prior,
        } => {
            let model = load_scenario(&scenario)?;
            let prior = load_prior(&model, &prior)?;
            let post = posterior(&model, &prior, &obs)?;
            Ok(Rendered::ok(
                text::posterior(&model, &obs, &post),
                json!({
                    "command": "posterior",
                    "model": model.name(),
                    "outcome": obs,
                    "prior": to_json(&prior.weights()),
                    "posterior": to_json(&post),
                }),
            ))
        }
        Command::Winprob {
            scenario,
            policy,
            initial,
            prior,
        } => {
            let model = load_scenario(&scenario)?;
            let policy: Policy = policy.parse()?;
            let initial = initial_or_default(&model, initial)?;
            let prior = load_prior(&model, &prior)?;
            let w = win_probability(&model, &prior, policy, &initial)?;
            let conditional = w.conditional_win();
            Ok(Rendered::ok(
                text::winprob(&model, policy, &initial, &w),
                json!({
                    "command": "winprob",
                    "model": model.name(),
                    "policy": policy,
                    "initial": initial,
                    "win": w.win,
                    "cancelled": w.cancelled,
                    "loss": w.loss,
                    "conditional_win": conditional,
                }),
            ))
        }
        Command::Compare {
            left,
            right,
            obs,
            obs_b,
            initial,
        } => {
            let l = load_scenario(&left)?;
            let r = load_scenario(&right)?;
            let initial = initial_or_default(&l, initial)?;
            let obs_b = obs_b.unwrap_or_else(|| obs.clone());
            let c = compare_evidence(&l, &obs, &r, &obs_b, &initial)?;
            let mut body = to_json(&c);
            body["command"] = json!("compare");
            Ok(Rendered::ok(text::compare(&c), body))
        }
        Command::Paradox { strict } => {
            let willingness = if strict {
                Willingness::Strict
            } else {
                Willingness::Weak
            };
            let rows = consent_table();
            let analyses = ["2", "3"]
                .iter()
                .map(|a1| mutual_consent(a1, willingness))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Rendered::ok(
                text::paradox(&rows, &analyses),
                json!({
                    "command": "paradox",
                    "willingness": willingness,
                    "consent_table": to_json(&rows),
                    "mutual_consent": to_json(&analyses),
                }),
            ))
        }
        Command::Simulate {
            scenario,
            policy,
            trials,
            seed,
            initial,
            prior,
        } => {
            let model = load_scenario(&scenario)?;
            let policies = parse_policies(&policy)?;
            let initial = initial_or_default(&model, initial)?;
            let prior = load_prior(&model, &prior)?;
            let report = simulate(&model, &prior, &policies, &initial, trials, seed)?;
            let mut body = to_json(&report);
            body["command"] = json!("simulate");
            Ok(Rendered::ok(text::simulation(&report), body))
        }
        Command::Check { file } => {
            let model = load_file(&file)?;
            let report = model.validate();
            Ok(Rendered::ok(
                text::check(&file, &model, &report),
                json!({
                    "command": "check",
                    "file": file.display().to_string(),
                    "model": to_json(&model),
                    "columns": to_json(&report.columns),
                }),
            ))
        }
    }
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let format = cli.format;
    let output = cli.output;
    match execute(cli.command) {
        Ok(rendered) => {
            let body = match format {
                Format::Text => rendered.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&rendered.json)
                        .expect("json values serialize");
                    s.push('\n');
                    s
                }
            };
            let written = match &output {
                Some(path) => fs::write(path, &body)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INVALID;
            }
            rendered.code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}
