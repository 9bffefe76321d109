//! Command-line front end.

pub mod file;
pub mod report;

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use osbc::arrangement::ArrangementError;
use osbc::bicomplex::OSBicomplex;
use osbc::blowup::{abstractify, resolve, TieBreak};
use osbc::exactness::{check_exactness, check_tameness};
use osbc::projective::{
    lambda_exact_motive, multizeta_biarrangement, mu_exact_motive, weight_graded_motive, ProjectiveBiArrangement,
    ProjectiveError, WeightTable,
};
use serde::Serialize;

pub use file::{parse_arrangement_file, ArrangementFile, ParseError};
use report::*;

pub const DEFAULT_MAX_HYPERPLANES: usize = 12;
pub const DEFAULT_MAX_DIM: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "osbc", version, about = "Orlik–Solomon bi-complexes of bi-arrangements of hyperplanes")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Largest number of hyperplanes accepted in an input file.
    #[arg(long, default_value_t = DEFAULT_MAX_HYPERPLANES, global = true)]
    pub max_hyperplanes: usize,
    /// Largest ambient dimension accepted in an input file.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM, global = true)]
    pub max_dim: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Inductive,
    Lambda,
    Mu,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    First,
    Last,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Strata, circuits and irreducible strata.
    Analyze { file: String },
    /// Per-stratum bi-complex dimensions and differential ranks.
    Oscomplex { file: String },
    /// Künneth, tameness and exactness verdicts.
    Check { file: String },
    /// Weight-graded dimensions of the motive of a projective bi-arrangement.
    Motive {
        file: String,
        #[arg(long, value_enum, default_value_t = Method::Inductive)]
        method: Method,
    },
    /// Multizeta bi-arrangement Z(n1, …, nr) and its motive.
    Multizeta {
        #[arg(required = true)]
        ns: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Method::Inductive)]
        method: Method,
    },
    /// Resolution by iterated blow-ups of minimal irreducible strata.
    Blowup {
        file: String,
        /// Include the bi-complex dimensions after every step.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Order::First)]
        order: Order,
    },
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// Unreadable or malformed input.
    Input(String),
    /// The analysis ran but a precondition of the command failed.
    Precondition(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn load(cli: &Cli, path: &str) -> Result<ArrangementFile, Failure> {
    let f = parse_arrangement_file(&read_input(path)?)?;
    f.check_limits(cli.max_hyperplanes, cli.max_dim)?;
    Ok(f)
}

fn render<T: Serialize>(value: &T, format: Format) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    match format {
        Format::Json => serde_json::to_string_pretty(&v).expect("reports serialize") + "\n",
        Format::Tsv => report::to_tsv(&v),
    }
}

fn table_for(pb: &ProjectiveBiArrangement, method: Method) -> Result<WeightTable, Failure> {
    let r = match method {
        Method::Inductive => weight_graded_motive(pb),
        Method::Lambda => lambda_exact_motive(pb),
        Method::Mu => mu_exact_motive(pb),
    };
    r.map_err(|e| match e {
        ProjectiveError::NotExact(_) | ProjectiveError::NotLambdaExact(_) | ProjectiveError::NotMuExact(_) => {
            Failure::Precondition(e.to_string())
        }
        other => Failure::Input(other.to_string()),
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Inductive => "inductive",
        Method::Lambda => "lambda",
        Method::Mu => "mu",
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Analyze { file } => {
            let b = load(cli, file)?.to_biarrangement()?;
            Ok(render(&analyze_report(&b), cli.format))
        }
        Command::Oscomplex { file } => {
            let b = load(cli, file)?.to_biarrangement()?;
            let bc = OSBicomplex::build(&b).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(render(&oscomplex_report(&bc), cli.format))
        }
        Command::Check { file } => {
            let f = load(cli, file)?;
            if f.projective {
                return check_projective(cli, &f);
            }
            let b = match f.to_biarrangement() {
                Ok(b) => b,
                Err(ParseError::Arrangement(ArrangementError::KunnethViolation(label))) => {
                    let r = CheckReport::kunneth_failure(label);
                    return Err(Failure::Precondition(render(&r, cli.format)));
                }
                Err(e) => return Err(e.into()),
            };
            let bc = OSBicomplex::build(&b).map_err(|e| Failure::Input(e.to_string()))?;
            let tame = check_tameness(&b);
            let exact = check_exactness(&bc);
            Ok(render(&CheckReport::new(&b, tame, &exact), cli.format))
        }
        Command::Motive { file, method } => {
            let pb = load(cli, file)?.to_projective()?;
            let t = table_for(&pb, *method).map_err(|e| precondition_report(e, "motive", cli.format))?;
            Ok(render(&MotiveReport::new(&pb, method_name(*method), &t, None), cli.format))
        }
        Command::Multizeta { ns, method } => {
            let pb = multizeta_biarrangement(ns).map_err(|e| Failure::Input(e.to_string()))?;
            let t = table_for(&pb, *method).map_err(|e| precondition_report(e, "multizeta", cli.format))?;
            let text = ArrangementFile::from_projective(&pb).to_text();
            Ok(render(&MotiveReport::new(&pb, method_name(*method), &t, Some(text)), cli.format))
        }
        Command::Blowup { file, trace, order } => {
            let b = load(cli, file)?.to_biarrangement()?;
            let bc = OSBicomplex::build(&b).map_err(|e| Failure::Input(e.to_string()))?;
            let abs = abstractify(&b, &bc);
            let tie = match order {
                Order::First => TieBreak::First,
                Order::Last => TieBreak::Last,
            };
            let res = resolve(&abs, tie)
                .map_err(|e| precondition_report(Failure::Precondition(e.to_string()), "blowup", cli.format))?;
            Ok(render(&BlowupReport::new(&abs, &res, *trace, *order == Order::Last), cli.format))
        }
    }
}

fn check_projective(cli: &Cli, f: &ArrangementFile) -> Result<String, Failure> {
    let pb = match f.to_projective() {
        Ok(pb) => pb,
        Err(ParseError::Projective(ProjectiveError::Arrangement(ArrangementError::KunnethViolation(label)))) => {
            let r = CheckReport::kunneth_failure(label);
            return Err(Failure::Precondition(render(&r, cli.format)));
        }
        Err(e) => return Err(e.into()),
    };
    Ok(render(&ProjectiveCheckReport::new(&pb, &f.origin), cli.format))
}

/// Turns a precondition failure into a rendered error report.
fn precondition_report(e: Failure, command: &'static str, format: Format) -> Failure {
    match e {
        Failure::Precondition(msg) => Failure::Precondition(render(&ErrorReport::new(command, &msg), format)),
        other => other,
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Precondition(report)) => Outcome {
            code: 1,
            stdout: report,
            stderr: "failed precondition\n".into(),
        },
        Err(Failure::Input(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}
