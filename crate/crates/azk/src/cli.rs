use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Options};
use crate::error::CliError;
use crate::input;
use crate::report::{self, Report};

#[derive(Debug, Parser)]
#[command(name = "azk", version, about = "Exact computations with Weyl algebras, commuting partners, spectral data and twisted cocycles")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Seed for `demo props`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sample count for `demo props`.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Degree bound of the commutation ansatz.
    #[arg(long = "deg-bound", global = true)]
    pub deg_bound: Option<u32>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Problem file, or `-` for standard input.
    pub input: String,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Weyl algebra normal forms, actions and simplicity certificates.
    Weyl {
        #[command(subcommand)]
        action: WeylCmd,
    },
    /// Commuting partners of `lambda d/dz + A`.
    Azu {
        #[command(subcommand)]
        action: AzuCmd,
    },
    /// Spectral covers, admissibility, lambda-families and curvature.
    Spec {
        #[command(subcommand)]
        action: SpecCmd,
    },
    /// Cech cochains, coboundaries, twisted gluing and twist matching.
    Coc {
        #[command(subcommand)]
        action: CocCmd,
    },
    /// Hilbert polynomials on the projective line.
    Hilb {
        #[command(subcommand)]
        action: HilbCmd,
    },
    /// Built-in worked example and seeded property suites.
    Demo {
        #[command(subcommand)]
        action: DemoCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeylCmd {
    Nf(Input),
    Act(Input),
    Fourier(Input),
    Reduce(Input),
}

#[derive(Debug, Subcommand)]
pub enum AzuCmd {
    Solve(Input),
    Basis(Input),
    Classify(Input),
    Report(Input),
}

#[derive(Debug, Subcommand)]
pub enum SpecCmd {
    Cover(Input),
    Admissible(Input),
    Family(Input),
    Curvature(Input),
}

#[derive(Debug, Subcommand)]
pub enum CocCmd {
    Check(Input),
    Coboundary(Input),
    Glue(Input),
    Match(Input),
}

#[derive(Debug, Subcommand)]
pub enum HilbCmd {
    Sheaf(Input),
    Morphism(Input),
}

#[derive(Debug, Subcommand)]
pub enum DemoCmd {
    /// Nilpotent `A = [[0,1],[0,0]]`: basis, solver span, `B`, and the
    /// eigen-decomposition of its pushforward.
    #[command(name = "example-5-1-11")]
    Example {
        /// Four comma-separated rationals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0,0,2")]
        bhat: Vec<String>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
    },
    /// Runs a named invariant suite.
    Props {
        suite: String,
    },
}

impl Group {
    /// `("weyl nf", Some(input))`, or `None` for the demo commands.
    fn file_command(&self) -> Option<(String, &Input)> {
        let (g, a, i) = match self {
            Group::Weyl { action } => match action {
                WeylCmd::Nf(i) => ("weyl", "nf", i),
                WeylCmd::Act(i) => ("weyl", "act", i),
                WeylCmd::Fourier(i) => ("weyl", "fourier", i),
                WeylCmd::Reduce(i) => ("weyl", "reduce", i),
            },
            Group::Azu { action } => match action {
                AzuCmd::Solve(i) => ("azu", "solve", i),
                AzuCmd::Basis(i) => ("azu", "basis", i),
                AzuCmd::Classify(i) => ("azu", "classify", i),
                AzuCmd::Report(i) => ("azu", "report", i),
            },
            Group::Spec { action } => match action {
                SpecCmd::Cover(i) => ("spec", "cover", i),
                SpecCmd::Admissible(i) => ("spec", "admissible", i),
                SpecCmd::Family(i) => ("spec", "family", i),
                SpecCmd::Curvature(i) => ("spec", "curvature", i),
            },
            Group::Coc { action } => match action {
                CocCmd::Check(i) => ("coc", "check", i),
                CocCmd::Coboundary(i) => ("coc", "coboundary", i),
                CocCmd::Glue(i) => ("coc", "glue", i),
                CocCmd::Match(i) => ("coc", "match", i),
            },
            Group::Hilb { action } => match action {
                HilbCmd::Sheaf(i) => ("hilb", "sheaf", i),
                HilbCmd::Morphism(i) => ("hilb", "morphism", i),
            },
            Group::Demo { .. } => return None,
        };
        Some((format!("{} {}", g, a), i))
    }
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_input(path: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.into(), source };
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn execute(cli: &Cli) -> Report {
    let opts = Options {
        deg_bound: cli.deg_bound,
        seed: cli.seed,
        count: cli.count,
    };
    if let Some((command, inp)) = cli.group.file_command() {
        let result = read_input(&inp.input)
            .and_then(|text| input::load_payload(&text, &command))
            .and_then(|payload| commands::run_payload(&command, payload, &opts));
        return result.unwrap_or_else(|e| Report::error(&command, &e));
    }
    match &cli.group {
        Group::Demo { action: DemoCmd::Example { bhat, lambda } } => {
            let command = "demo example-5-1-11";
            let run = || -> Result<Report, CliError> {
                let nums: Vec<input::Num> = bhat.iter().map(|s| input::Num::Text(s.trim().into())).collect();
                let values = input::rationals(&nums)?;
                let bhat: [_; 4] = values
                    .try_into()
                    .map_err(|v: Vec<_>| CliError::Usage(format!("--bhat needs 4 values, got {}", v.len())))?;
                let lambda = input::Num::Text(lambda.clone()).rational()?;
                commands::example_5_1_11(&bhat, &lambda, opts.deg_bound)
            };
            run().unwrap_or_else(|e| Report::error(command, &e))
        }
        Group::Demo { action: DemoCmd::Props { suite } } => {
            commands::props(suite, &opts).unwrap_or_else(|e| Report::error("demo props", &e))
        }
        _ => unreachable!("file commands handled above"),
    }
}

/// Parses `args` (program name first) and runs one command. `color` is the
/// value of `AZK_COLOR`.
pub fn run<I, T>(args: I, color: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: text, stderr: String::new() };
            }
            let report = Report::error("azk", &CliError::Usage(text.lines().next().unwrap_or("").to_string()));
            return Outcome { code: 1, stdout: report.to_json(), stderr: text };
        }
    };
    let report = execute(&cli);
    let rendered = if cli.text {
        match report::color_enabled(color) {
            Ok(c) => report.to_text(c && cli.out.is_none()),
            Err(e) => {
                let r = Report::error(&report.command, &e);
                return Outcome { code: r.exit_code(), stdout: r.to_text(false), stderr: String::new() };
            }
        }
    } else {
        report.to_json()
    };
    match &cli.out {
        None => Outcome { code: report.exit_code(), stdout: rendered, stderr: String::new() },
        Some(path) => match std::fs::write(path, &rendered) {
            Ok(()) => Outcome { code: report.exit_code(), stdout: String::new(), stderr: String::new() },
            Err(source) => {
                let e = CliError::Io { path: path.display().to_string(), source };
                let r = Report::error(&report.command, &e);
                Outcome { code: 1, stdout: r.to_json(), stderr: String::new() }
            }
        },
    }
}
