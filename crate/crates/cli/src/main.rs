mod commands;
mod config;
mod dot;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flp_core::TruthValue;

use crate::commands::{CliError, FixpointKind};
use crate::config::{ArithmeticMode, Format, RunConfig};

/// Fixpoint semantics for fuzzy logic programs.
#[derive(Parser, Debug)]
#[command(name = "flp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// Connective family for untagged connectives (G, L or P).
    #[arg(long, global = true, default_value = "G")]
    family: String,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Convergence tolerance in approximate mode.
    #[arg(long, global = true, value_parser = parse_truth_value)]
    epsilon: Option<TruthValue>,
    /// Grid resolution: stable-model enumeration, connective checks and the
    /// grid method of the ultimate commands.
    #[arg(long, global = true)]
    grid: Option<u32>,
    #[arg(long = "max-iters", global = true, default_value_t = 100_000)]
    max_iters: usize,
    /// Keep and print the visited iterates.
    #[arg(long, global = true)]
    trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Strata as `a,b|c,d`, lowest first.
    #[arg(long, global = true)]
    partition: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Human,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse the program and check the axioms of its connectives.
    Check { program: PathBuf },
    /// Kripke-Kleene fixpoint.
    Kk { program: PathBuf },
    /// Well-founded fixpoint.
    Wf { program: PathBuf },
    /// Kripke-Kleene fixpoint of the ultimate approximator.
    UltimateKk { program: PathBuf },
    /// Well-founded fixpoint of the ultimate approximator.
    UltimateWf { program: PathBuf },
    /// Check a stable model or enumerate them on a grid.
    Stable {
        program: PathBuf,
        /// Candidate model, e.g. `p=0.5,q=1/2`.
        #[arg(long, required_unless_present = "enumerate")]
        witness: Option<String>,
        #[arg(long)]
        enumerate: bool,
    },
    /// Compare the two routes to the well-founded fixpoint and the reduct
    /// against the approximator.
    Crosscheck { program: PathBuf },
    /// Stratum-by-stratum well-founded fixpoint.
    Strata { program: PathBuf },
    /// Graphviz rendering of the visited pairs.
    Trace { program: PathBuf },
}

fn parse_truth_value(s: &str) -> Result<TruthValue, String> {
    TruthValue::parse(s).map_err(|e| e.to_string())
}

impl Command {
    fn name_and_program(&self) -> (&'static str, &PathBuf) {
        match self {
            Command::Check { program } => ("check", program),
            Command::Kk { program } => ("kk", program),
            Command::Wf { program } => ("wf", program),
            Command::UltimateKk { program } => ("ultimate-kk", program),
            Command::UltimateWf { program } => ("ultimate-wf", program),
            Command::Stable { program, .. } => ("stable", program),
            Command::Crosscheck { program } => ("crosscheck", program),
            Command::Strata { program } => ("strata", program),
            Command::Trace { program } => ("trace", program),
        }
    }
}

fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let (name, program) = cli.command.name_and_program();
    let o = &cli.options;
    let config = RunConfig {
        command: name.to_string(),
        program: program.clone(),
        family: o.family.clone(),
        mode: match o.mode {
            ModeArg::Exact => ArithmeticMode::Exact,
            ModeArg::Approx => ArithmeticMode::Approx,
        },
        epsilon: o.epsilon.clone(),
        grid: o.grid,
        max_iterations: o.max_iters,
        trace: o.trace,
        format: match o.format {
            FormatArg::Human => Format::Human,
            FormatArg::Structured => Format::Structured,
        },
        partition: o.partition.clone(),
    };
    config.validate()?;
    let report = match &cli.command {
        Command::Check { .. } => commands::cmd_check(&config)?,
        Command::Kk { .. } => commands::cmd_fixpoint(&config, FixpointKind::KripkeKleene)?,
        Command::Wf { .. } => commands::cmd_fixpoint(&config, FixpointKind::WellFounded)?,
        Command::UltimateKk { .. } => commands::cmd_fixpoint(&config, FixpointKind::UltimateKripkeKleene)?,
        Command::UltimateWf { .. } => commands::cmd_fixpoint(&config, FixpointKind::UltimateWellFounded)?,
        Command::Stable { witness, enumerate, .. } => commands::cmd_stable(&config, witness.as_deref(), *enumerate)?,
        Command::Crosscheck { .. } => commands::cmd_crosscheck(&config)?,
        Command::Strata { .. } => commands::cmd_strata(&config)?,
        Command::Trace { .. } => commands::cmd_trace(&config)?,
    };
    Ok((report.render(&config), report.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
