//! `entangle`: separability checks, entanglement measures and factorization from the command line.

mod commands;
mod error;
mod input;
mod output;

use std::io;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Criterion, Experiment, GraphAction, ReproduceArgs, SeparabilityArgs};
use error::{parse_err, CliResult};
use input::Input;
use output::Format;

#[derive(Parser)]
#[command(
    name = "entangle",
    version,
    about = "Entanglement analysis of multipartite quantum states"
)]
struct Cli {
    /// State or graph file (JSON), or `builtin:<name>` such as `builtin:ghz:4`.
    #[arg(long, global = true)]
    state: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Allowed deviation of the input norm or trace from 1 before it is renormalized.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a separability criterion.
    Separability {
        #[arg(long, value_enum, default_value_t = Criterion::Kyfan)]
        criterion: Criterion,
        /// Subsystems on one side of a bipartition, e.g. `1,2`.
        #[arg(long)]
        cut: Option<String>,
        /// Grouping of subsystems for the Ky Fan test, e.g. `1,2|3`.
        #[arg(long)]
        partition: Option<String>,
        /// Apply the Ky Fan test to the reduced state of these subsystems, e.g. `1,2`.
        #[arg(long)]
        subsystems: Option<String>,
    },
    /// Entanglement measure E_T of a pure qubit state.
    Measure {
        /// Also report E_T divided by its GHZ value.
        #[arg(long)]
        normalize: bool,
    },
    /// Split a pure state into its tensor factors.
    Factorize,
    /// Operations on the weighted graph of a state.
    Graph {
        #[arg(long, value_enum)]
        action: GraphAction,
        #[arg(long)]
        cut: Option<String>,
    },
    /// Regenerate a built-in numerical experiment.
    Reproduce {
        #[arg(value_enum)]
        which: Experiment,
        /// Number of parties, where the experiment takes one.
        #[arg(long)]
        n: Option<usize>,
        /// Grid points for sweeps.
        #[arg(long, default_value_t = 11)]
        samples: usize,
        /// Marked bit string for the Grover experiment.
        #[arg(long)]
        target: Option<String>,
    },
}

fn load(cli: &Cli) -> CliResult<Input> {
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(parse_err("--tolerance must be a nonnegative number"));
    }
    let spec = cli
        .state
        .as_deref()
        .ok_or_else(|| parse_err("this command needs --state"))?;
    Input::load(spec, cli.tolerance)
}

fn run(cli: &Cli) -> CliResult<()> {
    let out = match &cli.command {
        Command::Separability {
            criterion,
            cut,
            partition,
            subsystems,
        } => commands::separability(
            &load(cli)?,
            SeparabilityArgs {
                criterion: *criterion,
                cut: cut.as_deref(),
                partition: partition.as_deref(),
                subsystems: subsystems.as_deref(),
            },
        )?,
        Command::Measure { normalize } => commands::measure(&load(cli)?, *normalize)?,
        Command::Factorize => commands::factorize(&load(cli)?)?,
        Command::Graph { action, cut } => commands::graph(&load(cli)?, *action, cut.as_deref())?,
        Command::Reproduce {
            which,
            n,
            samples,
            target,
        } => commands::reproduce(
            *which,
            ReproduceArgs {
                n: *n,
                samples: *samples,
                target: target.as_deref(),
            },
        )?,
    };
    out.write(cli.format, io::stdout().lock())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entangle: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
