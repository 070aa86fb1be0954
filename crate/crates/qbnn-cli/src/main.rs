//! Command-line driver: parses one experiment request, runs it, writes the
//! report as JSON or CSV, prints embedded checks to stderr, and exits with
//! 0 only if every check passed (2 on configuration or runtime errors).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qbnn::bnn::{NetworkTopology, TrainingSet};
use qbnn_cli::experiments::{
    run_callcount_table, run_conjecture_sweep, run_grover_special, run_reproduce_appendix,
    run_reproduce_fig5, Fig5Options, Mode,
};
use qbnn_cli::report;

#[derive(Parser)]
#[command(
    name = "qbnn",
    version,
    about = "Statevector experiments for quantum training of binary neural networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Report format: full report (json) or main data table (csv).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rerun the canonical single-neuron training instance.
    ReproduceFig5 {
        /// Topology file replacing the built-in single neuron.
        #[arg(long)]
        topology: Option<PathBuf>,
        /// Training-set file replacing the built-in task.
        #[arg(long)]
        training_set: Option<PathBuf>,
        /// Which computed distribution the report carries.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Amplification rounds; default floor(pi*sqrt(2^slots)/4).
        #[arg(long)]
        rounds: Option<usize>,
        /// Marking phase per correct example in radians; default pi/examples.
        #[arg(long)]
        delta_theta: Option<f64>,
        /// Also draw this many measurement shots (requires --seed).
        #[arg(long, requires = "seed")]
        shots: Option<u64>,
        /// Seed for shot sampling.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rerun the 14-qubit two-two-one instance with its round sweep.
    ReproduceAppendix {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Amplify a seeded planted optimum and compare with the closed form.
    Grover {
        /// Search-space sizes, each a power of two (repeatable).
        #[arg(long = "space", default_values_t = [4usize, 16, 64])]
        spaces: Vec<usize>,
        /// Seed choosing the planted string per space.
        #[arg(long)]
        seed: u64,
        /// Round override applied to every space.
        #[arg(long)]
        rounds: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep random score profiles and classify the amplification outcome.
    Conjecture {
        /// Weight slots; the space holds 2^slots strings.
        #[arg(long, default_value_t = 4)]
        slots: usize,
        /// Examples per trial.
        #[arg(long, default_value_t = 8)]
        examples: usize,
        /// Trial count, including the two embedded reference trials.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Seed driving every trial.
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate closed-form classical and quantum call counts.
    Callcount {
        /// Smallest weight-slot count in the table.
        #[arg(long, default_value_t = 2)]
        slots_from: usize,
        /// Largest weight-slot count in the table.
        #[arg(long, default_value_t = 10)]
        slots_to: usize,
        /// Examples per training set.
        #[arg(long, default_value_t = 4)]
        examples: usize,
        /// Round override applied to every row.
        #[arg(long)]
        rounds: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn load_topology(path: &Path) -> Result<NetworkTopology> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    NetworkTopology::parse(&text).with_context(|| format!("parsing topology {}", path.display()))
}

fn load_training_set(path: &Path) -> Result<TrainingSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    TrainingSet::parse(&text).with_context(|| format!("parsing training set {}", path.display()))
}

fn emit(output: &OutputArgs, json: String, csv: String) -> Result<()> {
    let content = match output.format {
        Format::Json => json,
        Format::Csv => csv,
    };
    report::write_output(output.out.as_deref(), &content)
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::ReproduceFig5 {
            topology,
            training_set,
            mode,
            rounds,
            delta_theta,
            shots,
            seed,
            output,
        } => {
            let options = Fig5Options {
                topology: topology.as_deref().map(load_topology).transpose()?,
                training_set: training_set.as_deref().map(load_training_set).transpose()?,
                mode,
                rounds,
                delta_theta,
                shots: shots.map(|s| (s, seed.expect("--shots requires --seed"))),
            };
            let report = run_reproduce_fig5(&options)?;
            emit(
                &output,
                report::to_json(&report)?,
                report::fig5_csv(&report)?,
            )?;
            Ok(report::print_checks(&report.checks))
        }
        Command::ReproduceAppendix { output } => {
            let report = run_reproduce_appendix()?;
            emit(
                &output,
                report::to_json(&report)?,
                report::appendix_csv(&report)?,
            )?;
            Ok(report::print_checks(&report.checks))
        }
        Command::Grover {
            spaces,
            seed,
            rounds,
            output,
        } => {
            let report = run_grover_special(&spaces, seed, rounds)?;
            emit(
                &output,
                report::to_json(&report)?,
                report::grover_csv(&report)?,
            )?;
            Ok(report::print_checks(&report.checks))
        }
        Command::Conjecture {
            slots,
            examples,
            trials,
            seed,
            output,
        } => {
            let report = run_conjecture_sweep(slots, examples, trials, seed)?;
            emit(
                &output,
                report::to_json(&report)?,
                report::conjecture_csv(&report)?,
            )?;
            Ok(report::print_checks(&report.checks))
        }
        Command::Callcount {
            slots_from,
            slots_to,
            examples,
            rounds,
            output,
        } => {
            let report = run_callcount_table(slots_from, slots_to, examples, rounds)?;
            emit(
                &output,
                report::to_json(&report)?,
                report::callcount_csv(&report)?,
            )?;
            Ok(report::print_checks(&report.checks))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more embedded checks failed");
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
