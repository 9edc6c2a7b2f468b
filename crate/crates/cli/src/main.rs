mod algebra;
mod numerics;
mod options;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use options::Options;

#[derive(Parser, Debug)]
#[command(name = "dnls", version, about = "Derive, gauge, check and simulate the dNLS hierarchy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the n-th hierarchy equation
    Derive(Verb),
    /// Gauge the j-th Schrödinger-type member and report residual bad cubics
    Gauge(Verb),
    /// Structural, coefficient, reference and cancellation checks
    Check(Verb),
    /// Integrate a hierarchy member on a periodic grid
    Simulate(Verb),
    /// Growth of the third Picard iterate on high-frequency packets
    Picard(Verb),
    /// Fourier-Lebesgue and modulation norms, or the gauge Lipschitz probe
    Norms(Verb),
    /// Sample the cubic resonance lower bound
    Resonance(Verb),
    /// Write every hierarchy and gauged equation up to --n-max
    Export(Verb),
}

#[derive(clap::Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Verb {
    #[command(flatten)]
    options: Options,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// `Ok(true)` when every verification passed.
type Outcome = anyhow::Result<bool>;

fn run(cli: Cli) -> Outcome {
    let (verb, f): (Verb, fn(&Options) -> Outcome) = match cli.command {
        Command::Derive(v) => (v, algebra::derive),
        Command::Gauge(v) => (v, algebra::gauge),
        Command::Check(v) => (v, algebra::check),
        Command::Simulate(v) => (v, numerics::simulate),
        Command::Picard(v) => (v, numerics::picard),
        Command::Norms(v) => (v, numerics::norms),
        Command::Resonance(v) => (v, numerics::resonance),
        Command::Export(v) => (v, algebra::export),
    };
    f(&verb.options.resolve()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
