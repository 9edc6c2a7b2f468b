use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Latex,
    Json,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Latex => "tex",
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorArg {
    Ifrk4,
    Etdrk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialDatum {
    /// 0.3 e^{iκx} + 0.2 e^{-2iκx} + 0.1 e^{3iκx}, κ = 2π/L
    Trig,
    /// 0.3 exp(-((x - L/2)/3)²)
    Gaussian,
    /// Smooth random coefficients drawn from --seed
    Random,
    /// Exact plane-wave family member (uses --N-list[0] and --s)
    PlaneWave,
}

/// Every flag; a JSON config file with the same keys fills whatever the command line leaves unset.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Hierarchy index n
    #[arg(long)]
    pub n: Option<usize>,
    /// Index j of the Schrödinger-type member (n = 2j - 1)
    #[arg(long)]
    pub j: Option<usize>,
    /// Normalization α as a Gaussian rational, e.g. "8" or "1/2+3/4 i" (default 2^n)
    #[arg(long)]
    pub alpha: Option<String>,
    /// Grid points M (power of two)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Period L of the grid (default 2π)
    #[arg(long)]
    pub length: Option<f64>,
    /// Time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Regularity index s
    #[arg(long)]
    pub s: Option<f64>,
    /// Fourier-Lebesgue exponent r ∈ (1, ∞] ("inf" allowed)
    #[arg(long)]
    pub r: Option<f64>,
    /// Modulation exponent p ∈ [1, ∞]
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated frequencies N
    #[arg(long = "N-list", value_delimiter = ',')]
    #[serde(rename = "N-list")]
    pub n_list: Option<Vec<f64>>,
    /// Random seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Artifact directory (default ./out)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any of these flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Time integrator
    #[arg(long, value_enum)]
    pub integrator: Option<IntegratorArg>,
    /// Initial datum for simulate
    #[arg(long, value_enum)]
    pub initial: Option<InitialDatum>,
    /// Conserved functionals to monitor (-1 = mass), comma-separated
    #[arg(long, value_delimiter = ',')]
    pub monitors: Option<Vec<i64>>,
    /// Record monitors every this many steps
    #[arg(long = "monitor-every")]
    pub monitor_every: Option<usize>,
    /// Write a snapshot every this many steps
    #[arg(long = "snapshot-every")]
    pub snapshot_every: Option<usize>,
    /// Dealiasing fraction of the half band that is kept
    #[arg(long)]
    pub dealias: Option<f64>,
    /// Simulate the gauged equation instead
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub gauged: bool,
    /// Snapshot file to read (norms)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Run the gauge Lipschitz probe (norms)
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub probe: bool,
    /// Sample count (resonance)
    #[arg(long)]
    pub count: Option<usize>,
    /// Sampling radius (resonance, probe)
    #[arg(long)]
    pub radius: Option<f64>,
    /// Trials (probe)
    #[arg(long)]
    pub trials: Option<usize>,
    /// Largest hierarchy index for check --all and export
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Run every check
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub all: bool,
}

macro_rules! prefer {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Options {
            $($f: $a.$f.or($b.$f),)*
            config: $a.config,
            gauged: $a.gauged || $b.gauged,
            probe: $a.probe || $b.probe,
            all: $a.all || $b.all,
        }
    };
}

impl Options {
    /// Flags win over the config file.
    pub fn resolve(self) -> anyhow::Result<Options> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        let flags = self;
        Ok(prefer!(flags, file; n, j, alpha, grid, length, dt, t_end, s, r, p, n_list, seed, format, out,
            integrator, initial, monitors, monitor_every, snapshot_every, dealias, input, count, radius, trials, n_max))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn read_config(path: &Path) -> Result<Options, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))
}
