//! Command-line flags, the TOML configuration file, and their resolution into
//! fully specified runs. Flags override file values, which override defaults.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rmdc::experiments::{OutcomePolicy, QubitPolicy};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "rmdc", version, about = "Purity statistics of random-measurement doped Clifford circuits")]
pub struct Cli {
    /// TOML file with per-command defaults; flags win over file values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed for every Monte Carlo stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random stabilizer states against the Haar and Clifford closed forms.
    Baseline(BaselineArgs),
    /// k-sweep of the one-shot measurement protocol.
    Rmdc(SweepArgs),
    /// k-sweep of the dephasing protocol.
    Dephase(SweepArgs),
    /// Analytic log-fluctuation grid over angle and k.
    Surface(SurfaceArgs),
    /// Run the validation suites.
    Validate(ValidateArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

/// An angle in radians, written as a number or as a multiple of `pi`
/// such as `pi/4` or `3pi/8`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Angle(pub f64);

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase().replace(' ', "");
        let Some(pos) = t.find("pi") else {
            return t.parse::<f64>().map(Angle).map_err(|_| format!("cannot read angle `{s}`"));
        };
        let head = t[..pos].trim_end_matches('*');
        let factor =
            if head.is_empty() { 1.0 } else { head.parse::<f64>().map_err(|_| format!("cannot read angle `{s}`"))? };
        let tail = &t[pos + 2..];
        let divisor = match tail.strip_prefix('/') {
            Some(d) => d.parse::<f64>().map_err(|_| format!("cannot read angle `{s}`"))?,
            None if tail.is_empty() => 1.0,
            None => return Err(format!("cannot read angle `{s}`")),
        };
        Ok(Angle(factor * PI / divisor))
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Number(v) => Ok(Angle(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A list of layer counts: `0,1,2,4` or an inclusive range `0..=12`.
#[derive(Clone, Debug, PartialEq)]
pub struct KList(pub Vec<u32>);

impl FromStr for KList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("cannot read k list `{s}`");
        if let Some((a, b)) = s.split_once("..=") {
            let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            return Ok(KList((a..=b).collect()));
        }
        let ks = s.split(',').map(|p| p.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        Ok(KList(ks))
    }
}

impl<'de> Deserialize<'de> for KList {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<u32>),
            One(u32),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::List(v) => Ok(KList(v)),
            Raw::One(k) => Ok(KList(vec![k])),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Which qubit is measured: a fixed index or `uniform`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MeasuredQubit(pub QubitPolicy);

impl FromStr for MeasuredQubit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "uniform" => Ok(MeasuredQubit(QubitPolicy::UniformRandom)),
            t => t
                .parse::<usize>()
                .map(|q| MeasuredQubit(QubitPolicy::Fixed(q)))
                .map_err(|_| format!("measured qubit must be an index or `uniform`, got `{s}`")),
        }
    }
}

impl<'de> Deserialize<'de> for MeasuredQubit {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Index(q) => Ok(MeasuredQubit(QubitPolicy::Fixed(q))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Outcomes(pub OutcomePolicy);

impl FromStr for Outcomes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "born" => Ok(Outcomes(OutcomePolicy::Born)),
            "forced" => Ok(Outcomes(OutcomePolicy::ForcedFirst)),
            _ => Err(format!("outcome policy must be `born` or `forced`, got `{s}`")),
        }
    }
}

impl<'de> Deserialize<'de> for Outcomes {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        String::deserialize(de)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineArgs {
    /// Number of qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of subsystem A (a power of two dividing 2^n); balanced by default.
    #[arg(long = "d-a")]
    pub d_a: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Average over the whole Clifford group instead of sampling (n = 2 only).
    #[arg(long)]
    #[serde(default)]
    pub exact: bool,
    /// Override the simulator's qubit cap.
    #[arg(long = "max-qubits")]
    pub max_qubits: Option<usize>,
    /// CSV output path; a manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Layer counts, as `0,1,2,4` or `0..=12`.
    #[arg(long)]
    pub k: Option<KList>,
    /// Measurement angle in radians; `pi/4` style is accepted.
    #[arg(long)]
    pub theta: Option<Angle>,
    #[arg(long = "d-a")]
    pub d_a: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Measured qubit: an index or `uniform`.
    #[arg(long = "measured-qubit")]
    pub measured_qubit: Option<MeasuredQubit>,
    /// Measurement outcomes: `born` or `forced`.
    #[arg(long)]
    pub outcome: Option<Outcomes>,
    #[arg(long = "max-qubits")]
    pub max_qubits: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceArgs {
    /// Hilbert-space dimension, a power of two (4096 for twelve qubits).
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long = "theta-steps")]
    pub theta_steps: Option<usize>,
    #[arg(long = "k-max")]
    pub k_max: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateArgs {
    /// `fast` (deterministic suites) or `full` (adds the Monte Carlo criteria).
    #[arg(long)]
    pub level: Option<String>,
}

#[derive(Clone, Debug, Args)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
    /// Write the regenerated CSV here instead of the recorded path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub baseline: Option<BaselineArgs>,
    pub rmdc: Option<SweepArgs>,
    pub dephase: Option<SweepArgs>,
    pub surface: Option<SurfaceArgs>,
    pub validate: Option<ValidateArgs>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRun {
    pub n: usize,
    pub d_a: u64,
    pub samples: usize,
    pub seed: u64,
    pub exact: bool,
    pub qubit_cap: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub n: usize,
    pub d_a: u64,
    pub ks: Vec<u32>,
    pub theta: f64,
    pub samples: usize,
    pub seed: u64,
    pub qubit_policy: QubitPolicy,
    pub outcome_policy: OutcomePolicy,
    pub qubit_cap: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRun {
    pub d: u64,
    pub theta_steps: usize,
    pub k_max: u32,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateRun {
    pub level: String,
    pub seed: u64,
}

/// A fully resolved command, as recorded in manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Run {
    Baseline(BaselineRun),
    Rmdc(SweepRun),
    Dephase(SweepRun),
    Surface(SurfaceRun),
    Validate(ValidateRun),
}

impl Run {
    pub fn out(&self) -> Option<&Path> {
        match self {
            Run::Baseline(r) => r.out.as_deref(),
            Run::Rmdc(r) | Run::Dephase(r) => r.out.as_deref(),
            Run::Surface(r) => r.out.as_deref(),
            Run::Validate(_) => None,
        }
    }

    pub fn set_out(&mut self, out: PathBuf) {
        match self {
            Run::Baseline(r) => r.out = Some(out),
            Run::Rmdc(r) | Run::Dephase(r) => r.out = Some(out),
            Run::Surface(r) => r.out = Some(out),
            Run::Validate(_) => {}
        }
    }
}

fn balanced_d_a(n: usize) -> u64 {
    1u64 << (n / 2)
}

fn merge_sweep(
    flags: SweepArgs,
    file: Option<SweepArgs>,
    defaults: (usize, Vec<u32>, f64, usize),
    seed: u64,
) -> SweepRun {
    let file = file.unwrap_or_default();
    let n = flags.n.or(file.n).unwrap_or(defaults.0);
    SweepRun {
        n,
        d_a: flags.d_a.or(file.d_a).unwrap_or_else(|| balanced_d_a(n)),
        ks: flags.k.or(file.k).map(|k| k.0).unwrap_or(defaults.1),
        theta: flags.theta.or(file.theta).map(|a| a.0).unwrap_or(defaults.2),
        samples: flags.samples.or(file.samples).unwrap_or(defaults.3),
        seed,
        qubit_policy: flags.measured_qubit.or(file.measured_qubit).map(|q| q.0).unwrap_or(QubitPolicy::Fixed(0)),
        outcome_policy: flags.outcome.or(file.outcome).map(|o| o.0).unwrap_or(OutcomePolicy::Born),
        qubit_cap: flags.max_qubits.or(file.max_qubits),
        out: flags.out.or(file.out),
    }
}

/// Resolves flags against the config file and built-in defaults.
/// Returns `None` for `replay`, which is handled separately.
pub fn resolve(cli: Cli) -> Result<Option<Run>, CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let run = match cli.command {
        Command::Baseline(flags) => {
            let f = file.baseline.unwrap_or_default();
            let n = flags.n.or(f.n).unwrap_or(6);
            Run::Baseline(BaselineRun {
                n,
                d_a: flags.d_a.or(f.d_a).unwrap_or_else(|| balanced_d_a(n)),
                samples: flags.samples.or(f.samples).unwrap_or(20_000),
                seed,
                exact: flags.exact || f.exact,
                qubit_cap: flags.max_qubits.or(f.max_qubits),
                out: flags.out.or(f.out),
            })
        }
        Command::Rmdc(flags) => {
            Run::Rmdc(merge_sweep(flags, file.rmdc, (6, vec![0, 1, 2, 4, 6, 8, 12], FRAC_PI_4, 20_000), seed))
        }
        Command::Dephase(flags) => {
            Run::Dephase(merge_sweep(flags, file.dephase, (4, (0..=10).collect(), FRAC_PI_2, 5000), seed))
        }
        Command::Surface(flags) => {
            let f = file.surface.unwrap_or_default();
            Run::Surface(SurfaceRun {
                d: flags.d.or(f.d).unwrap_or(1 << 12),
                theta_steps: flags.theta_steps.or(f.theta_steps).unwrap_or(64),
                k_max: flags.k_max.or(f.k_max).unwrap_or(20),
                out: flags.out.or(f.out),
            })
        }
        Command::Validate(flags) => {
            let f = file.validate.unwrap_or_default();
            Run::Validate(ValidateRun { level: flags.level.or(f.level).unwrap_or_else(|| "fast".into()), seed })
        }
        Command::Replay(_) => return Ok(None),
    };
    Ok(Some(run))
}
