//! CSV writing, number formatting and run manifests.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::cli::Run;
use crate::error::CliError;

/// Version of every CSV layout written by this tool. Bump on any column change.
pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_VERSION: u32 = 1;

pub const SWEEP_COLUMNS: [&str; 11] = [
    "schema_version",
    "config_hash",
    "k",
    "theta",
    "mc_mean",
    "mc_mean_se",
    "mc_var",
    "mc_var_se",
    "analytic_mean",
    "analytic_var",
    "resample_count",
];

pub const BASELINE_COLUMNS: [&str; 15] = [
    "schema_version",
    "config_hash",
    "n",
    "d_a",
    "samples",
    "mc_mean",
    "mc_mean_se",
    "mc_var",
    "mc_var_se",
    "haar_mean",
    "haar_var",
    "clifford_mean",
    "clifford_var",
    "mean_pass",
    "var_pass",
];

pub const SURFACE_COLUMNS: [&str; 4] = ["schema_version", "theta", "k", "log10_delta"];

/// Twelve significant digits in scientific notation.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

/// A number, or an empty field when the quantity is not available.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub manifest_version: u32,
    pub csv_schema_version: u32,
    pub tool_version: String,
    pub run: Run,
    pub master_seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    /// Hash of the protocol configuration behind each data row, in row order.
    pub config_hashes: Vec<String>,
    pub started_at: String,
    pub finished_at: Option<String>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn new(run: &Run, master_seed: Option<u64>, config_hashes: Vec<String>) -> Self {
        Self {
            manifest_version: MANIFEST_VERSION,
            csv_schema_version: CSV_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            run: run.clone(),
            master_seed,
            outputs: run.out().map(Path::to_path_buf).into_iter().collect(),
            config_hashes,
            started_at: now(),
            finished_at: None,
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut f = File::create(path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        Ok(())
    }

    pub fn finish(&mut self, path: &Path) -> Result<(), CliError> {
        self.finished_at = Some(now());
        self.write(path)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let f =
            File::open(path).map_err(|e| CliError::Usage(format!("cannot open manifest {}: {e}", path.display())))?;
        serde_json::from_reader(f).map_err(|e| CliError::Usage(format!("bad manifest {}: {e}", path.display())))
    }
}

/// A CSV sink writing to a file or to standard output.
pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn create(out: Option<&Path>, header: &[&str]) -> Result<Self, CliError> {
        let sink: Box<dyn Write> = match out {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout()),
        };
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        self.writer.write_record(fields)?;
        self.writer.flush()?;
        Ok(())
    }
}
