//! Command-line front end: configuration layering, the four subcommands,
//! and the CSV / JSON / SVG emitters.
//!
//! Configuration precedence is flags over config file over defaults; the
//! defaults are the standard experiment values (fs 173.61 Hz, band edges
//! {4, 8, 16, 30, 60} Hz, tau 1, dim 2, k 1..10, ten folds). Every
//! output artifact embeds the resolved config hash and the seed, and all
//! tables are computed in full before anything is written, so a failing
//! run leaves no partial outputs.

pub mod commands;
pub mod report;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::{distance_by_name, Distance, Scaling};
use crate::error::{Error, Result};
use crate::spectral::EEG_CUTOFFS_HZ;

pub use commands::{
    cmd_decompose, cmd_evaluate, cmd_features, cmd_synth, feature_table, synth_manifest,
    SynthOptions,
};

/// Which distance metrics an evaluation sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceChoice {
    Euclidean,
    CityBlock,
    Both,
}

impl DistanceChoice {
    pub fn parse(s: &str) -> Option<DistanceChoice> {
        match s {
            "euclidean" => Some(DistanceChoice::Euclidean),
            "cityblock" => Some(DistanceChoice::CityBlock),
            "both" => Some(DistanceChoice::Both),
            _ => None,
        }
    }

    /// Resolves to registry entries, in registry order.
    pub fn metrics(self) -> Vec<&'static dyn Distance> {
        let names: &[&str] = match self {
            DistanceChoice::Euclidean => &["euclidean"],
            DistanceChoice::CityBlock => &["cityblock"],
            DistanceChoice::Both => &["euclidean", "cityblock"],
        };
        names
            .iter()
            .map(|n| distance_by_name(n).expect("registered metric"))
            .collect()
    }
}

/// Output table format selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<OutputFormat> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            "both" => Some(OutputFormat::Both),
            _ => None,
        }
    }

    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn wants_json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

/// Fully resolved run configuration. The serialized form of this struct
/// is what the config hash covers; `out` is excluded because relocating
/// the artifacts does not change the analysis.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub out: PathBuf,
    pub fs: f64,
    pub f_cut: Vec<f64>,
    pub tau: usize,
    pub dim: usize,
    pub distance: DistanceChoice,
    pub k_max: usize,
    pub n_folds: usize,
    pub seed: u64,
    pub scaling: Scaling,
    pub signal: Option<String>,
    pub format: OutputFormat,
    pub p_threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: None,
            out: PathBuf::from("out"),
            fs: crate::dataset::DEFAULT_FS_HZ,
            f_cut: EEG_CUTOFFS_HZ.to_vec(),
            tau: 1,
            dim: 2,
            distance: DistanceChoice::Both,
            k_max: 10,
            n_folds: 10,
            seed: 42,
            scaling: Scaling::Raw,
            signal: None,
            format: OutputFormat::Both,
            p_threshold: 0.05,
        }
    }
}

/// One layer of configuration: a JSON config file or the CLI flags.
/// Unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub fs: Option<f64>,
    pub f_cut: Option<Vec<f64>>,
    pub tau: Option<usize>,
    pub dim: Option<usize>,
    pub distance: Option<String>,
    pub k_max: Option<usize>,
    pub n_folds: Option<usize>,
    pub seed: Option<u64>,
    pub scaling: Option<String>,
    pub signal: Option<String>,
    pub format: Option<String>,
    pub p_threshold: Option<f64>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<ConfigLayer> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn overlay(self, onto: &mut RunConfig) -> Result<()> {
        if let Some(v) = self.data {
            onto.data = Some(v);
        }
        if let Some(v) = self.out {
            onto.out = v;
        }
        if let Some(v) = self.fs {
            onto.fs = v;
        }
        if let Some(v) = self.f_cut {
            onto.f_cut = v;
        }
        if let Some(v) = self.tau {
            onto.tau = v;
        }
        if let Some(v) = self.dim {
            onto.dim = v;
        }
        if let Some(v) = self.distance {
            onto.distance = DistanceChoice::parse(&v).ok_or_else(|| {
                Error::Config(format!(
                    "unknown distance {v:?}; expected euclidean, cityblock or both"
                ))
            })?;
        }
        if let Some(v) = self.k_max {
            onto.k_max = v;
        }
        if let Some(v) = self.n_folds {
            onto.n_folds = v;
        }
        if let Some(v) = self.seed {
            onto.seed = v;
        }
        if let Some(v) = self.scaling {
            onto.scaling = Scaling::parse(&v).ok_or_else(|| {
                Error::Config(format!("unknown scaling {v:?}; expected raw or zscore"))
            })?;
        }
        if let Some(v) = self.signal {
            onto.signal = Some(v);
        }
        if let Some(v) = self.format {
            onto.format = OutputFormat::parse(&v).ok_or_else(|| {
                Error::Config(format!("unknown format {v:?}; expected csv, json or both"))
            })?;
        }
        if let Some(v) = self.p_threshold {
            onto.p_threshold = v;
        }
        Ok(())
    }
}

impl RunConfig {
    /// Defaults, overlaid with the config file (when given), overlaid
    /// with the CLI flags.
    pub fn resolve(file: Option<ConfigLayer>, flags: ConfigLayer) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(layer) = file {
            layer.overlay(&mut cfg)?;
        }
        flags.overlay(&mut cfg)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.fs.is_nan() || self.fs <= 0.0 {
            return Err(Error::Config(format!(
                "fs must be positive, got {}",
                self.fs
            )));
        }
        if self.tau == 0 {
            return Err(Error::Config("tau must be at least 1".into()));
        }
        if self.dim < 2 {
            return Err(Error::Config("dim must be at least 2".into()));
        }
        if self.k_max == 0 {
            return Err(Error::Config("kmax must be at least 1".into()));
        }
        if self.n_folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        if self.p_threshold.is_nan() || self.p_threshold < 0.0 {
            return Err(Error::Config("threshold must be non-negative".into()));
        }
        // surface boundary problems before any work happens
        crate::spectral::compute_lambda(&self.f_cut, self.fs / 2.0)?;
        Ok(())
    }

    /// Short hex digest of the resolved configuration; stamped into
    /// every output artifact.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        hex[..16].to_string()
    }

    pub fn metrics(&self) -> Vec<&'static dyn Distance> {
        self.distance.metrics()
    }
}

/// Writes `content` to `path`, creating parent directories.
pub(crate) fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, content).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Filesystem-safe record id: `E/S001` becomes `E_S001`.
pub(crate) fn sanitize_id(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
