use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: cannot parse {text:?} as a finite number")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("{path}: file contains no samples")]
    EmptyFile { path: PathBuf },

    #[error("signal {id}: {reason}")]
    InvalidSignal { id: String, reason: String },

    #[error("dataset root {root}: missing required subset directories: {missing}")]
    MissingSubsets { root: PathBuf, missing: String },

    #[error("duplicate record id {id}")]
    DuplicateId { id: String },

    #[error("synthetic fixture spec is empty")]
    EmptySynthSpec,

    #[error("invalid boundaries: {0}")]
    InvalidBoundaries(String),

    #[error("filter bank/signal length mismatch: signal has {signal_len} samples, bank expects {n_fft}")]
    LengthMismatch { signal_len: usize, n_fft: usize },

    #[error("phase space: {0}")]
    PhaseSpace(String),

    #[error("statistics: {0}")]
    Stats(String),

    #[error("classifier: {0}")]
    Classifier(String),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
