//! Seizure / seizure-free EEG classification from rhythm phase-space
//! features.
//!
//! The pipeline has four stages, each usable on its own:
//!
//! 1. [`dataset`] — ingest Bonn-style one-sample-per-line recordings
//!    (subsets C/D = seizure-free, E = seizure) or generate deterministic
//!    synthetic fixtures.
//! 2. [`spectral`] — split each signal into the five clinical rhythms
//!    (delta, theta, alpha, beta, gamma) with an empirical-wavelet filter
//!    bank built on fixed band edges {4, 8, 16, 30, 60} Hz.
//! 3. [`phasespace`] — embed each rhythm as the 2-D delay portrait
//!    `(v_k, v_{k+1})` and take its 95% confidence-ellipse area as the
//!    per-rhythm feature.
//! 4. [`stats`] / [`classifier`] — screen the features with a
//!    Kruskal-Wallis test, then sweep a KNN classifier over every rhythm
//!    pair, both distance metrics, and k = 1..10 under stratified
//!    tenfold cross-validation.
//!
//! The [`cli`] module wires the stages into the `ictal` binary's
//! `decompose`, `features`, `evaluate` and `synth` subcommands.

pub mod classifier;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod phasespace;
pub mod spectral;
pub mod stats;

pub use classifier::{
    compute_metrics, cross_validate, knn_classify, stratified_folds, sweep_pairs, ConfusionMatrix,
    EvalReport, FoldAssignment, KnnConfig, MetricSet, RhythmPair, Scaling, TieRule,
};
pub use dataset::{
    load_dataset, load_signal, synth_fixture, write_signal, ClassLabel, DatasetLayout,
    DatasetManifest, LabeledRecord, Signal, DEFAULT_FS_HZ,
};
pub use error::{Error, Result};
pub use phasespace::{
    ellipse_area, extract_features, reconstruct_phase_space, EllipseStats, FeatureRow,
    PhasePortrait,
};
pub use spectral::{
    beta_transition, build_filter_bank, compute_lambda, decompose, BoundarySet, FilterBank,
    RhythmSet, EEG_CUTOFFS_HZ, RHYTHM_NAMES,
};
pub use stats::{kruskal_wallis, screen_features, KwResult, ScreeningReport};
