//! The four subcommands. Each one computes its full result set in
//! memory first and only then writes files, so validation or compute
//! failures leave the output directory untouched.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::classifier::{stratified_folds, sweep_pairs, TieRule};
use crate::cli::report::{self, Stamp};
use crate::cli::svg;
use crate::cli::{sanitize_id, write_text, RunConfig};
use crate::dataset::{
    load_dataset, load_signal, synth_fixture, ClassLabel, DatasetLayout, DatasetManifest,
    ManifestEntry, ManifestSummary, Signal, SynthRecordSpec,
};
use crate::error::{Error, Result};
use crate::phasespace::{ellipse_area, extract_features, reconstruct_phase_space, FeatureRow};
use crate::spectral::{band_name, build_filter_bank, decompose, BoundarySet, FilterBank, RhythmSet};
use crate::stats::screen_features;

fn stamp_of(cfg: &RunConfig) -> Stamp {
    Stamp {
        seed: cfg.seed,
        config_hash: cfg.hash(),
    }
}

fn data_root(cfg: &RunConfig) -> Result<&Path> {
    cfg.data
        .as_deref()
        .ok_or_else(|| Error::Config("no input: pass --data".into()))
}

fn load_corpus(cfg: &RunConfig, root: &Path) -> Result<DatasetManifest> {
    let layout = DatasetLayout::detect(root);
    let manifest = load_dataset(root, &layout, cfg.fs)?;
    if manifest.is_empty() {
        return Err(Error::Config(format!(
            "dataset at {} contains no records",
            root.display()
        )));
    }
    Ok(manifest)
}

fn matches_signal(id: &str, wanted: &str) -> bool {
    id == wanted || id.ends_with(&format!("/{wanted}"))
}

/// Builds (and caches) one filter bank per distinct signal length.
struct BankCache<'a> {
    cfg: &'a RunConfig,
    bounds: BoundarySet,
    banks: BTreeMap<usize, FilterBank>,
}

impl<'a> BankCache<'a> {
    fn new(cfg: &'a RunConfig) -> Result<BankCache<'a>> {
        let bounds = BoundarySet::new(cfg.f_cut.clone(), cfg.fs / 2.0)?;
        Ok(BankCache {
            cfg,
            bounds,
            banks: BTreeMap::new(),
        })
    }

    fn bank(&mut self, n_fft: usize) -> Result<&FilterBank> {
        if !self.banks.contains_key(&n_fft) {
            let bank = build_filter_bank(self.cfg.fs, n_fft, &self.bounds)?;
            self.banks.insert(n_fft, bank);
        }
        Ok(&self.banks[&n_fft])
    }
}

/// Decomposes every record of `manifest` and extracts its feature row,
/// in manifest order.
pub fn feature_table(cfg: &RunConfig, manifest: &DatasetManifest) -> Result<Vec<FeatureRow>> {
    let mut cache = BankCache::new(cfg)?;
    let mut rows = Vec::with_capacity(manifest.len());
    for record in &manifest.records {
        let bank = cache.bank(record.signal.len())?;
        let rhythms = decompose(&record.signal, bank)?;
        rows.push(extract_features(
            record.signal.id.clone(),
            record.label,
            &rhythms,
            cfg.tau,
            cfg.dim,
        )?);
    }
    Ok(rows)
}

/// `decompose`: split each recording into rhythms. Writes one rhythm CSV
/// per signal, the filter-bank response table and figure, and a rhythm
/// figure for the `--signal` selection.
pub fn cmd_decompose(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let root = data_root(cfg)?;
    let stamp = stamp_of(cfg);

    // gather input signals: a dataset tree or a single recording
    let mut signals: Vec<Signal> = Vec::new();
    let mut manifest: Option<DatasetManifest> = None;
    if root.is_file() {
        signals.push(load_signal(root, cfg.fs)?);
    } else {
        let corpus = load_corpus(cfg, root)?;
        signals.extend(corpus.records.iter().map(|r| r.signal.clone()));
        manifest = Some(corpus);
    }
    if let Some(wanted) = &cfg.signal {
        signals.retain(|s| matches_signal(&s.id, wanted));
        if signals.is_empty() {
            return Err(Error::Config(format!("no signal matches {wanted:?}")));
        }
    }

    // compute everything before writing anything
    let mut cache = BankCache::new(cfg)?;
    let mut decomposed: Vec<(String, RhythmSet)> = Vec::with_capacity(signals.len());
    for signal in &signals {
        let bank = cache.bank(signal.len())?;
        decomposed.push((signal.id.clone(), decompose(signal, bank)?));
    }
    let first_bank = cache.bank(signals[0].len())?.clone();

    let mut written = Vec::new();
    let out = &cfg.out;
    for (id, rhythms) in &decomposed {
        let path = out.join("rhythms").join(format!("{}.csv", sanitize_id(id)));
        write_text(&path, &report::rhythm_csv(rhythms, &stamp))?;
        written.push(path);
    }
    let bank_csv = out.join("filter_bank.csv");
    write_text(&bank_csv, &report::filter_bank_csv(&first_bank, &stamp))?;
    written.push(bank_csv);
    let bank_svg = out.join("filter_bank.svg");
    write_text(&bank_svg, &svg::filter_bank_svg(&first_bank, &stamp))?;
    written.push(bank_svg);

    if let Some(wanted) = &cfg.signal {
        for (id, rhythms) in &decomposed {
            if matches_signal(id, wanted) {
                let path = out.join("rhythms").join(format!("{}.svg", sanitize_id(id)));
                write_text(&path, &svg::rhythms_svg(rhythms, id, cfg.fs, &stamp))?;
                written.push(path);
            }
        }
    }
    if let Some(corpus) = &manifest {
        let path = out.join("manifest.json");
        write_text(&path, &report::manifest_json(&corpus.summary(), &stamp))?;
        written.push(path);
    }
    Ok(written)
}

/// `features`: the per-record feature table, plus phase-portrait figures
/// for the `--signal` selection.
pub fn cmd_features(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let root = data_root(cfg)?;
    let stamp = stamp_of(cfg);
    let manifest = load_corpus(cfg, root)?;
    let rows = feature_table(cfg, &manifest)?;

    // portraits for the requested record, one per rhythm
    let mut portraits = Vec::new();
    if let Some(wanted) = &cfg.signal {
        let record = manifest
            .records
            .iter()
            .find(|r| matches_signal(&r.signal.id, wanted))
            .ok_or_else(|| Error::Config(format!("no record matches {wanted:?}")))?;
        let mut cache = BankCache::new(cfg)?;
        let bank = cache.bank(record.signal.len())?;
        let rhythms = decompose(&record.signal, bank)?;
        let n_bands = rhythms.n_bands();
        for band in 0..n_bands {
            let portrait = reconstruct_phase_space(rhythms.band(band), cfg.tau, cfg.dim)?;
            let stats = ellipse_area(&portrait)?;
            let name = band_name(band, n_bands);
            let title = format!("{} {} phase portrait", record.signal.id, name);
            portraits.push((
                format!("{}_{}.svg", sanitize_id(&record.signal.id), name),
                svg::phase_portrait_svg(&portrait, &stats, &title, &stamp),
            ));
        }
    }

    let mut written = Vec::new();
    let csv_path = cfg.out.join("features.csv");
    write_text(&csv_path, &report::features_csv(&rows, &stamp))?;
    written.push(csv_path);
    if cfg.format.wants_json() {
        let json_path = cfg.out.join("features.json");
        write_text(&json_path, &report::features_json(&rows, &stamp))?;
        written.push(json_path);
        let manifest_path = cfg.out.join("manifest.json");
        write_text(
            &manifest_path,
            &report::manifest_json(&manifest.summary(), &stamp),
        )?;
        written.push(manifest_path);
    }
    for (name, content) in portraits {
        let path = cfg.out.join("rps").join(name);
        write_text(&path, &content)?;
        written.push(path);
    }
    Ok(written)
}

/// `evaluate`: Kruskal-Wallis screening plus the full KNN sweep. Reads
/// features from `features_file` when given, otherwise recomputes them
/// from the dataset.
pub fn cmd_evaluate(cfg: &RunConfig, features_file: Option<&Path>) -> Result<Vec<PathBuf>> {
    let stamp = stamp_of(cfg);
    let rows = match features_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            report::parse_features_csv(&text, path)?
        }
        None => {
            let root = data_root(cfg)?;
            let manifest = load_corpus(cfg, root)?;
            feature_table(cfg, &manifest)?
        }
    };

    let screening = screen_features(&rows, cfg.p_threshold)?;
    let labels: Vec<ClassLabel> = rows.iter().map(|r| r.label).collect();
    let folds = stratified_folds(&labels, cfg.n_folds, cfg.seed)?;
    let metrics = cfg.metrics();
    let sweep = sweep_pairs(
        &rows,
        &metrics,
        cfg.k_max,
        &folds,
        TieRule::default(),
        cfg.scaling,
    )?;

    let mut written = Vec::new();
    let out = &cfg.out;
    if cfg.format.wants_csv() {
        let path = out.join("screening.csv");
        write_text(&path, &report::screening_csv(&screening, &stamp))?;
        written.push(path);
        let path = out.join("sweep.csv");
        write_text(&path, &report::sweep_csv(&sweep, &stamp))?;
        written.push(path);
        for metric in &metrics {
            let path = out.join(format!("best_k_{}.csv", metric.name()));
            write_text(&path, &report::best_k_csv(&sweep, metric.name(), &stamp))?;
            written.push(path);
        }
    }
    if cfg.format.wants_json() {
        let path = out.join("screening.json");
        write_text(&path, &report::screening_json(&screening, &stamp))?;
        written.push(path);
        let path = out.join("sweep.json");
        write_text(&path, &report::sweep_json(&sweep, &stamp))?;
        written.push(path);
    }
    Ok(written)
}

/// Settings for the synthetic dataset generator.
#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub s_count: usize,
    pub sf_count: usize,
    pub length: usize,
    /// Noise-amplitude ratio between the seizure and seizure-free class.
    pub gap: f64,
    /// Shuffle the labels after generation (permutation-null fixture).
    pub permute_labels: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            s_count: 20,
            sf_count: 20,
            length: 4096,
            gap: 40.0,
            permute_labels: false,
        }
    }
}

/// Builds the synthetic manifest for `opts` without touching the
/// filesystem; the acceptance fixtures reuse this.
pub fn synth_manifest(cfg: &RunConfig, opts: &SynthOptions) -> Result<DatasetManifest> {
    let mut specs = Vec::with_capacity(opts.s_count + opts.sf_count);
    for i in 0..opts.s_count {
        specs.push(SynthRecordSpec {
            label: ClassLabel::Seizure,
            components: vec![],
            noise_amplitude: opts.gap,
            length: opts.length,
            seed: cfg.seed.wrapping_add(i as u64),
        });
    }
    for i in 0..opts.sf_count {
        specs.push(SynthRecordSpec {
            label: ClassLabel::SeizureFree,
            components: vec![],
            noise_amplitude: 1.0,
            length: opts.length,
            seed: cfg.seed.wrapping_add(1_000_003 + i as u64),
        });
    }
    let manifest = synth_fixture(&specs, cfg.fs)?;
    Ok(if opts.permute_labels {
        crate::dataset::permute_labels(&manifest, cfg.seed)
    } else {
        manifest
    })
}

/// `synth`: write a deterministic synthetic dataset tree (C/D/E
/// directories, one file per record) that the other subcommands accept.
pub fn cmd_synth(cfg: &RunConfig, opts: &SynthOptions) -> Result<Vec<PathBuf>> {
    if opts.s_count == 0 || opts.sf_count == 0 {
        return Err(Error::Config("both class counts must be positive".into()));
    }
    let manifest = synth_manifest(cfg, opts)?;
    let stamp = stamp_of(cfg);

    let mut written = Vec::new();
    let mut sf_toggle = false;
    let mut entries = Vec::with_capacity(manifest.len());
    for record in &manifest.records {
        let dir = match record.label {
            ClassLabel::Seizure => "E",
            ClassLabel::SeizureFree => {
                sf_toggle = !sf_toggle;
                if sf_toggle {
                    "C"
                } else {
                    "D"
                }
            }
        };
        let rel = format!("{dir}/{}.txt", sanitize_id(&record.signal.id));
        let path = cfg.out.join(&rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        crate::dataset::write_signal(&record.signal, &path)?;
        written.push(path);
        entries.push(ManifestEntry {
            id: record.signal.id.clone(),
            label: record.label,
            path: Some(rel),
        });
    }
    let summary = ManifestSummary {
        counts: manifest.counts(),
        records: entries,
    };
    let manifest_path = cfg.out.join("manifest.json");
    write_text(&manifest_path, &report::manifest_json(&summary, &stamp))?;
    written.push(manifest_path);
    Ok(written)
}
