//! Ingestion of Bonn-style EEG recordings and synthetic test fixtures.
//!
//! The on-disk format is one ASCII sample per line (integer or decimal),
//! one file per recording, grouped into subset directories. Subsets C and D
//! hold seizure-free (SF) records, subset E holds seizure (S) records;
//! subsets A and B can be read but are not part of the classification
//! corpus.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default sampling rate of the Bonn recordings, in Hz.
pub const DEFAULT_FS_HZ: f64 = 173.61;

/// The five Bonn subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subset {
    A,
    B,
    C,
    D,
    E,
}

impl Subset {
    pub const ALL: [Subset; 5] = [Subset::A, Subset::B, Subset::C, Subset::D, Subset::E];

    /// Subsets that take part in the classification corpus.
    pub const LABELED: [Subset; 3] = [Subset::C, Subset::D, Subset::E];

    pub fn letter(self) -> &'static str {
        match self {
            Subset::A => "A",
            Subset::B => "B",
            Subset::C => "C",
            Subset::D => "D",
            Subset::E => "E",
        }
    }

    /// Class assignment: C and D are seizure-free, E is seizure.
    /// A and B carry no label in this task.
    pub fn label(self) -> Option<ClassLabel> {
        match self {
            Subset::C | Subset::D => Some(ClassLabel::SeizureFree),
            Subset::E => Some(ClassLabel::Seizure),
            Subset::A | Subset::B => None,
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Binary class of a record: seizure (S) or seizure-free (SF).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    #[serde(rename = "S")]
    Seizure,
    #[serde(rename = "SF")]
    SeizureFree,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Seizure => "S",
            ClassLabel::SeizureFree => "SF",
        }
    }

    pub fn parse(s: &str) -> Option<ClassLabel> {
        match s {
            "S" => Some(ClassLabel::Seizure),
            "SF" => Some(ClassLabel::SeizureFree),
            _ => None,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One EEG record: sample vector plus sampling rate and provenance id.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    /// Sampling rate in Hz.
    pub fs: f64,
    /// Source identifier, e.g. `E/S001`.
    pub id: String,
}

impl Signal {
    /// Builds a signal, enforcing the basic invariants: at least two
    /// samples (the phase-space embedding needs one lagged pair),
    /// positive sampling rate, and finite sample values.
    pub fn new(samples: Vec<f64>, fs: f64, id: impl Into<String>) -> Result<Signal> {
        let id = id.into();
        if samples.len() < 2 {
            return Err(Error::InvalidSignal {
                id,
                reason: format!("needs at least 2 samples, got {}", samples.len()),
            });
        }
        if fs.is_nan() || fs <= 0.0 {
            return Err(Error::InvalidSignal {
                id,
                reason: format!("sampling rate must be positive, got {fs}"),
            });
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal {
                id,
                reason: format!("non-finite sample at index {i}"),
            });
        }
        Ok(Signal { samples, fs, id })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Total energy, `sum(x^2)`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum()
    }
}

/// A signal together with its class.
#[derive(Debug, Clone)]
pub struct LabeledRecord {
    pub signal: Signal,
    pub label: ClassLabel,
    /// Path relative to the dataset root, when loaded from disk.
    pub rel_path: Option<String>,
}

/// Per-class record counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub seizure: usize,
    pub seizure_free: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.seizure + self.seizure_free
    }
}

/// The labeled corpus, in deterministic order.
#[derive(Debug, Clone, Default)]
pub struct DatasetManifest {
    pub records: Vec<LabeledRecord>,
}

impl DatasetManifest {
    pub fn counts(&self) -> ClassCounts {
        let seizure = self
            .records
            .iter()
            .filter(|r| r.label == ClassLabel::Seizure)
            .count();
        ClassCounts {
            seizure,
            seizure_free: self.records.len() - seizure,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn labels(&self) -> Vec<ClassLabel> {
        self.records.iter().map(|r| r.label).collect()
    }

    /// Summary view (ids, labels, counts, relative paths) for JSON export;
    /// sample data is deliberately omitted.
    pub fn summary(&self) -> ManifestSummary {
        ManifestSummary {
            counts: self.counts(),
            records: self
                .records
                .iter()
                .map(|r| ManifestEntry {
                    id: r.signal.id.clone(),
                    label: r.label,
                    path: r.rel_path.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub label: ClassLabel,
    pub path: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestSummary {
    pub counts: ClassCounts,
    pub records: Vec<ManifestEntry>,
}

/// Maps each subset to the directory that holds its files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetLayout {
    dirs: BTreeMap<Subset, String>,
}

impl DatasetLayout {
    /// Subset letters as directory names: `A/ B/ C/ D/ E/`.
    pub fn by_subset_letter() -> DatasetLayout {
        let dirs = Subset::ALL
            .iter()
            .map(|s| (*s, s.letter().to_string()))
            .collect();
        DatasetLayout { dirs }
    }

    /// The naming used by the public Bonn distribution:
    /// A=Z, B=O, C=N, D=F, E=S.
    pub fn bonn_letters() -> DatasetLayout {
        let dirs = [
            (Subset::A, "Z"),
            (Subset::B, "O"),
            (Subset::C, "N"),
            (Subset::D, "F"),
            (Subset::E, "S"),
        ]
        .into_iter()
        .map(|(s, d)| (s, d.to_string()))
        .collect();
        DatasetLayout { dirs }
    }

    pub fn with_dir(mut self, subset: Subset, dir: impl Into<String>) -> DatasetLayout {
        self.dirs.insert(subset, dir.into());
        self
    }

    pub fn dir(&self, subset: Subset) -> &str {
        &self.dirs[&subset]
    }

    /// Picks the layout convention that matches the directories present
    /// under `root`. Subset-letter directories win over Bonn letters.
    pub fn detect(root: &Path) -> DatasetLayout {
        let letter = DatasetLayout::by_subset_letter();
        let present = |layout: &DatasetLayout| {
            Subset::LABELED
                .iter()
                .all(|s| root.join(layout.dir(*s)).is_dir())
        };
        if present(&letter) {
            return letter;
        }
        let bonn = DatasetLayout::bonn_letters();
        if present(&bonn) {
            return bonn;
        }
        letter
    }
}

impl Default for DatasetLayout {
    fn default() -> Self {
        DatasetLayout::by_subset_letter()
    }
}

/// Reads one recording: one number per line, integer or decimal,
/// surrounding whitespace tolerated, empty lines skipped.
///
/// Parse failures report the offending 1-based line number.
pub fn load_signal(path: &Path, fs: f64) -> Result<Signal> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut samples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            text: trimmed.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                text: trimmed.to_string(),
            });
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned());
    Signal::new(samples, fs, id)
}

/// Writes a signal in the same one-sample-per-line format.
///
/// Values are printed with round-trip precision, so
/// `load_signal(write_signal(s))` reproduces the samples exactly.
pub fn write_signal(signal: &Signal, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(signal.len() * 8);
    for v in &signal.samples {
        out.push_str(&format!("{v}\n"));
    }
    let mut file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(out.as_bytes()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads the labeled corpus (subsets C, D, E) from a directory tree.
///
/// Records are ordered by subset then filename, so two invocations on the
/// same tree yield identical manifests. Missing required subsets and
/// duplicate ids are errors.
pub fn load_dataset(root: &Path, layout: &DatasetLayout, fs_hz: f64) -> Result<DatasetManifest> {
    let missing: Vec<&str> = Subset::LABELED
        .iter()
        .filter(|s| !root.join(layout.dir(**s)).is_dir())
        .map(|s| s.letter())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingSubsets {
            root: root.to_path_buf(),
            missing: missing.join(", "),
        });
    }

    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for subset in Subset::LABELED {
        let label = subset.label().expect("labeled subset");
        let dir = root.join(layout.dir(subset));
        let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|source| Error::Io {
                path: dir.clone(),
                source,
            })?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        for path in paths {
            let mut signal = load_signal(&path, fs_hz)?;
            signal.id = format!("{}/{}", subset.letter(), signal.id);
            if !seen.insert(signal.id.clone()) {
                return Err(Error::DuplicateId { id: signal.id });
            }
            let rel = path
                .strip_prefix(root)
                .unwrap_or(&path)
                .to_string_lossy()
                .into_owned();
            records.push(LabeledRecord {
                signal,
                label,
                rel_path: Some(rel),
            });
        }
    }
    Ok(DatasetManifest { records })
}

/// Reads every file of a single subset (including the unlabeled A and B)
/// as plain signals, ordered by filename.
pub fn load_subset(
    root: &Path,
    subset: Subset,
    layout: &DatasetLayout,
    fs_hz: f64,
) -> Result<Vec<Signal>> {
    let dir = root.join(layout.dir(subset));
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            load_signal(&p, fs_hz).map(|mut s| {
                s.id = format!("{}/{}", subset.letter(), s.id);
                s
            })
        })
        .collect()
}

/// One sinusoidal component of a synthetic record.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SynthComponent {
    pub freq_hz: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl SynthComponent {
    pub fn new(freq_hz: f64, amplitude: f64) -> SynthComponent {
        SynthComponent {
            freq_hz,
            amplitude,
            phase: 0.0,
        }
    }
}

/// Recipe for one synthetic record: class, tonal content, additive
/// Gaussian noise amplitude, length, and the seed that fixes the noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthRecordSpec {
    pub label: ClassLabel,
    pub components: Vec<SynthComponent>,
    pub noise_amplitude: f64,
    pub length: usize,
    pub seed: u64,
}

/// Generates a deterministic synthetic manifest: the same spec produces
/// bit-identical samples on every call.
pub fn synth_fixture(specs: &[SynthRecordSpec], fs_hz: f64) -> Result<DatasetManifest> {
    if specs.is_empty() {
        return Err(Error::EmptySynthSpec);
    }
    let mut per_class = BTreeMap::new();
    let mut records = Vec::with_capacity(specs.len());
    for spec in specs {
        let idx = per_class.entry(spec.label).or_insert(0usize);
        let id = format!("{}{:03}", spec.label, *idx);
        *idx += 1;

        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut samples = Vec::with_capacity(spec.length);
        for n in 0..spec.length {
            let t = n as f64 / fs_hz;
            let mut v = 0.0;
            for c in &spec.components {
                v += c.amplitude * (2.0 * std::f64::consts::PI * c.freq_hz * t + c.phase).sin();
            }
            if spec.noise_amplitude != 0.0 {
                let g: f64 = StandardNormal.sample(&mut rng);
                v += spec.noise_amplitude * g;
            }
            samples.push(v);
        }
        records.push(LabeledRecord {
            signal: Signal::new(samples, fs_hz, id)?,
            label: spec.label,
            rel_path: None,
        });
    }
    Ok(DatasetManifest { records })
}

/// A cleanly separable two-class fixture: both classes are broadband
/// noise, the seizure class at `gap` times the amplitude of the
/// seizure-free class, so every rhythm's ellipse area separates the
/// classes by roughly `gap^2`.
pub fn separable_fixture(
    n_per_class: usize,
    length: usize,
    fs_hz: f64,
    seed: u64,
    gap: f64,
) -> Result<DatasetManifest> {
    let mut specs = Vec::with_capacity(2 * n_per_class);
    for i in 0..n_per_class {
        specs.push(SynthRecordSpec {
            label: ClassLabel::Seizure,
            components: vec![],
            noise_amplitude: gap,
            length,
            seed: seed.wrapping_add(i as u64),
        });
    }
    for i in 0..n_per_class {
        specs.push(SynthRecordSpec {
            label: ClassLabel::SeizureFree,
            components: vec![],
            noise_amplitude: 1.0,
            length,
            seed: seed.wrapping_add(1_000_003 + i as u64),
        });
    }
    synth_fixture(&specs, fs_hz)
}

/// Returns a copy of the manifest with labels shuffled deterministically.
/// Class counts are preserved; the pairing of label to signal is destroyed,
/// which is the null model used by the permutation checks.
pub fn permute_labels(manifest: &DatasetManifest, seed: u64) -> DatasetManifest {
    let mut labels = manifest.labels();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels.shuffle(&mut rng);
    let records = manifest
        .records
        .iter()
        .zip(labels)
        .map(|(r, label)| LabeledRecord {
            signal: r.signal.clone(),
            label,
            rel_path: r.rel_path.clone(),
        })
        .collect();
    DatasetManifest { records }
}

/// Draws a seed-keyed random value in `[lo, hi)`; convenience for fixtures.
pub fn seeded_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;
    use tempfile::TempDir;

    fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
        let path = dir.join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn load_signal_parses_in_order() {
        let tmp = TempDir::new().unwrap();
        let path = write_file(tmp.path(), "sig.txt", "1\n2\n3\n");
        let s = load_signal(&path, DEFAULT_FS_HZ).unwrap();
        assert_eq!(s.samples, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.fs, DEFAULT_FS_HZ);
    }

    #[test]
    fn load_signal_tolerates_decimals_and_whitespace() {
        let tmp = TempDir::new().unwrap();
        let path = write_file(tmp.path(), "sig.txt", "  -12 \n3.5\n\n4e1\n");
        let s = load_signal(&path, 100.0).unwrap();
        assert_eq!(s.samples, vec![-12.0, 3.5, 40.0]);
    }

    #[test]
    fn load_signal_reports_bad_line() {
        let tmp = TempDir::new().unwrap();
        let path = write_file(tmp.path(), "sig.txt", "1\nabc\n");
        let err = load_signal(&path, 100.0).unwrap_err();
        match err {
            Error::Parse { line, text, .. } => {
                assert_eq!(line, 2);
                assert_eq!(text, "abc");
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn load_signal_rejects_non_finite_and_empty() {
        let tmp = TempDir::new().unwrap();
        let nan = write_file(tmp.path(), "nan.txt", "1\nNaN\n");
        assert!(matches!(
            load_signal(&nan, 100.0),
            Err(Error::Parse { line: 2, .. })
        ));
        let empty = write_file(tmp.path(), "empty.txt", "\n\n");
        assert!(matches!(
            load_signal(&empty, 100.0),
            Err(Error::EmptyFile { .. })
        ));
    }

    #[test]
    fn signal_invariants_enforced() {
        assert!(Signal::new(vec![1.0], 100.0, "x").is_err());
        assert!(Signal::new(vec![1.0, 2.0], 0.0, "x").is_err());
        assert!(Signal::new(vec![1.0, f64::NAN], 100.0, "x").is_err());
        assert!(Signal::new(vec![1.0, 2.0], 100.0, "x").is_ok());
    }

    fn tiny_tree(tmp: &TempDir) {
        for (dir, stem) in [("C", "N001"), ("D", "F001"), ("E", "S001")] {
            let d = tmp.path().join(dir);
            fs::create_dir(&d).unwrap();
            write_file(&d, &format!("{stem}.txt"), "1\n2\n3\n4\n");
        }
    }

    #[test]
    fn load_dataset_labels_and_counts() {
        let tmp = TempDir::new().unwrap();
        tiny_tree(&tmp);
        let m = load_dataset(tmp.path(), &DatasetLayout::default(), DEFAULT_FS_HZ).unwrap();
        assert_eq!(m.len(), 3);
        let counts = m.counts();
        assert_eq!(counts.seizure, 1);
        assert_eq!(counts.seizure_free, 2);
        // sorted by subset then filename
        assert_eq!(m.records[0].signal.id, "C/N001");
        assert_eq!(m.records[2].signal.id, "E/S001");
        assert_eq!(m.records[2].label, ClassLabel::Seizure);
    }

    #[test]
    fn load_dataset_names_missing_subsets() {
        let tmp = TempDir::new().unwrap();
        let e = tmp.path().join("E");
        fs::create_dir(&e).unwrap();
        write_file(&e, "S001.txt", "1\n2\n");
        let err = load_dataset(tmp.path(), &DatasetLayout::default(), DEFAULT_FS_HZ).unwrap_err();
        match err {
            Error::MissingSubsets { missing, .. } => assert_eq!(missing, "C, D"),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn load_dataset_is_deterministic() {
        let tmp = TempDir::new().unwrap();
        tiny_tree(&tmp);
        let a = load_dataset(tmp.path(), &DatasetLayout::default(), DEFAULT_FS_HZ).unwrap();
        let b = load_dataset(tmp.path(), &DatasetLayout::default(), DEFAULT_FS_HZ).unwrap();
        let ids_a: Vec<_> = a.records.iter().map(|r| &r.signal.id).collect();
        let ids_b: Vec<_> = b.records.iter().map(|r| &r.signal.id).collect();
        assert_eq!(ids_a, ids_b);
        assert_eq!(
            a.records[0].signal.samples[..],
            b.records[0].signal.samples[..]
        );
    }

    #[test]
    fn layout_detect_picks_bonn_letters() {
        let tmp = TempDir::new().unwrap();
        for dir in ["N", "F", "S"] {
            fs::create_dir(tmp.path().join(dir)).unwrap();
        }
        let layout = DatasetLayout::detect(tmp.path());
        assert_eq!(layout.dir(Subset::C), "N");
        assert_eq!(layout.dir(Subset::E), "S");
    }

    #[test]
    fn synth_fixture_is_deterministic() {
        let spec = vec![SynthRecordSpec {
            label: ClassLabel::Seizure,
            components: vec![SynthComponent::new(10.0, 2.0)],
            noise_amplitude: 0.5,
            length: 256,
            seed: 7,
        }];
        let a = synth_fixture(&spec, DEFAULT_FS_HZ).unwrap();
        let b = synth_fixture(&spec, DEFAULT_FS_HZ).unwrap();
        assert_eq!(a.records[0].signal.samples, b.records[0].signal.samples);
    }

    #[test]
    fn synth_fixture_counts_classes() {
        let mut specs = Vec::new();
        for i in 0..10 {
            specs.push(SynthRecordSpec {
                label: ClassLabel::Seizure,
                components: vec![],
                noise_amplitude: 10.0,
                length: 64,
                seed: i,
            });
            specs.push(SynthRecordSpec {
                label: ClassLabel::SeizureFree,
                components: vec![],
                noise_amplitude: 1.0,
                length: 64,
                seed: 100 + i,
            });
        }
        let m = synth_fixture(&specs, DEFAULT_FS_HZ).unwrap();
        let counts = m.counts();
        assert_eq!(counts.seizure, 10);
        assert_eq!(counts.seizure_free, 10);
        assert_eq!(m.len(), 20);
    }

    #[test]
    fn synth_fixture_rejects_empty_spec() {
        assert!(matches!(
            synth_fixture(&[], DEFAULT_FS_HZ),
            Err(Error::EmptySynthSpec)
        ));
    }

    #[test]
    fn pure_tone_fixture_peaks_at_requested_frequency() {
        let spec = vec![SynthRecordSpec {
            label: ClassLabel::Seizure,
            components: vec![SynthComponent::new(10.0, 1.0)],
            noise_amplitude: 0.0,
            length: 4096,
            seed: 0,
        }];
        let m = synth_fixture(&spec, DEFAULT_FS_HZ).unwrap();
        let x = &m.records[0].signal.samples;
        // crude spectral argmax via Goertzel-style projection on a coarse grid
        let n = x.len() as f64;
        let mut best = (0.0, 0.0f64);
        for k in 1..100 {
            let f = k as f64; // 1 Hz steps
            let (mut re, mut im) = (0.0, 0.0);
            for (i, v) in x.iter().enumerate() {
                let w = 2.0 * std::f64::consts::PI * f * i as f64 / DEFAULT_FS_HZ;
                re += v * w.cos();
                im += v * w.sin();
            }
            let mag = (re * re + im * im) / n;
            if mag > best.1 {
                best = (f, mag);
            }
        }
        assert_eq!(best.0, 10.0);
    }

    #[test]
    fn permute_labels_preserves_counts() {
        let m = separable_fixture(10, 64, DEFAULT_FS_HZ, 42, 40.0).unwrap();
        let p = permute_labels(&m, 42);
        assert_eq!(p.counts(), m.counts());
        // same seed, same permutation
        let q = permute_labels(&m, 42);
        let lp: Vec<_> = p.labels();
        let lq: Vec<_> = q.labels();
        assert_eq!(lp, lq);
    }

    #[test]
    fn write_then_load_round_trips_exactly() {
        let tmp = TempDir::new().unwrap();
        let s = Signal::new(
            vec![1.0, -2.5, 0.1, 1e-12, 173.61, f64::MIN_POSITIVE],
            100.0,
            "rt",
        )
        .unwrap();
        let path = tmp.path().join("rt.txt");
        write_signal(&s, &path).unwrap();
        let back = load_signal(&path, 100.0).unwrap();
        assert_eq!(back.samples, s.samples);
    }
}
