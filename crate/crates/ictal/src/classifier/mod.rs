//! K-nearest-neighbor classification of rhythm-pair features with
//! stratified tenfold cross-validation.
//!
//! The sweep evaluates every unordered rhythm pair, every registered
//! distance metric, and every `k` in the configured range, pooling the
//! per-fold predictions into one confusion matrix per cell.

pub mod distance;

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::{Error, Result};
use crate::phasespace::FeatureRow;
use crate::spectral::band_name;

pub use distance::{by_name as distance_by_name, CityBlock, Distance, Euclidean};

/// A two-feature point: the ellipse areas of the two selected rhythms.
pub type Point2 = [f64; 2];

/// Deterministic resolution of an even-split vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Fall back to the label of the single nearest neighbor.
    #[default]
    NearestNeighbor,
    /// Resolve ties toward the seizure class.
    PreferSeizure,
}

/// Optional per-fold feature normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// Use the raw ellipse areas.
    #[default]
    Raw,
    /// Standardize each axis by the training fold's mean and deviation.
    ZScore,
}

impl Scaling {
    pub fn parse(s: &str) -> Option<Scaling> {
        match s {
            "raw" => Some(Scaling::Raw),
            "zscore" => Some(Scaling::ZScore),
            _ => None,
        }
    }
}

/// Classifier settings for one evaluation cell.
#[derive(Clone, Copy)]
pub struct KnnConfig {
    pub k: usize,
    pub distance: &'static dyn Distance,
    pub tie_rule: TieRule,
    pub scaling: Scaling,
}

impl KnnConfig {
    pub fn new(k: usize, distance: &'static dyn Distance) -> KnnConfig {
        KnnConfig {
            k,
            distance,
            tie_rule: TieRule::default(),
            scaling: Scaling::default(),
        }
    }
}

impl std::fmt::Debug for KnnConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KnnConfig")
            .field("k", &self.k)
            .field("distance", &self.distance.name())
            .field("tie_rule", &self.tie_rule)
            .field("scaling", &self.scaling)
            .finish()
    }
}

// distance first, training index breaks distance ties
fn cmp_neighbor(a: &(f64, usize, ClassLabel), b: &(f64, usize, ClassLabel)) -> Ordering {
    a.0.partial_cmp(&b.0)
        .expect("finite distances")
        .then(a.1.cmp(&b.1))
}

/// Majority label among the `k` nearest training points.
///
/// Distance ties order by training index; an even vote falls back to the
/// configured tie rule.
pub fn knn_classify(
    train: &[(Point2, ClassLabel)],
    query: Point2,
    cfg: &KnnConfig,
) -> Result<ClassLabel> {
    if train.is_empty() {
        return Err(Error::Classifier("empty training set".into()));
    }
    if cfg.k == 0 || cfg.k > train.len() {
        return Err(Error::Classifier(format!(
            "k = {} outside 1..={}",
            cfg.k,
            train.len()
        )));
    }
    if !query.iter().all(|v| v.is_finite())
        || train.iter().any(|(p, _)| !p.iter().all(|v| v.is_finite()))
    {
        return Err(Error::Classifier("non-finite feature value".into()));
    }

    let mut neighbors: Vec<(f64, usize, ClassLabel)> = train
        .iter()
        .enumerate()
        .map(|(i, (p, label))| (cfg.distance.measure(p, &query), i, *label))
        .collect();
    if cfg.k < neighbors.len() {
        neighbors.select_nth_unstable_by(cfg.k - 1, cmp_neighbor);
    }
    let nearest_k = &neighbors[..cfg.k];

    let seizure_votes = nearest_k
        .iter()
        .filter(|(_, _, l)| *l == ClassLabel::Seizure)
        .count();
    let free_votes = cfg.k - seizure_votes;
    Ok(match seizure_votes.cmp(&free_votes) {
        Ordering::Greater => ClassLabel::Seizure,
        Ordering::Less => ClassLabel::SeizureFree,
        Ordering::Equal => match cfg.tie_rule {
            TieRule::NearestNeighbor => {
                nearest_k.iter().min_by(|a, b| cmp_neighbor(a, b)).unwrap().2
            }
            TieRule::PreferSeizure => ClassLabel::Seizure,
        },
    })
}

/// Fold index per record of a stratified split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    fold_of: Vec<usize>,
    n_folds: usize,
    pub seed: u64,
}

impl FoldAssignment {
    pub fn n_folds(&self) -> usize {
        self.n_folds
    }

    pub fn len(&self) -> usize {
        self.fold_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fold_of.is_empty()
    }

    pub fn fold_of(&self, record: usize) -> usize {
        self.fold_of[record]
    }
}

/// Splits records into `n_folds` folds, per class: each class is
/// shuffled with the seeded generator and dealt round-robin, so fold
/// class counts differ from exact proportionality by at most one record.
pub fn stratified_folds(
    labels: &[ClassLabel],
    n_folds: usize,
    seed: u64,
) -> Result<FoldAssignment> {
    if n_folds < 2 {
        return Err(Error::Classifier(format!(
            "need at least 2 folds, got {n_folds}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; labels.len()];
    for class in [ClassLabel::Seizure, ClassLabel::SeizureFree] {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == class)
            .map(|(i, _)| i)
            .collect();
        if members.len() < n_folds {
            return Err(Error::Classifier(format!(
                "class {class} has {} records, need at least {n_folds}",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        for (pos, &record) in members.iter().enumerate() {
            fold_of[record] = pos % n_folds;
        }
    }
    Ok(FoldAssignment {
        fold_of,
        n_folds,
        seed,
    })
}

/// Pooled prediction counts; the positive class is seizure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
    pub false_pos: usize,
}

impl ConfusionMatrix {
    pub fn record(&mut self, predicted: ClassLabel, actual: ClassLabel) {
        match (actual, predicted) {
            (ClassLabel::Seizure, ClassLabel::Seizure) => self.true_pos += 1,
            (ClassLabel::Seizure, ClassLabel::SeizureFree) => self.false_neg += 1,
            (ClassLabel::SeizureFree, ClassLabel::SeizureFree) => self.true_neg += 1,
            (ClassLabel::SeizureFree, ClassLabel::Seizure) => self.false_pos += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.false_neg + self.true_neg + self.false_pos
    }

    pub fn correct(&self) -> usize {
        self.true_pos + self.true_neg
    }
}

/// Percentage metrics derived from a confusion matrix. Ratios with an
/// empty denominator are `None` rather than zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub acc: f64,
    pub sen: Option<f64>,
    pub spe: Option<f64>,
    pub ppv: Option<f64>,
    pub npv: Option<f64>,
}

fn pct(num: usize, den: usize) -> Option<f64> {
    if den == 0 {
        None
    } else {
        Some(100.0 * num as f64 / den as f64)
    }
}

pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<MetricSet> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Classifier("empty confusion matrix".into()));
    }
    Ok(MetricSet {
        acc: 100.0 * cm.correct() as f64 / total as f64,
        sen: pct(cm.true_pos, cm.true_pos + cm.false_neg),
        spe: pct(cm.true_neg, cm.true_neg + cm.false_pos),
        ppv: pct(cm.true_pos, cm.true_pos + cm.false_pos),
        npv: pct(cm.true_neg, cm.true_neg + cm.false_neg),
    })
}

/// An unordered pair of rhythm indices, normalized to `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhythmPair {
    pub first: usize,
    pub second: usize,
}

impl RhythmPair {
    pub fn new(a: usize, b: usize) -> Result<RhythmPair> {
        if a == b {
            return Err(Error::Classifier(format!(
                "rhythm pair needs two distinct rhythms, got {a} twice"
            )));
        }
        Ok(RhythmPair {
            first: a.min(b),
            second: a.max(b),
        })
    }

    pub fn name(&self, n_bands: usize) -> String {
        format!(
            "{}-{}",
            band_name(self.first, n_bands),
            band_name(self.second, n_bands)
        )
    }
}

/// All unordered pairs of `n` rhythms, lexicographic.
pub fn all_pairs(n: usize) -> Vec<RhythmPair> {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push(RhythmPair { first: a, second: b });
        }
    }
    pairs
}

fn project(row: &FeatureRow, pair: RhythmPair) -> Point2 {
    [row.areas[pair.first], row.areas[pair.second]]
}

fn fit_scaler(points: &[Point2]) -> ([f64; 2], [f64; 2]) {
    let n = points.len() as f64;
    let mut mean = [0.0; 2];
    for p in points {
        mean[0] += p[0];
        mean[1] += p[1];
    }
    mean[0] /= n;
    mean[1] /= n;
    let mut var = [0.0; 2];
    for p in points {
        var[0] += (p[0] - mean[0]) * (p[0] - mean[0]);
        var[1] += (p[1] - mean[1]) * (p[1] - mean[1]);
    }
    let denom = (points.len().max(2) - 1) as f64;
    let sd = [
        (var[0] / denom).sqrt(),
        (var[1] / denom).sqrt(),
    ];
    // constant axes are left unscaled
    (mean, [if sd[0] > 0.0 { sd[0] } else { 1.0 }, if sd[1] > 0.0 { sd[1] } else { 1.0 }])
}

fn apply_scaler(p: Point2, mean: &[f64; 2], sd: &[f64; 2]) -> Point2 {
    [(p[0] - mean[0]) / sd[0], (p[1] - mean[1]) / sd[1]]
}

/// Runs the fold loop for one rhythm pair and one classifier config:
/// train on the out-of-fold records, classify the held-out fold, and
/// pool every prediction into a single confusion matrix.
pub fn cross_validate(
    rows: &[FeatureRow],
    pair: RhythmPair,
    cfg: &KnnConfig,
    folds: &FoldAssignment,
) -> Result<ConfusionMatrix> {
    if rows.len() != folds.len() {
        return Err(Error::Classifier(format!(
            "{} feature rows but {} fold assignments",
            rows.len(),
            folds.len()
        )));
    }
    let n_bands = rows.first().map(|r| r.areas.len()).unwrap_or(0);
    if pair.second >= n_bands {
        return Err(Error::Classifier(format!(
            "pair ({}, {}) out of range for {n_bands} rhythms",
            pair.first, pair.second
        )));
    }

    let points: Vec<Point2> = rows.iter().map(|r| project(r, pair)).collect();
    let mut cm = ConfusionMatrix::default();
    for fold in 0..folds.n_folds() {
        let mut train: Vec<(Point2, ClassLabel)> = Vec::with_capacity(points.len());
        let mut test: Vec<usize> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if folds.fold_of(i) == fold {
                test.push(i);
            } else {
                train.push((points[i], row.label));
            }
        }
        let (mean, sd) = match cfg.scaling {
            Scaling::Raw => ([0.0; 2], [1.0; 2]),
            Scaling::ZScore => {
                let train_points: Vec<Point2> = train.iter().map(|(p, _)| *p).collect();
                fit_scaler(&train_points)
            }
        };
        if cfg.scaling == Scaling::ZScore {
            for (p, _) in train.iter_mut() {
                *p = apply_scaler(*p, &mean, &sd);
            }
        }
        for i in test {
            let query = apply_scaler(points[i], &mean, &sd);
            let predicted = knn_classify(&train, query, cfg)?;
            cm.record(predicted, rows[i].label);
        }
    }
    Ok(cm)
}

/// One sweep cell: a rhythm pair evaluated with one metric and one `k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalCell {
    pub pair: String,
    pub distance: String,
    pub k: usize,
    pub cm: ConfusionMatrix,
    pub metrics: MetricSet,
}

/// Winning `k` for one (pair, distance) combination, by pooled accuracy
/// with the lower `k` taking ties.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BestK {
    pub pair: String,
    pub distance: String,
    pub k: usize,
    pub cm: ConfusionMatrix,
    pub metrics: MetricSet,
}

/// Full sweep output: every (pair, distance, k) cell plus the best-k
/// summary per (pair, distance).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_folds: usize,
    pub seed: u64,
    pub cells: Vec<EvalCell>,
    pub best: Vec<BestK>,
}

/// Evaluates all rhythm pairs against every supplied distance and
/// `k = 1..=k_max`, in deterministic pair-major order.
pub fn sweep_pairs(
    rows: &[FeatureRow],
    distances: &[&'static dyn Distance],
    k_max: usize,
    folds: &FoldAssignment,
    tie_rule: TieRule,
    scaling: Scaling,
) -> Result<EvalReport> {
    let n_bands = rows
        .first()
        .map(|r| r.areas.len())
        .ok_or_else(|| Error::Classifier("empty feature table".into()))?;
    if distances.is_empty() {
        return Err(Error::Classifier("no distance metric selected".into()));
    }
    if k_max == 0 {
        return Err(Error::Classifier("k range is empty".into()));
    }

    let mut cells = Vec::new();
    let mut best = Vec::new();
    for pair in all_pairs(n_bands) {
        let pair_name = pair.name(n_bands);
        for &metric in distances {
            let mut best_cell: Option<EvalCell> = None;
            for k in 1..=k_max {
                let cfg = KnnConfig {
                    k,
                    distance: metric,
                    tie_rule,
                    scaling,
                };
                let cm = cross_validate(rows, pair, &cfg, folds)?;
                let cell = EvalCell {
                    pair: pair_name.clone(),
                    distance: metric.name().to_string(),
                    k,
                    cm,
                    metrics: compute_metrics(&cm)?,
                };
                let improves = best_cell
                    .as_ref()
                    .map(|b| cm.correct() > b.cm.correct())
                    .unwrap_or(true);
                if improves {
                    best_cell = Some(cell.clone());
                }
                cells.push(cell);
            }
            let b = best_cell.expect("k_max >= 1");
            best.push(BestK {
                pair: b.pair,
                distance: b.distance,
                k: b.k,
                cm: b.cm,
                metrics: b.metrics,
            });
        }
    }
    Ok(EvalReport {
        n_folds: folds.n_folds(),
        seed: folds.seed,
        cells,
        best,
    })
}
