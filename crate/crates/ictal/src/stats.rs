//! Kruskal-Wallis screening of each rhythm's feature across the two
//! classes.
//!
//! With two groups the statistic has one degree of freedom, so the
//! p-value reduces to `erfc(sqrt(H/2))`. Real-corpus separations push p
//! below 1e-40, far under what a naive chi-squared CDF difference can
//! resolve, so the log-probability is carried alongside and used for
//! threshold comparisons.

use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::{Error, Result};
use crate::phasespace::FeatureRow;
use crate::spectral::band_name;

/// Outcome of one two-group Kruskal-Wallis test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KwResult {
    /// Rank statistic with tie correction applied.
    pub h: f64,
    /// Survival probability of chi-squared(1) at `h`, clamped to the
    /// smallest positive normal when it underflows.
    pub p: f64,
    /// Natural log of the p-value, accurate even when `p` underflows.
    pub ln_p: f64,
    pub n1: usize,
    pub n2: usize,
}

impl KwResult {
    /// p-value as a decimal string with exponent, e.g. `5.64e-44`,
    /// rendered from the log-probability so extreme values survive.
    pub fn p_string(&self) -> String {
        if self.p >= 1e-290 {
            return format!("{:e}", self.p);
        }
        let log10 = self.ln_p / std::f64::consts::LN_10;
        let exp = log10.floor();
        let mantissa = 10f64.powf(log10 - exp);
        format!("{mantissa:.4}e{exp}")
    }
}

/// Average ranks (1-based) of `values`, ties sharing their mean rank,
/// plus the tie-correction sum `sum(t^3 - t)` over tie groups.
fn average_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite values"));

    let mut ranks = vec![0.0; values.len()];
    let mut tie_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let run = end - start;
        // positions start+1 ..= end, averaged
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        if run > 1 {
            let t = run as f64;
            tie_sum += t * t * t - t;
        }
        start = end;
    }
    (ranks, tie_sum)
}

/// log of `erfc(x)` for large `x`, via the asymptotic expansion
/// `erfc(x) ~ exp(-x^2) / (x sqrt(pi)) * (1 - 1/(2x^2) + 3/(4x^4) - ...)`.
fn ln_erfc_asymptotic(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    let series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2;
    -x * x - x.ln() - 0.5 * std::f64::consts::PI.ln() + series.ln()
}

fn chi2_df1_tail(h: f64) -> (f64, f64) {
    if h <= 0.0 {
        return (1.0, 0.0);
    }
    let x = (h / 2.0).sqrt();
    let p = libm::erfc(x);
    if p >= 1e-290 {
        (p, p.ln())
    } else {
        let ln_p = ln_erfc_asymptotic(x);
        (p.max(f64::MIN_POSITIVE), ln_p)
    }
}

/// Two-group Kruskal-Wallis test with average-rank tie handling and the
/// standard tie-correction divisor.
pub fn kruskal_wallis(group_a: &[f64], group_b: &[f64]) -> Result<KwResult> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::Stats("both groups must be non-empty".into()));
    }
    if group_a
        .iter()
        .chain(group_b.iter())
        .any(|v| !v.is_finite())
    {
        return Err(Error::Stats("non-finite value in a group".into()));
    }

    let n1 = group_a.len();
    let n2 = group_b.len();
    let n = n1 + n2;
    let combined: Vec<f64> = group_a.iter().chain(group_b.iter()).copied().collect();
    let (ranks, tie_sum) = average_ranks(&combined);

    let r1: f64 = ranks[..n1].iter().sum();
    let r2: f64 = ranks[n1..].iter().sum();
    let nf = n as f64;
    let h_raw = 12.0 / (nf * (nf + 1.0)) * (r1 * r1 / n1 as f64 + r2 * r2 / n2 as f64)
        - 3.0 * (nf + 1.0);

    let correction = 1.0 - tie_sum / (nf * nf * nf - nf);
    let h = if correction <= 0.0 {
        0.0 // every value tied: no separation
    } else {
        (h_raw / correction).max(0.0)
    };

    let (p, ln_p) = chi2_df1_tail(h);
    Ok(KwResult { h, p, ln_p, n1, n2 })
}

/// Screening verdict for one rhythm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhythmScreen {
    pub rhythm: String,
    pub result: KwResult,
    pub pass: bool,
}

/// Per-rhythm screening results against a p-value threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScreeningReport {
    pub threshold: f64,
    pub rhythms: Vec<RhythmScreen>,
}

impl ScreeningReport {
    pub fn all_pass(&self) -> bool {
        self.rhythms.iter().all(|r| r.pass)
    }
}

/// Tests every rhythm's areas for class separation. A rhythm passes when
/// its p-value is strictly below `threshold`; the comparison happens in
/// log space so a threshold of zero passes nothing.
pub fn screen_features(rows: &[FeatureRow], threshold: f64) -> Result<ScreeningReport> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::Stats(format!(
            "threshold must be non-negative, got {threshold}"
        )));
    }
    let n_bands = rows
        .first()
        .map(|r| r.areas.len())
        .ok_or_else(|| Error::Stats("empty feature table".into()))?;
    let seizure: Vec<&FeatureRow> = rows
        .iter()
        .filter(|r| r.label == ClassLabel::Seizure)
        .collect();
    let seizure_free: Vec<&FeatureRow> = rows
        .iter()
        .filter(|r| r.label == ClassLabel::SeizureFree)
        .collect();
    if seizure.is_empty() || seizure_free.is_empty() {
        return Err(Error::Stats(
            "screening needs records from both classes".into(),
        ));
    }

    let ln_threshold = threshold.ln();
    let mut rhythms = Vec::with_capacity(n_bands);
    for band in 0..n_bands {
        let a: Vec<f64> = seizure.iter().map(|r| r.areas[band]).collect();
        let b: Vec<f64> = seizure_free.iter().map(|r| r.areas[band]).collect();
        let result = kruskal_wallis(&a, &b)?;
        rhythms.push(RhythmScreen {
            rhythm: band_name(band, n_bands),
            pass: result.ln_p < ln_threshold,
            result,
        });
    }
    Ok(ScreeningReport { threshold, rhythms })
}
