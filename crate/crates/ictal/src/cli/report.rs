//! Table rendering: CSV with a provenance comment line, and JSON with
//! the provenance embedded as fields.
//!
//! Numeric CSV cells use Rust's shortest round-trip formatting, so a
//! value parsed back compares bit-equal. Undefined ratios print as `NA`.

use std::path::Path;

use serde_json::json;

use crate::classifier::EvalReport;
use crate::dataset::{ClassLabel, ManifestSummary};
use crate::error::{Error, Result};
use crate::phasespace::FeatureRow;
use crate::spectral::{band_name, FilterBank, RhythmSet};
use crate::stats::ScreeningReport;

/// Provenance stamp shared by every artifact of a run.
#[derive(Debug, Clone)]
pub struct Stamp {
    pub seed: u64,
    pub config_hash: String,
}

impl Stamp {
    pub fn comment(&self) -> String {
        format!("# seed={} config={}\n", self.seed, self.config_hash)
    }

    /// Wraps a JSON payload with the provenance fields and pretty-prints.
    pub fn json_with(&self, mut payload: serde_json::Value) -> String {
        if let Some(map) = payload.as_object_mut() {
            map.insert("seed".into(), json!(self.seed));
            map.insert("config_hash".into(), json!(self.config_hash));
        }
        let mut text = serde_json::to_string_pretty(&payload).expect("serializable payload");
        text.push('\n');
        text
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "NA".to_string(),
    }
}

/// `id,label,area_delta,...,area_gamma`
pub fn features_csv(rows: &[FeatureRow], stamp: &Stamp) -> String {
    let n_bands = rows.first().map(|r| r.areas.len()).unwrap_or(5);
    let mut out = stamp.comment();
    out.push_str("id,label");
    for band in 0..n_bands {
        out.push_str(&format!(",area_{}", band_name(band, n_bands)));
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!("{},{}", row.id, row.label));
        for a in &row.areas {
            out.push_str(&format!(",{a}"));
        }
        out.push('\n');
    }
    out
}

/// Reads a feature table back; comment lines are skipped and the header
/// is checked for the `id,label` prefix.
pub fn parse_features_csv(text: &str, origin: &Path) -> Result<Vec<FeatureRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if !line.starts_with("id,label,") {
                return Err(Error::Config(format!(
                    "{}:{}: expected feature header starting with id,label",
                    origin.display(),
                    idx + 1
                )));
            }
            saw_header = true;
            continue;
        }
        let mut fields = line.split(',');
        let id = fields
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| {
                Error::Config(format!("{}:{}: missing id", origin.display(), idx + 1))
            })?
            .to_string();
        let label_text = fields.next().unwrap_or("");
        let label = ClassLabel::parse(label_text).ok_or_else(|| {
            Error::Config(format!(
                "{}:{}: unknown label {label_text:?}",
                origin.display(),
                idx + 1
            ))
        })?;
        let areas = fields
            .map(|f| {
                f.parse::<f64>().map_err(|_| {
                    Error::Config(format!(
                        "{}:{}: bad area value {f:?}",
                        origin.display(),
                        idx + 1
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if areas.len() < 2 {
            return Err(Error::Config(format!(
                "{}:{}: need at least two area columns",
                origin.display(),
                idx + 1
            )));
        }
        rows.push(FeatureRow { id, label, areas });
    }
    if rows.is_empty() {
        return Err(Error::Config(format!(
            "{}: no feature rows",
            origin.display()
        )));
    }
    Ok(rows)
}

pub fn features_json(rows: &[FeatureRow], stamp: &Stamp) -> String {
    stamp.json_with(json!({ "features": rows }))
}

/// `rhythm,h,p,pass` — the screening table.
pub fn screening_csv(report: &ScreeningReport, stamp: &Stamp) -> String {
    let mut out = stamp.comment();
    out.push_str("rhythm,h,p,pass\n");
    for r in &report.rhythms {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.rhythm,
            r.result.h,
            r.result.p_string(),
            r.pass
        ));
    }
    out
}

pub fn screening_json(report: &ScreeningReport, stamp: &Stamp) -> String {
    let rhythms: Vec<serde_json::Value> = report
        .rhythms
        .iter()
        .map(|r| {
            json!({
                "rhythm": r.rhythm,
                "h": r.result.h,
                "p": r.result.p_string(),
                "ln_p": r.result.ln_p,
                "n_seizure": r.result.n1,
                "n_seizure_free": r.result.n2,
                "pass": r.pass,
            })
        })
        .collect();
    stamp.json_with(json!({
        "threshold": report.threshold,
        "rhythms": rhythms,
    }))
}

/// One row per (pair, distance, k): the full sweep grid.
pub fn sweep_csv(report: &EvalReport, stamp: &Stamp) -> String {
    let mut out = stamp.comment();
    out.push_str("pair,distance,k,tp,fn,tn,fp,acc,sen,spe,ppv,npv\n");
    for cell in &report.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            cell.pair,
            cell.distance,
            cell.k,
            cell.cm.true_pos,
            cell.cm.false_neg,
            cell.cm.true_neg,
            cell.cm.false_pos,
            cell.metrics.acc,
            fmt_opt(cell.metrics.sen),
            fmt_opt(cell.metrics.spe),
            fmt_opt(cell.metrics.ppv),
            fmt_opt(cell.metrics.npv),
        ));
    }
    out
}

pub fn sweep_json(report: &EvalReport, stamp: &Stamp) -> String {
    stamp.json_with(json!({
        "n_folds": report.n_folds,
        "cells": report.cells,
        "best": report.best,
    }))
}

/// Best-k table for one distance: ACC/SEN/SPE/PPV/NPV per feature set.
pub fn best_k_csv(report: &EvalReport, distance: &str, stamp: &Stamp) -> String {
    let mut out = stamp.comment();
    out.push_str("feature_set,acc,sen,spe,ppv,npv,k\n");
    for b in report.best.iter().filter(|b| b.distance == distance) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            b.pair,
            b.metrics.acc,
            fmt_opt(b.metrics.sen),
            fmt_opt(b.metrics.spe),
            fmt_opt(b.metrics.ppv),
            fmt_opt(b.metrics.npv),
            b.k,
        ));
    }
    out
}

/// One column per rhythm, one row per sample.
pub fn rhythm_csv(rhythms: &RhythmSet, stamp: &Stamp) -> String {
    let n_bands = rhythms.n_bands();
    let mut out = stamp.comment();
    let header: Vec<String> = (0..n_bands).map(|b| band_name(b, n_bands)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    let len = rhythms.band(0).len();
    for i in 0..len {
        let row: Vec<String> = (0..n_bands)
            .map(|b| format!("{}", rhythms.band(b)[i]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `bin,hz,<band responses...>` over the non-negative frequency half.
pub fn filter_bank_csv(bank: &FilterBank, stamp: &Stamp) -> String {
    let n_bands = bank.n_bands();
    let mut out = stamp.comment();
    out.push_str("bin,hz");
    for band in 0..n_bands {
        out.push_str(&format!(",{}", band_name(band, n_bands)));
    }
    out.push('\n');
    for k in 0..=bank.n_fft() / 2 {
        out.push_str(&format!("{},{}", k, bank.bin_hz(k)));
        for band in 0..n_bands {
            out.push_str(&format!(",{}", bank.response(band)[k]));
        }
        out.push('\n');
    }
    out
}

pub fn manifest_json(summary: &ManifestSummary, stamp: &Stamp) -> String {
    stamp.json_with(json!({ "manifest": summary }))
}
