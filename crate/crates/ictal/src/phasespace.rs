//! Delay-coordinate phase-space reconstruction and the confidence-ellipse
//! area feature.
//!
//! Each rhythm is embedded as the 2-D point cloud `(v_k, v_{k+tau})`.
//! The cloud's 95% confidence ellipse has semi-axes `sqrt(3)` times the
//! square roots of the principal second moments; its area `pi*a*b` is the
//! scalar feature. Seizure rhythms spread over visibly larger ellipses
//! than seizure-free ones, which is what the classifier exploits.

use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::{Error, Result};
use crate::spectral::RhythmSet;

/// Delay embedding of a scalar sequence: point `k` is
/// `(v_k, v_{k+tau}, ..., v_{k+(dim-1) tau})`.
#[derive(Debug, Clone)]
pub struct PhasePortrait {
    data: Vec<f64>, // point-major, dim values per point
    dim: usize,
    tau: usize,
}

impl PhasePortrait {
    pub fn n_points(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// (x, y) pairs of a 2-D portrait.
    ///
    /// Panics if `dim != 2`.
    pub fn xy(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        assert_eq!(self.dim, 2, "xy() requires a 2-D portrait");
        self.data.chunks_exact(2).map(|p| (p[0], p[1]))
    }
}

/// Embeds `v` with delay `tau` and dimension `dim`; the portrait has
/// `len(v) - (dim-1)*tau` points.
pub fn reconstruct_phase_space(v: &[f64], tau: usize, dim: usize) -> Result<PhasePortrait> {
    if tau == 0 {
        return Err(Error::PhaseSpace("delay tau must be at least 1".into()));
    }
    if dim < 2 {
        return Err(Error::PhaseSpace(format!(
            "embedding dimension must be at least 2, got {dim}"
        )));
    }
    let span = (dim - 1) * tau;
    if v.len() <= span {
        return Err(Error::PhaseSpace(format!(
            "sequence of {} samples is too short for dim {dim}, tau {tau}",
            v.len()
        )));
    }
    let n_points = v.len() - span;
    let mut data = Vec::with_capacity(n_points * dim);
    for k in 0..n_points {
        for d in 0..dim {
            data.push(v[k + d * tau]);
        }
    }
    Ok(PhasePortrait { data, dim, tau })
}

/// Second moments of the centered 2-D cloud and the derived 95%
/// confidence ellipse. `c` is the discriminant root that splits the
/// moment sum into the two principal components; `a >= b` are the
/// semi-axes and `area = pi*a*b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseStats {
    pub s_x2: f64,
    pub s_y2: f64,
    pub s_xy: f64,
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub area: f64,
}

impl EllipseStats {
    /// Angle of the major axis against the x axis, in radians.
    pub fn orientation(&self) -> f64 {
        0.5 * (2.0 * self.s_xy).atan2(self.s_x2 - self.s_y2)
    }
}

/// Fits the 95% confidence ellipse to a 2-D portrait.
///
/// The cloud is centered, second moments are taken with the sample
/// normalization (point count minus one), and the semi-axes are
/// `a = sqrt(3 (s_x2 + s_y2 + c))`, `b = sqrt(3 (s_x2 + s_y2 - c))`
/// with `c = sqrt((s_x2 - s_y2)^2 + 4 s_xy^2)`.
pub fn ellipse_area(portrait: &PhasePortrait) -> Result<EllipseStats> {
    if portrait.dim() != 2 {
        return Err(Error::PhaseSpace(format!(
            "ellipse fit needs a 2-D portrait, got dim {}",
            portrait.dim()
        )));
    }
    let n = portrait.n_points();
    if n < 3 {
        return Err(Error::PhaseSpace(format!(
            "ellipse fit needs at least 3 points, got {n}"
        )));
    }
    if portrait.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::PhaseSpace("non-finite coordinate".into()));
    }

    let inv_n = 1.0 / n as f64;
    let mut mean_x = 0.0;
    let mut mean_y = 0.0;
    for (x, y) in portrait.xy() {
        mean_x += x;
        mean_y += y;
    }
    mean_x *= inv_n;
    mean_y *= inv_n;

    let denom = (n - 1) as f64;
    let mut s_x2 = 0.0;
    let mut s_y2 = 0.0;
    let mut s_xy = 0.0;
    for (x, y) in portrait.xy() {
        let dx = x - mean_x;
        let dy = y - mean_y;
        s_x2 += dx * dx;
        s_y2 += dy * dy;
        s_xy += dx * dy;
    }
    s_x2 /= denom;
    s_y2 /= denom;
    s_xy /= denom;

    let c = ((s_x2 - s_y2) * (s_x2 - s_y2) + 4.0 * s_xy * s_xy).sqrt();
    let a = (3.0 * (s_x2 + s_y2 + c)).sqrt();
    let b = (3.0 * (s_x2 + s_y2 - c)).max(0.0).sqrt();
    let area = std::f64::consts::PI * a * b;

    Ok(EllipseStats {
        s_x2,
        s_y2,
        s_xy,
        c,
        a,
        b,
        area,
    })
}

/// Per-record feature vector: one ellipse area per rhythm, in fixed
/// delta, theta, alpha, beta, gamma order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub id: String,
    pub label: ClassLabel,
    pub areas: Vec<f64>,
}

/// Computes the ellipse-area feature for every rhythm of one record.
pub fn extract_features(
    id: impl Into<String>,
    label: ClassLabel,
    rhythms: &RhythmSet,
    tau: usize,
    dim: usize,
) -> Result<FeatureRow> {
    let mut areas = Vec::with_capacity(rhythms.n_bands());
    for band in 0..rhythms.n_bands() {
        let portrait = reconstruct_phase_space(rhythms.band(band), tau, dim)?;
        areas.push(ellipse_area(&portrait)?.area);
    }
    Ok(FeatureRow {
        id: id.into(),
        label,
        areas,
    })
}
