//! Empirical-wavelet-transform filter bank over the clinical EEG bands.
//!
//! Five real, symmetric frequency-domain filters split a signal into the
//! delta [0-4 Hz], theta [4-8], alpha [8-16], beta [16-30] and gamma
//! [30-60] rhythms. The filters are Littlewood-Paley / Meyer prototypes:
//! a low-pass scaling function plus one band-pass wavelet per band, with
//! raised-cosine transitions of relative half-width `lambda` around each
//! boundary. Squared responses sum to one over the covered band (tight
//! frame), so rhythm energies add up to the signal energy for band-limited
//! inputs. Content above the gamma upper transition is dropped as noise.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dataset::Signal;
use crate::error::{Error, Result};

/// Band edges in Hz for the five EEG rhythms.
pub const EEG_CUTOFFS_HZ: [f64; 5] = [4.0, 8.0, 16.0, 30.0, 60.0];

/// Canonical rhythm names, lowest band first.
pub const RHYTHM_NAMES: [&str; 5] = ["delta", "theta", "alpha", "beta", "gamma"];

/// Name of band `i` out of `n`: the greek rhythm names when `n == 5`.
pub fn band_name(i: usize, n: usize) -> String {
    if n == RHYTHM_NAMES.len() {
        RHYTHM_NAMES[i].to_string()
    } else {
        format!("band{i}")
    }
}

/// Transition half-width ratio: the largest `lambda` for which no two
/// transition bands overlap, with the Nyquist frequency acting as the
/// final boundary.
///
/// Returns `min((f_{i+1} - f_i) / (f_{i+1} + f_i))` over consecutive
/// boundary pairs.
pub fn compute_lambda(f_cut: &[f64], f_nyquist: f64) -> Result<f64> {
    validate_cutoffs(f_cut, f_nyquist)?;
    let mut min_ratio = f64::INFINITY;
    let mut prev = f_cut[0];
    for &next in f_cut[1..].iter().chain(std::iter::once(&f_nyquist)) {
        min_ratio = min_ratio.min((next - prev) / (next + prev));
        prev = next;
    }
    Ok(min_ratio)
}

fn validate_cutoffs(f_cut: &[f64], f_nyquist: f64) -> Result<()> {
    if f_cut.is_empty() {
        return Err(Error::InvalidBoundaries("no cutoff frequencies".into()));
    }
    if f_cut.iter().any(|v| !v.is_finite()) || !f_nyquist.is_finite() {
        return Err(Error::InvalidBoundaries("non-finite boundary".into()));
    }
    if f_cut[0] <= 0.0 {
        return Err(Error::InvalidBoundaries(format!(
            "first cutoff must be positive, got {}",
            f_cut[0]
        )));
    }
    for pair in f_cut.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidBoundaries(format!(
                "cutoffs must be strictly increasing: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let last = *f_cut.last().unwrap();
    if f_nyquist <= last {
        return Err(Error::InvalidBoundaries(format!(
            "Nyquist {f_nyquist} Hz must exceed the last cutoff {last} Hz"
        )));
    }
    Ok(())
}

/// Meyer transition polynomial: 0 below 0, 1 above 1, and
/// `y^4 (35 - 84 y + 70 y^2 - 20 y^3)` in between, which satisfies
/// `beta(y) + beta(1 - y) = 1` on [0, 1].
///
/// Panics on NaN input.
pub fn beta_transition(y: f64) -> f64 {
    assert!(!y.is_nan(), "beta_transition: NaN input");
    if y <= 0.0 {
        0.0
    } else if y >= 1.0 {
        1.0
    } else {
        y.powi(4) * (35.0 - 84.0 * y + 70.0 * y * y - 20.0 * y * y * y)
    }
}

/// Which transition polynomial shapes the filter roll-offs. Any choice
/// with `beta(y) + beta(1-y) = 1` keeps the tight-frame property; the
/// Meyer polynomial is the canonical one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BetaProfile {
    #[default]
    Meyer,
}

impl BetaProfile {
    pub fn eval(self, y: f64) -> f64 {
        match self {
            BetaProfile::Meyer => beta_transition(y),
        }
    }
}

/// Ordered band edges plus the transition half-width ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySet {
    f_cut: Vec<f64>,
    f_nyquist: f64,
    lambda: f64,
    beta: BetaProfile,
}

impl BoundarySet {
    /// Builds a boundary set with `lambda` set to the tightest admissible
    /// ratio (transitions tangent at the narrowest boundary pair).
    pub fn new(f_cut: Vec<f64>, f_nyquist: f64) -> Result<BoundarySet> {
        let lambda = compute_lambda(&f_cut, f_nyquist)?;
        Ok(BoundarySet {
            f_cut,
            f_nyquist,
            lambda,
            beta: BetaProfile::Meyer,
        })
    }

    /// Builds a boundary set with an explicit `lambda`; it must be
    /// positive and no larger than the tightest boundary-pair ratio.
    pub fn with_lambda(f_cut: Vec<f64>, f_nyquist: f64, lambda: f64) -> Result<BoundarySet> {
        let max = compute_lambda(&f_cut, f_nyquist)?;
        if lambda.is_nan() || lambda <= 0.0 || lambda > max {
            return Err(Error::InvalidBoundaries(format!(
                "lambda {lambda} outside (0, {max}]"
            )));
        }
        Ok(BoundarySet {
            f_cut,
            f_nyquist,
            lambda,
            beta: BetaProfile::Meyer,
        })
    }

    /// The paper-standard EEG bands for a given sampling rate.
    pub fn eeg_default(fs: f64) -> Result<BoundarySet> {
        BoundarySet::new(EEG_CUTOFFS_HZ.to_vec(), fs / 2.0)
    }

    pub fn f_cut(&self) -> &[f64] {
        &self.f_cut
    }

    pub fn f_nyquist(&self) -> f64 {
        self.f_nyquist
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Number of bands the bank will emit: scaling + one wavelet per
    /// interior boundary pair.
    pub fn n_bands(&self) -> usize {
        self.f_cut.len()
    }

    /// Upper edge of the region where the squared responses sum to one.
    pub fn coverage_limit_hz(&self) -> f64 {
        self.f_cut.last().unwrap() * (1.0 - self.lambda)
    }
}

/// The frequency-domain filter bank sampled on an `n_fft`-point DFT grid.
#[derive(Debug, Clone)]
pub struct FilterBank {
    responses: Vec<Vec<f64>>,
    n_fft: usize,
    fs: f64,
    boundaries: BoundarySet,
}

impl FilterBank {
    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn n_bands(&self) -> usize {
        self.responses.len()
    }

    pub fn boundaries(&self) -> &BoundarySet {
        &self.boundaries
    }

    /// Magnitude response of band `i` over the full DFT grid.
    pub fn response(&self, band: usize) -> &[f64] {
        &self.responses[band]
    }

    /// Frequency in Hz represented by DFT bin `k` (folded: bins above
    /// Nyquist map to their mirror frequency).
    pub fn bin_hz(&self, k: usize) -> f64 {
        let folded = k.min(self.n_fft - k);
        folded as f64 * self.fs / self.n_fft as f64
    }

    /// Sum of squared responses at bin `k`; equals 1 on the covered band.
    pub fn squared_sum(&self, k: usize) -> f64 {
        self.responses.iter().map(|r| r[k] * r[k]).sum()
    }
}

/// Evaluates the scaling-function response at frequency `f` (Hz, >= 0).
fn scaling_response(f: f64, cut: f64, lambda: f64, beta: BetaProfile) -> f64 {
    if f <= (1.0 - lambda) * cut {
        1.0
    } else if f <= (1.0 + lambda) * cut {
        let y = transition_ratio(f, cut, lambda);
        (std::f64::consts::FRAC_PI_2 * beta.eval(y)).cos()
    } else {
        0.0
    }
}

/// Evaluates the band-pass wavelet response for the band `(lo, hi)`.
fn wavelet_response(f: f64, lo: f64, hi: f64, lambda: f64, beta: BetaProfile) -> f64 {
    if f < (1.0 - lambda) * lo {
        0.0
    } else if f <= (1.0 + lambda) * lo {
        let y = transition_ratio(f, lo, lambda);
        (std::f64::consts::FRAC_PI_2 * beta.eval(y)).sin()
    } else if f < (1.0 - lambda) * hi {
        1.0
    } else if f <= (1.0 + lambda) * hi {
        let y = transition_ratio(f, hi, lambda);
        (std::f64::consts::FRAC_PI_2 * beta.eval(y)).cos()
    } else {
        0.0
    }
}

// Shared by the cos and sin branches so adjacent filters evaluate the
// identical argument at a given bin, keeping cos^2 + sin^2 = 1 exact.
fn transition_ratio(f: f64, boundary: f64, lambda: f64) -> f64 {
    (f - (1.0 - lambda) * boundary) / (2.0 * lambda * boundary)
}

/// Builds the filter bank on the `n_fft`-point DFT grid for sampling rate
/// `fs`. Band 0 is the scaling function up to the first cutoff; bands
/// `1..n` are wavelets for consecutive cutoff pairs. Anything above the
/// last cutoff's upper transition is covered by no filter.
pub fn build_filter_bank(fs: f64, n_fft: usize, boundaries: &BoundarySet) -> Result<FilterBank> {
    if n_fft < 2 {
        return Err(Error::InvalidBoundaries(format!(
            "n_fft must be at least 2, got {n_fft}"
        )));
    }
    let nyq = fs / 2.0;
    if (boundaries.f_nyquist - nyq).abs() > 1e-9 * nyq.max(1.0) {
        return Err(Error::InvalidBoundaries(format!(
            "boundary set built for Nyquist {} Hz, but fs {} Hz implies {} Hz",
            boundaries.f_nyquist, fs, nyq
        )));
    }
    let lambda = boundaries.lambda;
    let last = *boundaries.f_cut.last().unwrap();
    if (1.0 + lambda) * last > nyq * (1.0 + 1e-12) {
        return Err(Error::InvalidBoundaries(format!(
            "upper transition of the last band ({} Hz) exceeds Nyquist ({nyq} Hz)",
            (1.0 + lambda) * last
        )));
    }

    let n_bands = boundaries.n_bands();
    let mut responses = vec![vec![0.0; n_fft]; n_bands];
    let beta = boundaries.beta;
    // evaluate on k = 0..=n/2 and mirror, so response(k) == response(n-k)
    // holds bit-exactly
    for k in 0..=n_fft / 2 {
        let f = k as f64 * fs / n_fft as f64;
        for (band, resp) in responses.iter_mut().enumerate() {
            let value = if band == 0 {
                scaling_response(f, boundaries.f_cut[0], lambda, beta)
            } else {
                wavelet_response(
                    f,
                    boundaries.f_cut[band - 1],
                    boundaries.f_cut[band],
                    lambda,
                    beta,
                )
            };
            resp[k] = value;
            if k > 0 && k < n_fft - k {
                resp[n_fft - k] = value;
            }
        }
    }

    Ok(FilterBank {
        responses,
        n_fft,
        fs,
        boundaries: boundaries.clone(),
    })
}

/// The band components extracted from one signal, lowest band first.
/// For the standard five-band bank the order is delta, theta, alpha,
/// beta, gamma.
#[derive(Debug, Clone)]
pub struct RhythmSet {
    bands: Vec<Vec<f64>>,
}

impl RhythmSet {
    /// Builds a rhythm set from raw band sequences; they must be
    /// non-empty, equal-length, and finite.
    pub fn from_bands(bands: Vec<Vec<f64>>) -> Result<RhythmSet> {
        if bands.is_empty() {
            return Err(Error::InvalidBoundaries("rhythm set needs bands".into()));
        }
        let len = bands[0].len();
        for (i, band) in bands.iter().enumerate() {
            if band.len() != len {
                return Err(Error::LengthMismatch {
                    signal_len: band.len(),
                    n_fft: len,
                });
            }
            if band.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSignal {
                    id: format!("band {i}"),
                    reason: "non-finite value".into(),
                });
            }
        }
        Ok(RhythmSet { bands })
    }

    pub fn n_bands(&self) -> usize {
        self.bands.len()
    }

    pub fn band(&self, i: usize) -> &[f64] {
        &self.bands[i]
    }

    pub fn bands(&self) -> &[Vec<f64>] {
        &self.bands
    }

    pub fn delta(&self) -> &[f64] {
        &self.bands[0]
    }

    pub fn theta(&self) -> &[f64] {
        &self.bands[1]
    }

    pub fn alpha(&self) -> &[f64] {
        &self.bands[2]
    }

    pub fn beta(&self) -> &[f64] {
        &self.bands[3]
    }

    pub fn gamma(&self) -> &[f64] {
        &self.bands[4]
    }

    pub fn band_energy(&self, i: usize) -> f64 {
        self.bands[i].iter().map(|v| v * v).sum()
    }
}

/// Splits a signal into its rhythms: DFT, multiply by each band's real
/// symmetric response (zero-phase), inverse DFT, take the real part.
pub fn decompose(signal: &Signal, bank: &FilterBank) -> Result<RhythmSet> {
    let n = bank.n_fft();
    if signal.len() != n {
        return Err(Error::LengthMismatch {
            signal_len: signal.len(),
            n_fft: n,
        });
    }
    if let Some(i) = signal.samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidSignal {
            id: signal.id.clone(),
            reason: format!("non-finite sample at index {i}"),
        });
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut spectrum: Vec<Complex<f64>> =
        signal.samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft.process(&mut spectrum);

    let scale = 1.0 / n as f64;
    let mut bands = Vec::with_capacity(bank.n_bands());
    for band in 0..bank.n_bands() {
        let resp = bank.response(band);
        let mut shaped: Vec<Complex<f64>> = spectrum
            .iter()
            .zip(resp)
            .map(|(s, &h)| s * h)
            .collect();
        ifft.process(&mut shaped);
        bands.push(shaped.iter().map(|c| c.re * scale).collect());
    }
    Ok(RhythmSet { bands })
}
