//! Minimal deterministic SVG figures: filter-bank responses, rhythm
//! traces, and phase-space scatter plots with the fitted ellipse.
//!
//! The emitter is string-based on purpose: no drawing dependency, fixed
//! coordinate formatting, and byte-identical output for identical input.

use crate::cli::report::Stamp;
use crate::phasespace::{EllipseStats, PhasePortrait};
use crate::spectral::{band_name, FilterBank, RhythmSet};

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 520.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn esc(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn new(stamp: &Stamp, title: &str) -> Canvas {
        let mut body = String::new();
        body.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        body.push_str(&format!(
            "<!-- seed={} config={} -->\n",
            stamp.seed, stamp.config_hash
        ));
        body.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        body.push_str(&format!(
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            WIDTH / 2.0,
            esc(title)
        ));
        Canvas { body }
    }

    fn axis_box(&mut self) {
        self.body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
            fmt(MARGIN),
            fmt(MARGIN),
            fmt(WIDTH - 2.0 * MARGIN),
            fmt(HEIGHT - 2.0 * MARGIN)
        ));
    }

    fn label(&mut self, x: f64, y: f64, text: &str, anchor: &str) {
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"{anchor}\">{}</text>\n",
            fmt(x),
            fmt(y),
            esc(text)
        ));
    }

    fn polyline(&mut self, points: &[(f64, f64)], color: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y)))
            .collect();
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>\n",
            coords.join(" ")
        ));
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, color: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{color}\" fill-opacity=\"0.5\"/>\n",
            fmt(x),
            fmt(y),
            fmt(r)
        ));
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn map_x(v: f64, lo: f64, hi: f64) -> f64 {
    let span = if hi > lo { hi - lo } else { 1.0 };
    MARGIN + (v - lo) / span * (WIDTH - 2.0 * MARGIN)
}

fn map_y(v: f64, lo: f64, hi: f64) -> f64 {
    let span = if hi > lo { hi - lo } else { 1.0 };
    HEIGHT - MARGIN - (v - lo) / span * (HEIGHT - 2.0 * MARGIN)
}

/// Magnitude responses of every band over the non-negative frequencies.
pub fn filter_bank_svg(bank: &FilterBank, stamp: &Stamp) -> String {
    let mut canvas = Canvas::new(stamp, "Filter bank magnitude responses");
    canvas.axis_box();
    let f_max = bank.fs() / 2.0;
    let n_bands = bank.n_bands();
    for band in 0..n_bands {
        let resp = bank.response(band);
        let points: Vec<(f64, f64)> = (0..=bank.n_fft() / 2)
            .map(|k| {
                (
                    map_x(bank.bin_hz(k), 0.0, f_max),
                    map_y(resp[k], 0.0, 1.05),
                )
            })
            .collect();
        let color = PALETTE[band % PALETTE.len()];
        canvas.polyline(&points, color);
        let legend_x = MARGIN + 12.0 + band as f64 * 120.0;
        canvas.label(legend_x, MARGIN - 10.0, &band_name(band, n_bands), "start");
        canvas.body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"8\" height=\"8\" fill=\"{color}\"/>\n",
            fmt(legend_x - 11.0),
            fmt(MARGIN - 18.0)
        ));
    }
    canvas.label(WIDTH / 2.0, HEIGHT - 18.0, "frequency (Hz)", "middle");
    canvas.label(MARGIN, HEIGHT - MARGIN + 16.0, "0", "middle");
    canvas.label(
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 16.0,
        &format!("{f_max:.1}"),
        "middle",
    );
    canvas.finish()
}

/// Every rhythm of one record, stacked vertically.
pub fn rhythms_svg(rhythms: &RhythmSet, id: &str, fs: f64, stamp: &Stamp) -> String {
    let n_bands = rhythms.n_bands();
    let mut canvas = Canvas::new(stamp, &format!("Rhythms of {id}"));
    let lane_h = (HEIGHT - 2.0 * MARGIN) / n_bands as f64;
    let n = rhythms.band(0).len();
    let step = (n / 2000).max(1);
    for band in 0..n_bands {
        let trace = rhythms.band(band);
        let peak = trace.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
        let y_mid = MARGIN + lane_h * (band as f64 + 0.5);
        let points: Vec<(f64, f64)> = (0..n)
            .step_by(step)
            .map(|i| {
                let x = MARGIN + i as f64 / (n - 1).max(1) as f64 * (WIDTH - 2.0 * MARGIN);
                let y = y_mid - trace[i] / peak * (lane_h * 0.42);
                (x, y)
            })
            .collect();
        canvas.polyline(&points, PALETTE[band % PALETTE.len()]);
        canvas.label(MARGIN - 6.0, y_mid + 4.0, &band_name(band, n_bands), "end");
    }
    canvas.label(
        WIDTH / 2.0,
        HEIGHT - 18.0,
        &format!("time (s), 0 to {:.2}", n as f64 / fs),
        "middle",
    );
    canvas.finish()
}

/// 2-D phase portrait point cloud with the fitted 95% ellipse overlaid.
/// Axes share one scale so the ellipse shape is faithful.
pub fn phase_portrait_svg(
    portrait: &PhasePortrait,
    stats: &EllipseStats,
    title: &str,
    stamp: &Stamp,
) -> String {
    let mut canvas = Canvas::new(stamp, title);
    canvas.axis_box();

    let n = portrait.n_points();
    let mean_x = portrait.xy().map(|(x, _)| x).sum::<f64>() / n as f64;
    let mean_y = portrait.xy().map(|(_, y)| y).sum::<f64>() / n as f64;

    // common half-extent: covers both the points and the ellipse
    let mut half = stats.a.max(1e-12);
    for (x, y) in portrait.xy() {
        half = half.max((x - mean_x).abs()).max((y - mean_y).abs());
    }
    half *= 1.05;
    let scale = (WIDTH.min(HEIGHT) - 2.0 * MARGIN) / (2.0 * half);
    let (cx, cy) = (WIDTH / 2.0, HEIGHT / 2.0);
    let px = |x: f64| cx + (x - mean_x) * scale;
    let py = |y: f64| cy - (y - mean_y) * scale;

    let step = (n / 1500).max(1);
    for (i, (x, y)) in portrait.xy().enumerate() {
        if i % step == 0 {
            canvas.circle(px(x), py(y), 1.4, "#1f77b4");
        }
    }

    let angle_deg = -stats.orientation().to_degrees();
    canvas.body.push_str(&format!(
        "<ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" transform=\"rotate({} {} {})\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n",
        fmt(cx),
        fmt(cy),
        fmt(stats.a * scale),
        fmt(stats.b * scale),
        fmt(angle_deg),
        fmt(cx),
        fmt(cy)
    ));
    canvas.label(
        WIDTH / 2.0,
        HEIGHT - 18.0,
        &format!("area = {:.6}", stats.area),
        "middle",
    );
    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Signal, DEFAULT_FS_HZ};
    use crate::phasespace::{ellipse_area, reconstruct_phase_space};
    use crate::spectral::{build_filter_bank, decompose, BoundarySet};

    fn stamp() -> Stamp {
        Stamp {
            seed: 1,
            config_hash: "0123456789abcdef".into(),
        }
    }

    fn check_well_formed(svg: &str) {
        assert!(svg.starts_with("<?xml version=\"1.0\""));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<svg").count(), 1);
        // every polyline/text/rect/circle/ellipse tag self-closes
        for tag in ["polyline", "text", "rect", "circle", "ellipse"] {
            let opens = svg.matches(&format!("<{tag}")).count();
            let closes = svg.matches("/>").count() + svg.matches(&format!("</{tag}>")).count();
            assert!(closes >= opens, "unbalanced {tag}");
        }
        // no raw ampersands outside entities
        for chunk in svg.split("&amp;").skip(1) {
            assert!(!chunk.starts_with(' '));
        }
    }

    #[test]
    fn figures_are_valid_and_deterministic() {
        let bounds = BoundarySet::eeg_default(DEFAULT_FS_HZ).unwrap();
        let bank = build_filter_bank(DEFAULT_FS_HZ, 512, &bounds).unwrap();
        let svg1 = filter_bank_svg(&bank, &stamp());
        let svg2 = filter_bank_svg(&bank, &stamp());
        assert_eq!(svg1, svg2);
        check_well_formed(&svg1);
        assert!(svg1.contains("seed=1"));

        let samples: Vec<f64> = (0..512).map(|i| (i as f64 * 0.3).sin()).collect();
        let sig = Signal::new(samples, DEFAULT_FS_HZ, "demo<&>").unwrap();
        let rhythms = decompose(&sig, &bank).unwrap();
        let svg = rhythms_svg(&rhythms, &sig.id, DEFAULT_FS_HZ, &stamp());
        check_well_formed(&svg);
        assert!(svg.contains("demo&lt;&amp;&gt;"));

        let portrait = reconstruct_phase_space(rhythms.alpha(), 1, 2).unwrap();
        let stats = ellipse_area(&portrait).unwrap();
        let svg = phase_portrait_svg(&portrait, &stats, "alpha portrait", &stamp());
        check_well_formed(&svg);
        assert!(svg.contains("<ellipse"));
    }
}
