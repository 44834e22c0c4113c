//! Distance strategies for the nearest-neighbor classifier.
//!
//! Each metric lives behind the [`Distance`] trait and is registered by
//! name, so the active metric is picked at runtime from configuration
//! (`--distance euclidean|cityblock`).

/// A point-to-point distance over feature vectors.
pub trait Distance: Send + Sync {
    /// Registry key, e.g. `"euclidean"`.
    fn name(&self) -> &'static str;

    fn measure(&self, a: &[f64], b: &[f64]) -> f64;
}

/// Straight-line (L2) distance.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl Distance for Euclidean {
    fn name(&self) -> &'static str {
        "euclidean"
    }

    fn measure(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

/// City-block (L1) distance.
#[derive(Debug, Clone, Copy, Default)]
pub struct CityBlock;

impl Distance for CityBlock {
    fn name(&self) -> &'static str {
        "cityblock"
    }

    fn measure(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
    }
}

static EUCLIDEAN: Euclidean = Euclidean;
static CITYBLOCK: CityBlock = CityBlock;

/// All registered metrics, in registry order.
pub static REGISTRY: [&dyn Distance; 2] = [&EUCLIDEAN, &CITYBLOCK];

/// Looks a metric up by its registry key.
pub fn by_name(name: &str) -> Option<&'static dyn Distance> {
    REGISTRY.iter().find(|d| d.name() == name).copied()
}

/// Registered metric names, in registry order.
pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|d| d.name()).collect()
}
