//! Sample quantile estimators, selectable by name.

use crate::registry::{Named, Registry};

pub trait QuantileMethod: Named + Send + Sync {
    /// Quantile `p` in [0, 1] of a non-empty, ascending slice.
    fn quantile(&self, sorted: &[f64], p: f64) -> f64;
}

fn lerp_rank(sorted: &[f64], h: f64) -> f64 {
    let h = h.clamp(0.0, (sorted.len() - 1) as f64);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Linear interpolation between closest ranks, h = (n − 1)p (Hyndman–Fan type 7).
pub struct Linear;

impl Named for Linear {
    fn name(&self) -> &'static str {
        "linear"
    }
    fn description(&self) -> &'static str {
        "linear interpolation between closest ranks (type 7)"
    }
}

impl QuantileMethod for Linear {
    fn quantile(&self, sorted: &[f64], p: f64) -> f64 {
        lerp_rank(sorted, (sorted.len() - 1) as f64 * p)
    }
}

/// Weibull plotting positions, h = (n + 1)p − 1 (type 6).
pub struct Weibull;

impl Named for Weibull {
    fn name(&self) -> &'static str {
        "weibull"
    }
    fn description(&self) -> &'static str {
        "interpolation at (n + 1)p (type 6)"
    }
}

impl QuantileMethod for Weibull {
    fn quantile(&self, sorted: &[f64], p: f64) -> f64 {
        lerp_rank(sorted, (sorted.len() + 1) as f64 * p - 1.0)
    }
}

/// Smallest value with at least a fraction `p` of the sample at or below it.
pub struct NearestRank;

impl Named for NearestRank {
    fn name(&self) -> &'static str {
        "nearest-rank"
    }
    fn description(&self) -> &'static str {
        "nearest rank, no interpolation"
    }
}

impl QuantileMethod for NearestRank {
    fn quantile(&self, sorted: &[f64], p: f64) -> f64 {
        let rank = (p * sorted.len() as f64).ceil() as usize;
        sorted[rank.clamp(1, sorted.len()) - 1]
    }
}

pub fn quantile_methods() -> Registry<dyn QuantileMethod> {
    let mut reg: Registry<dyn QuantileMethod> = Registry::new("quantile method", "linear");
    reg.register(Box::new(Linear))
        .register(Box::new(Weibull))
        .register(Box::new(NearestRank));
    reg
}
