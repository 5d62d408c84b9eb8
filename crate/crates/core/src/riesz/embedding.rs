use crate::error::{Error, Result};

/// `lower <= norm_sq <= upper` for the damped periodic extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingBounds {
    pub lower: f64,
    pub norm_sq: f64,
    pub upper: f64,
}

impl EmbeddingBounds {
    pub fn holds(&self, rel_slack: f64) -> bool {
        self.lower <= self.norm_sq * (1.0 + rel_slack) && self.norm_sq <= self.upper * (1.0 + rel_slack)
    }
}

/// `A f(x) = e^{-lambda x} f(x mod T)` for `f` sampled at the midpoints of
/// a uniform partition of `[0, T)`. `||Af||^2` is summed period by period
/// until the damping drops below 1e-18.
pub fn embedding_bounds_check(period: f64, lambda: f64, seed: &[f64]) -> Result<EmbeddingBounds> {
    if !(period > 0.0 && lambda > 0.0) || seed.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "need T > 0, lambda > 0 and samples, got T = {period}, lambda = {lambda}, {} samples",
            seed.len()
        )));
    }
    let h = period / seed.len() as f64;
    let f2: f64 = seed.iter().map(|v| v * v).sum::<f64>() * h;
    let one: f64 = seed
        .iter()
        .enumerate()
        .map(|(j, v)| (-2.0 * lambda * (j as f64 + 0.5) * h).exp() * v * v)
        .sum::<f64>()
        * h;
    let q = (-2.0 * lambda * period).exp();
    let mut norm_sq = 0.0;
    let mut damp = 1.0;
    while damp > 1e-18 {
        norm_sq += damp * one;
        damp *= q;
    }
    Ok(EmbeddingBounds { lower: q / (1.0 - q) * f2, norm_sq, upper: f2 / (1.0 - q) })
}
