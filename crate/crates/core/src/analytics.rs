//! Spatial correlation of curve-valued random elements.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::noise::FactorCovariance;
use crate::operators::KernelOperator;
use crate::space::{h_curve, Space};

/// `<Q h_x, h_y> / sqrt(<Q h_x, h_x> <Q h_y, h_y>)`, or 1 when a variance
/// vanishes.
pub fn spatial_correlation(q: &FactorCovariance, x: f64, y: f64) -> Result<f64> {
    let vx = q.covariance_at(x, x)?;
    let vy = q.covariance_at(y, y)?;
    let den = (vx * vy).sqrt();
    if den == 0.0 {
        return Ok(1.0);
    }
    Ok((q.covariance_at(x, y)? / den).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    /// `None` outside the validity radius.
    pub bound: Option<f64>,
    /// `||Q^(1/2) h_x||^2 / ||Q||`.
    pub radius: f64,
}

/// `1 - 2 ||Q||^(1/2) sqrt|x-y| / (||Q^(1/2) h_x|| + ||Q||^(1/2) sqrt|x-y|)`
/// for `|x - y|` within the radius.
pub fn correlation_lower_bound(q: &FactorCovariance, x: f64, y: f64) -> Result<LowerBound> {
    lower_bound_with_norm(q, q.op_norm(), x, y)
}

/// As [`correlation_lower_bound`] with `||Q||` supplied.
pub fn lower_bound_with_norm(q: &FactorCovariance, q_norm: f64, x: f64, y: f64) -> Result<LowerBound> {
    let s = q.sqrt_norm_h(x)?;
    if q_norm <= 0.0 {
        return Ok(LowerBound { bound: None, radius: 0.0 });
    }
    let radius = s * s / q_norm;
    let d = (x - y).abs();
    if d > radius {
        return Ok(LowerBound { bound: None, radius });
    }
    let a = (q_norm * d).sqrt();
    let bound = if s + a > 0.0 { 1.0 - 2.0 * a / (s + a) } else { 1.0 };
    Ok(LowerBound { bound: Some(bound), radius })
}

/// Closed-form correlation for the kernel `exp(-delta |y - v|)` with weight
/// `exp(alpha v)`:
/// `e^{-delta (y-x)/2} sqrt((1 - e^{-(alpha-delta) x}) / (1 - e^{-(alpha-delta) y}))`.
pub fn exp_kernel_correlation(alpha: f64, delta: f64, x: f64, y: f64) -> Result<f64> {
    if !(alpha > delta && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need alpha > delta > 0, got alpha = {alpha}, delta = {delta}"
        )));
    }
    if !(x > 0.0 && x <= y) {
        return Err(Error::Domain(format!("need 0 < x <= y, got x = {x}, y = {y}")));
    }
    let r = alpha - delta;
    Ok((-0.5 * delta * (y - x)).exp() * ((1.0 - (-r * x).exp()) / (1.0 - (-r * y).exp())).sqrt())
}

/// The same correlation by quadrature on the grid:
/// `<Q h_x, h_y> = (Q h_x)(y) = int_0^x q(y, v) / w(v) dv` for `x <= y`.
#[derive(Debug, Clone)]
pub struct ExpKernelCovariance {
    space: Arc<Space>,
    kernel: KernelOperator,
}

impl ExpKernelCovariance {
    pub fn new(space: &Arc<Space>, delta: f64) -> Result<Self> {
        Ok(Self { space: space.clone(), kernel: KernelOperator::expconv(space, delta)? })
    }

    pub fn covariance(&self, x: f64, y: f64) -> Result<f64> {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        let node = self.space.grid().steps_for(b)?;
        let hx = h_curve(&self.space, a)?;
        let dx = self.space.dx();
        let d = hx.deriv();
        Ok((0..d.len()).map(|j| self.kernel.entry(node, j) * d[j]).sum::<f64>() * dx)
    }

    pub fn correlation(&self, x: f64, y: f64) -> Result<f64> {
        let c = self.covariance(x, y)?;
        let den = (self.covariance(x, x)? * self.covariance(y, y)?).sqrt();
        Ok(if den == 0.0 { 1.0 } else { c / den })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationPair {
    pub x: f64,
    pub y: f64,
    pub rho: f64,
    pub lower_bound: Option<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub pairs: Vec<CorrelationPair>,
    pub q_norm_op: f64,
    pub notes: Vec<String>,
}

/// All ordered pairs `x <= y` of `points`.
pub fn correlation_report(q: &FactorCovariance, points: &[f64]) -> Result<CorrelationReport> {
    let qn = q.op_norm();
    let mut pairs = Vec::new();
    let mut notes = Vec::new();
    for (i, &x) in points.iter().enumerate() {
        for &y in &points[i..] {
            let rho = spatial_correlation(q, x, y)?;
            let lb = lower_bound_with_norm(q, qn, x, y)?;
            if let Some(b) = lb.bound {
                if rho < b - 1e-10 {
                    notes.push(format!("bound violated at ({x}, {y}): rho = {rho}, bound = {b}"));
                }
            }
            pairs.push(CorrelationPair { x, y, rho, lower_bound: lb.bound, radius: lb.radius });
        }
    }
    Ok(CorrelationReport { pairs, q_norm_op: qn, notes })
}
