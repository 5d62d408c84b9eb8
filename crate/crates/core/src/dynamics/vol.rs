use std::sync::Arc;

use nalgebra::DMatrix;

use super::model::ModelSpec;
use crate::error::{Error, Result};
use crate::noise::reduce_to_ndim;
use crate::operators::Scaled;
use crate::space::Curve;

/// Images `T g_n` of the factor loadings, reused across `(t, s)`.
#[derive(Debug)]
pub struct VolatilityProfile<'a> {
    model: &'a ModelSpec,
    images: Vec<Curve>,
}

impl<'a> VolatilityProfile<'a> {
    pub fn new(model: &'a ModelSpec) -> Result<Self> {
        let (_, op) = model.deterministic_psi(0.0)?;
        let images = model
            .driver
            .covariance
            .factors()
            .iter()
            .map(|g| op.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { model, images })
    }

    /// `<Psi(s) Q Psi(s)* h_{a-s}, h_{b-s}>`.
    pub fn covariance(&self, a: f64, b: f64, s: f64) -> Result<f64> {
        if s > a.min(b) {
            return Err(Error::Domain(format!("need s <= maturities, got s={s}, a={a}, b={b}")));
        }
        let (scale, _) = self.model.deterministic_psi(s)?;
        let mut acc = 0.0;
        for img in &self.images {
            acc += img.eval(a - s)? * img.eval(b - s)?;
        }
        Ok(scale * scale * acc)
    }

    /// `sigma^2(t, s)`.
    pub fn sigma2(&self, t: f64, s: f64) -> Result<f64> {
        let v = self.covariance(t, t, s)?;
        if v < -1e-10 {
            return Err(Error::Numerical(format!("negative quadratic form {v:e}")));
        }
        Ok(v.max(0.0))
    }

    /// `sum_{t_k < t} dt sigma^2(t, t_k)`: the variance of the simulated
    /// spot at `t`, the noise of step `k` having been transported by `t - t_k`.
    pub fn spot_variance(&self, t: f64, dt: f64) -> Result<f64> {
        self.forward_covariance(t, t, t, dt)
    }

    /// `sum_{t_k < t} dt <Psi Q Psi* h_{T1 - t_k}, h_{T2 - t_k}>`.
    pub fn forward_covariance(&self, t: f64, t1: f64, t2: f64, dt: f64) -> Result<f64> {
        let steps = (t / dt).round() as usize;
        let mut acc = 0.0;
        for k in 0..steps {
            acc += self.covariance(t1, t2, k as f64 * dt)? * dt;
        }
        Ok(acc)
    }
}

pub fn spot_vol_sigma(model: &ModelSpec, t: f64, s: f64) -> Result<f64> {
    Ok(VolatilityProfile::new(model)?.sigma2(t, s)?.sqrt())
}

/// PSD square root of the `2x2` matrix `<Psi Q Psi* h_{Ti-s}, h_{Tj-s}>`.
pub fn bivariate_sigma(model: &ModelSpec, t1: f64, t2: f64, s: f64) -> Result<DMatrix<f64>> {
    if !(s <= t1 && t1 <= t2) {
        return Err(Error::Domain(format!("need s <= T1 <= T2, got s={s}, T1={t1}, T2={t2}")));
    }
    let (factor, op) = model.deterministic_psi(s)?;
    let psi = Scaled { factor, op: Arc::clone(&op) };
    reduce_to_ndim(&[t1 - s, t2 - s], &psi, &model.driver.covariance)
}
