use rand::Rng;
use rand_distr::StandardNormal;

use super::covariance::FactorCovariance;
use super::ig::{sample_ig_one, validate};
use super::rng::{stream, Domain};
use crate::error::{Error, Result};
use crate::space::Curve;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriverKind {
    /// Q-Wiener process.
    Wiener,
    /// Brownian motion time-changed by an inverse-Gaussian subordinator
    /// with `E[Theta(1)] = ig_mu = 1`; NIG marginals.
    Nig { ig_mu: f64, ig_lambda: f64 },
}

#[derive(Debug, Clone)]
pub struct DriverSpec {
    pub kind: DriverKind,
    pub covariance: FactorCovariance,
    pub seed: u64,
}

/// Scalar factor increments `dL[k][n]` for one path.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseIncrements {
    pub dt: f64,
    pub steps: usize,
    pub n_factors: usize,
    /// Row-major `steps x n_factors`.
    pub dl: Vec<f64>,
    /// Subordinator increments, one per step.
    pub theta: Option<Vec<f64>>,
}

impl NoiseIncrements {
    pub fn step(&self, k: usize) -> &[f64] {
        &self.dl[k * self.n_factors..(k + 1) * self.n_factors]
    }

    /// `sum_n dL[k][n] g_n`.
    pub fn assemble(&self, k: usize, cov: &FactorCovariance) -> Result<Curve> {
        assemble(self.step(k), cov)
    }
}

pub fn assemble(dl: &[f64], cov: &FactorCovariance) -> Result<Curve> {
    let sp = crate::operators::LinearOperator::space(cov);
    let mut out = Curve::zero(sp);
    for (a, g) in dl.iter().zip(cov.factors()) {
        out.axpy(*a, g)?;
    }
    Ok(out)
}

impl DriverSpec {
    pub fn new(kind: DriverKind, covariance: FactorCovariance, seed: u64) -> Result<Self> {
        if let DriverKind::Nig { ig_mu, ig_lambda } = kind {
            validate(ig_mu, ig_lambda)?;
            if (ig_mu - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "subordinator must satisfy E[Theta(1)] = 1, got ig_mu = {ig_mu}"
                )));
            }
        }
        Ok(Self { kind, covariance, seed })
    }

    pub fn n_factors(&self) -> usize {
        self.covariance.len()
    }

    /// Increments of step `step` on path `path`, written to `out`; returns
    /// the subordinator increment for NIG drivers. The subordinator is
    /// drawn first and shared by all factors.
    pub fn step_increments(&self, dt: f64, path: u64, step: u64, out: &mut [f64]) -> Option<f64> {
        let mut rng = stream(self.seed, path, step, Domain::Increments);
        let (var, theta) = match self.kind {
            DriverKind::Wiener => (dt, None),
            DriverKind::Nig { ig_mu, ig_lambda } => {
                let th = sample_ig_one(ig_mu * dt, ig_lambda * dt * dt, &mut rng);
                (th, Some(th))
            }
        };
        let sd = var.sqrt();
        for o in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *o = sd * z;
        }
        theta
    }

    pub fn sample_path(&self, dt: f64, steps: usize, path: u64) -> Result<NoiseIncrements> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let n = self.n_factors();
        let mut dl = vec![0.0; steps * n];
        let mut theta = match self.kind {
            DriverKind::Wiener => None,
            DriverKind::Nig { .. } => Some(Vec::with_capacity(steps)),
        };
        for k in 0..steps {
            let th = self.step_increments(dt, path, k as u64, &mut dl[k * n..(k + 1) * n]);
            if let (Some(v), Some(t)) = (theta.as_mut(), th) {
                v.push(t);
            }
        }
        Ok(NoiseIncrements { dt, steps, n_factors: n, dl, theta })
    }
}

/// Increments of path 0.
pub fn sample_increments(spec: &DriverSpec, dt: f64, steps: usize) -> Result<NoiseIncrements> {
    spec.sample_path(dt, steps, 0)
}

/// Excess kurtosis of one NIG coordinate increment over `dt` when
/// `Theta(1) ~ IG(1, lambda)`: `3 Var(dTheta) / E[dTheta]^2 = 3 / (lambda dt)`.
pub fn nig_increment_excess_kurtosis(ig_lambda: f64, dt: f64) -> f64 {
    3.0 / (ig_lambda * dt)
}
