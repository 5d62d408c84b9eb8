use std::sync::Arc;

use rayon::prelude::*;

use super::model::{Drift, ModelSpec, ScalarFn, Volatility};
use super::simulate::ForwardSurface;
use crate::error::{Error, Result};
use crate::noise::{DriverKind, DriverSpec, FactorCovariance, NoiseIncrements};
use crate::operators::Identity;
use crate::space::Curve;

/// Loading `lambda exp(-gamma x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFactor {
    pub lambda: f64,
    pub gamma: f64,
}

/// Forward curve driven by exponential factors:
/// `f(t) = U_t f0 + sum_n X_n(t) g_n`,
/// `dX_n = (mu_n(t) - gamma_n X_n) dt + sigma(t) dL_n`.
#[derive(Clone)]
pub struct OuFactorModel {
    pub f0: Curve,
    pub factors: Vec<ExpFactor>,
    pub sigma: ScalarFn,
    /// Drift coordinates; empty means zero drift.
    pub mu: Vec<ScalarFn>,
    pub driver: DriverSpec,
    loadings: Vec<Curve>,
}

impl std::fmt::Debug for OuFactorModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OuFactorModel")
            .field("factors", &self.factors)
            .field("driver", &self.driver.kind)
            .finish()
    }
}

/// One path of the factor model.
#[derive(Debug, Clone)]
pub struct OuPath {
    pub surface: ForwardSurface,
    /// `X_n(t_k)`, indexed `[k][n]`.
    pub states: Vec<Vec<f64>>,
}

impl OuPath {
    /// `S(t) = f0(t) + sum_n Y_n(t)` with `Y_n = g_n(0) X_n`.
    pub fn spot_from_factors(&self, model: &OuFactorModel) -> Result<Vec<f64>> {
        self.surface
            .times
            .iter()
            .zip(&self.states)
            .map(|(t, x)| {
                let y: f64 = x.iter().zip(&model.factors).map(|(xn, e)| e.lambda * xn).sum();
                Ok(model.f0.shift(*t)?.f0() + y)
            })
            .collect()
    }
}

impl OuFactorModel {
    pub fn new(
        f0: Curve,
        factors: Vec<ExpFactor>,
        sigma: ScalarFn,
        mu: Vec<ScalarFn>,
        kind: DriverKind,
        seed: u64,
    ) -> Result<Self> {
        let sp = f0.space().clone();
        let alpha = sp.alpha();
        for (i, e) in factors.iter().enumerate() {
            if !(e.gamma > alpha / 2.0) {
                return Err(Error::InvalidParameter(format!(
                    "factor {i}: gamma = {} must exceed alpha/2 = {} for the loading to have finite norm",
                    e.gamma,
                    alpha / 2.0
                )));
            }
            for e2 in &factors[..i] {
                if e2.gamma == e.gamma {
                    return Err(Error::InvalidParameter(format!(
                        "factor rates must be distinct, gamma = {} repeats",
                        e.gamma
                    )));
                }
            }
        }
        if !mu.is_empty() && mu.len() != factors.len() {
            return Err(Error::Shape(format!(
                "{} drift coordinates for {} factors",
                mu.len(),
                factors.len()
            )));
        }
        let loadings: Vec<Curve> =
            factors.iter().map(|e| Curve::exponential(&sp, e.lambda, e.gamma)).collect();
        let cov = FactorCovariance::new(&sp, loadings.clone())?;
        let driver = DriverSpec::new(kind, cov, seed)?;
        Ok(Self { f0, factors, sigma, mu, driver, loadings })
    }

    pub fn loadings(&self) -> &[Curve] {
        &self.loadings
    }

    /// The same dynamics as a general model: `beta(t) = sum mu_n(t) g_n`,
    /// `Psi(t) = sigma(t) Id`.
    pub fn to_model(&self) -> Result<ModelSpec> {
        let beta = if self.mu.is_empty() {
            Drift::Zero
        } else {
            let mu = self.mu.clone();
            let loads = self.loadings.clone();
            let sp = self.f0.space().clone();
            Drift::TimeDependent(Arc::new(move |t| {
                let mut b = Curve::zero(&sp);
                for (m, g) in mu.iter().zip(&loads) {
                    b.axpy(m(t), g).expect("same space");
                }
                b
            }))
        };
        let psi = Volatility::ScalarTimesOperator {
            sigma: self.sigma.clone(),
            op: Arc::new(Identity::new(self.f0.space())),
        };
        ModelSpec::new(self.f0.clone(), beta, psi, self.driver.clone())
    }

    /// Exact Gaussian recursion for the Wiener driver, left-point Euler
    /// for the subordinated one.
    pub fn simulate_path(
        &self,
        horizon: f64,
        dt: f64,
        path: u64,
        given: Option<&NoiseIncrements>,
    ) -> Result<OuPath> {
        let grid = *self.f0.space().grid();
        let m = grid.steps_for(dt)?;
        if m == 0 {
            return Err(Error::Alignment(format!("dt={dt} must be positive")));
        }
        let steps = (horizon / dt).round() as usize;
        let nf = self.factors.len();
        let mut x = vec![0.0; nf];
        let mut dl = vec![0.0; nf];
        let gaussian = matches!(self.driver.kind, DriverKind::Wiener);
        let mut times = Vec::with_capacity(steps + 1);
        let mut curves = Vec::with_capacity(steps + 1);
        let mut states = Vec::with_capacity(steps + 1);
        let assemble = |k: usize, x: &[f64]| -> Result<Curve> {
            let mut f = self.f0.shift_cells(k * m);
            for (xn, g) in x.iter().zip(&self.loadings) {
                f.axpy(*xn, g)?;
            }
            Ok(f)
        };
        times.push(0.0);
        curves.push(assemble(0, &x)?);
        states.push(x.clone());
        for k in 0..steps {
            let t = k as f64 * dt;
            match given {
                Some(inc) => dl.copy_from_slice(inc.step(k)),
                None => {
                    self.driver.step_increments(dt, path, k as u64, &mut dl);
                }
            }
            let s = (self.sigma)(t);
            for n in 0..nf {
                let g = self.factors[n].gamma;
                let mu = self.mu.get(n).map_or(0.0, |f| f(t));
                x[n] = if gaussian {
                    let decay = (-g * dt).exp();
                    let noise_scale = ((1.0 - (-2.0 * g * dt).exp()) / (2.0 * g * dt)).sqrt();
                    decay * x[n] + mu * (1.0 - decay) / g + s * noise_scale * dl[n]
                } else {
                    x[n] + (mu - g * x[n]) * dt + s * dl[n]
                };
            }
            times.push((k + 1) as f64 * dt);
            curves.push(assemble(k + 1, &x)?);
            states.push(x.clone());
        }
        Ok(OuPath { surface: ForwardSurface { times, curves }, states })
    }
}

pub fn ou_factor_simulate(
    model: &OuFactorModel,
    horizon: f64,
    dt: f64,
    n_paths: u64,
) -> Result<Vec<ForwardSurface>> {
    (0..n_paths)
        .into_par_iter()
        .map(|p| model.simulate_path(horizon, dt, p, None).map(|o| o.surface))
        .collect()
}
