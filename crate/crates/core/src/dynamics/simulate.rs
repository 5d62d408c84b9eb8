use rayon::prelude::*;

use super::model::{ModelSpec, Volatility};
use crate::error::{Error, Result};
use crate::noise::NoiseIncrements;
use crate::space::Curve;

/// Time-indexed curve states of one path.
#[derive(Debug, Clone)]
pub struct ForwardSurface {
    pub times: Vec<f64>,
    pub curves: Vec<Curve>,
}

impl ForwardSurface {
    /// `S(t_k) = f(t_k)(0)`.
    pub fn spot_path(&self) -> Vec<f64> {
        self.curves.iter().map(Curve::f0).collect()
    }

    /// `F(t_k, T) = f(t_k)(T - t_k)` for every recorded `t_k <= T`.
    pub fn forward_path(&self, maturity: f64) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for (t, c) in self.times.iter().zip(&self.curves) {
            if *t > maturity + 1e-12 {
                break;
            }
            let m = c.space().grid().steps_for((maturity - t).max(0.0))?;
            out.push(c.eval(m as f64 * c.space().dx())?);
        }
        Ok(out)
    }
}

pub fn spot_path(surface: &ForwardSurface) -> Vec<f64> {
    surface.spot_path()
}

pub fn forward_path(surface: &ForwardSurface, maturity: f64) -> Result<Vec<f64>> {
    surface.forward_path(maturity)
}

/// Exponential-Euler scheme for the mild equation:
/// `f_{k+1} = U_dt (f_k + beta(t_k) dt + Psi(t_k) dL_k)`.
#[derive(Debug)]
pub struct Simulator<'a> {
    model: &'a ModelSpec,
    dt: f64,
    steps: usize,
    shift_cells: usize,
    /// `Psi g_n` for deterministic operators, `None` for state-dependent.
    images: Option<Vec<Curve>>,
    cap: f64,
}

impl<'a> Simulator<'a> {
    pub fn new(model: &'a ModelSpec, horizon: f64, dt: f64) -> Result<Self> {
        let grid = *model.f0.space().grid();
        let shift_cells = grid.steps_for(dt).map_err(|_| {
            Error::Alignment(format!("dt={dt} must be a multiple of dx={}", grid.dx()))
        })?;
        if shift_cells == 0 {
            return Err(Error::Alignment(format!("dt={dt} must be positive")));
        }
        let r = horizon / dt;
        let steps = r.round();
        if !(horizon >= 0.0) || (r - steps).abs() > 1e-9 * r.max(1.0) {
            return Err(Error::Alignment(format!(
                "horizon={horizon} must be a multiple of dt={dt}"
            )));
        }
        let images = match &model.psi {
            Volatility::Constant(op) | Volatility::ScalarTimesOperator { op, .. } => Some(
                model
                    .driver
                    .covariance
                    .factors()
                    .iter()
                    .map(|g| op.apply(g))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Volatility::StateMultiplication { .. } => None,
        };
        let n0 = model.f0.norm();
        let cap = model.divergence_cap * if n0 > 0.0 { n0 } else { 1.0 };
        Ok(Self { model, dt, steps: steps as usize, shift_cells, images, cap })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| k as f64 * self.dt).collect()
    }

    /// Runs one path, calling `visit(k, t_k, f(t_k))` for `k = 0..=steps`.
    /// Increments come from the driver's counter-based stream unless given.
    pub fn run_path_with<F>(&self, path: u64, given: Option<&NoiseIncrements>, mut visit: F) -> Result<()>
    where
        F: FnMut(usize, f64, &Curve) -> Result<()>,
    {
        let driver = &self.model.driver;
        let nf = driver.n_factors();
        if let Some(inc) = given {
            if inc.steps < self.steps || inc.n_factors != nf {
                return Err(Error::Shape(format!(
                    "increments cover {} steps x {} factors, need {} x {nf}",
                    inc.steps, inc.n_factors, self.steps
                )));
            }
        }
        let mut dl = vec![0.0; nf];
        let mut f = self.model.f0.clone();
        visit(0, 0.0, &f)?;
        for k in 0..self.steps {
            let t = k as f64 * self.dt;
            match given {
                Some(inc) => dl.copy_from_slice(inc.step(k)),
                None => {
                    driver.step_increments(self.dt, path, k as u64, &mut dl);
                }
            }
            let mut next = f.clone();
            if let Some(b) = self.model.beta.at(t) {
                next.axpy(self.dt, &b)?;
            }
            match (&self.model.psi, &self.images) {
                (Volatility::Constant(_), Some(img)) => {
                    for (a, g) in dl.iter().zip(img) {
                        next.axpy(*a, g)?;
                    }
                }
                (Volatility::ScalarTimesOperator { sigma, .. }, Some(img)) => {
                    let s = sigma(t);
                    for (a, g) in dl.iter().zip(img) {
                        next.axpy(s * a, g)?;
                    }
                }
                (Volatility::StateMultiplication { g }, _) => {
                    let noise = crate::noise::assemble_increments(&dl, &driver.covariance)?;
                    let fg = f.multiply(&g(t))?;
                    next.axpy(1.0, &fg.multiply(&noise)?)?;
                }
                _ => unreachable!("deterministic volatility always has images"),
            }
            f = next.shift_cells(self.shift_cells);
            let nrm = f.norm();
            if !(nrm <= self.cap) {
                return Err(Error::Divergence { path, step: k + 1, norm: nrm, cap: self.cap });
            }
            visit(k + 1, (k + 1) as f64 * self.dt, &f)?;
        }
        Ok(())
    }

    /// Full surface of one path.
    pub fn run_path(&self, path: u64) -> Result<ForwardSurface> {
        self.run_path_recorded(path, None, 1)
    }

    /// Surface keeping every `every`-th state (and the last).
    pub fn run_path_recorded(
        &self,
        path: u64,
        given: Option<&NoiseIncrements>,
        every: usize,
    ) -> Result<ForwardSurface> {
        let every = every.max(1);
        let mut times = Vec::new();
        let mut curves = Vec::new();
        let last = self.steps;
        self.run_path_with(path, given, |k, t, f| {
            if k % every == 0 || k == last {
                times.push(t);
                curves.push(f.clone());
            }
            Ok(())
        })?;
        Ok(ForwardSurface { times, curves })
    }

    /// Maps paths `0..n_paths` in parallel; results come back in path
    /// order, so downstream reductions do not depend on the thread count.
    pub fn map_paths<T, F>(&self, n_paths: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, &Simulator<'a>) -> Result<T> + Sync + Send,
    {
        (0..n_paths).into_par_iter().map(|p| f(p, self)).collect()
    }
}

pub fn simulate_mild(
    model: &ModelSpec,
    horizon: f64,
    dt: f64,
    n_paths: u64,
) -> Result<Vec<ForwardSurface>> {
    let sim = Simulator::new(model, horizon, dt)?;
    sim.map_paths(n_paths, |p, s| s.run_path(p))
}
