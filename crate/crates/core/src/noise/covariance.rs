use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::max_symmetric_eigenvalue;
use crate::operators::LinearOperator;
use crate::space::{Curve, Space};

/// `Q f = sum_n <g_n, f> g_n` for a finite list of loadings `g_n`.
#[derive(Debug, Clone)]
pub struct FactorCovariance {
    space: Arc<Space>,
    factors: Vec<Curve>,
}

impl FactorCovariance {
    pub fn new(space: &Arc<Space>, factors: Vec<Curve>) -> Result<Self> {
        for (n, g) in factors.iter().enumerate() {
            space.check(g.space())?;
            if !g.norm_sq().is_finite() {
                return Err(Error::InvalidParameter(format!("factor {n} has infinite norm")));
            }
        }
        Ok(Self { space: space.clone(), factors })
    }

    pub fn factors(&self) -> &[Curve] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.factors.iter().map(Curve::norm_sq).sum()
    }

    /// `<g_m, g_n>`.
    pub fn gram(&self) -> DMatrix<f64> {
        let k = self.factors.len();
        DMatrix::from_fn(k, k, |m, n| {
            self.factors[m].inner(&self.factors[n]).expect("factors share a space")
        })
    }

    /// Largest eigenvalue of the factor Gram matrix; equals `||Q||`.
    pub fn op_norm(&self) -> f64 {
        max_symmetric_eigenvalue(&self.gram())
    }

    pub fn quadratic_form(&self, f: &Curve) -> Result<f64> {
        self.factors.iter().map(|g| g.inner(f).map(|v| v * v)).sum()
    }

    /// `<Q h_x, h_y> = sum_n g_n(x) g_n(y)`.
    pub fn covariance_at(&self, x: f64, y: f64) -> Result<f64> {
        self.factors.iter().map(|g| Ok(g.eval(x)? * g.eval(y)?)).sum()
    }

    /// `||Q^(1/2) h_x||`.
    pub fn sqrt_norm_h(&self, x: f64) -> Result<f64> {
        Ok(self.covariance_at(x, x)?.max(0.0).sqrt())
    }
}

impl LinearOperator for FactorCovariance {
    fn space(&self) -> &Arc<Space> {
        &self.space
    }

    fn apply(&self, f: &Curve) -> Result<Curve> {
        self.space.check(f.space())?;
        let mut out = Curve::zero(&self.space);
        for g in &self.factors {
            out.axpy(g.inner(f)?, g)?;
        }
        Ok(out)
    }
}
